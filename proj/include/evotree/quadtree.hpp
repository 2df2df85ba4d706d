#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evotree/exec.hpp"
#include "evotree/geometry.hpp"

namespace evotree {

// Barnes-Hut quadtree over charged 2-D points. Rebuilt from scratch each
// force round (insertion order = node id order, so the shape is
// deterministic); immutable afterwards, safe for concurrent queries.
class QuadTree {
public:
    // Inverse-square force with a softening floor: charge / max(d, 1)^2.
    // The floor prevents blow-up for near-coincident nodes.
    static constexpr double softening_floor = 1.0;
    // Coincident points deeper than this are aggregated into one leaf.
    static constexpr int max_depth = 32;

    QuadTree() = default;
    QuadTree(std::span<const Point2> positions, std::span<const double> charges) {
        rebuild(positions, charges);
    }

    // Rebuilds over positions[i]/charges[i] for i in [0, n). Buffers are
    // reused across rebuilds. Throws on empty input.
    void rebuild(std::span<const Point2> positions, std::span<const double> charges);

    // Net repulsive displacement on a probe at p, excluding node self_id.
    // A cell is approximated as a point charge when it does not contain p
    // and cell width < theta * (d - delta), where d is the distance to its
    // center of charge and delta the offset of that center from the cell's
    // geometric center (the Salmon-Warren correction: off-center charge
    // distributions must be farther away before they collapse to a point).
    Point2 repulsion_at(Point2 p, std::uint32_t self_id, double theta,
                        double strength) const;

    // repulsion_at for every stored node, scaled by that node's own charge
    // (forces are proportional to both charges, so equal-and-opposite pair
    // forces cancel), into out[i] (accumulating).
    void add_repulsion(std::span<Point2> out, double theta, double strength,
                       Exec exec = Exec::parallel) const;

    double total_charge() const { return cells_.empty() ? 0.0 : cells_[0].charge; }
    Point2 center_of_charge() const {
        return cells_.empty() ? Point2{} : cells_[0].center;
    }

private:
    struct Cell {
        double cx, cy, half;   // square region: center and half side
        double charge = 0.0;   // total charge of contained points
        Point2 center{};       // charge-weighted mean position
        double delta = 0.0;    // |center - geometric center|
        int first_child = -1;  // index of 4 contiguous children; -1 = leaf
        int head = -1;         // head of occupant list (leaves only)
    };

    int quadrant(const Cell& c, Point2 p) const {
        return (p.x >= c.cx ? 1 : 0) | (p.y >= c.cy ? 2 : 0);
    }

    void insert(std::uint32_t id);
    int split(int cell_index);

    std::vector<Cell> cells_;
    std::vector<int> next_;       // occupant list links, indexed by point id
    std::vector<Point2> points_;
    std::vector<double> charges_;
};

// Exact all-pairs repulsion with the same force law; the serial reference
// the Barnes-Hut path is validated against (and equals bit-for-bit at
// theta = 0 up to summation order).
std::vector<Point2> pairwise_repulsion(std::span<const Point2> positions,
                                       std::span<const double> charges,
                                       double strength);

} // namespace evotree
