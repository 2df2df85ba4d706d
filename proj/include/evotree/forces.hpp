#pragma once

#include <span>
#include <vector>

#include "evotree/exec.hpp"
#include "evotree/geometry.hpp"
#include "evotree/tree.hpp"

namespace evotree {

// All kernels accumulate per-node displacements into `out` (indexed by node
// id) and never apply them. Each node's sum is evaluated in a fixed order,
// so serial and parallel execution produce bit-identical results.

// Linear spring along every drawn segment: each endpoint receives magnitude
// k_edge * (realized - rest) toward the other endpoint (negative = away).
// Coincident endpoints separate along a deterministic hash direction with
// magnitude k_edge * rest.
void add_edge_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                     double k_edge, std::span<Point2> out, Exec exec);

// Pull toward the centroid of the given positions: k_gravity * (centroid - p).
void add_gravity(std::span<const Point2> pos, double k_gravity,
                 std::span<Point2> out, Exec exec);

// Signed spring between every unordered pair of real nodes with no edge
// between them: magnitude k_stress * (d - D) / D toward the partner, where
// D is the tree-path length over desired edge lengths.
void add_stress_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                       double k_stress, std::span<Point2> out, Exec exec);

// Exact pairwise repulsion with elliptical equipotentials: the inverse-square
// law is evaluated on the scaled offset (dx/aspect, dy), and the force points
// along the potential's gradient. aspect=1 reduces bit-for-bit to the
// circular law used by the quadtree.
void add_elliptical_repulsion(std::span<const Point2> pos, double k_repulse,
                              double aspect, std::span<Point2> out, Exec exec);

// Fused single-sweep evaluation of elliptical repulsion + stress over real
// nodes, numerically equivalent (but not bit-identical, the pair sum order
// differs) to calling the two kernels separately.
void add_dynasafe_pair_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                              double k_repulse, double aspect, double k_stress,
                              std::span<Point2> out, Exec exec);

// Collision radius per node: half the longest incident realized segment
// length; 0 for nodes without segments.
std::vector<double> collision_radii(const EvolvingTree& tree,
                                    std::span<const Point2> pos);

// Push each overlapping, non-segment-adjacent pair of collision circles
// apart: each node receives k_collide * (r_i + r_j - d) / 2 along the
// separating axis. Uniform-grid accelerated; bit-identical to the brute
// reference.
void add_collision_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                          std::span<const double> radii, double k_collide,
                          std::span<Point2> out, Exec exec);

// O(n^2) reference for add_collision_forces.
std::vector<Point2> collision_forces_brute(const EvolvingTree& tree,
                                           std::span<const Point2> pos,
                                           std::span<const double> radii,
                                           double k_collide);

}  // namespace evotree
