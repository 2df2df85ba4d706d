#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evotree/exec.hpp"
#include "evotree/geometry.hpp"
#include "evotree/quadtree.hpp"
#include "evotree/rng.hpp"
#include "evotree/tree.hpp"

namespace evotree {

enum class Algorithm { dynacola, dynasafe, naive };

Algorithm algorithm_from_string(std::string_view s);  // throws std::invalid_argument
std::string_view to_string(Algorithm a);

struct EngineParams {
    int n_iters = 50;        // relaxation rounds per insertion
    int n_s = 1;             // subdivision nodes per edge (bent-edge engine)
    double p = 0.8;          // safe-application back-off factor
    int q = 12;              // max back-off retries
    int sample_count = 100;  // placement angles per radius round
    double k_edge = 0.075;
    double k_repulse = 75.0;
    double k_collide = 0.025;
    double k_gravity = 0.0001;
    double k_stress = 0.005;
    double theta = 0.9;            // Barnes-Hut acceptance
    double ellipse_aspect = 3.0;   // x-stretch of the repulsion equipotentials
    double step_cap_fraction = 0.5;  // of the smallest collision radius
    double subdiv_charge = 0.5;      // repulsion charge of subdivision nodes
    std::uint64_t seed = 0;
};

// Throws std::invalid_argument naming the first offending field.
void validate(const EngineParams& p);

// One safe-application decision: the applied magnitude is always
// proposed * p^attempts, or 0 when the node was vetoed.
struct SafeApplyRecord {
    int timestep = 0;
    int round = 0;
    NodeId node = 0;
    double proposed = 0.0;
    double applied = 0.0;
    int attempts = 0;
};

// Incremental layout engine: feed insertion events one at a time; after
// every insert() the bent-edge and safe-move algorithms guarantee zero
// proper crossings among all drawn segments.
class Engine {
public:
    Engine(Algorithm alg, const EngineParams& params, Exec exec = Exec::parallel);

    // Applies one insertion: grows the tree, places the node, relaxes.
    // Throws std::runtime_error("placement exhausted") if no crossing-free
    // position exists after 200 shrinking radius rounds.
    void insert(const Event& ev);

    // Runs extra relaxation rounds of the engine's algorithm on the current
    // state (insert() calls this internally).
    void relax(int rounds);

    // Samples a crossing-free position for a child of `parent`: sample_count
    // uniform angles per round at the current radius, radius shrinking by
    // 0.9 per failed round, at most 200 rounds. Reports the accepted radius.
    Point2 place_new_node(NodeId parent, double desired, double& effective_radius);

    // Overwrites all positions (size must match node_count); the caller is
    // responsible for keeping the crossing-free invariant.
    void set_positions(std::span<const Point2> pos);

    const EvolvingTree& tree() const { return tree_; }
    std::span<const Point2> positions() const { return pos_; }
    int timestep() const { return timestep_; }
    Algorithm algorithm() const { return alg_; }
    const EngineParams& params() const { return params_; }

    void enable_safe_log(bool on) { log_enabled_ = on; }
    const std::vector<SafeApplyRecord>& safe_log() const { return safe_log_; }

private:
    void insert_dynacola(const Event& ev);
    void insert_dynasafe(const Event& ev);
    void insert_naive(const Event& ev);
    void relax_dynacola(int rounds);
    void relax_dynasafe(int rounds);
    void relax_naive(int rounds);
    bool move_would_cross(NodeId w, Point2 cand) const;
    double mean_desired_length() const;

    Algorithm alg_;
    EngineParams params_;
    Exec exec_;
    EvolvingTree tree_;
    std::vector<Point2> pos_;
    SplitMix64 rng_;  // consumed by placement sampling only
    QuadTree qt_;
    int timestep_ = 0;
    bool log_enabled_ = false;
    std::vector<SafeApplyRecord> safe_log_;
    // per-round scratch buffers
    std::vector<Point2> disp_;
    std::vector<Point2> prev_;
    std::vector<double> charges_;
    std::vector<char> involved_;
};

}  // namespace evotree
