#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evotree/engine.hpp"
#include "evotree/io.hpp"
#include "evotree/metrics.hpp"

namespace evotree {

struct LayoutOptions {
    Algorithm algorithm = Algorithm::dynacola;
    EngineParams params{};
    bool timing = false;      // record per-insertion wall time in the trace
    Exec exec = Exec::parallel;
    std::string config_json;  // written verbatim as the trace's first line
};

struct LayoutResult {
    Trace trace;  // one frame per insertion
    std::vector<long long> crossings_per_step;  // exact count after each insertion
};

// Replays every insertion through a fresh engine and captures one trace
// frame per insertion: real-node positions by name in insertion order, and
// bend polylines for each subdivided edge keyed "<parent>-<child>".
LayoutResult run_layout(const std::vector<Event>& events, const LayoutOptions& options);

// Rebuilds tree structure and node positions frame by frame from a trace
// plus the event list that produced it. Frames must be applied in order
// (t = 0, 1, ...); frame t introduces event t. Mismatches between the trace
// and the events (unknown names, wrong node sets, inconsistent bend counts)
// throw std::invalid_argument.
class TraceReplayer {
public:
    explicit TraceReplayer(std::vector<Event> events);

    void apply(const TraceFrame& frame);

    const EvolvingTree& tree() const { return tree_; }
    const std::vector<Point2>& positions() const { return pos_; }
    std::size_t frames_applied() const { return next_t_; }

private:
    std::vector<Event> events_;
    EvolvingTree tree_;
    std::vector<Point2> pos_;
    std::size_t next_t_ = 0;
};

// One metrics row per checkpoint: frames where (t + 1) is a multiple of
// `every`. Stability covers frames [0, t]; elapsed_ms sums the frame times
// since the previous checkpoint (0 when the trace carries no timings);
// degenerate checkpoints report del = 0 (no edges), compactness = 1
// (single node), stability = 0 (single frame), stress = 0 (< 2 nodes).
std::vector<MetricsReport> checkpoint_metrics(const std::vector<Event>& events,
                                              const Trace& trace, int every,
                                              Exec exec = Exec::parallel);

}  // namespace evotree
