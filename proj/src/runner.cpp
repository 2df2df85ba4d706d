#include "evotree/runner.hpp"

#include <chrono>
#include <stdexcept>
#include <unordered_map>

#include "evotree/crossings.hpp"

namespace evotree {

namespace {

TraceFrame capture_frame(const Engine& engine, int t) {
    TraceFrame frame;
    frame.t = t;
    const EvolvingTree& tree = engine.tree();
    const auto pos = engine.positions();
    frame.pos.reserve(tree.real_count());
    for (const NodeId id : tree.real_ids())
        frame.pos.emplace_back(tree.node(id).name, pos[id]);
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        const EdgeRecord& edge = tree.edge(static_cast<int>(e));
        if (edge.chain.size() <= 2) continue;
        std::vector<Point2> pts;
        pts.reserve(edge.chain.size() - 2);
        for (std::size_t k = 1; k + 1 < edge.chain.size(); ++k)
            pts.push_back(pos[edge.chain[k]]);
        frame.bends.emplace_back(
            tree.node(edge.u).name + "-" + tree.node(edge.v).name, std::move(pts));
    }
    return frame;
}

}  // namespace

LayoutResult run_layout(const std::vector<Event>& events, const LayoutOptions& options) {
    if (events.empty()) throw std::invalid_argument("no events to lay out");
    Engine engine(options.algorithm, options.params, options.exec);
    LayoutResult result;
    result.trace.config_json = options.config_json;
    result.trace.frames.reserve(events.size());
    result.crossings_per_step.reserve(events.size());
    for (std::size_t t = 0; t < events.size(); ++t) {
        const auto start = std::chrono::steady_clock::now();
        engine.insert(events[t]);
        const auto stop = std::chrono::steady_clock::now();
        TraceFrame frame = capture_frame(engine, static_cast<int>(t));
        if (options.timing)
            frame.elapsed_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();
        result.trace.frames.push_back(std::move(frame));
        result.crossings_per_step.push_back(static_cast<long long>(count_crossings(
            engine.tree().segments(), engine.positions(), options.exec)));
    }
    return result;
}

TraceReplayer::TraceReplayer(std::vector<Event> events) : events_(std::move(events)) {
    if (events_.empty()) throw std::invalid_argument("no events to replay");
}

void TraceReplayer::apply(const TraceFrame& frame) {
    if (next_t_ >= events_.size())
        throw std::invalid_argument("trace has more frames than events");
    if (frame.t != static_cast<int>(next_t_))
        throw std::invalid_argument("trace frames out of order at t=" +
                                    std::to_string(frame.t));
    const Event& ev = events_[next_t_];
    if (ev.parent.empty())
        tree_.add_root(ev.name, ev.label);
    else
        tree_.add_child(ev.parent, ev.name, ev.label, ev.length);

    // Subdivide to match the frame's bend counts. Bend keys name edge
    // endpoints, so they are matched against known edges rather than split.
    for (const auto& [key, pts] : frame.bends) {
        bool matched = false;
        for (std::size_t e = 0; e < tree_.edge_count(); ++e) {
            const EdgeRecord& edge = tree_.edge(static_cast<int>(e));
            if (key != tree_.node(edge.u).name + "-" + tree_.node(edge.v).name) continue;
            matched = true;
            const std::size_t interior = edge.chain.size() - 2;
            if (interior == 0 && !pts.empty())
                tree_.subdivide_edge(static_cast<int>(e), static_cast<int>(pts.size()));
            else if (interior != pts.size())
                throw std::invalid_argument("bend count changed for edge " + key);
            break;
        }
        if (!matched) throw std::invalid_argument("unknown edge in trace bends: " + key);
    }

    if (frame.pos.size() != tree_.real_count())
        throw std::invalid_argument(
            "frame t=" + std::to_string(frame.t) + " lists " +
            std::to_string(frame.pos.size()) + " positions for " +
            std::to_string(tree_.real_count()) + " nodes");
    pos_.resize(tree_.node_count());
    for (const auto& [name, pt] : frame.pos) {
        if (!tree_.has_node(name))
            throw std::invalid_argument("unknown id in trace: " + name);
        const NodeId id = tree_.id_of(name);
        if (tree_.node(id).kind != NodeKind::real)
            throw std::invalid_argument("unknown id in trace: " + name);
        pos_[id] = pt;
    }
    for (const auto& [key, pts] : frame.bends) {
        for (std::size_t e = 0; e < tree_.edge_count(); ++e) {
            const EdgeRecord& edge = tree_.edge(static_cast<int>(e));
            if (key != tree_.node(edge.u).name + "-" + tree_.node(edge.v).name) continue;
            for (std::size_t k = 0; k < pts.size(); ++k)
                pos_[edge.chain[k + 1]] = pts[k];
            break;
        }
    }
    ++next_t_;
}

std::vector<MetricsReport> checkpoint_metrics(const std::vector<Event>& events,
                                              const Trace& trace, int every, Exec exec) {
    if (every < 1) throw std::invalid_argument("checkpoint interval must be >= 1");
    TraceReplayer replayer(events);
    std::vector<std::vector<Point2>> real_frames;
    real_frames.reserve(trace.frames.size());
    std::vector<MetricsReport> rows;
    double elapsed_acc = 0.0;
    for (std::size_t t = 0; t < trace.frames.size(); ++t) {
        const TraceFrame& frame = trace.frames[t];
        replayer.apply(frame);
        if (frame.elapsed_ms >= 0.0) elapsed_acc += frame.elapsed_ms;
        const EvolvingTree& tree = replayer.tree();
        const std::vector<Point2>& pos = replayer.positions();
        std::vector<Point2> reals;
        reals.reserve(tree.real_count());
        for (const NodeId id : tree.real_ids()) reals.push_back(pos[id]);
        real_frames.push_back(std::move(reals));
        if ((t + 1) % static_cast<std::size_t>(every) != 0) continue;

        MetricsReport row;
        row.timestep = static_cast<int>(t + 1);
        row.node_count = tree.real_count();
        row.del = tree.edge_count() > 0 ? del_loss(tree, pos) : 0.0;
        row.compactness = tree.real_count() >= 2 ? compactness_loss(tree, pos) : 1.0;
        row.stability =
            real_frames.size() >= 2
                ? stability_loss({real_frames.data(), real_frames.size()})
                : 0.0;
        row.stress = tree.real_count() >= 2 ? stress_loss(tree, pos, exec) : 0.0;
        row.crossings =
            static_cast<long long>(count_crossings(tree.segments(), pos, exec));
        row.elapsed_ms = elapsed_acc;
        elapsed_acc = 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace evotree
