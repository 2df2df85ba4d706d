#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evotree/exec.hpp"
#include "evotree/geometry.hpp"
#include "evotree/tree.hpp"

namespace evotree {

// Label rectangle geometry used by compactness and rendering.
struct LabelSpec {
    double char_width = 8.0;
    double line_height = 16.0;
    int max_chars = 16;
};

std::size_t utf8_codepoints(std::string_view s);
// min(codepoints, max_chars) * char_width; empty labels are floored at one
// character so label areas stay positive.
double label_width(std::string_view label, const LabelSpec& spec);

// Root-mean-square relative deviation of realized real-edge lengths from
// their desired lengths; subdivided edges use the polyline length.
// Requires >= 1 edge.
double del_loss(const EvolvingTree& tree, std::span<const Point2> pos);

// Drawing-area overhead: scale the layout by the minimal s >= 1 that makes
// all (real-node) label rectangles overlap-free, then return the bounding
// rectangle area of those labels divided by the summed label areas.
// Requires >= 2 real nodes.
double compactness_loss(const EvolvingTree& tree, std::span<const Point2> pos,
                        const LabelSpec& spec = {});

// Total per-step movement of real nodes across frames, divided by the
// bounding area of the final frame's real-node positions. Frame f must hold
// the positions of real ranks [0, f]. Requires >= 2 frames.
double stability_loss(std::span<const std::vector<Point2>> real_frames);

// Normalized stress: rescale so the mean realized real-edge length matches
// the mean desired length, then sqrt(sum (D-d)^2) / sum d over unordered
// real-node pairs. Requires >= 2 real nodes.
double stress_loss(const EvolvingTree& tree, std::span<const Point2> pos,
                   Exec exec = Exec::serial);

// One CSV checkpoint row.
struct MetricsReport {
    int timestep = 0;  // 1-based step = node count
    std::size_t node_count = 0;
    double del = 0.0;
    double compactness = 0.0;
    double stability = 0.0;
    double stress = 0.0;
    long long crossings = 0;
    double elapsed_ms = 0.0;
};

}  // namespace evotree
