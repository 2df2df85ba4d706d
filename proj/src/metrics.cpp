#include "evotree/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evotree {

namespace {

double polyline_length(const EdgeRecord& e, std::span<const Point2> pos) {
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < e.chain.size(); ++k)
        len += distance(pos[e.chain[k]], pos[e.chain[k + 1]]);
    return len;
}

double mean_edge_scale(const EvolvingTree& tree, std::span<const Point2> pos) {
    double desired = 0.0;
    double realized = 0.0;
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        desired += tree.edge(static_cast<int>(e)).desired_length;
        realized += polyline_length(tree.edge(static_cast<int>(e)), pos);
    }
    if (!(realized > 0.0)) throw std::invalid_argument("degenerate layout");
    return desired / realized;
}

}  // namespace

std::size_t utf8_codepoints(std::string_view s) {
    std::size_t n = 0;
    for (const char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    return n;
}

double label_width(std::string_view label, const LabelSpec& spec) {
    const std::size_t n = std::max<std::size_t>(utf8_codepoints(label), 1);
    return static_cast<double>(
               std::min<std::size_t>(n, static_cast<std::size_t>(spec.max_chars))) *
           spec.char_width;
}

double del_loss(const EvolvingTree& tree, std::span<const Point2> pos) {
    if (tree.edge_count() == 0) throw std::invalid_argument("del loss requires >= 1 edge");
    double sum = 0.0;
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        const EdgeRecord& edge = tree.edge(static_cast<int>(e));
        if (!(edge.desired_length > 0.0))
            throw std::invalid_argument("desired length must be positive");
        const double rel =
            (polyline_length(edge, pos) - edge.desired_length) / edge.desired_length;
        sum += rel * rel;
    }
    return std::sqrt(sum / static_cast<double>(tree.edge_count()));
}

double compactness_loss(const EvolvingTree& tree, std::span<const Point2> pos,
                        const LabelSpec& spec) {
    const auto& reals = tree.real_ids();
    const std::size_t n = reals.size();
    if (n < 2) throw std::invalid_argument("degenerate layout");
    if (!(spec.char_width > 0.0 && spec.line_height > 0.0 && spec.max_chars > 0))
        throw std::invalid_argument("label spec dimensions must be positive");

    std::vector<double> hw(n);  // half widths
    const double hh = 0.5 * spec.line_height;
    double area_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = label_width(tree.node(reals[i]).label, spec);
        hw[i] = 0.5 * w;
        area_sum += w * spec.line_height;
    }

    const auto overlaps = [&](double s) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = std::abs(s * (pos[reals[i]].x - pos[reals[j]].x));
                const double dy = std::abs(s * (pos[reals[i]].y - pos[reals[j]].y));
                if (dx < hw[i] + hw[j] && dy < 2.0 * hh) return true;
            }
        return false;
    };

    double scale = 1.0;
    if (overlaps(1.0)) {
        double lo = 1.0;
        double hi = 2.0;
        for (int k = 0; k < 60 && overlaps(hi); ++k) {
            lo = hi;
            hi *= 2.0;
        }
        for (int k = 0; k < 60 && (hi - lo) / lo > 1e-3; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (overlaps(mid))
                lo = mid;
            else
                hi = mid;
        }
        scale = hi;
    }

    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (std::size_t i = 0; i < n; ++i) {
        x0 = std::min(x0, scale * pos[reals[i]].x - hw[i]);
        x1 = std::max(x1, scale * pos[reals[i]].x + hw[i]);
        y0 = std::min(y0, scale * pos[reals[i]].y - hh);
        y1 = std::max(y1, scale * pos[reals[i]].y + hh);
    }
    return (x1 - x0) * (y1 - y0) / area_sum;
}

double stability_loss(std::span<const std::vector<Point2>> real_frames) {
    if (real_frames.size() < 2)
        throw std::invalid_argument("stability requires >= 2 frames");
    double movement = 0.0;
    for (std::size_t t = 1; t < real_frames.size(); ++t) {
        const auto& prev = real_frames[t - 1];
        const auto& cur = real_frames[t];
        if (cur.size() < prev.size())
            throw std::invalid_argument("frames must not shrink");
        for (std::size_t v = 0; v < prev.size(); ++v)
            movement += distance(cur[v], prev[v]);
    }
    if (movement == 0.0) return 0.0;
    const Rect2 box = bounding_rect(real_frames.back());
    const double area = box.area();
    if (!(area > 0.0)) throw std::invalid_argument("degenerate layout");
    return movement / area;
}

double stress_loss(const EvolvingTree& tree, std::span<const Point2> pos,
                   Exec exec) {
    const auto& reals = tree.real_ids();
    const auto n = static_cast<std::int64_t>(reals.size());
    if (n < 2) throw std::invalid_argument("degenerate layout");
    const double scale = mean_edge_scale(tree, pos);

    // Per-node partial sums, combined serially: the result is identical for
    // any worker count.
    std::vector<double> num(n, 0.0), den(n, 0.0);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t ri = 0; ri < n; ++ri) {
            double nn = 0.0, dd = 0.0;
            for (std::int64_t rj = ri + 1; rj < n; ++rj) {
                const double D = tree.distance_by_rank(static_cast<std::uint32_t>(ri),
                                                       static_cast<std::uint32_t>(rj));
                const double d = scale * distance(pos[reals[ri]], pos[reals[rj]]);
                nn += (D - d) * (D - d);
                dd += d;
            }
            num[ri] = nn;
            den[ri] = dd;
        }
    } else {
        for (std::int64_t ri = 0; ri < n; ++ri) {
            double nn = 0.0, dd = 0.0;
            for (std::int64_t rj = ri + 1; rj < n; ++rj) {
                const double D = tree.distance_by_rank(static_cast<std::uint32_t>(ri),
                                                       static_cast<std::uint32_t>(rj));
                const double d = scale * distance(pos[reals[ri]], pos[reals[rj]]);
                nn += (D - d) * (D - d);
                dd += d;
            }
            num[ri] = nn;
            den[ri] = dd;
        }
    }
    double total_num = 0.0, total_den = 0.0;
    for (std::int64_t ri = 0; ri < n; ++ri) {
        total_num += num[ri];
        total_den += den[ri];
    }
    if (!(total_den > 0.0)) throw std::invalid_argument("degenerate layout");
    return std::sqrt(total_num) / total_den;
}

}  // namespace evotree
