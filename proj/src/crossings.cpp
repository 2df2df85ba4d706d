#include "evotree/crossings.hpp"

#include <algorithm>

namespace evotree {

namespace {

struct Box {
    double x0, y0, x1, y1;
};

Box box_of(Point2 a, Point2 b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y),
            std::max(a.x, b.x), std::max(a.y, b.y)};
}

bool boxes_touch(const Box& a, const Box& b) {
    return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

bool share_node(const Segment& s, const Segment& t) {
    return s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
}

// Zero-length segments have no extent and cross nothing; everything else
// defers to the exact predicate.
bool cross_pts(Point2 a, Point2 b, Point2 c, Point2 d) {
    if ((a.x == b.x && a.y == b.y) || (c.x == d.x && c.y == d.y)) return false;
    return properly_intersect(Segment2{a, b}, Segment2{c, d});
}

std::vector<Box> segment_boxes(std::span<const Segment> segs,
                               std::span<const Point2> pos) {
    std::vector<Box> boxes(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i)
        boxes[i] = box_of(pos[segs[i].a], pos[segs[i].b]);
    return boxes;
}

// Indices sorted by box left edge: segment i can only overlap segments whose
// x-interval starts before boxes[i].x1, so a forward scan from each sorted
// position enumerates every box-overlapping pair exactly once.
std::vector<std::uint32_t> sweep_order(const std::vector<Box>& boxes) {
    std::vector<std::uint32_t> order(boxes.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&boxes](std::uint32_t a, std::uint32_t b) {
                  if (boxes[a].x0 != boxes[b].x0) return boxes[a].x0 < boxes[b].x0;
                  return a < b;
              });
    return order;
}

}  // namespace

long long count_crossings(std::span<const Segment> segs,
                          std::span<const Point2> pos, Exec exec) {
    const auto n = static_cast<std::int64_t>(segs.size());
    if (n < 2) return 0;
    const std::vector<Box> boxes = segment_boxes(segs, pos);
    const std::vector<std::uint32_t> order = sweep_order(boxes);
    long long total = 0;
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : total)
        for (std::int64_t k = 0; k < n; ++k) {
            const std::uint32_t i = order[k];
            for (std::int64_t m = k + 1; m < n; ++m) {
                const std::uint32_t j = order[m];
                if (boxes[j].x0 > boxes[i].x1) break;
                if (!boxes_touch(boxes[i], boxes[j])) continue;
                if (share_node(segs[i], segs[j])) continue;
                if (cross_pts(pos[segs[i].a], pos[segs[i].b],
                              pos[segs[j].a], pos[segs[j].b]))
                    ++total;
            }
        }
    } else {
        for (std::int64_t k = 0; k < n; ++k) {
            const std::uint32_t i = order[k];
            for (std::int64_t m = k + 1; m < n; ++m) {
                const std::uint32_t j = order[m];
                if (boxes[j].x0 > boxes[i].x1) break;
                if (!boxes_touch(boxes[i], boxes[j])) continue;
                if (share_node(segs[i], segs[j])) continue;
                if (cross_pts(pos[segs[i].a], pos[segs[i].b],
                              pos[segs[j].a], pos[segs[j].b]))
                    ++total;
            }
        }
    }
    return total;
}

bool segment_crosses_any(Point2 pa, Point2 pb, NodeId ia, NodeId ib,
                         std::span<const Segment> segs,
                         std::span<const Point2> pos) {
    const Box cbox = box_of(pa, pb);
    for (const Segment& s : segs) {
        if (s.a == ia || s.b == ia || s.a == ib || s.b == ib) continue;
        if (!boxes_touch(cbox, box_of(pos[s.a], pos[s.b]))) continue;
        if (cross_pts(pa, pb, pos[s.a], pos[s.b])) return true;
    }
    return false;
}

long long mark_crossing_nodes(std::span<const Segment> segs,
                              std::span<const Point2> pos,
                              std::span<char> involved) {
    const auto n = static_cast<std::int64_t>(segs.size());
    if (n < 2) return 0;
    const std::vector<Box> boxes = segment_boxes(segs, pos);
    const std::vector<std::uint32_t> order = sweep_order(boxes);
    long long total = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        const std::uint32_t i = order[k];
        for (std::int64_t m = k + 1; m < n; ++m) {
            const std::uint32_t j = order[m];
            if (boxes[j].x0 > boxes[i].x1) break;
            if (!boxes_touch(boxes[i], boxes[j])) continue;
            if (share_node(segs[i], segs[j])) continue;
            if (cross_pts(pos[segs[i].a], pos[segs[i].b],
                          pos[segs[j].a], pos[segs[j].b])) {
                ++total;
                involved[segs[i].a] = 1;
                involved[segs[i].b] = 1;
                involved[segs[j].a] = 1;
                involved[segs[j].b] = 1;
            }
        }
    }
    return total;
}

}  // namespace evotree
