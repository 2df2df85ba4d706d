#include "evotree/geometry.hpp"

#include <algorithm>

namespace evotree {

int orientation(Point2 p, Point2 q, Point2 r) {
    const double c = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    if (c > 0.0) return 1;
    if (c < 0.0) return -1;
    return 0;
}

bool on_segment(Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
}

bool properly_intersect(const Segment2& s, const Segment2& t) {
    // A shared endpoint is adjacency, never a crossing.
    if (s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b) return false;

    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);

    if (o1 * o2 < 0 && o3 * o4 < 0) return true;

    // Degenerate contacts. Endpoint equality is already excluded, so any
    // endpoint that lies on the other segment lies in its interior; that
    // covers T-junctions and collinear overlap of positive length.
    if (o1 == 0 && on_segment(s.a, s.b, t.a)) return true;
    if (o2 == 0 && on_segment(s.a, s.b, t.b)) return true;
    if (o3 == 0 && on_segment(t.a, t.b, s.a)) return true;
    if (o4 == 0 && on_segment(t.a, t.b, s.b)) return true;

    return false;
}

Rect2 bounding_rect(std::span<const Point2> points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    Point2 lo = points[0];
    Point2 hi = points[0];
    for (const Point2& p : points.subspan(1)) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    return {lo, hi};
}

bool rects_overlap(const Rect2& a, const Rect2& b) {
    return a.min.x < b.max.x && b.min.x < a.max.x &&
           a.min.y < b.max.y && b.min.y < a.max.y;
}

} // namespace evotree
