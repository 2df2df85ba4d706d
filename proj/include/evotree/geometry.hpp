#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace evotree {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Point2&) const = default;

    double norm() const { return std::sqrt(x * x + y * y); }
    double norm_sq() const { return x * x + y * y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

// Line segment with distinct endpoints; zero-length segments are rejected.
struct Segment2 {
    Point2 a;
    Point2 b;

    Segment2(Point2 a_, Point2 b_) : a(a_), b(b_) {
        if (a == b) throw std::invalid_argument("zero-length segment");
    }

    double length() const { return distance(a, b); }
};

// Axis-aligned rectangle, min <= max per coordinate.
struct Rect2 {
    Point2 min;
    Point2 max;

    Rect2(Point2 min_, Point2 max_) : min(min_), max(max_) {
        if (min.x > max.x || min.y > max.y)
            throw std::invalid_argument("inverted rectangle");
    }

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double area() const { return width() * height(); }
};

// Sign of the cross product (q-p) x (r-p): +1 left turn, -1 right turn,
// 0 collinear. Exact for representable inputs (no division).
int orientation(Point2 p, Point2 q, Point2 r);

// True iff r lies on segment [p,q], assuming p, q, r are collinear.
bool on_segment(Point2 p, Point2 q, Point2 r);

// Proper intersection: the segments share a point interior to at least one
// of them and do not share an endpoint (exact coordinate equality).
// Segments meeting only at a common endpoint do not intersect; an endpoint
// of one segment lying in the interior of the other does, and so does
// collinear overlap of positive length.
bool properly_intersect(const Segment2& s, const Segment2& t);

// Tightest axis-aligned rectangle containing all points. Throws on empty.
Rect2 bounding_rect(std::span<const Point2> points);

// True iff the rectangle interiors intersect; touching edges do not count.
bool rects_overlap(const Rect2& a, const Rect2& b);

} // namespace evotree
