#include "evotree/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evotree/tiebreak.hpp"

namespace evotree {

void QuadTree::rebuild(std::span<const Point2> positions,
                       std::span<const double> charges) {
    if (positions.empty()) throw std::invalid_argument("quadtree: empty input");
    if (positions.size() != charges.size())
        throw std::invalid_argument("quadtree: positions/charges size mismatch");

    points_.assign(positions.begin(), positions.end());
    charges_.assign(charges.begin(), charges.end());
    next_.assign(points_.size(), -1);
    cells_.clear();

    const Rect2 box = bounding_rect(positions);
    Cell root;
    root.cx = 0.5 * (box.min.x + box.max.x);
    root.cy = 0.5 * (box.min.y + box.max.y);
    root.half = 0.5 * std::max(box.width(), box.height());
    cells_.push_back(root);

    for (std::uint32_t i = 0; i < points_.size(); ++i) insert(i);

    // Children are created after their parent, so a reverse sweep sees
    // children before parents.
    for (int ci = static_cast<int>(cells_.size()) - 1; ci >= 0; --ci) {
        Cell& c = cells_[ci];
        double charge = 0.0;
        double wx = 0.0, wy = 0.0;
        if (c.first_child >= 0) {
            for (int k = 0; k < 4; ++k) {
                const Cell& ch = cells_[c.first_child + k];
                charge += ch.charge;
                wx += ch.charge * ch.center.x;
                wy += ch.charge * ch.center.y;
            }
        } else {
            for (int j = c.head; j >= 0; j = next_[j]) {
                charge += charges_[j];
                wx += charges_[j] * points_[j].x;
                wy += charges_[j] * points_[j].y;
            }
        }
        c.charge = charge;
        c.center = charge > 0.0 ? Point2{wx / charge, wy / charge}
                                : Point2{c.cx, c.cy};
        const double ox = c.center.x - c.cx;
        const double oy = c.center.y - c.cy;
        c.delta = std::sqrt(ox * ox + oy * oy);
    }
}

int QuadTree::split(int cell_index) {
    const int first = static_cast<int>(cells_.size());
    cells_.resize(cells_.size() + 4);  // may reallocate; index access only below
    Cell& c = cells_[cell_index];
    const double h = 0.5 * c.half;
    for (int k = 0; k < 4; ++k) {
        Cell& ch = cells_[first + k];
        ch.cx = c.cx + ((k & 1) ? h : -h);
        ch.cy = c.cy + ((k & 2) ? h : -h);
        ch.half = h;
    }
    // Re-seat the existing occupants one level down.
    int j = c.head;
    c.head = -1;
    c.first_child = first;
    while (j >= 0) {
        const int nj = next_[j];
        Cell& ch = cells_[first + quadrant(c, points_[j])];
        next_[j] = ch.head;
        ch.head = j;
        j = nj;
    }
    return first;
}

void QuadTree::insert(std::uint32_t id) {
    int ci = 0;
    int depth = 0;
    for (;;) {
        if (cells_[ci].first_child >= 0) {
            ci = cells_[ci].first_child + quadrant(cells_[ci], points_[id]);
            ++depth;
            continue;
        }
        if (cells_[ci].head < 0 || depth >= max_depth) {
            next_[id] = cells_[ci].head;
            cells_[ci].head = static_cast<int>(id);
            return;
        }
        split(ci);
    }
}

Point2 QuadTree::repulsion_at(Point2 p, std::uint32_t self_id, double theta,
                              double strength) const {
    Point2 force{};
    int stack[4 * (max_depth + 2)];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Cell& c = cells_[stack[--top]];
        if (c.charge <= 0.0 && c.first_child < 0 && c.head < 0) continue;
        if (c.first_child >= 0) {
            const double dx = p.x - c.center.x;
            const double dy = p.y - c.center.y;
            const double d = std::sqrt(dx * dx + dy * dy);
            const bool outside = std::abs(p.x - c.cx) > c.half ||
                                 std::abs(p.y - c.cy) > c.half;
            if (outside && d > 0.0 && 2.0 * c.half < theta * (d - c.delta)) {
                const double soft = std::max(d, softening_floor);
                const double mag = strength * c.charge / (soft * soft);
                force.x += mag * dx / d;
                force.y += mag * dy / d;
            } else {
                for (int k = 0; k < 4; ++k) stack[top++] = c.first_child + k;
            }
            continue;
        }
        for (int j = c.head; j >= 0; j = next_[j]) {
            if (static_cast<std::uint32_t>(j) == self_id) continue;
            const double dx = p.x - points_[j].x;
            const double dy = p.y - points_[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            const double mag = strength * charges_[j] /
                               (std::max(d, softening_floor) * std::max(d, softening_floor));
            if (d > 0.0) {
                force.x += mag * dx / d;
                force.y += mag * dy / d;
            } else {
                const Point2 dir = tiebreak_direction(self_id, static_cast<std::uint32_t>(j));
                force.x += mag * dir.x;
                force.y += mag * dir.y;
            }
        }
    }
    return force;
}

void QuadTree::add_repulsion(std::span<Point2> out, double theta, double strength,
                             Exec exec) const {
    const auto n = static_cast<std::int64_t>(points_.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            out[i] += repulsion_at(points_[i], static_cast<std::uint32_t>(i),
                                   theta, strength) *
                      charges_[i];
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            out[i] += repulsion_at(points_[i], static_cast<std::uint32_t>(i),
                                   theta, strength) *
                      charges_[i];
    }
}

std::vector<Point2> pairwise_repulsion(std::span<const Point2> positions,
                                       std::span<const double> charges,
                                       double strength) {
    const std::size_t n = positions.size();
    std::vector<Point2> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 f{};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = positions[i].x - positions[j].x;
            const double dy = positions[i].y - positions[j].y;
            const double d = std::sqrt(dx * dx + dy * dy);
            const double soft = std::max(d, QuadTree::softening_floor);
            const double mag = strength * charges[j] / (soft * soft);
            if (d > 0.0) {
                f.x += mag * dx / d;
                f.y += mag * dy / d;
            } else {
                const Point2 dir = tiebreak_direction(static_cast<std::uint32_t>(i),
                                                      static_cast<std::uint32_t>(j));
                f.x += mag * dir.x;
                f.y += mag * dir.y;
            }
        }
        out[i] = f * charges[i];
    }
    return out;
}

} // namespace evotree
