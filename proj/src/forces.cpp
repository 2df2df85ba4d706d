#include "evotree/forces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "evotree/tiebreak.hpp"

namespace evotree {

namespace {

bool segment_adjacent(const EvolvingTree& tree, NodeId a, NodeId b) {
    for (const int si : tree.incident_segments(a)) {
        const Segment& s = tree.segments()[static_cast<std::size_t>(si)];
        if (s.a == b || s.b == b) return true;
    }
    return false;
}

Point2 edge_force_on(const EvolvingTree& tree, std::span<const Point2> pos,
                     double k_edge, NodeId i) {
    Point2 f{};
    for (const int si : tree.incident_segments(i)) {
        const Segment& s = tree.segments()[static_cast<std::size_t>(si)];
        const NodeId other = (s.a == i) ? s.b : s.a;
        const double dx = pos[other].x - pos[i].x;
        const double dy = pos[other].y - pos[i].y;
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d > 0.0) {
            const double m = k_edge * (d - s.rest_length);
            f.x += m * dx / d;
            f.y += m * dy / d;
        } else {
            const Point2 dir = tiebreak_direction(i, other);
            f.x += k_edge * s.rest_length * dir.x;
            f.y += k_edge * s.rest_length * dir.y;
        }
    }
    return f;
}

Point2 stress_force_on(const EvolvingTree& tree, std::span<const Point2> pos,
                       double k_stress, std::uint32_t ri) {
    const auto& reals = tree.real_ids();
    const NodeId i = reals[ri];
    Point2 f{};
    for (std::uint32_t rj = 0; rj < reals.size(); ++rj) {
        if (rj == ri) continue;
        const NodeId j = reals[rj];
        if (tree.parent_of(i) == j || tree.parent_of(j) == i) continue;
        const double D = tree.distance_by_rank(ri, rj);
        const double dx = pos[j].x - pos[i].x;
        const double dy = pos[j].y - pos[i].y;
        const double d = std::sqrt(dx * dx + dy * dy);
        const double m = k_stress * (d - D) / D;
        if (d > 0.0) {
            f.x += m * dx / d;
            f.y += m * dy / d;
        } else {
            const Point2 dir = tiebreak_direction(i, j);  // away from j
            f.x += -m * dir.x;
            f.y += -m * dir.y;
        }
    }
    return f;
}

Point2 elliptical_force_on(std::span<const Point2> pos, double k_repulse,
                           double aspect, std::size_t i) {
    Point2 f{};
    const double a2 = aspect * aspect;
    for (std::size_t j = 0; j < pos.size(); ++j) {
        if (j == i) continue;
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;
        const double sx = dx / aspect;
        const double ds = std::sqrt(sx * sx + dy * dy);
        const double soft = std::max(ds, 1.0);
        const double mag = k_repulse / (soft * soft);
        if (ds > 0.0) {
            f.x += mag * (dx / a2) / ds;
            f.y += mag * dy / ds;
        } else {
            const Point2 dir = tiebreak_direction(static_cast<std::uint32_t>(i),
                                                  static_cast<std::uint32_t>(j));
            f.x += mag * dir.x;
            f.y += mag * dir.y;
        }
    }
    return f;
}

// One pass over partners computing elliptical repulsion plus (for
// non-adjacent pairs) the stress spring; numerically equivalent to running
// the two kernels back to back, ~1e-15 apart from the changed sum order.
Point2 dynasafe_pair_force_on(const EvolvingTree& tree, std::span<const Point2> pos,
                              double k_repulse, double aspect, double k_stress,
                              std::uint32_t ri) {
    const auto& reals = tree.real_ids();
    const NodeId i = reals[ri];
    const NodeId pi = tree.parent_of(i);
    const double a2 = aspect * aspect;
    Point2 f{};
    for (std::uint32_t rj = 0; rj < reals.size(); ++rj) {
        if (rj == ri) continue;
        const NodeId j = reals[rj];
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;

        const double sx = dx / aspect;
        const double ds = std::sqrt(sx * sx + dy * dy);
        const double rmag = k_repulse / (std::max(ds, 1.0) * std::max(ds, 1.0));
        if (ds > 0.0) {
            f.x += rmag * (dx / a2) / ds;
            f.y += rmag * dy / ds;
        } else {
            const Point2 dir = tiebreak_direction(i, j);
            f.x += rmag * dir.x;
            f.y += rmag * dir.y;
        }

        if (pi == j || tree.parent_of(j) == i) continue;
        const double D = tree.distance_by_rank(ri, rj);
        const double d = std::sqrt(dx * dx + dy * dy);
        const double m = k_stress * (d - D) / D;
        if (d > 0.0) {
            f.x += m * -dx / d;
            f.y += m * -dy / d;
        } else {
            const Point2 dir = tiebreak_direction(i, j);
            f.x += -m * dir.x;
            f.y += -m * dir.y;
        }
    }
    return f;
}

Point2 collision_pair_force(std::span<const Point2> pos,
                            std::span<const double> radii, double k_collide,
                            std::uint32_t i, std::uint32_t j) {
    const double dx = pos[i].x - pos[j].x;
    const double dy = pos[i].y - pos[j].y;
    const double d = std::sqrt(dx * dx + dy * dy);
    const double overlap = radii[i] + radii[j] - d;
    if (!(overlap > 0.0)) return {};
    const double m = k_collide * overlap * 0.5;
    if (d > 0.0) return {m * dx / d, m * dy / d};
    const Point2 dir = tiebreak_direction(i, j);
    return {m * dir.x, m * dir.y};
}

}  // namespace

void add_edge_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                     double k_edge, std::span<Point2> out, Exec exec) {
    const auto n = static_cast<std::int64_t>(tree.node_count());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            out[i] += edge_force_on(tree, pos, k_edge, static_cast<NodeId>(i));
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            out[i] += edge_force_on(tree, pos, k_edge, static_cast<NodeId>(i));
    }
}

void add_gravity(std::span<const Point2> pos, double k_gravity,
                 std::span<Point2> out, Exec exec) {
    if (pos.empty()) return;
    Point2 c{};
    for (const Point2& p : pos) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(pos.size());
    c.y /= static_cast<double>(pos.size());
    const auto n = static_cast<std::int64_t>(pos.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            out[i].x += k_gravity * (c.x - pos[i].x);
            out[i].y += k_gravity * (c.y - pos[i].y);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            out[i].x += k_gravity * (c.x - pos[i].x);
            out[i].y += k_gravity * (c.y - pos[i].y);
        }
    }
}

void add_stress_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                       double k_stress, std::span<Point2> out, Exec exec) {
    const auto n = static_cast<std::int64_t>(tree.real_ids().size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t ri = 0; ri < n; ++ri)
            out[tree.real_ids()[ri]] +=
                stress_force_on(tree, pos, k_stress, static_cast<std::uint32_t>(ri));
    } else {
        for (std::int64_t ri = 0; ri < n; ++ri)
            out[tree.real_ids()[ri]] +=
                stress_force_on(tree, pos, k_stress, static_cast<std::uint32_t>(ri));
    }
}

void add_elliptical_repulsion(std::span<const Point2> pos, double k_repulse,
                              double aspect, std::span<Point2> out, Exec exec) {
    const auto n = static_cast<std::int64_t>(pos.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
            out[i] += elliptical_force_on(pos, k_repulse, aspect,
                                          static_cast<std::size_t>(i));
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            out[i] += elliptical_force_on(pos, k_repulse, aspect,
                                          static_cast<std::size_t>(i));
    }
}

void add_dynasafe_pair_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                              double k_repulse, double aspect, double k_stress,
                              std::span<Point2> out, Exec exec) {
    const auto n = static_cast<std::int64_t>(tree.real_ids().size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t ri = 0; ri < n; ++ri)
            out[tree.real_ids()[ri]] += dynasafe_pair_force_on(
                tree, pos, k_repulse, aspect, k_stress, static_cast<std::uint32_t>(ri));
    } else {
        for (std::int64_t ri = 0; ri < n; ++ri)
            out[tree.real_ids()[ri]] += dynasafe_pair_force_on(
                tree, pos, k_repulse, aspect, k_stress, static_cast<std::uint32_t>(ri));
    }
}

std::vector<double> collision_radii(const EvolvingTree& tree,
                                    std::span<const Point2> pos) {
    std::vector<double> radii(tree.node_count(), 0.0);
    for (NodeId i = 0; i < radii.size(); ++i) {
        double longest = 0.0;
        for (const int si : tree.incident_segments(i)) {
            const Segment& s = tree.segments()[static_cast<std::size_t>(si)];
            longest = std::max(longest, distance(pos[s.a], pos[s.b]));
        }
        radii[i] = 0.5 * longest;
    }
    return radii;
}

void add_collision_forces(const EvolvingTree& tree, std::span<const Point2> pos,
                          std::span<const double> radii, double k_collide,
                          std::span<Point2> out, Exec exec) {
    const auto n = static_cast<std::int64_t>(tree.node_count());
    if (n < 2) return;
    double rmax = 0.0;
    for (std::int64_t i = 0; i < n; ++i) rmax = std::max(rmax, radii[i]);
    if (!(rmax > 0.0)) return;

    // Cell side 2*rmax: overlapping pairs always land in adjacent cells.
    const double cell = 2.0 * rmax;
    const auto key_of = [cell](Point2 p) {
        const auto kx = static_cast<std::int64_t>(std::floor(p.x / cell));
        const auto ky = static_cast<std::int64_t>(std::floor(p.y / cell));
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(kx)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(ky));
    };
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    grid.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        grid[key_of(pos[i])].push_back(static_cast<std::uint32_t>(i));

    const auto accumulate = [&](std::int64_t i, std::vector<std::uint32_t>& cand) {
        cand.clear();
        const auto kx = static_cast<std::int64_t>(std::floor(pos[i].x / cell));
        const auto ky = static_cast<std::int64_t>(std::floor(pos[i].y / cell));
        for (std::int64_t gy = ky - 1; gy <= ky + 1; ++gy)
            for (std::int64_t gx = kx - 1; gx <= kx + 1; ++gx) {
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(static_cast<std::uint32_t>(gx)) << 32) |
                    static_cast<std::uint64_t>(static_cast<std::uint32_t>(gy));
                const auto it = grid.find(key);
                if (it != grid.end())
                    cand.insert(cand.end(), it->second.begin(), it->second.end());
            }
        // Ascending-id order keeps the sum bit-identical to the brute scan.
        std::sort(cand.begin(), cand.end());
        Point2 f{};
        for (const std::uint32_t j : cand) {
            if (j == static_cast<std::uint32_t>(i)) continue;
            if (segment_adjacent(tree, static_cast<NodeId>(i), j)) continue;
            const Point2 pf = collision_pair_force(pos, radii, k_collide,
                                                   static_cast<std::uint32_t>(i), j);
            f.x += pf.x;
            f.y += pf.y;
        }
        out[i] += f;
    };

    if (exec == Exec::parallel) {
#pragma omp parallel
        {
            std::vector<std::uint32_t> cand;
#pragma omp for schedule(static)
            for (std::int64_t i = 0; i < n; ++i) accumulate(i, cand);
        }
    } else {
        std::vector<std::uint32_t> cand;
        for (std::int64_t i = 0; i < n; ++i) accumulate(i, cand);
    }
}

std::vector<Point2> collision_forces_brute(const EvolvingTree& tree,
                                           std::span<const Point2> pos,
                                           std::span<const double> radii,
                                           double k_collide) {
    const std::size_t n = tree.node_count();
    std::vector<Point2> out(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        Point2 f{};
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (segment_adjacent(tree, i, j)) continue;
            const Point2 pf = collision_pair_force(pos, radii, k_collide, i, j);
            f.x += pf.x;
            f.y += pf.y;
        }
        out[i] = f;
    }
    return out;
}

}  // namespace evotree
