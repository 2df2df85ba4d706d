#include "evotree/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "evotree/crossings.hpp"
#include "evotree/forces.hpp"

namespace evotree {

namespace {

constexpr double two_pi = 6.283185307179586;
constexpr int placement_rounds = 200;
constexpr double placement_shrink = 0.9;
// Keeps the relaxation from freezing if a collision radius collapses.
constexpr double min_step_cap = 0.01;

double magnitude(Point2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

}  // namespace

Algorithm algorithm_from_string(std::string_view s) {
    if (s == "dynacola") return Algorithm::dynacola;
    if (s == "dynasafe") return Algorithm::dynasafe;
    if (s == "naive") return Algorithm::naive;
    throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::dynacola: return "dynacola";
        case Algorithm::dynasafe: return "dynasafe";
        case Algorithm::naive: return "naive";
    }
    return "?";
}

void validate(const EngineParams& p) {
    if (p.n_iters < 0) throw std::invalid_argument("n_iters must be >= 0");
    if (p.n_s < 0) throw std::invalid_argument("n_s must be >= 0");
    if (!(p.p > 0.0 && p.p < 1.0)) throw std::invalid_argument("p must be in (0,1)");
    if (p.q < 1) throw std::invalid_argument("q must be >= 1");
    if (p.sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    if (p.k_edge < 0.0) throw std::invalid_argument("k_edge must be >= 0");
    if (p.k_repulse < 0.0) throw std::invalid_argument("k_repulse must be >= 0");
    if (p.k_collide < 0.0) throw std::invalid_argument("k_collide must be >= 0");
    if (p.k_gravity < 0.0) throw std::invalid_argument("k_gravity must be >= 0");
    if (p.k_stress < 0.0) throw std::invalid_argument("k_stress must be >= 0");
    if (p.theta < 0.0) throw std::invalid_argument("theta must be >= 0");
    if (p.ellipse_aspect < 1.0) throw std::invalid_argument("ellipse_aspect must be >= 1");
    if (!(p.step_cap_fraction > 0.0))
        throw std::invalid_argument("step_cap_fraction must be > 0");
}

Engine::Engine(Algorithm alg, const EngineParams& params, Exec exec)
    : alg_(alg), params_(params), exec_(exec), rng_(params.seed) {
    validate(params_);
}

void Engine::insert(const Event& ev) {
    if (ev.parent.empty()) {
        if (!tree_.empty())
            throw std::invalid_argument("root event on non-empty tree: " + ev.name);
        tree_.add_root(ev.name, ev.label);
        pos_.push_back(Point2{0.0, 0.0});
        ++timestep_;
        return;
    }
    if (tree_.empty()) throw std::invalid_argument("first event must be the root");
    if (!(ev.length > 0.0))
        throw std::invalid_argument("desired length must be positive: " + ev.name);
    switch (alg_) {
        case Algorithm::dynacola: insert_dynacola(ev); break;
        case Algorithm::dynasafe: insert_dynasafe(ev); break;
        case Algorithm::naive: insert_naive(ev); break;
    }
    ++timestep_;
}

Point2 Engine::place_new_node(NodeId parent, double desired,
                              double& effective_radius) {
    const Point2 pp = pos_.at(parent);
    double radius = desired;
    for (int round = 0; round < placement_rounds; ++round) {
        for (int s = 0; s < params_.sample_count; ++s) {
            const double ang = two_pi * rng_.uniform01();
            const Point2 cand{pp.x + radius * std::cos(ang),
                              pp.y + radius * std::sin(ang)};
            if (!segment_crosses_any(pp, cand, parent, no_node,
                                     tree_.segments(), pos_)) {
                effective_radius = radius;
                return cand;
            }
        }
        radius *= placement_shrink;
    }
    throw std::runtime_error("placement exhausted");
}

void Engine::insert_dynacola(const Event& ev) {
    const NodeId parent = tree_.id_of(ev.parent);
    double eff = ev.length;
    const Point2 placed = place_new_node(parent, ev.length, eff);
    // Placement may have shrunk the radius; the edge adopts that length.
    const NodeId child = tree_.add_child(ev.parent, ev.name, ev.label, eff);
    pos_.resize(tree_.node_count());
    pos_[child] = placed;

    const int ei = static_cast<int>(tree_.edge_count()) - 1;
    const std::vector<NodeId> subs = tree_.subdivide_edge(ei, params_.n_s);
    pos_.resize(tree_.node_count());
    const Point2 pp = pos_[parent];
    for (std::size_t k = 0; k < subs.size(); ++k) {
        const double t = static_cast<double>(k + 1) /
                         static_cast<double>(subs.size() + 1);
        pos_[subs[k]] = Point2{pp.x + t * (placed.x - pp.x),
                               pp.y + t * (placed.y - pp.y)};
    }
    relax(params_.n_iters);
}

void Engine::insert_dynasafe(const Event& ev) {
    const NodeId parent = tree_.id_of(ev.parent);
    double eff = ev.length;
    const Point2 placed = place_new_node(parent, ev.length, eff);
    const NodeId child = tree_.add_child(ev.parent, ev.name, ev.label, ev.length);
    pos_.resize(tree_.node_count());
    pos_[child] = placed;
    relax(params_.n_iters);
}

void Engine::insert_naive(const Event& ev) {
    const NodeId parent = tree_.id_of(ev.parent);
    const NodeId child = tree_.add_child(ev.parent, ev.name, ev.label, ev.length);
    pos_.resize(tree_.node_count());
    pos_[child] = pos_[parent];

    // Full redraw: every position is re-drawn from a disc sized to hold the
    // tree, with a per-insertion RNG so each frame is self-contained.
    SplitMix64 rng(hash64(params_.seed ^
                          (0x9E3779B97F4A7C15ull *
                           static_cast<std::uint64_t>(timestep_ + 1))));
    const double lbar = mean_desired_length();
    const double R = 0.5 * lbar *
                     std::sqrt(static_cast<double>(tree_.node_count()));
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        const double r = R * std::sqrt(rng.uniform01());
        const double ang = two_pi * rng.uniform01();
        pos_[i] = Point2{r * std::cos(ang), r * std::sin(ang)};
    }
    relax(4 * params_.n_iters);
}

void Engine::relax(int rounds) {
    switch (alg_) {
        case Algorithm::dynacola: relax_dynacola(rounds); break;
        case Algorithm::dynasafe: relax_dynasafe(rounds); break;
        case Algorithm::naive: relax_naive(rounds); break;
    }
}

void Engine::relax_dynacola(int rounds) {
    const std::size_t n = tree_.node_count();
    if (rounds <= 0 || n < 2) return;
    charges_.resize(n);
    for (NodeId i = 0; i < n; ++i)
        charges_[i] =
            tree_.node(i).kind == NodeKind::real ? 1.0 : params_.subdiv_charge;
    const auto& segs = tree_.segments();

    for (int round = 0; round < rounds; ++round) {
        const std::vector<double> radii = collision_radii(tree_, pos_);
        double rmin = std::numeric_limits<double>::infinity();
        for (const double r : radii) rmin = std::min(rmin, r);
        const double cap =
            std::max(params_.step_cap_fraction * rmin, min_step_cap);

        disp_.assign(n, Point2{});
        qt_.rebuild(pos_, charges_);
        qt_.add_repulsion(disp_, params_.theta, params_.k_repulse, exec_);
        add_edge_forces(tree_, pos_, params_.k_edge, disp_, exec_);
        add_collision_forces(tree_, pos_, radii, params_.k_collide, disp_, exec_);
        add_gravity(pos_, params_.k_gravity, disp_, exec_);

        prev_.assign(pos_.begin(), pos_.end());
        for (std::size_t i = 0; i < n; ++i) {
            const double m = magnitude(disp_[i]);
            const double s = m > cap ? cap / m : 1.0;
            pos_[i].x += s * disp_[i].x;
            pos_[i].y += s * disp_[i].y;
        }

        // Exact anti-tunneling repair: roll crossing-involved nodes back to
        // their pre-round spots. Each pass with crossings rolls back at
        // least one moved node, so in the worst case the round is undone
        // entirely — which was crossing-free.
        involved_.assign(n, 0);
        for (std::size_t pass = 0; mark_crossing_nodes(segs, pos_, involved_) > 0;
             ++pass) {
            if (pass >= n) {
                pos_.assign(prev_.begin(), prev_.end());
                break;
            }
            for (std::size_t i = 0; i < n; ++i)
                if (involved_[i]) pos_[i] = prev_[i];
            involved_.assign(n, 0);
        }
    }
}

void Engine::relax_dynasafe(int rounds) {
    const std::size_t n = tree_.node_count();
    if (rounds <= 0 || n < 2) return;
    for (int round = 0; round < rounds; ++round) {
        disp_.assign(n, Point2{});
        add_edge_forces(tree_, pos_, params_.k_edge, disp_, exec_);
        add_dynasafe_pair_forces(tree_, pos_, params_.k_repulse,
                                 params_.ellipse_aspect, params_.k_stress,
                                 disp_, exec_);
        add_gravity(pos_, params_.k_gravity, disp_, exec_);

        // Sequential safe application in id order: shrink a move by p until
        // it stops introducing crossings; give up after q shrinks.
        for (NodeId w = 0; w < n; ++w) {
            Point2 d = disp_[w];
            const double proposed = magnitude(d);
            if (proposed == 0.0) continue;
            int attempts = 0;
            bool moved = false;
            for (; attempts <= params_.q; ++attempts) {
                const Point2 cand{pos_[w].x + d.x, pos_[w].y + d.y};
                if (!move_would_cross(w, cand)) {
                    pos_[w] = cand;
                    moved = true;
                    break;
                }
                d.x *= params_.p;
                d.y *= params_.p;
            }
            if (log_enabled_)
                safe_log_.push_back(SafeApplyRecord{
                    timestep_, round, w, proposed,
                    moved ? magnitude(d) : 0.0, attempts});
        }
    }
}

void Engine::relax_naive(int rounds) {
    const std::size_t n = tree_.node_count();
    if (rounds <= 0 || n < 2) return;
    charges_.assign(n, 1.0);
    // Loose clamp: inactive in normal regimes, only guards against numeric
    // blow-up since this engine has no other stabilizer.
    const double lbar = mean_desired_length();
    const double cap = lbar > 0.0 ? 10.0 * lbar : 1e9;
    for (int round = 0; round < rounds; ++round) {
        disp_.assign(n, Point2{});
        qt_.rebuild(pos_, charges_);
        qt_.add_repulsion(disp_, params_.theta, params_.k_repulse, exec_);
        add_edge_forces(tree_, pos_, params_.k_edge, disp_, exec_);
        add_gravity(pos_, params_.k_gravity, disp_, exec_);
        for (std::size_t i = 0; i < n; ++i) {
            const double m = magnitude(disp_[i]);
            const double s = m > cap ? cap / m : 1.0;
            pos_[i].x += s * disp_[i].x;
            pos_[i].y += s * disp_[i].y;
        }
    }
}

bool Engine::move_would_cross(NodeId w, Point2 cand) const {
    for (const int si : tree_.incident_segments(w)) {
        const Segment& s = tree_.segments()[static_cast<std::size_t>(si)];
        const NodeId other = (s.a == w) ? s.b : s.a;
        if (segment_crosses_any(cand, pos_[other], w, other, tree_.segments(), pos_))
            return true;
    }
    return false;
}

double Engine::mean_desired_length() const {
    if (tree_.edge_count() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t e = 0; e < tree_.edge_count(); ++e)
        sum += tree_.edge(static_cast<int>(e)).desired_length;
    return sum / static_cast<double>(tree_.edge_count());
}

void Engine::set_positions(std::span<const Point2> pos) {
    if (pos.size() != tree_.node_count())
        throw std::invalid_argument("set_positions: size mismatch");
    for (const Point2& p : pos)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("set_positions: non-finite coordinate");
    pos_.assign(pos.begin(), pos.end());
}

}  // namespace evotree
