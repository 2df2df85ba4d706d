// Acceptance harness: one PASS/FAIL line per release criterion, exit code =
// number of hard failures. Run via ctest (target "acceptance") or directly.
//
// Criteria:
//   1. crossing-free engines, verified by an independent O(S^2) brute counter
//   2. edge-length fidelity ordering   (dynacola < dynasafe, mean over seeds)
//   3. stress ordering                 (dynasafe < dynacola, mean over seeds)
//   4. stability dominance over the full-redraw baseline (+ soft ordering)
//   5. frozen hand-computed metric values
//   6. Barnes-Hut fidelity against exact pairwise repulsion
//   7. invariance suite (rigid motion, scale, translation)
//   8. wall-time envelope for a 500-insertion dynasafe run
//   9. byte-identical traces and CSVs across reruns and worker counts

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evotree/crossings.hpp"
#include "evotree/forces.hpp"
#include "evotree/io.hpp"
#include "evotree/metrics.hpp"
#include "evotree/quadtree.hpp"
#include "evotree/rng.hpp"
#include "evotree/runner.hpp"

using namespace evotree;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<Event> synthetic_events(int n, std::uint64_t seed) {
    std::istringstream in(generate_synthetic(n, 5, 100.0, seed));
    return parse_events(in);
}

std::string fmt(const char* pattern, double v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// Independent quadratic counter; deliberately not the library's prefiltered
// implementation so the two can disagree.
long long brute_crossings(const EvolvingTree& tree,
                          const std::vector<Point2>& pos) {
    const auto& segs = tree.segments();
    long long count = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            const Segment& s = segs[i];
            const Segment& t = segs[j];
            if (s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b) continue;
            if (properly_intersect(Segment2(pos[s.a], pos[s.b]),
                                   Segment2(pos[t.a], pos[t.b])))
                ++count;
        }
    }
    return count;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    long long bad_combos = 0;
    long long brute_total = 0;
    long long combos = 0;
    for (const Algorithm alg : {Algorithm::dynacola, Algorithm::dynasafe}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto events = synthetic_events(200, seed);
            LayoutOptions opt;
            opt.algorithm = alg;
            opt.params.seed = seed;
            const LayoutResult res = run_layout(events, opt);
            TraceReplayer replay(events);
            for (std::size_t t = 0; t < res.trace.frames.size(); ++t) {
                replay.apply(res.trace.frames[t]);
                const long long brute =
                    brute_crossings(replay.tree(), replay.positions());
                brute_total += brute;
                if (brute != 0 || res.crossings_per_step[t] != 0) ++bad_combos;
                ++combos;
            }
        }
    }
    report(1, bad_combos == 0,
           "crossing-free engines: " + std::to_string(brute_total) +
               " brute-force crossings over " + std::to_string(combos) +
               " engine×step combinations (expect 0)" +
               fmt(" [%.1f s]", seconds_since(t0)));
}

// Criteria 2-4 share one batch of runs: 10 seeds x 100 nodes x 3 engines.
void criteria_2_3_4() {
    constexpr int kSeeds = 10;
    double del[3][kSeeds], stress[3][kSeeds], stab[3][kSeeds];
    const Algorithm algs[3] = {Algorithm::dynacola, Algorithm::dynasafe,
                               Algorithm::naive};
    for (int a = 0; a < 3; ++a) {
        for (int s = 0; s < kSeeds; ++s) {
            const auto events = synthetic_events(100, s);
            LayoutOptions opt;
            opt.algorithm = algs[a];
            opt.params.seed = static_cast<std::uint64_t>(s);
            const LayoutResult res = run_layout(events, opt);
            const auto rows = checkpoint_metrics(events, res.trace, 100);
            del[a][s] = rows.at(0).del;
            stress[a][s] = rows.at(0).stress;
            stab[a][s] = rows.at(0).stability;
        }
    }
    const auto mean = [&](const double* v) {
        double sum = 0;
        for (int s = 0; s < kSeeds; ++s) sum += v[s];
        return sum / kSeeds;
    };

    const double del_cola = mean(del[0]), del_safe = mean(del[1]);
    report(2, del_cola < del_safe,
           "edge-length fidelity: mean del dynacola " + fmt("%.4f", del_cola) +
               " < dynasafe " + fmt("%.4f", del_safe) + " over 10 seeds");

    const double st_cola = mean(stress[0]), st_safe = mean(stress[1]);
    report(3, st_safe < st_cola,
           "stress: mean dynasafe " + fmt("%.4f", st_safe) + " < dynacola " +
               fmt("%.4f", st_cola) + " over 10 seeds");

    int beats_naive = 0, cola_wins = 0;
    for (int s = 0; s < kSeeds; ++s) {
        if (stab[0][s] < stab[2][s] && stab[1][s] < stab[2][s]) ++beats_naive;
        if (stab[0][s] <= stab[1][s]) ++cola_wins;
    }
    // Hard clause: both engines strictly beat the baseline on every seed and
    // dynacola <= dynasafe on at least 5 seeds. 5-6 wins is a soft zone:
    // reported, not failed; >= 7 is the full target.
    const bool hard_ok = beats_naive == kSeeds && cola_wins >= 5;
    std::string note = "stability: both engines beat naive on " +
                       std::to_string(beats_naive) + "/10 seeds (need 10); " +
                       "dynacola <= dynasafe on " + std::to_string(cola_wins) +
                       "/10 (target >= 7" +
                       (cola_wins >= 5 && cola_wins < 7 ? ", soft zone 5-6: reported, not failed"
                                                        : "") +
                       "); means dynacola " + fmt("%.5f", mean(stab[0])) +
                       ", dynasafe " + fmt("%.5f", mean(stab[1])) + ", naive " +
                       fmt("%.5f", mean(stab[2]));
    report(4, hard_ok, note);
}

void criterion_5() {
    double worst = 0;
    const auto track = [&worst](double got, double want) {
        worst = std::max(worst, std::abs(got - want));
    };

    {  // del: desired 100+100 realized 50+150 -> 0.5
        EvolvingTree tree;
        tree.add_root("a", "a");
        tree.add_child("a", "b", "b", 100.0);
        tree.add_child("a", "c", "c", 100.0);
        const std::vector<Point2> pos{{0, 0}, {50, 0}, {0, 150}};
        track(del_loss(tree, pos), 0.5);
    }
    {  // stress: right-angle chain of two unit-desired edges -> 3 - 2*sqrt(2)
        EvolvingTree tree;
        tree.add_root("a", "a");
        tree.add_child("a", "b", "b", 100.0);
        tree.add_child("b", "c", "c", 100.0);
        const std::vector<Point2> pos{{0, 0}, {100, 0}, {100, 100}};
        track(stress_loss(tree, pos), 3.0 - 2.0 * std::sqrt(2.0));
    }
    {  // stability: one node moves 5 inside a final bounding area of 100
        const std::vector<std::vector<Point2>> frames{{{-3, -4}},
                                                      {{0, 0}, {10, 10}}};
        track(stability_loss(frames), 0.05);
    }
    report(5, worst <= 1e-9,
           "frozen metric values (del 0.5, stress 3-2√2, stability 0.05): "
           "worst deviation " +
               fmt("%.3g", worst) + " (tol 1e-9)");
}

void criterion_6() {
    SplitMix64 rng(123);
    const auto scatter = [&rng](std::size_t n) {
        std::vector<Point2> pts(n);
        for (auto& p : pts) p = {rng.uniform(0, 1000), rng.uniform(0, 1000)};
        return pts;
    };

    bool exact_ok = true;
    double worst_rel = 0;
    {
        const auto pts = scatter(50);
        const std::vector<double> charges(pts.size(), 1.0);
        QuadTree qt(pts, charges);
        std::vector<Point2> bh(pts.size()), exact(pts.size());
        qt.add_repulsion(bh, 0.0, 300.0, Exec::serial);
        add_elliptical_repulsion(pts, 300.0, 1.0, exact, Exec::serial);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double sx = std::max(1.0, std::abs(exact[i].x));
            const double sy = std::max(1.0, std::abs(exact[i].y));
            worst_rel = std::max(worst_rel, std::abs(bh[i].x - exact[i].x) / sx);
            worst_rel = std::max(worst_rel, std::abs(bh[i].y - exact[i].y) / sy);
        }
        exact_ok = worst_rel <= 1e-12;
    }

    // RMS error relative to the RMS force magnitude (field-level ratio, the
    // usual n-body accuracy measure; per-node ratios diverge where exact
    // forces nearly cancel).
    double rms = 0;
    {
        const auto pts = scatter(500);
        const std::vector<double> charges(pts.size(), 1.0);
        QuadTree qt(pts, charges);
        std::vector<Point2> bh(pts.size()), exact(pts.size());
        qt.add_repulsion(bh, 0.9, 300.0, Exec::serial);
        add_elliptical_repulsion(pts, 300.0, 1.0, exact, Exec::serial);
        double err_sq = 0, exact_sq = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            err_sq += (bh[i] - exact[i]).norm_sq();
            exact_sq += exact[i].norm_sq();
        }
        rms = std::sqrt(err_sq / exact_sq);
    }
    report(6, exact_ok && rms < 0.01,
           "Barnes-Hut fidelity: theta=0 worst rel " + fmt("%.3g", worst_rel) +
               " (tol 1e-12, 50 nodes); theta=0.9 RMS rel " + fmt("%.4f%%", rms * 100) +
               " (tol 1%, 500 nodes)");
}

void criterion_7() {
    SplitMix64 rng(2024);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(18));
        const auto events = synthetic_events(n, 1000 + trial);
        EvolvingTree tree;
        for (const auto& e : events) {
            if (e.parent.empty())
                tree.add_root(e.name, e.label);
            else
                tree.add_child(e.parent, e.name, e.label, e.length);
        }
        std::vector<Point2> pos(tree.node_count());
        for (auto& p : pos) p = {rng.uniform(-500, 500), rng.uniform(-500, 500)};

        const double base_del = del_loss(tree, pos);
        const double base_stress = stress_loss(tree, pos);

        // Rigid motion: del and stress unchanged.
        const double ang = rng.uniform(0, 6.283185307179586);
        const Point2 shift{rng.uniform(-1e4, 1e4), rng.uniform(-1e4, 1e4)};
        std::vector<Point2> moved(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i)
            moved[i] = {pos[i].x * std::cos(ang) - pos[i].y * std::sin(ang) + shift.x,
                        pos[i].x * std::sin(ang) + pos[i].y * std::cos(ang) + shift.y};
        worst = std::max(worst, std::abs(del_loss(tree, moved) - base_del));
        worst = std::max(worst, std::abs(stress_loss(tree, moved) - base_stress));

        // Uniform scale: normalized stress unchanged.
        const double c = rng.uniform(0.1, 10.0);
        std::vector<Point2> scaled(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i)
            scaled[i] = {pos[i].x * c, pos[i].y * c};
        worst = std::max(worst, std::abs(stress_loss(tree, scaled) - base_stress));

        // Translation: stability unchanged.
        std::vector<std::vector<Point2>> frames;
        std::vector<Point2> cur;
        for (int k = 0; k < 5; ++k) {
            for (auto& p : cur) {
                p.x += rng.uniform(-3, 3);
                p.y += rng.uniform(-3, 3);
            }
            cur.push_back({rng.uniform(-50, 50), rng.uniform(-50, 50)});
            frames.push_back(cur);
        }
        const double base_stab = stability_loss(frames);
        for (auto& frame : frames)
            for (auto& p : frame) {
                p.x += shift.x;
                p.y += shift.y;
            }
        worst = std::max(worst, std::abs(stability_loss(frames) - base_stab));
    }
    report(7, worst <= 1e-9,
           "invariances (rigid del/stress, scale stress, translation "
           "stability): worst drift " +
               fmt("%.3g", worst) + " over 100 trials (tol 1e-9)");
}

void criterion_8() {
    const auto events = synthetic_events(500, 0);
    LayoutOptions opt;
    opt.algorithm = Algorithm::dynasafe;
    opt.params.seed = 0;
    const auto t0 = std::chrono::steady_clock::now();
    const LayoutResult res = run_layout(events, opt);
    const double secs = seconds_since(t0);
    long long final_crossings = res.crossings_per_step.back();
    const bool ok = secs <= 600.0 && final_crossings == 0;
    std::string note = "500-insertion dynasafe run: " + fmt("%.1f s", secs) +
                       " (target < 300 s, hard limit 600 s), final crossings " +
                       std::to_string(final_crossings);
    if (secs > 300.0 && secs <= 600.0)
        note += " [over target but within hard limit: reported, not failed]";
    report(8, ok, note);
}

void criterion_9() {
    const auto events = synthetic_events(60, 11);
    bool ok = true;
    std::string first_diff;
    for (const Algorithm alg :
         {Algorithm::dynacola, Algorithm::dynasafe, Algorithm::naive}) {
        const auto run_once = [&](Exec exec) {
            LayoutOptions opt;
            opt.algorithm = alg;
            opt.params.seed = 7;
            opt.exec = exec;
            const LayoutResult res = run_layout(events, opt);
            std::ostringstream trace;
            write_trace(trace, res.trace);
            return std::pair<std::string, std::string>{
                trace.str(), format_csv(checkpoint_metrics(events, res.trace, 20, exec))};
        };
#ifdef _OPENMP
        omp_set_num_threads(1);
#endif
        const auto a = run_once(Exec::parallel);
        const auto repeat = run_once(Exec::parallel);
#ifdef _OPENMP
        omp_set_num_threads(4);
#endif
        const auto four = run_once(Exec::parallel);
        const auto serial = run_once(Exec::serial);
        if (a != repeat || a != four || a != serial) {
            ok = false;
            if (first_diff.empty())
                first_diff = std::string(" (first divergence: ") +
                             std::string(to_string(alg)) + ")";
        }
    }
    report(9, ok,
           "determinism: traces and CSVs byte-identical across reruns, worker "
           "counts 1/4, and serial execution, for all three engines" +
               first_diff);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        criterion_1();
        criteria_2_3_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
    } catch (const std::exception& e) {
        std::printf("FAIL harness: unhandled exception: %s\n", e.what());
        return 99;
    }
    std::printf("%s: %d criterion failure(s)%s\n",
                g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures, fmt(" [total %.1f s]", seconds_since(t0)).c_str());
    return g_failures;
}
