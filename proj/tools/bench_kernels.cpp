// Kernel benchmark: serial reference vs parallel implementation, plus
// accelerated vs exact variants (Barnes-Hut vs pairwise repulsion, uniform
// grid vs brute-force collision). Also reports the max absolute deviation
// between serial and parallel outputs, which must be exactly zero.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evotree/crossings.hpp"
#include "evotree/forces.hpp"
#include "evotree/io.hpp"
#include "evotree/quadtree.hpp"
#include "evotree/rng.hpp"
#include "evotree/tree.hpp"

using namespace evotree;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best,
                        std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

double max_abs_diff(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i].x - b[i].x));
        m = std::max(m, std::abs(a[i].y - b[i].y));
    }
    return m;
}

void row(const char* name, double serial_ms, double parallel_ms, double diff) {
    std::printf("%-28s %10.3f %12.3f %9.2fx %12.3g\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
    int n = 2000;
    int reps = 5;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--n")
            n = std::atoi(argv[i + 1]);
        else if (flag == "--reps")
            reps = std::atoi(argv[i + 1]);
        else {
            std::fprintf(stderr, "usage: %s [--n N] [--reps R]\n", argv[0]);
            return 2;
        }
    }
    if (n < 10 || reps < 1) {
        std::fprintf(stderr, "usage: %s [--n N>=10] [--reps R>=1]\n", argv[0]);
        return 2;
    }

#ifdef _OPENMP
    std::printf("n=%d reps=%d threads=%d\n\n", n, reps, omp_get_max_threads());
#else
    std::printf("n=%d reps=%d threads=1 (OpenMP off)\n\n", n, reps);
#endif

    // Synthetic tree plus a scattered layout (roughly the density the
    // engines produce: ~half the desired edge length between neighbors).
    std::istringstream events_text(generate_synthetic(n, 5, 100.0, 42));
    const std::vector<Event> events = parse_events(events_text);
    EvolvingTree tree;
    for (const Event& ev : events) {
        if (ev.parent.empty())
            tree.add_root(ev.name, ev.label);
        else
            tree.add_child(ev.parent, ev.name, ev.label, ev.length);
    }
    SplitMix64 rng(7);
    const double side = 50.0 * std::sqrt(static_cast<double>(n));
    std::vector<Point2> pos(tree.node_count());
    for (Point2& p : pos) p = {rng.uniform(-side, side), rng.uniform(-side, side)};
    std::vector<double> charges(tree.node_count(), 1.0);

    std::printf("%-28s %10s %12s %9s %12s\n", "kernel", "serial ms", "parallel ms",
                "speedup", "max |diff|");

    std::vector<Point2> a(pos.size()), b(pos.size());
    const auto zero = [](std::vector<Point2>& v) {
        std::fill(v.begin(), v.end(), Point2{});
    };

    {
        QuadTree qt(pos, charges);
        const double ts = time_ms([&] { zero(a); qt.add_repulsion(a, 0.9, 300.0, Exec::serial); }, reps);
        const double tp = time_ms([&] { zero(b); qt.add_repulsion(b, 0.9, 300.0, Exec::parallel); }, reps);
        row("repulsion barnes-hut", ts, tp, max_abs_diff(a, b));
        const double tx = time_ms([&] { a = pairwise_repulsion(pos, charges, 300.0); }, reps);
        std::printf("%-28s %10.3f %12s %9s %12s\n", "repulsion exact pairwise", tx,
                    "-", "-", "-");
    }
    {
        const double ts = time_ms([&] { zero(a); add_edge_forces(tree, pos, 0.1, a, Exec::serial); }, reps);
        const double tp = time_ms([&] { zero(b); add_edge_forces(tree, pos, 0.1, b, Exec::parallel); }, reps);
        row("edge springs", ts, tp, max_abs_diff(a, b));
    }
    {
        const double ts = time_ms([&] { zero(a); add_dynasafe_pair_forces(tree, pos, 300.0, 3.0, 0.05, a, Exec::serial); }, reps);
        const double tp = time_ms([&] { zero(b); add_dynasafe_pair_forces(tree, pos, 300.0, 3.0, 0.05, b, Exec::parallel); }, reps);
        row("fused repulsion+stress", ts, tp, max_abs_diff(a, b));
    }
    {
        const std::vector<double> radii = collision_radii(tree, pos);
        const double ts = time_ms([&] { zero(a); add_collision_forces(tree, pos, radii, 0.3, a, Exec::serial); }, reps);
        const double tp = time_ms([&] { zero(b); add_collision_forces(tree, pos, radii, 0.3, b, Exec::parallel); }, reps);
        row("collision grid", ts, tp, max_abs_diff(a, b));
        const double tx = time_ms([&] { a = collision_forces_brute(tree, pos, radii, 0.3); }, reps);
        std::printf("%-28s %10.3f %12s %9s %12.3g\n", "collision exact brute", tx, "-",
                    "-", max_abs_diff(a, b));
    }
    {
        long long cs = 0, cp = 0;
        const double ts = time_ms([&] { cs = count_crossings(tree.segments(), pos, Exec::serial); }, reps);
        const double tp = time_ms([&] { cp = count_crossings(tree.segments(), pos, Exec::parallel); }, reps);
        row("crossing count", ts, tp, static_cast<double>(std::abs(cs - cp)));
        std::printf("  (crossings found: %lld)\n", cs);
    }
    return 0;
}
