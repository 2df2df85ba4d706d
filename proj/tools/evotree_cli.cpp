// Command-line front end: gen | layout | metrics | render.
//
// Exit codes: 0 success, 2 usage/input error, 3 algorithmic failure
// (placement exhausted, or a crossing reported by a guaranteed engine).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "evotree/engine.hpp"
#include "evotree/io.hpp"
#include "evotree/runner.hpp"
#include "evotree/svg.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_algorithm = 3;

void write_file_or_die(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw evotree::ParseError(0, "cannot write: " + path);
    out << content;
    out.flush();
    if (!out) throw evotree::ParseError(0, "cannot write: " + path);
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Deterministic effective-config header for the trace's first line.
std::string config_line(evotree::Algorithm alg, const evotree::EngineParams& p) {
    std::string s = "{\"config\": {\"algo\": \"";
    s += std::string(evotree::to_string(alg));
    s += "\", \"iters\": " + std::to_string(p.n_iters);
    s += ", \"subdiv\": " + std::to_string(p.n_s);
    s += ", \"p\": " + fmt_double(p.p);
    s += ", \"q\": " + std::to_string(p.q);
    s += ", \"samples\": " + std::to_string(p.sample_count);
    s += ", \"k_edge\": " + fmt_double(p.k_edge);
    s += ", \"k_repulse\": " + fmt_double(p.k_repulse);
    s += ", \"k_collide\": " + fmt_double(p.k_collide);
    s += ", \"k_gravity\": " + fmt_double(p.k_gravity);
    s += ", \"k_stress\": " + fmt_double(p.k_stress);
    s += ", \"theta\": " + fmt_double(p.theta);
    s += ", \"aspect\": " + fmt_double(p.ellipse_aspect);
    s += ", \"step_cap\": " + fmt_double(p.step_cap_fraction);
    s += ", \"subdiv_charge\": " + fmt_double(p.subdiv_charge);
    s += ", \"seed\": " + std::to_string(p.seed);
    s += "}}";
    return s;
}

std::uint64_t env_seed_or(std::uint64_t fallback) {
    const char* env = std::getenv("EVOTREE_SEED");
    if (env == nullptr || *env == '\0') return fallback;
    try {
        std::size_t consumed = 0;
        const std::uint64_t v = std::stoull(env, &consumed);
        if (consumed != std::string(env).size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw evotree::ParseError(0, std::string("bad EVOTREE_SEED: ") + env);
    }
}

void set_workers(int workers) {
    if (workers <= 0) return;
#ifdef _OPENMP
    omp_set_num_threads(workers);
#endif
}

struct LayoutArgs {
    std::string algo;
    std::string input;
    std::string trace_path;
    std::string config_path;
    evotree::EngineParams params{};
    bool timing = false;
    int workers = 0;
};

// Config-file values fill in only the settings the command line left at
// their defaults: CLI flags > config file > built-in defaults. Returns
// whether the config file carries a "seed" key (the EVOTREE_SEED fallback
// applies only when neither the CLI nor the config pins the seed).
bool merge_config_file(const CLI::App& cmd, LayoutArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) throw evotree::ParseError(0, "cannot open: " + args.config_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw evotree::ParseError(0, "bad config JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw evotree::ParseError(0, "config must be a JSON object");

    const auto unset = [&cmd](const std::string& flag) {
        return cmd.get_option(flag)->count() == 0;
    };
    evotree::EngineParams& p = args.params;
    bool has_seed = false;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "algo") {
                if (unset("--algo")) args.algo = value.get<std::string>();
            } else if (key == "iters") {
                if (unset("--iters")) p.n_iters = value.get<int>();
            } else if (key == "subdiv") {
                if (unset("--subdiv")) p.n_s = value.get<int>();
            } else if (key == "seed") {
                has_seed = true;
                if (unset("--seed")) p.seed = value.get<std::uint64_t>();
            } else if (key == "p") {
                if (unset("--p")) p.p = value.get<double>();
            } else if (key == "q") {
                if (unset("--q")) p.q = value.get<int>();
            } else if (key == "samples") {
                if (unset("--samples")) p.sample_count = value.get<int>();
            } else if (key == "k_edge") {
                if (unset("--k-edge")) p.k_edge = value.get<double>();
            } else if (key == "k_repulse") {
                if (unset("--k-repulse")) p.k_repulse = value.get<double>();
            } else if (key == "k_collide") {
                if (unset("--k-collide")) p.k_collide = value.get<double>();
            } else if (key == "k_gravity") {
                if (unset("--k-gravity")) p.k_gravity = value.get<double>();
            } else if (key == "k_stress") {
                if (unset("--k-stress")) p.k_stress = value.get<double>();
            } else if (key == "theta") {
                if (unset("--theta")) p.theta = value.get<double>();
            } else if (key == "aspect") {
                if (unset("--aspect")) p.ellipse_aspect = value.get<double>();
            } else if (key == "step_cap") {
                if (unset("--step-cap")) p.step_cap_fraction = value.get<double>();
            } else if (key == "subdiv_charge") {
                if (unset("--subdiv-charge")) p.subdiv_charge = value.get<double>();
            } else if (key == "timing") {
                if (unset("--timing")) args.timing = value.get<bool>();
            } else if (key == "workers") {
                if (unset("--workers")) args.workers = value.get<int>();
            } else {
                throw evotree::ParseError(0, "unknown config key: " + key);
            }
        } catch (const evotree::ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw evotree::ParseError(0, "bad config value for key: " + key);
        }
    }
    return has_seed;
}

int run_gen(int nodes, int max_degree, double length, std::uint64_t seed,
            const std::string& out) {
    write_file_or_die(out, evotree::generate_synthetic(nodes, max_degree, length, seed));
    return exit_ok;
}

int run_layout(const CLI::App& cmd, LayoutArgs& args, bool seed_given) {
    bool config_has_seed = false;
    if (!args.config_path.empty()) config_has_seed = merge_config_file(cmd, args);
    if (!seed_given && !config_has_seed)
        args.params.seed = env_seed_or(args.params.seed);
    set_workers(args.workers);

    evotree::LayoutOptions options;
    options.algorithm = evotree::algorithm_from_string(args.algo);
    options.params = args.params;
    evotree::validate(options.params);
    options.timing = args.timing;
    options.config_json = config_line(options.algorithm, options.params);

    const std::vector<evotree::Event> events = evotree::parse_events_file(args.input);
    const evotree::LayoutResult result = evotree::run_layout(events, options);

    std::ostringstream trace_text;
    evotree::write_trace(trace_text, result.trace);
    write_file_or_die(args.trace_path, trace_text.str());

    bool gate_tripped = false;
    for (std::size_t t = 0; t < result.crossings_per_step.size(); ++t) {
        std::cerr << "step=" << (t + 1) << " crossings=" << result.crossings_per_step[t]
                  << "\n";
        if (result.crossings_per_step[t] > 0) gate_tripped = true;
    }
    if (gate_tripped && options.algorithm != evotree::Algorithm::naive) {
        std::cerr << "error: crossing reported by a crossing-free engine\n";
        return exit_algorithm;
    }
    return exit_ok;
}

int run_metrics(const std::string& trace_path, const std::string& events_path, int every,
                const std::string& out, int workers) {
    set_workers(workers);
    const std::vector<evotree::Event> events = evotree::parse_events_file(events_path);
    const evotree::Trace trace = evotree::read_trace_file(trace_path);
    const std::vector<evotree::MetricsReport> rows =
        evotree::checkpoint_metrics(events, trace, every);
    const std::string csv = evotree::format_csv(rows);
    if (out.empty())
        std::cout << csv;
    else
        write_file_or_die(out, csv);
    return exit_ok;
}

int run_render(const std::string& trace_path, const std::string& events_path,
               const std::string& out_dir, bool labels) {
    const std::vector<evotree::Event> events = evotree::parse_events_file(events_path);
    const evotree::Trace trace = evotree::read_trace_file(trace_path);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw evotree::ParseError(0, "cannot create directory: " + out_dir);
    evotree::TraceReplayer replayer(events);
    for (const evotree::TraceFrame& frame : trace.frames) {
        replayer.apply(frame);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.svg", frame.t + 1);
        write_file_or_die(
            (std::filesystem::path(out_dir) / name).string(),
            evotree::render_svg(replayer.tree(), replayer.positions(), {}, labels));
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossing-free force-directed layout for evolving trees"};
    app.require_subcommand(1);

    // gen
    int gen_nodes = 0;
    int gen_max_degree = 5;
    double gen_length = 100.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic event file");
    gen->add_option("--nodes", gen_nodes, "Number of nodes")->required();
    gen->add_option("--max-degree", gen_max_degree, "Maximum node degree")->capture_default_str();
    gen->add_option("--length", gen_length, "Uniform desired edge length")->capture_default_str();
    auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output event file")->required();

    // layout
    LayoutArgs layout_args;
    CLI::App* layout =
        app.add_subcommand("layout", "Lay out an event file into a trace");
    layout->add_option("--algo", layout_args.algo, "dynacola | dynasafe | naive")
        ->required();
    layout->add_option("--input", layout_args.input, "Input event file")->required();
    layout->add_option("--trace", layout_args.trace_path, "Output trace file")
        ->required();
    layout->add_option("--config", layout_args.config_path,
                       "JSON config file (CLI flags win)");
    layout->add_option("--iters", layout_args.params.n_iters,
                       "Relaxation rounds per insertion")->capture_default_str();
    layout->add_option("--subdiv", layout_args.params.n_s,
                       "Subdivision nodes per edge")->capture_default_str();
    auto* layout_seed_opt =
        layout->add_option("--seed", layout_args.params.seed, "RNG seed")->capture_default_str();
    layout->add_option("--p", layout_args.params.p, "Back-off factor")->capture_default_str();
    layout->add_option("--q", layout_args.params.q, "Max back-off retries")->capture_default_str();
    layout->add_option("--samples", layout_args.params.sample_count,
                       "Placement angles per round")->capture_default_str();
    layout->add_option("--k-edge", layout_args.params.k_edge, "Edge spring strength")->capture_default_str();
    layout->add_option("--k-repulse", layout_args.params.k_repulse,
                       "Repulsion strength")->capture_default_str();
    layout->add_option("--k-collide", layout_args.params.k_collide,
                       "Collision strength")->capture_default_str();
    layout->add_option("--k-gravity", layout_args.params.k_gravity,
                       "Gravity strength")->capture_default_str();
    layout->add_option("--k-stress", layout_args.params.k_stress, "Stress strength")->capture_default_str();
    layout->add_option("--theta", layout_args.params.theta,
                       "Barnes-Hut acceptance threshold")->capture_default_str();
    layout->add_option("--aspect", layout_args.params.ellipse_aspect,
                       "Elliptical repulsion x-stretch")->capture_default_str();
    layout->add_option("--step-cap", layout_args.params.step_cap_fraction,
                       "Per-round step cap fraction")->capture_default_str();
    layout->add_option("--subdiv-charge", layout_args.params.subdiv_charge,
                       "Repulsion charge of subdivision nodes")->capture_default_str();
    layout->add_flag("--timing", layout_args.timing,
                     "Record per-insertion wall time in the trace");
    layout->add_option("--workers", layout_args.workers,
                       "Worker thread count (0 = library default)")->capture_default_str();

    // metrics
    std::string metrics_trace;
    std::string metrics_events;
    int metrics_every = 100;
    std::string metrics_out;
    int metrics_workers = 0;
    CLI::App* metrics =
        app.add_subcommand("metrics", "Evaluate a trace at checkpoints");
    metrics->add_option("--trace", metrics_trace, "Input trace file")->required();
    metrics->add_option("--events", metrics_events, "Matching event file")->required();
    metrics->add_option("--every", metrics_every, "Checkpoint interval")->capture_default_str();
    metrics->add_option("--out", metrics_out, "Output CSV (stdout when omitted)");
    metrics->add_option("--workers", metrics_workers,
                        "Worker thread count (0 = library default)")->capture_default_str();

    // render
    std::string render_trace;
    std::string render_events;
    std::string render_out;
    bool render_labels = false;
    CLI::App* render = app.add_subcommand("render", "Render trace frames to SVG");
    render->add_option("--trace", render_trace, "Input trace file")->required();
    render->add_option("--events", render_events, "Matching event file")->required();
    render->add_option("--out", render_out, "Output directory")->required();
    render->add_flag("--labels", render_labels, "Draw node labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (gen->parsed()) {
            if (gen_seed_opt->count() == 0) gen_seed = env_seed_or(gen_seed);
            return run_gen(gen_nodes, gen_max_degree, gen_length, gen_seed, gen_out);
        }
        if (layout->parsed())
            return run_layout(*layout, layout_args, layout_seed_opt->count() > 0);
        if (metrics->parsed())
            return run_metrics(metrics_trace, metrics_events, metrics_every,
                               metrics_out, metrics_workers);
        if (render->parsed())
            return run_render(render_trace, render_events, render_out, render_labels);
    } catch (const evotree::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_algorithm;
    }
    return exit_input;
}
