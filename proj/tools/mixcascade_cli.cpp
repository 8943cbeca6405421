// mixcascade: generate networks, run cascade sweeps, evaluate percolation
// predictors and export plot data.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mixcascade/analytics.hpp"
#include "mixcascade/cascade.hpp"
#include "mixcascade/generators.hpp"
#include "mixcascade/graph.hpp"
#include "mixcascade/harness.hpp"
#include "mixcascade/placement.hpp"
#include "mixcascade/sweep_config.hpp"

using namespace mixcascade;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Argument problems map to exit code 1, everything else to 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_fraction_arg(const std::string& text, const std::string& name) {
    try {
        return Rational::parse(text);
    } catch (const std::exception& e) {
        throw UsageError(name + ": " + e.what());
    }
}

int cmd_generate(const std::string& family, NodeId nodes, double mean_degree, const std::string& alpha,
                 std::uint64_t seed, int count, const std::string& rewire, std::int64_t rewire_attempts,
                 double rewire_target, const std::string& out_dir) {
    GeneratorSpec spec;
    std::optional<RewireSpec> rw;
    try {
        spec.family = parse_family(family);
        spec.node_count = nodes;
        spec.target_mean_degree = mean_degree;
        spec.alpha = parse_fraction_arg(alpha, "--alpha").to_double();
        spec.validate();
        if (rewire != "none") {
            rw = RewireSpec{};
            if (rewire == "assortative")
                rw->mode = RewireMode::Assortative;
            else if (rewire == "disassortative")
                rw->mode = RewireMode::Disassortative;
            else
                throw UsageError("--rewire must be none, assortative or disassortative");
            if (rewire_attempts > 0)
                rw->max_attempts = rewire_attempts;
            rw->target_assortativity = rewire_target;
            rw->validate();
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        spec.rng_seed = seed + static_cast<std::uint64_t>(i);
        Network net = generate(spec);
        std::string name = network_file_name(spec);
        if (rw) {
            Rng rng(derive_seed(spec.rng_seed, {2}));
            auto res = rewire_assortativity(net, *rw, rng);
            net = std::move(res.network);
            name.insert(name.find('_'), rw->mode == RewireMode::Assortative ? "_ASSORT" : "_DISASSORT");
            if (!res.reached_target)
                std::cerr << "warning: " << name << ": target assortativity not reached (r = "
                          << (res.assortativity ? format_number(*res.assortativity) : "undefined") << ")\n";
        }
        const auto path = (std::filesystem::path(out_dir) / name).string();
        save_edge_list(net, path);
        const auto st = degree_stats(net);
        std::cout << path << "\tmean_k=" << format_number(st.mean_degree) << "\tvar_k="
                  << format_number(st.degree_variance) << "\tr="
                  << (st.assortativity ? format_number(*st.assortativity) : "undefined") << '\n';
    }
    return 0;
}

int cmd_run(const std::string& config_path, int workers, const std::string& output) {
    SweepSpec spec = load_sweep_file(config_path);
    if (!output.empty())
        spec.output_path = output;
    const auto records = run_sweep(spec, workers);
    export_csv(records, spec.output_path);
    std::cout << "wrote " << records.size() << " records to " << spec.output_path << '\n';
    return 0;
}

int cmd_predict(const std::string& network_path, const std::string& assignment_path, const std::string& gamma,
                double eta, double exponent) {
    const Network net = load_edge_list(network_path);
    std::ifstream in(assignment_path);
    if (!in)
        throw std::runtime_error("cannot open '" + assignment_path + "'");
    const auto assignment = read_assignment(in, net.node_count());
    const auto stats = degree_stats(net);
    const auto profile = DegreeClassProfile::from_assignment(net, assignment);
    const double ratio = molloy_reed_ratio(profile);

    std::cout << "nodes=" << net.node_count() << '\n';
    std::cout << "mean_degree=" << format_number(stats.mean_degree) << '\n';
    std::cout << "theta=" << format_number(assignment.theta.to_double()) << '\n';
    std::cout << "molloy_reed_ratio=" << format_number(ratio) << '\n';
    std::cout << "ss_percolates=" << (ratio > 1.0 ? "true" : "false") << '\n';
    std::cout << "er_threshold=" << format_number(er_percolation_threshold(stats.mean_degree)) << '\n';
    if (!gamma.empty()) {
        const Rational g = parse_fraction_arg(gamma, "--gamma");
        std::cout << "mean_field_tbs=" << (mean_field_tbs_condition(assignment.theta, g) ? "true" : "false") << '\n';
    }
    if (exponent <= 0.0) {
        try {
            exponent = fit_power_law_exponent(net);
            std::cout << "fitted_exponent=" << format_number(exponent) << '\n';
        } catch (const FitError& e) {
            std::cout << "fitted_exponent=undefined\n";
        }
    }
    if (exponent > 0.0 && eta >= 0.0)
        std::cout << "eta_regularization=" << (eta_regularization_condition(eta, exponent) ? "true" : "false")
                  << '\n';
    return 0;
}

int cmd_simulate(const std::string& network_path, const std::string& assignment_path, const std::string& gamma,
                 std::int64_t n_seeds, std::uint64_t seed, const std::string& trace_path) {
    const Network net = load_edge_list(network_path);
    std::ifstream in(assignment_path);
    if (!in)
        throw std::runtime_error("cannot open '" + assignment_path + "'");
    const auto assignment = read_assignment(in, net.node_count());
    CascadeConfig cfg;
    cfg.gamma_threshold = parse_fraction_arg(gamma, "--gamma");
    cfg.n_seeds = n_seeds;
    cfg.rng_seed = seed;
    Rng seed_rng(derive_seed(seed, {0}));
    const auto seeds = select_seeds(net, n_seeds, seed_rng);
    Rng rng(derive_seed(seed, {1}));

    CascadeResult res;
    if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace)
            throw std::runtime_error("cannot open '" + trace_path + "' for writing");
        StepwiseOptions opts;
        opts.trace = &trace;
        res = run_cascade_stepwise(net, assignment, cfg, seeds, rng, opts);
    } else {
        res = run_cascade(net, assignment, cfg, seeds, rng);
    }
    std::cout << "final_active=" << res.final_active << '\n'
              << "cascade_size=" << format_number(res.cascade_size) << '\n'
              << "termination=" << to_string(res.termination) << '\n'
              << "iterations=" << res.iterations_used << '\n';
    return 0;
}

int cmd_plotdata(const std::string& input, const std::string& mode, const std::string& out) {
    PlotMode m;
    try {
        m = parse_plot_mode(mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    emit_plot_data(import_csv(input), m, out);
    std::cout << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for mixed simple/threshold contagion on networks"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Generate network instances as edge-list files");
    std::string family = "ER", alpha = "1", rewire = "none", out_dir = ".";
    NodeId nodes = 1000;
    double mean_degree = 4.0, rewire_target = 0.3;
    std::uint64_t seed = 1;
    int count = 1;
    std::int64_t rewire_attempts = 0;
    gen->add_option("--family", family, "ER, EXP, SFBA or SF_ALPHA")->capture_default_str();
    gen->add_option("--nodes", nodes, "Number of nodes Z")->capture_default_str();
    gen->add_option("--mean-degree", mean_degree, "Target mean degree")->capture_default_str();
    gen->add_option("--alpha", alpha, "Age-rank exponent for SF_ALPHA, e.g. 1/3")->capture_default_str();
    gen->add_option("--seed", seed, "RNG seed of the first instance")->capture_default_str();
    gen->add_option("--count", count, "Number of instances (seeds seed, seed+1, ...)")->capture_default_str();
    gen->add_option("--rewire", rewire, "none, assortative or disassortative")->capture_default_str();
    gen->add_option("--rewire-attempts", rewire_attempts, "Rewiring attempt budget (default 10|E|)");
    gen->add_option("--rewire-target", rewire_target, "Target |r|")->capture_default_str();
    gen->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

    auto* run = app.add_subcommand("run", "Run a parameter sweep from a config file");
    std::string config_path, output;
    int workers = 0;
    run->add_option("config", config_path, "Sweep config file")->required();
    run->add_option("--workers", workers, "Worker threads (overrides MIXCASCADE_WORKERS)");
    run->add_option("--output", output, "CSV path (overrides the config's output key)");

    auto* predict = app.add_subcommand("predict", "Evaluate percolation predictors for a network and assignment");
    std::string network_path, assignment_path, gamma;
    double eta = -1.0, exponent = 0.0;
    predict->add_option("--network", network_path, "Edge-list file")->required();
    predict->add_option("--assignment", assignment_path, "Profile assignment file")->required();
    predict->add_option("--gamma", gamma, "TBS threshold for the mean-field condition");
    predict->add_option("--eta", eta, "Placement exponent for the regularisation condition");
    predict->add_option("--exponent", exponent, "Degree exponent (fitted from the network if omitted)");

    auto* simulate = app.add_subcommand("simulate", "Run a single cascade, optionally writing a trace");
    std::int64_t n_seeds = 1;
    std::string trace_path;
    simulate->add_option("--network", network_path, "Edge-list file")->required();
    simulate->add_option("--assignment", assignment_path, "Profile assignment file")->required();
    simulate->add_option("--gamma", gamma, "TBS threshold")->required();
    simulate->add_option("--seeds", n_seeds, "Number of seeds")->capture_default_str();
    simulate->add_option("--seed", seed, "RNG seed")->capture_default_str();
    simulate->add_option("--trace", trace_path, "Write a per-iteration trace to this file");

    auto* plot = app.add_subcommand("plotdata", "Turn sweep CSV into curve or heatmap data");
    std::string input, mode = "curves", plot_out;
    plot->add_option("--input", input, "CSV from 'run'")->required();
    plot->add_option("--mode", mode, "curves or heatmap")->capture_default_str();
    plot->add_option("--out", plot_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*gen)
            return cmd_generate(family, nodes, mean_degree, alpha, seed, count, rewire, rewire_attempts,
                                rewire_target, out_dir);
        if (*run)
            return cmd_run(config_path, workers, output);
        if (*predict)
            return cmd_predict(network_path, assignment_path, gamma, eta, exponent);
        if (*simulate)
            return cmd_simulate(network_path, assignment_path, gamma, n_seeds, seed, trace_path);
        if (*plot)
            return cmd_plotdata(input, mode, plot_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
