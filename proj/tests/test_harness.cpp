#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <set>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mixcascade/harness.hpp"
#include "mixcascade/sweep_config.hpp"
#include "support.hpp"

using namespace mixcascade;

namespace {

std::string csv_of(const std::vector<AggregateRecord>& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

SweepSpec small_spec(const std::string& extra) {
    return load_sweep("nodes = 200\nn_instances = 3\nn_replicates = 4\n" + extra);
}

AggregateRecord record(Rational theta, Rational gamma, std::int64_t n_seeds = 1, double mean = 0.5) {
    AggregateRecord r;
    r.family = "ER";
    r.strategy = "RANDOM";
    r.theta = theta;
    r.gamma = gamma;
    r.n_seeds = n_seeds;
    r.mean_x = mean;
    r.n_runs = 10;
    return r;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config takes the documented defaults") {
    const SweepSpec s = load_sweep("family = ER\n");
    CHECK(s.generator.family == Family::ER);
    CHECK(s.generator.node_count == 1000);
    CHECK(s.generator.target_mean_degree == 4.0);
    CHECK(s.theta_grid.size() == 21);
    CHECK(s.gamma_grid.size() == 21);
    CHECK(s.theta_grid[1] == Rational(1, 20));
    CHECK(s.gamma_grid.back() == Rational(1, 1));
    CHECK(s.n_instances == 100);
    CHECK(s.n_replicates == 1000);
    CHECK(s.strategy == Strategy::RANDOM);
    CHECK(s.resample == Resample::PerReplicate);
    CHECK_FALSE(s.rewire.has_value());
}

TEST_CASE("grids as given, ranges and desk scale") {
    const SweepSpec s = load_sweep(
        "family = SFBA   # growth model\n"
        "theta_grid = 0.1, 0.2, 1/3\n"
        "gamma_grid = 0:0.25:1\n"
        "n_seeds = 1, 5, 50\n"
        "scale = desk\n");
    CHECK(s.theta_grid == std::vector<Rational>{Rational(1, 10), Rational(1, 5), Rational(1, 3)});
    CHECK(s.gamma_grid.size() == 5);
    CHECK(s.gamma_grid[1] == Rational(1, 4));
    CHECK(s.n_seeds_list == std::vector<std::int64_t>{1, 5, 50});
    CHECK(s.n_instances == 20);
    CHECK(s.n_replicates == 50);

    const SweepSpec e = load_sweep("n_instances = 20\nn_replicates = 50\n");
    CHECK(e.n_instances == 20);
    CHECK(e.n_replicates == 50);
    const SweepSpec o = load_sweep("scale = paper\nn_replicates = 7\n");
    CHECK(o.n_instances == 100);
    CHECK(o.n_replicates == 7);
}

TEST_CASE("rewire and alpha keys") {
    const SweepSpec s = load_sweep(
        "family = SFBA\nrewire = disassortative\nrewire_max_attempts = 5000\nrewire_target = none\n");
    REQUIRE(s.rewire.has_value());
    CHECK(s.rewire->mode == RewireMode::Disassortative);
    CHECK(*s.rewire->max_attempts == 5000);
    CHECK_FALSE(s.rewire->target_assortativity.has_value());
    CHECK(s.family_label() == "SFBA_DISASSORT");

    const SweepSpec a = load_sweep("family = SF_ALPHA\nalpha = 1/3, 2/3, 1\n");
    CHECK(a.alpha_grid.size() == 3);
    CHECK(a.family_label() == "SF_ALPHA");
}

TEST_CASE("errors carry line, column and key") {
    auto error_of = [](const std::string& text) -> ConfigError {
        try {
            load_sweep(text);
        } catch (const ConfigError& e) {
            return e;
        }
        FAIL("expected ConfigError");
        return ConfigError("");
    };
    const auto range = error_of("family = ER\ntheta_grid = 0.5, 1.2\n");
    CHECK(range.key() == "theta_grid");
    CHECK(range.line() == 2);
    CHECK(std::string(range.what()).find("theta_grid") != std::string::npos);

    const auto unknown = error_of("family = ER\n  colour = red\n");
    CHECK(unknown.line() == 2);
    CHECK(unknown.column() == 3);
    CHECK(unknown.key() == "colour");

    CHECK(error_of("family = ER\nfamily = EXP\n").line() == 2);
    CHECK(error_of("no equals sign\n").line() == 1);
    CHECK(error_of("nodes = many\n").key() == "nodes");
    CHECK(error_of("family = WS\n").key() == "family");
    CHECK(error_of("rewire_target = 0.3\n").key() == "rewire_target");
    CHECK(error_of("gamma_grid = 0:0:1\n").key() == "gamma_grid");
    CHECK(error_of("n_seeds = 0\n").key() == "n_seeds");
    CHECK(error_of("family = SF_ALPHA\nalpha = 0.2\n").key() == "alpha");
    CHECK(error_of("stagnation_window = 100\nmax_iterations = 10\n").key() == "max_iterations");
    CHECK(error_of("scale = huge\n").key() == "scale");
    CHECK(error_of("theta_grid =\n").key() == "theta_grid");
    CHECK_THROWS_AS(load_sweep_file("/nonexistent/sweep.cfg"), ConfigError);
}

TEST_CASE("key list is complete") {
    const auto& keys = sweep_keys();
    for (const char* k : {"family", "nodes", "mean_degree", "alpha", "rewire", "strategy", "eta", "theta_grid",
                          "gamma_grid", "n_seeds", "scale", "n_instances", "n_replicates", "master_seed", "output",
                          "resample", "workers"})
        CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
}

TEST_CASE("rational list parsing") {
    CHECK(parse_rational_list("0:0.05:1").size() == 21);
    CHECK(parse_rational_list("0.1:0.1:0.9").back() == Rational(9, 10));
    CHECK_THROWS(parse_rational_list("0,,1"));
    CHECK_THROWS(parse_rational_list("0:1"));
}

}  // TEST_SUITE

TEST_SUITE("harness") {

TEST_CASE("zero threshold gives full cascades at every grid point") {
    const auto recs = run_sweep(small_spec("family = ER\ntheta_grid = 0, 0.5, 1\ngamma_grid = 0\n"), 2);
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) {
        CHECK(r.mean_x == 1.0);
        CHECK(r.frac_full == 1.0);
        CHECK(r.n_runs == 12);
        CHECK(r.stderr_x == 0.0);
    }
}

TEST_CASE("unit threshold respects the SS upper bound") {
    const auto recs = run_sweep(load_sweep("family = SFBA\nn_instances = 3\nn_replicates = 10\n"
                                           "theta_grid = 0.5\ngamma_grid = 1\n"),
                                2);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].mean_x <= 0.501);
}

TEST_CASE("records come in lexicographic grid order with unique points") {
    const auto recs = run_sweep(
        small_spec("family = SF_ALPHA\nalpha = 1, 1/3\ntheta_grid = 0.6, 0.2, 0.2\ngamma_grid = 0.5, 0\nn_seeds = 2, 1\n"),
        3);
    CHECK(recs.size() == 2 * 2 * 2 * 2);
    CHECK(recs.front().alpha == Rational(1, 3));
    CHECK(recs.front().theta == Rational(1, 5));
    CHECK(recs.front().gamma == Rational(0, 1));
    CHECK(recs.front().n_seeds == 1);
    CHECK(recs.back().alpha == Rational(1, 1));
    CHECK(recs.back().n_seeds == 2);
    for (const auto& r : recs) {
        CHECK(r.has_alpha);
        CHECK_FALSE(r.has_eta);
        CHECK(r.family == "SF_ALPHA");
    }
}

TEST_CASE("output is identical for any worker count and resample mode is honoured") {
    const std::string cfg = "family = SFBA\nstrategy = tbs_by_degree\ntheta_grid = 0.3, 0.7\ngamma_grid = 0.25, 0.5\n";
    const std::string one = csv_of(run_sweep(small_spec(cfg), 1));
    CHECK(one == csv_of(run_sweep(small_spec(cfg), 4)));
    CHECK(one == csv_of(run_sweep(small_spec(cfg), 7)));
    const std::string fixed = csv_of(run_sweep(small_spec(cfg + "resample = per_instance\n"), 2));
    CHECK(fixed == csv_of(run_sweep(small_spec(cfg + "resample = per_instance\n"), 5)));
    CHECK(fixed != one);
    CHECK(one != csv_of(run_sweep(small_spec(cfg + "master_seed = 2\n"), 1)));
}

TEST_CASE("worker resolution") {
    SweepSpec s = small_spec("family = ER\n");
    CHECK(resolve_workers(s, 3) == 3);
    s.workers = 5;
    CHECK(resolve_workers(s) == 5);
    s.workers.reset();
    setenv("MIXCASCADE_WORKERS", "6", 1);
    CHECK(resolve_workers(s) == 6);
    unsetenv("MIXCASCADE_WORKERS");
    CHECK(resolve_workers(s) >= 1);
}

TEST_CASE("aggregation statistics") {
    const AggregateRecord r = aggregate({{0.2, false, 10}, {0.4, false, 20}, {1.0, true, 30}});
    CHECK(r.n_runs == 3);
    CHECK(r.mean_x == doctest::Approx(0.5333333333));
    // sample sd of {0.2, 0.4, 1.0} is sqrt(0.17333...), divided by sqrt(3)
    CHECK(r.stderr_x == doctest::Approx(std::sqrt(0.52 / 3.0 / 3.0)));
    CHECK(r.frac_full == doctest::Approx(1.0 / 3.0));
    CHECK(r.mean_iters == doctest::Approx(20.0));

    RunAccumulator a, b, all;
    for (int i = 0; i < 10; ++i) {
        const RunOutcome o{i / 10.0, i == 9, static_cast<std::uint64_t>(i)};
        (i < 4 ? a : b).add(o);
        all.add(o);
    }
    a.merge(b);
    CHECK(a.n == all.n);
    CHECK(a.full == all.full);
    CHECK(a.sum_x == doctest::Approx(all.sum_x));
    CHECK(aggregate({{0.5, false, 1}}).stderr_x == 0.0);
}

TEST_CASE("csv export, re-export and import") {
    const auto recs = run_sweep(small_spec("family = EXP\ntheta_grid = 0.5\ngamma_grid = 0.25\n"), 1);
    const std::string text = csv_of(recs);
    CHECK(count_lines(text) == 2);
    CHECK(text.rfind("family,alpha,strategy,eta,theta,gamma,n_seeds,mean_x,stderr_x,frac_full,mean_iters,n_runs\n", 0) ==
          0);
    CHECK(text.find("EXP,NA,RANDOM,NA,0.5,0.25,1,") != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path();
    const auto p1 = (dir / "mixcascade_rt1.csv").string();
    const auto p2 = (dir / "mixcascade_rt2.csv").string();
    export_csv(recs, p1);
    export_csv(import_csv(p1), p2);
    std::ifstream f1(p1), f2(p2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == text);
    CHECK(s1.str() == s2.str());
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);

    try {
        export_csv(recs, "/nonexistent/dir/out.csv");
        FAIL("expected failure");
    } catch (const HarnessError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
    std::istringstream bad("nonsense\n");
    CHECK_THROWS_AS(read_csv(bad), HarnessError);
    CHECK_THROWS_AS(write_csv({}, std::cout), HarnessError);
}

TEST_CASE("heatmap grid has one row per theta and gamma pair") {
    const auto recs = run_sweep(load_sweep("family = ER\nn_replicates = 1\nn_instances = 1\nnodes = 100\n"), 4);
    CHECK(recs.size() == 21 * 21);
    std::ostringstream os;
    write_plot_data(recs, PlotMode::Heatmap, os);
    CHECK(count_lines(os.str()) == 1 + 21 * 21);
}

TEST_CASE("plot data shapes") {
    std::vector<AggregateRecord> five;
    for (int g = 0; g <= 4; ++g)
        for (int t = 0; t <= 2; ++t)
            five.push_back(record(Rational(t, 2), Rational(g, 4)));
    std::ostringstream curves;
    write_plot_data(five, PlotMode::Curves, curves);
    std::istringstream in(curves.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "series,family,alpha,strategy,eta,gamma,n_seeds,theta,mean_x,stderr_x,identity");
    std::set<std::string> ids;
    while (std::getline(in, line))
        ids.insert(line.substr(0, line.find(',')));
    CHECK(ids.size() == 5);

    std::vector<AggregateRecord> seeds;
    for (int n : {1, 5, 10, 20, 50})
        for (int t = 0; t <= 2; ++t)
            seeds.push_back(record(Rational(t, 2), Rational(1, 2), n));
    std::ostringstream sc;
    write_plot_data(seeds, PlotMode::Curves, sc);
    CHECK(count_lines(sc.str()) == 1 + 15);
    CHECK(sc.str().find(",50,1,") != std::string::npos);

    std::ostringstream single;
    write_plot_data({record(Rational(1, 2), Rational(1, 4), 1, 0.75)}, PlotMode::Heatmap, single);
    CHECK(single.str() == "theta,gamma,mean_x\n0.5,0.25,0.750000\n");

    auto gappy = five;
    gappy.pop_back();
    std::ostringstream sink;
    CHECK_THROWS_AS(write_plot_data(gappy, PlotMode::Curves, sink), HarnessError);
    CHECK_THROWS_AS(write_plot_data(gappy, PlotMode::Heatmap, sink), HarnessError);
    CHECK_THROWS_AS(write_plot_data(seeds, PlotMode::Heatmap, sink), HarnessError);
    CHECK(parse_plot_mode("heatmap") == PlotMode::Heatmap);
    CHECK_THROWS(parse_plot_mode("bars"));
}

}  // TEST_SUITE
