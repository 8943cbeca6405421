#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixcascade/rational.hpp"
#include "mixcascade/sweep_config.hpp"

namespace mixcascade {

struct AggregateRecord {
    std::string family;  // SweepSpec::family_label()
    Rational alpha;
    bool has_alpha = false;
    std::string strategy;
    double eta = 0.0;
    bool has_eta = false;
    Rational theta;
    Rational gamma;
    std::int64_t n_seeds = 1;
    double mean_x = 0.0;
    double stderr_x = 0.0;
    double frac_full = 0.0;
    double mean_iters = 0.0;
    std::int64_t n_runs = 0;
};

class HarnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Worker count: explicit argument, else spec.workers, else the
// MIXCASCADE_WORKERS environment variable, else hardware concurrency.
int resolve_workers(const SweepSpec& spec, int override_workers = 0);

// One record per (alpha, theta, gamma, n_seeds), in lexicographic order.
// Output does not depend on the worker count.
std::vector<AggregateRecord> run_sweep(const SweepSpec& spec, int workers = 0);

// Per-run outcomes for one grid point of one instance, in replicate order.
// Exposed for tests of the aggregation rule.
struct RunOutcome {
    double x = 0.0;
    bool full = false;
    std::uint64_t iterations = 0;
};

// Order-fixed running sums; merging in a fixed order keeps results
// bit-identical however work was scheduled.
struct RunAccumulator {
    std::int64_t n = 0;
    std::int64_t full = 0;
    double sum_x = 0.0;
    double sum_xx = 0.0;
    double sum_iters = 0.0;

    void add(const RunOutcome& r);
    void merge(const RunAccumulator& o);
    // Fills the statistics fields of `rec`.
    void finish(AggregateRecord& rec) const;
};

AggregateRecord aggregate(const std::vector<RunOutcome>& runs);

void write_csv(const std::vector<AggregateRecord>& records, std::ostream& out);
void export_csv(const std::vector<AggregateRecord>& records, const std::string& path);
std::vector<AggregateRecord> read_csv(std::istream& in);
std::vector<AggregateRecord> import_csv(const std::string& path);

enum class PlotMode { Curves, Heatmap };
PlotMode parse_plot_mode(const std::string& text);

// curves: one series per (family, alpha, strategy, eta, gamma, n_seeds) with
// (theta, mean, stderr, identity) rows. heatmap: (theta, gamma, mean) triples
// for a single (family, alpha, strategy, eta, n_seeds) block.
void write_plot_data(const std::vector<AggregateRecord>& records, PlotMode mode, std::ostream& out);
void emit_plot_data(const std::vector<AggregateRecord>& records, PlotMode mode, const std::string& path);

std::string format_number(double v);

}  // namespace mixcascade
