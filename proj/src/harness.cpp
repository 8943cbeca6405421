#include "mixcascade/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "mixcascade/cascade.hpp"
#include "mixcascade/generators.hpp"
#include "mixcascade/placement.hpp"
#include "mixcascade/rng.hpp"

namespace mixcascade {

namespace {

// Substream tags.
enum : std::uint64_t { kNetwork = 1, kRewire = 2, kPlacement = 3, kSeeds = 4, kDynamics = 5 };

std::string format_rational(const Rational& r) {
    std::int64_t d = r.den();
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    if (d == 1 && r.den() <= 1'000'000)
        return r.to_string();
    return format_number(r.to_double());
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void RunAccumulator::add(const RunOutcome& r) {
    ++n;
    full += r.full;
    sum_x += r.x;
    sum_xx += r.x * r.x;
    sum_iters += static_cast<double>(r.iterations);
}

void RunAccumulator::merge(const RunAccumulator& o) {
    n += o.n;
    full += o.full;
    sum_x += o.sum_x;
    sum_xx += o.sum_xx;
    sum_iters += o.sum_iters;
}

void RunAccumulator::finish(AggregateRecord& rec) const {
    rec.n_runs = n;
    if (n == 0)
        return;
    const double dn = static_cast<double>(n);
    rec.mean_x = sum_x / dn;
    rec.frac_full = static_cast<double>(full) / dn;
    rec.mean_iters = sum_iters / dn;
    if (n > 1) {
        const double var = std::max(0.0, (sum_xx - dn * rec.mean_x * rec.mean_x) / (dn - 1.0));
        rec.stderr_x = std::sqrt(var / dn);
    } else {
        rec.stderr_x = 0.0;
    }
}

AggregateRecord aggregate(const std::vector<RunOutcome>& runs) {
    RunAccumulator acc;
    for (const auto& r : runs)
        acc.add(r);
    AggregateRecord rec;
    acc.finish(rec);
    return rec;
}

int resolve_workers(const SweepSpec& spec, int override_workers) {
    if (override_workers > 0)
        return override_workers;
    if (spec.workers)
        return *spec.workers;
    if (const char* env = std::getenv("MIXCASCADE_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<AggregateRecord> run_sweep(const SweepSpec& spec, int workers) {
    spec.validate();
    workers = resolve_workers(spec, workers);

    const bool uses_alpha = spec.generator.family == Family::SF_ALPHA;
    auto sorted = [](auto v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const std::vector<Rational> alphas =
        uses_alpha ? sorted(spec.alpha_grid) : std::vector<Rational>{Rational::from_int(0)};
    const auto thetas = sorted(spec.theta_grid);
    const auto gammas = sorted(spec.gamma_grid);
    const auto seeds_list = sorted(spec.n_seeds_list);
    const std::size_t points = thetas.size() * gammas.size() * seeds_list.size();
    auto point_index = [&](std::size_t t, std::size_t g, std::size_t s) {
        return (t * gammas.size() + g) * seeds_list.size() + s;
    };

    const auto n_inst = static_cast<std::size_t>(spec.n_instances);
    const std::size_t n_tasks = alphas.size() * n_inst;
    std::vector<std::vector<RunAccumulator>> partial(n_tasks);
    std::vector<std::exception_ptr> failures(n_tasks);

    auto run_task = [&](std::size_t task) {
        const std::size_t a = task / n_inst;
        const std::size_t inst = task % n_inst;
        const std::uint64_t m = spec.master_seed;
        try {
            GeneratorSpec gen = spec.generator;
            gen.alpha = alphas[a].to_double();
            gen.rng_seed = derive_seed(m, {kNetwork, a, inst});
            Network net = generate(gen);
            if (spec.rewire) {
                Rng rr(derive_seed(m, {kRewire, a, inst}));
                net = rewire_assortativity(net, *spec.rewire, rr).network;
            }

            auto& acc = partial[task];
            acc.assign(points, RunAccumulator{});
            CascadeConfig cfg;
            cfg.max_iterations = spec.max_iterations;
            cfg.stagnation_window = spec.stagnation_window;
            const bool per_rep = spec.resample == Resample::PerReplicate;

            for (std::size_t t = 0; t < thetas.size(); ++t) {
                for (std::int64_t r = 0; r < spec.n_replicates; ++r) {
                    const auto rep = static_cast<std::uint64_t>(r);
                    Rng placement_rng(per_rep ? derive_seed(m, {kPlacement, a, inst, t, rep})
                                              : derive_seed(m, {kPlacement, a, inst, t}));
                    const auto profiles = assign(net, spec.strategy, thetas[t], spec.eta, placement_rng);
                    for (std::size_t s = 0; s < seeds_list.size(); ++s) {
                        Rng seed_rng(per_rep ? derive_seed(m, {kSeeds, a, inst, s, rep})
                                             : derive_seed(m, {kSeeds, a, inst, s}));
                        const auto seeds = select_seeds(net, seeds_list[s], seed_rng);
                        for (std::size_t g = 0; g < gammas.size(); ++g) {
                            cfg.gamma_threshold = gammas[g];
                            cfg.n_seeds = seeds_list[s];
                            Rng dyn(derive_seed(m, {kDynamics, a, inst, t, g, s, rep}));
                            const auto res = run_cascade(net, profiles, cfg, seeds, dyn);
                            acc[point_index(t, g, s)].add(
                                {res.cascade_size, res.termination == Termination::FULL_ACTIVATION,
                                 res.iterations_used});
                        }
                    }
                }
            }
        } catch (const std::exception& e) {
            failures[task] = std::make_exception_ptr(
                HarnessError("instance " + std::to_string(inst) +
                             (uses_alpha ? " (alpha " + alphas[a].to_string() + ")" : std::string{}) + ": " + e.what()));
        }
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task; (task = next.fetch_add(1)) < n_tasks;)
            run_task(task);
    };
    const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n_tasks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    std::vector<AggregateRecord> records;
    records.reserve(alphas.size() * points);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (std::size_t t = 0; t < thetas.size(); ++t) {
            for (std::size_t g = 0; g < gammas.size(); ++g) {
                for (std::size_t s = 0; s < seeds_list.size(); ++s) {
                    RunAccumulator total;
                    for (std::size_t inst = 0; inst < n_inst; ++inst)
                        total.merge(partial[a * n_inst + inst][point_index(t, g, s)]);
                    AggregateRecord rec;
                    rec.family = spec.family_label();
                    rec.alpha = alphas[a];
                    rec.has_alpha = uses_alpha;
                    rec.strategy = to_string(spec.strategy);
                    rec.eta = spec.eta;
                    rec.has_eta = spec.strategy == Strategy::POWER_LAW;
                    rec.theta = thetas[t];
                    rec.gamma = gammas[g];
                    rec.n_seeds = seeds_list[s];
                    total.finish(rec);
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    return records;
}

static const char* const kCsvHeader =
    "family,alpha,strategy,eta,theta,gamma,n_seeds,mean_x,stderr_x,frac_full,mean_iters,n_runs";

void write_csv(const std::vector<AggregateRecord>& records, std::ostream& out) {
    if (records.empty())
        throw HarnessError("no records to export");
    auto key = [](const AggregateRecord& r) {
        return std::make_tuple(r.family, r.alpha, r.strategy, r.eta, r.theta, r.gamma, r.n_seeds);
    };
    std::vector<const AggregateRecord*> rows;
    for (const auto& r : records)
        rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [&](auto* a, auto* b) { return key(*a) < key(*b); });

    out << kCsvHeader << '\n';
    for (const auto* r : rows) {
        out << r->family << ',' << (r->has_alpha ? format_rational(r->alpha) : "NA") << ',' << r->strategy << ','
            << (r->has_eta ? format_number(r->eta) : "NA") << ',' << format_rational(r->theta) << ','
            << format_rational(r->gamma) << ',' << r->n_seeds << ',' << format_number(r->mean_x) << ','
            << format_number(r->stderr_x) << ',' << format_number(r->frac_full) << ','
            << format_number(r->mean_iters) << ',' << r->n_runs << '\n';
    }
}

void export_csv(const std::vector<AggregateRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw HarnessError("cannot open '" + path + "' for writing");
    write_csv(records, out);
    out.flush();
    if (!out)
        throw HarnessError("write failed for '" + path + "'");
}

std::vector<AggregateRecord> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw HarnessError("unexpected CSV header");
    std::vector<AggregateRecord> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            f.push_back(cell);
        if (f.size() != 12)
            throw HarnessError("CSV line " + std::to_string(line_no) + ": expected 12 fields");
        try {
            AggregateRecord r;
            r.family = f[0];
            r.has_alpha = f[1] != "NA";
            if (r.has_alpha)
                r.alpha = Rational::parse(f[1]);
            r.strategy = f[2];
            r.has_eta = f[3] != "NA";
            if (r.has_eta)
                r.eta = std::stod(f[3]);
            r.theta = Rational::parse(f[4]);
            r.gamma = Rational::parse(f[5]);
            r.n_seeds = std::stoll(f[6]);
            r.mean_x = std::stod(f[7]);
            r.stderr_x = std::stod(f[8]);
            r.frac_full = std::stod(f[9]);
            r.mean_iters = std::stod(f[10]);
            r.n_runs = std::stoll(f[11]);
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw HarnessError("CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<AggregateRecord> import_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw HarnessError("cannot open '" + path + "'");
    return read_csv(in);
}

PlotMode parse_plot_mode(const std::string& text) {
    if (text == "curves")
        return PlotMode::Curves;
    if (text == "heatmap")
        return PlotMode::Heatmap;
    throw std::invalid_argument("plot mode must be 'curves' or 'heatmap'");
}

void write_plot_data(const std::vector<AggregateRecord>& records, PlotMode mode, std::ostream& out) {
    if (records.empty())
        throw HarnessError("no records to plot");
    using Block = std::tuple<std::string, Rational, std::string, double, std::int64_t>;
    auto block_of = [](const AggregateRecord& r) { return Block{r.family, r.alpha, r.strategy, r.eta, r.n_seeds}; };

    if (mode == PlotMode::Curves) {
        using Series = std::tuple<std::string, Rational, std::string, double, Rational, std::int64_t>;
        std::map<Series, std::map<Rational, const AggregateRecord*>> series;
        for (const auto& r : records)
            series[{r.family, r.alpha, r.strategy, r.eta, r.gamma, r.n_seeds}][r.theta] = &r;
        std::set<Rational> thetas;
        for (const auto& r : records)
            thetas.insert(r.theta);
        for (const auto& [k, pts] : series)
            if (pts.size() != thetas.size())
                throw HarnessError("missing axis coverage: a series lacks some theta values");

        out << "series,family,alpha,strategy,eta,gamma,n_seeds,theta,mean_x,stderr_x,identity\n";
        int id = 0;
        for (const auto& [k, pts] : series) {
            for (const auto& [theta, r] : pts) {
                out << id << ',' << r->family << ',' << (r->has_alpha ? format_rational(r->alpha) : "NA") << ','
                    << r->strategy << ',' << (r->has_eta ? format_number(r->eta) : "NA") << ','
                    << format_rational(r->gamma) << ',' << r->n_seeds << ',' << format_rational(theta) << ','
                    << format_number(r->mean_x) << ',' << format_number(r->stderr_x) << ','
                    << format_number(theta.to_double()) << '\n';
            }
            ++id;
        }
        return;
    }

    std::set<Block> blocks;
    std::set<Rational> thetas, gammas;
    std::map<std::pair<Rational, Rational>, const AggregateRecord*> cells;
    for (const auto& r : records) {
        blocks.insert(block_of(r));
        thetas.insert(r.theta);
        gammas.insert(r.gamma);
        cells[{r.theta, r.gamma}] = &r;
    }
    if (blocks.size() != 1)
        throw HarnessError("heatmap needs records from a single (family, alpha, strategy, eta, n_seeds) block");
    if (cells.size() != thetas.size() * gammas.size())
        throw HarnessError("missing axis coverage: theta x gamma grid is incomplete");
    out << "theta,gamma,mean_x\n";
    for (const auto& [tg, r] : cells)
        out << format_rational(tg.first) << ',' << format_rational(tg.second) << ',' << format_number(r->mean_x)
            << '\n';
}

void emit_plot_data(const std::vector<AggregateRecord>& records, PlotMode mode, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw HarnessError("cannot open '" + path + "' for writing");
    write_plot_data(records, mode, out);
    out.flush();
    if (!out)
        throw HarnessError("write failed for '" + path + "'");
}

}  // namespace mixcascade
