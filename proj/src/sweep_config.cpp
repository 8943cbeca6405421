#include "mixcascade/sweep_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mixcascade {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <typename Int>
Int parse_integer(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
    return v;
}

double parse_real(std::string_view s) {
    return Rational::parse(s).to_double();
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

const std::vector<std::string>& sweep_keys() {
    static const std::vector<std::string> keys{
        "family", "nodes", "mean_degree", "alpha", "rewire", "rewire_max_attempts", "rewire_target",
        "strategy", "eta", "theta_grid", "gamma_grid", "n_seeds", "scale", "n_instances", "n_replicates",
        "master_seed", "output", "resample", "max_iterations", "stagnation_window", "workers",
    };
    return keys;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
    std::vector<Rational> out;
    for (auto item : split(text, ',')) {
        if (item.empty())
            throw std::invalid_argument("empty list element");
        if (item.find(':') != std::string_view::npos) {
            const auto parts = split(item, ':');
            if (parts.size() != 3)
                throw std::invalid_argument("range must be start:step:stop");
            const Rational start = Rational::parse(parts[0]);
            const Rational step = Rational::parse(parts[1]);
            const Rational stop = Rational::parse(parts[2]);
            if (step <= Rational::from_int(0))
                throw std::invalid_argument("range step must be positive");
            for (Rational v = start; v <= stop; v = v + step)
                out.push_back(v);
        } else {
            out.push_back(Rational::parse(item));
        }
    }
    return out;
}

std::string SweepSpec::family_label() const {
    std::string label = to_string(generator.family);
    if (rewire)
        label += rewire->mode == RewireMode::Assortative ? "_ASSORT" : "_DISASSORT";
    return label;
}

void SweepSpec::validate() const {
    auto range_error = [](const std::string& key, const std::string& what) {
        throw ConfigError(key + ": " + what, 0, 0, key);
    };
    try {
        generator.validate();
    } catch (const std::invalid_argument& e) {
        range_error(generator.node_count < 4 ? "nodes" : "mean_degree", e.what());
    }
    if (alpha_grid.empty())
        range_error("alpha", "must not be empty");
    if (generator.family == Family::SF_ALPHA)
        for (const auto& a : alpha_grid)
            if (a < Rational(1, 3) || a > Rational::from_int(1))
                range_error("alpha", "value " + a.to_string() + " outside [1/3, 1]");
    if (rewire) {
        try {
            rewire->validate();
        } catch (const std::invalid_argument& e) {
            range_error("rewire_target", e.what());
        }
    }
    if (!(eta >= 0.0))
        range_error("eta", "must be >= 0");
    const Rational zero = Rational::from_int(0), one = Rational::from_int(1);
    auto check_unit = [&](const std::vector<Rational>& grid, const std::string& key) {
        if (grid.empty())
            range_error(key, "must not be empty");
        for (const auto& v : grid)
            if (v < zero || v > one)
                range_error(key, "value " + v.to_string() + " outside [0, 1]");
    };
    check_unit(theta_grid, "theta_grid");
    check_unit(gamma_grid, "gamma_grid");
    if (n_seeds_list.empty())
        range_error("n_seeds", "must not be empty");
    for (auto n : n_seeds_list)
        if (n < 1 || n > generator.node_count)
            range_error("n_seeds", "value " + std::to_string(n) + " outside [1, nodes]");
    if (n_instances < 1)
        range_error("n_instances", "must be >= 1");
    if (n_replicates < 1)
        range_error("n_replicates", "must be >= 1");
    if (stagnation_window && *stagnation_window < 1)
        range_error("stagnation_window", "must be >= 1");
    const auto z = static_cast<std::uint64_t>(generator.node_count);
    if (max_iterations.value_or(z * 1'000'000ULL) < stagnation_window.value_or(z * 100ULL))
        range_error("max_iterations", "must be >= stagnation_window");
    if (workers && *workers < 1)
        range_error("workers", "must be >= 1");
}

SweepSpec load_sweep(std::string_view text) {
    SweepSpec spec;
    std::map<std::string, std::pair<std::string, std::pair<int, int>>> entries;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            const int col = static_cast<int>(raw.size()) + 1;
            throw ConfigError("line " + std::to_string(line_no) + ", column " + std::to_string(col) +
                                  ": expected 'key = value'",
                              line_no, col);
        }
        const std::string key = lower(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const int key_col = static_cast<int>(trim(line.substr(0, eq)).data() - raw.data()) + 1;
        const int value_col = static_cast<int>(value.data() - raw.data()) + 1;
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ", column 1: missing key", line_no, 1);
        const auto& keys = sweep_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("line " + std::to_string(line_no) + ", column " + std::to_string(key_col) +
                                  ": unknown key '" + key + "'",
                              line_no, key_col, key);
        if (entries.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ", column " + std::to_string(key_col) +
                                  ": duplicate key '" + key + "'",
                              line_no, key_col, key);
        if (value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ", column " + std::to_string(value_col) +
                                  ": missing value for '" + key + "'",
                              line_no, value_col, key);
        entries[key] = {std::string(value), {line_no, value_col}};
    }

    // scale picks the instance/replicate defaults; explicit keys override.
    auto apply = [&](const std::string& key, auto&& fn) {
        auto it = entries.find(key);
        if (it == entries.end())
            return;
        const auto& [value, where] = it->second;
        try {
            fn(value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(where.first) + ", column " + std::to_string(where.second) +
                                  ": " + key + ": " + e.what(),
                              where.first, where.second, key);
        }
    };

    apply("scale", [&](const std::string& v) {
        const auto s = lower(v);
        if (s == "desk") {
            spec.n_instances = 20;
            spec.n_replicates = 50;
        } else if (s == "paper") {
            spec.n_instances = 100;
            spec.n_replicates = 1000;
        } else {
            throw std::invalid_argument("expected 'desk' or 'paper'");
        }
    });
    apply("family", [&](const std::string& v) { spec.generator.family = parse_family(v); });
    apply("nodes", [&](const std::string& v) { spec.generator.node_count = parse_integer<NodeId>(v); });
    apply("mean_degree", [&](const std::string& v) { spec.generator.target_mean_degree = parse_real(v); });
    apply("alpha", [&](const std::string& v) { spec.alpha_grid = parse_rational_list(v); });
    apply("rewire", [&](const std::string& v) {
        const auto s = lower(v);
        if (s == "none")
            spec.rewire.reset();
        else if (s == "assortative" || s == "disassortative") {
            spec.rewire = RewireSpec{};
            spec.rewire->mode = s == "assortative" ? RewireMode::Assortative : RewireMode::Disassortative;
        } else
            throw std::invalid_argument("expected none, assortative or disassortative");
    });
    apply("rewire_max_attempts", [&](const std::string& v) {
        if (!spec.rewire)
            throw std::invalid_argument("requires rewire = assortative|disassortative");
        spec.rewire->max_attempts = parse_integer<std::int64_t>(v);
    });
    apply("rewire_target", [&](const std::string& v) {
        if (!spec.rewire)
            throw std::invalid_argument("requires rewire = assortative|disassortative");
        if (lower(v) == "none")
            spec.rewire->target_assortativity.reset();
        else
            spec.rewire->target_assortativity = parse_real(v);
    });
    apply("strategy", [&](const std::string& v) { spec.strategy = parse_strategy(v); });
    apply("eta", [&](const std::string& v) { spec.eta = parse_real(v); });
    apply("theta_grid", [&](const std::string& v) { spec.theta_grid = parse_rational_list(v); });
    apply("gamma_grid", [&](const std::string& v) { spec.gamma_grid = parse_rational_list(v); });
    apply("n_seeds", [&](const std::string& v) {
        spec.n_seeds_list.clear();
        for (auto item : split(v, ','))
            spec.n_seeds_list.push_back(parse_integer<std::int64_t>(item));
    });
    apply("n_instances", [&](const std::string& v) { spec.n_instances = parse_integer<std::int64_t>(v); });
    apply("n_replicates", [&](const std::string& v) { spec.n_replicates = parse_integer<std::int64_t>(v); });
    apply("master_seed", [&](const std::string& v) { spec.master_seed = parse_integer<std::uint64_t>(v); });
    apply("output", [&](const std::string& v) { spec.output_path = v; });
    apply("resample", [&](const std::string& v) {
        const auto s = lower(v);
        if (s == "per_replicate")
            spec.resample = Resample::PerReplicate;
        else if (s == "per_instance")
            spec.resample = Resample::PerInstance;
        else
            throw std::invalid_argument("expected per_replicate or per_instance");
    });
    apply("max_iterations", [&](const std::string& v) { spec.max_iterations = parse_integer<std::uint64_t>(v); });
    apply("stagnation_window", [&](const std::string& v) { spec.stagnation_window = parse_integer<std::uint64_t>(v); });
    apply("workers", [&](const std::string& v) { spec.workers = parse_integer<int>(v); });

    // Unlisted grids default to 0, 0.05, ..., 1.
    if (!entries.count("theta_grid"))
        spec.theta_grid = parse_rational_list("0:0.05:1");
    if (!entries.count("gamma_grid"))
        spec.gamma_grid = parse_rational_list("0:0.05:1");

    try {
        spec.validate();
    } catch (const ConfigError& e) {
        auto it = entries.find(e.key());
        if (it == entries.end())
            throw;
        const auto [line, col] = it->second.second;
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what(), line,
                          col, e.key());
    }
    return spec;
}

SweepSpec load_sweep_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_sweep(ss.str());
}

}  // namespace mixcascade
