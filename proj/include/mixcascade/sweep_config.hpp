#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mixcascade/generators.hpp"
#include "mixcascade/placement.hpp"
#include "mixcascade/rational.hpp"

namespace mixcascade {

enum class Resample { PerReplicate, PerInstance };

struct SweepSpec {
    GeneratorSpec generator;
    // SF_ALPHA sweeps one network ensemble per alpha; other families use a
    // single entry that is ignored by the generator.
    std::vector<Rational> alpha_grid{Rational::from_int(1)};
    std::optional<RewireSpec> rewire;
    Strategy strategy = Strategy::RANDOM;
    double eta = 1.0;
    std::vector<Rational> theta_grid;
    std::vector<Rational> gamma_grid;
    std::vector<std::int64_t> n_seeds_list{1};
    std::int64_t n_instances = 100;
    std::int64_t n_replicates = 1000;
    std::uint64_t master_seed = 1;
    std::string output_path = "results.csv";
    Resample resample = Resample::PerReplicate;
    std::optional<std::uint64_t> max_iterations;
    std::optional<std::uint64_t> stagnation_window;
    std::optional<int> workers;

    // Throws ConfigError naming the offending key.
    void validate() const;
    // Family label used in outputs, e.g. "SFBA" or "SFBA_DISASSORT".
    std::string family_label() const;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line = 0, int column = 0, std::string key = {})
        : std::runtime_error(message), line_(line), column_(column), key_(std::move(key)) {}
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& key() const { return key_; }

private:
    int line_;
    int column_;
    std::string key_;
};

// Flat "key = value" text; '#' starts a comment. Lists are comma-separated,
// and "start:step:stop" expands to an inclusive exact range.
SweepSpec load_sweep(std::string_view config_text);
SweepSpec load_sweep_file(const std::string& path);

// Parses a list/range of exact fractions, e.g. "0, 0.25, 1/3" or "0:0.05:1".
std::vector<Rational> parse_rational_list(std::string_view text);

// Keys accepted by load_sweep, in documentation order.
const std::vector<std::string>& sweep_keys();

}  // namespace mixcascade
