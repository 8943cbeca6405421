#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <map>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace mixcascade;
using testsupport::star;

namespace {

Network sfba(std::uint64_t seed) {
    GeneratorSpec s;
    s.family = Family::SFBA;
    s.rng_seed = seed;
    return generate(s);
}

// Exact law of the set produced by `count` sequential draws without
// replacement, each proportional to weight, by enumerating every ordering.
std::map<std::set<int>, double> exact_weighted_sets(const std::vector<double>& w, int count) {
    std::map<std::set<int>, double> out;
    std::function<void(std::set<int>&, double)> rec = [&](std::set<int>& chosen, double prob) {
        if (static_cast<int>(chosen.size()) == count) {
            out[chosen] += prob;
            return;
        }
        double rest = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (!chosen.count(static_cast<int>(i)))
                rest += w[i];
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (chosen.count(static_cast<int>(i)))
                continue;
            chosen.insert(static_cast<int>(i));
            rec(chosen, prob * w[i] / rest);
            chosen.erase(static_cast<int>(i));
        }
    };
    std::set<int> start;
    rec(start, 1.0);
    return out;
}

std::set<int> nodes_with(const ProfileAssignment& a, Profile p) {
    std::set<int> s;
    for (std::size_t i = 0; i < a.profiles.size(); ++i)
        if (a.profiles[i] == p)
            s.insert(static_cast<int>(i));
    return s;
}

double mean_degree_of(const Network& net, const ProfileAssignment& a, Profile p) {
    double sum = 0.0;
    int n = 0;
    for (NodeId i = 0; i < net.node_count(); ++i)
        if (a.profiles[i] == p) {
            sum += net.degree(i);
            ++n;
        }
    return sum / n;
}

}  // namespace

TEST_SUITE("placement") {

TEST_CASE("extreme theta values") {
    const Network net = sfba(1);
    Rng rng(1);
    for (Strategy s : {Strategy::RANDOM, Strategy::TBS_BY_DEGREE, Strategy::SS_BY_DEGREE, Strategy::POWER_LAW}) {
        const auto all_ss = assign(net, s, Rational::from_int(1), 1.0, rng);
        CHECK(all_ss.ss_count() == net.node_count());
        const auto all_tbs = assign(net, s, Rational::from_int(0), 1.0, rng);
        CHECK(all_tbs.ss_count() == 0);
        CHECK(all_tbs.strategy == s);
        for (auto [k, f] : realized_theta_k(all_ss, net))
            CHECK(f == 1.0);
        for (auto [k, f] : realized_theta_k(all_tbs, net))
            CHECK(f == 0.0);
    }
}

TEST_CASE("every strategy is count exact") {
    const Network net = sfba(2);
    Rng rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const Rational theta(static_cast<std::int64_t>(rng.uniform_index(1001)), 1000);
        for (Strategy s : {Strategy::RANDOM, Strategy::TBS_BY_DEGREE, Strategy::SS_BY_DEGREE, Strategy::POWER_LAW}) {
            const auto a = assign(net, s, theta, 1.0, rng);
            CHECK(a.profiles.size() == 1000);
            CHECK(a.ss_count() == ss_target_count(theta, 1000));
            CHECK(a.theta == theta);
        }
    }
    CHECK(ss_target_count(Rational(1, 2), 5) == 3);
    CHECK_THROWS_AS(ss_target_count(Rational(3, 2), 5), PlacementError);
}

TEST_CASE("random placement is flat across degree classes") {
    const Network net = sfba(3);
    Rng rng(3);
    std::map<std::int32_t, double> ss, total;
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = assign_random(net, Rational(1, 2), rng);
        for (NodeId i = 0; i < net.node_count(); ++i) {
            total[net.degree(i)] += 1;
            ss[net.degree(i)] += a.profiles[i] == Profile::SS;
        }
    }
    // Pearson chi-square over classes with enough mass; df = classes - 1.
    double chi2 = 0.0;
    int classes = 0;
    for (auto [k, n] : total) {
        if (n < 500)
            continue;
        const double expected = n / 2;
        chi2 += (ss[k] - expected) * (ss[k] - expected) / expected * 2;  // both cells
        ++classes;
    }
    REQUIRE(classes >= 3);
    // 99.9% quantile of chi-square is below df + 5 sqrt(2 df) for df <= 30.
    CHECK(chi2 < (classes - 1) + 5 * std::sqrt(2.0 * (classes - 1)));
}

TEST_CASE("degree-proportional first draw on a star") {
    const Network s = star(4);
    Rng rng(4);
    const int n = 40000;
    int center_tbs = 0, center_ss = 0;
    for (int i = 0; i < n; ++i) {
        center_tbs += assign_tbs_by_degree(s, Rational(4, 5), rng).profiles[0] == Profile::TBS;
        center_ss += assign_ss_by_degree(s, Rational(1, 5), rng).profiles[0] == Profile::SS;
    }
    const double sd = std::sqrt(0.25 / n);
    CHECK(std::abs(center_tbs / double(n) - 0.5) < 5 * sd);
    CHECK(std::abs(center_ss / double(n) - 0.5) < 5 * sd);
}

TEST_CASE("TBS and SS degree placement match exact enumeration on small graphs") {
    // Degrees 4, 2, 2, 1, 3, 2: a star core with a few extra links.
    const Network net = testsupport::make({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 4}, {2, 5}, {4, 5}}, 6);
    std::vector<double> w;
    for (NodeId i = 0; i < 6; ++i)
        w.push_back(net.degree(i));
    for (int picked : {1, 2, 3}) {
        const auto exact = exact_weighted_sets(w, picked);
        const Rational tbs_theta(6 - picked, 6);  // `picked` TBS
        const Rational ss_theta(picked, 6);       // `picked` SS
        std::map<std::set<int>, int> tbs_hist, ss_hist;
        Rng rng(100 + picked);
        const int n = 30000;
        for (int i = 0; i < n; ++i) {
            ++tbs_hist[nodes_with(assign_tbs_by_degree(net, tbs_theta, rng), Profile::TBS)];
            ++ss_hist[nodes_with(assign_ss_by_degree(net, ss_theta, rng), Profile::SS)];
        }
        for (const auto& [set, p] : exact) {
            const double sd = std::sqrt(p * (1 - p) / n) + 1e-12;
            CHECK(std::abs(tbs_hist[set] / double(n) - p) < 5 * sd);
            CHECK(std::abs(ss_hist[set] / double(n) - p) < 5 * sd);
        }
        CHECK(tbs_hist.size() <= exact.size());
        CHECK(ss_hist.size() <= exact.size());
    }
}

TEST_CASE("degree-biased strategies favour hubs on SFBA") {
    const Network net = sfba(5);
    Rng rng(5);
    double tbs_gap = 0.0, ss_gap = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto t = assign_tbs_by_degree(net, Rational(1, 2), rng);
        tbs_gap += mean_degree_of(net, t, Profile::TBS) - mean_degree_of(net, t, Profile::SS);
        const auto s = assign_ss_by_degree(net, Rational(1, 2), rng);
        ss_gap += mean_degree_of(net, s, Profile::SS) - mean_degree_of(net, s, Profile::TBS);
    }
    CHECK(tbs_gap > 0.0);
    CHECK(ss_gap > 0.0);
}

TEST_CASE("realized theta_k decreases in k under TBS_BY_DEGREE and is flat under RANDOM") {
    const Network net = sfba(6);
    Rng rng(6);
    std::map<std::int32_t, double> tbs_prof, rnd_prof;
    for (int rep = 0; rep < 100; ++rep) {
        for (auto [k, f] : realized_theta_k(assign_tbs_by_degree(net, Rational(1, 2), rng), net))
            tbs_prof[k] += f / 100;
        for (auto [k, f] : realized_theta_k(assign_random(net, Rational(1, 2), rng), net))
            rnd_prof[k] += f / 100;
    }
    // Spearman rank correlation between k and theta_k over well-populated classes.
    std::map<std::int32_t, std::int64_t> sizes;
    for (NodeId i = 0; i < net.node_count(); ++i)
        ++sizes[net.degree(i)];
    auto spearman = [&](const std::map<std::int32_t, double>& prof) {
        std::vector<std::pair<double, double>> pts;
        for (auto [k, f] : prof)
            if (sizes[k] >= 10)
                pts.emplace_back(k, f);
        const std::size_t n = pts.size();
        std::vector<std::size_t> by_f(n);
        std::iota(by_f.begin(), by_f.end(), 0);
        std::sort(by_f.begin(), by_f.end(), [&](auto a, auto b) { return pts[a].second < pts[b].second; });
        std::vector<double> rank_f(n);
        for (std::size_t r = 0; r < n; ++r)
            rank_f[by_f[r]] = static_cast<double>(r);
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            d2 += (static_cast<double>(i) - rank_f[i]) * (static_cast<double>(i) - rank_f[i]);
        return 1.0 - 6.0 * d2 / (static_cast<double>(n) * (static_cast<double>(n) * n - 1));
    };
    CHECK(spearman(tbs_prof) < -0.8);
    for (auto [k, f] : rnd_prof)
        if (sizes[k] >= 50)
            CHECK(std::abs(f - 0.5) < 0.1);
}

TEST_CASE("power-law class probabilities") {
    SUBCASE("star, eta = 1: centre / leaf = 1/4") {
        const auto p = power_law_class_probabilities(star(4), Rational(2, 5), 1.0);
        CHECK(p.at(4) / p.at(1) == doctest::Approx(0.25));
        // Expected SS count equals round(theta Z) = 2.
        CHECK(p.at(4) + 4 * p.at(1) == doctest::Approx(2.0));
    }
    SUBCASE("eta = 0 and regular graphs reduce to uniform theta") {
        for (auto [k, v] : power_law_class_probabilities(sfba(7), Rational(3, 10), 0.0))
            CHECK(v == doctest::Approx(0.3));
        const auto reg = power_law_class_probabilities(testsupport::cycle(10), Rational(3, 10), 2.0);
        CHECK(reg.size() == 1);
        CHECK(reg.at(2) == doctest::Approx(0.3));
    }
    SUBCASE("clipping keeps probabilities in [0,1] and the expected count exact") {
        const Network net = sfba(8);
        std::map<std::int32_t, std::int64_t> sizes;
        for (NodeId i = 0; i < net.node_count(); ++i)
            ++sizes[net.degree(i)];
        for (int t : {1, 5, 9}) {
            const auto p = power_law_class_probabilities(net, Rational(t, 10), 1.0);
            double expected = 0.0;
            for (auto [k, v] : p) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                expected += sizes[k] * v;
            }
            CHECK(expected == doctest::Approx(t * 100.0));
            // Non-increasing in k.
            double prev = 2.0;
            for (auto [k, v] : p) {
                CHECK(v <= prev + 1e-12);
                prev = v;
            }
        }
    }
    CHECK_THROWS_AS(power_law_class_probabilities(star(4), Rational(1, 2), -1.0), PlacementError);
}

TEST_CASE("POWER_LAW with eta = 0 is flat like random placement") {
    const Network net = sfba(9);
    Rng rng(9);
    std::map<std::int32_t, double> ss, total;
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = assign_power_law(net, Rational(1, 2), 0.0, rng);
        for (NodeId i = 0; i < net.node_count(); ++i) {
            total[net.degree(i)] += 1;
            ss[net.degree(i)] += a.profiles[i] == Profile::SS;
        }
    }
    for (auto [k, n] : total)
        if (n >= 2000)
            CHECK(std::abs(ss[k] / n - 0.5) < 5 * std::sqrt(0.25 / n));
}

TEST_CASE("POWER_LAW with eta = 1 tilts SS toward low degree") {
    const Network net = sfba(10);
    Rng rng(10);
    double gap = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = assign_power_law(net, Rational(1, 2), 1.0, rng);
        gap += mean_degree_of(net, a, Profile::TBS) - mean_degree_of(net, a, Profile::SS);
    }
    CHECK(gap > 0.0);
}

TEST_CASE("weighted sampling without replacement") {
    Rng rng(11);
    const std::vector<double> w{0.0, 1.0, 0.0, 3.0};
    const auto all = weighted_sample_without_replacement(w, 4, rng);
    CHECK(std::set<NodeId>(all.begin(), all.end()) == std::set<NodeId>{0, 1, 2, 3});
    for (int i = 0; i < 200; ++i) {
        const auto two = weighted_sample_without_replacement(w, 2, rng);
        CHECK(std::set<NodeId>(two.begin(), two.end()) == std::set<NodeId>{1, 3});
    }
    CHECK_THROWS(weighted_sample_without_replacement(w, 5, rng));
}

TEST_CASE("assignment text round trip and errors") {
    Rng rng(12);
    const Network net = star(4);
    const auto a = assign_random(net, Rational(2, 5), rng);
    std::stringstream ss;
    write_assignment(a, ss);
    const auto b = read_assignment(ss, 5);
    CHECK(b.profiles == a.profiles);
    CHECK(b.theta == Rational(2, 5));

    std::stringstream bad("0\tSS\n1\tXX\n");
    CHECK_THROWS_AS(read_assignment(bad, 2), PlacementError);
    std::stringstream twice("0\tSS\n0\tTBS\n");
    CHECK_THROWS_AS(read_assignment(twice, 2), PlacementError);
    std::stringstream partial("0\tSS\n");
    CHECK_THROWS_AS(read_assignment(partial, 2), PlacementError);
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("tbs_by_degree") == Strategy::TBS_BY_DEGREE);
    CHECK(parse_strategy("POWER_LAW") == Strategy::POWER_LAW);
    CHECK(to_string(Strategy::SS_BY_DEGREE) == "SS_BY_DEGREE");
    CHECK_THROWS(parse_strategy("hubs"));
}

}  // TEST_SUITE
