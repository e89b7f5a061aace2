#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srgm/error.hpp"
#include "srgm/release.hpp"

using namespace srgm;

namespace {

const CostParams kCosts{1.0, 5.0, 2.0, 0.0, 100.0};
const GoParams kGo{100.0, 0.1};

struct Sample {
    GoParams go;
    CostParams costs;
};

// Random parameter sets on either side of the ab = C_r boundary.
std::vector<Sample> samples(std::size_t count, bool testing_worthwhile, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(5.0, 500.0), ub(0.01, 1.0), uc1(0.0, 5.0),
        ugap(0.5, 20.0), ulife(5.0, 200.0), uf(0.05, 0.95);
    std::vector<Sample> out;
    while (out.size() < count) {
        Sample s{{ua(rng), ub(rng)}, {}};
        const double c1 = uc1(rng), c2 = c1 + ugap(rng);
        const double ab = s.go.a * s.go.b;
        const double cr = testing_worthwhile ? ab * uf(rng) : ab / uf(rng);
        s.costs = {c1, c2, cr * (c2 - c1), 0.0, ulife(rng)};
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST(CostRatio, Examples) {
    EXPECT_EQ(cost_ratio({1, 5, 2, 0, 100}), 0.5);
    EXPECT_EQ(cost_ratio({1, 5, 0, 0, 100}), 0.0);
    EXPECT_EQ(cost_ratio({1, 2, 1, 0, 100}), 1.0);
    EXPECT_THROW(cost_ratio({5, 5, 1, 0, 100}), InputError);
    EXPECT_THROW(cost_ratio({6, 5, 1, 0, 100}), InputError);
}

TEST(CostParamsValidation, RejectsInvalid) {
    EXPECT_THROW(validate(CostParams{-1, 5, 2, 0, 100}), InputError);
    EXPECT_THROW(validate(CostParams{1, 5, -2, 0, 100}), InputError);
    EXPECT_THROW(validate(CostParams{1, 5, 2, -1, 100}), InputError);
    EXPECT_THROW(validate(CostParams{1, 5, 2, 0, 0}), InputError);
    EXPECT_THROW(validate(CostParams{1, 1, 2, 0, 10}), InputError);
}

TEST(ExpectedCost, Examples) {
    EXPECT_NEAR(expected_cost(kGo, kCosts, 0.0),
                static_cast<double>(5.0L * oracle::go(100, 0.1, 100)), 1e-10);
    EXPECT_NEAR(expected_cost(kGo, kCosts, 0.0), 499.977, 5e-4);
    EXPECT_DOUBLE_EQ(expected_cost(kGo, kCosts, 100.0), 1.0 * mean_value(kGo, 100.0) + 2.0 * 100.0);
    EXPECT_THROW(expected_cost(kGo, kCosts, -1.0), DomainError);
    EXPECT_THROW(expected_cost(kGo, kCosts, 100.5), DomainError);
}

TEST(ExpectedCost, MatchesTermByTermOracle) {
    for (const auto& s : samples(30, true, 1)) {
        for (double f : {0.0, 0.13, 0.5, 0.97, 1.0}) {
            const double T = f * s.costs.lifecycle_t;
            const long double ref = oracle::go_cost(s.go.a, s.go.b, s.costs.c1, s.costs.c2,
                                                    s.costs.c3, s.costs.lifecycle_t, T);
            EXPECT_NEAR(expected_cost(s.go, s.costs, T), static_cast<double>(ref),
                        1e-10 * std::fabs(ref));
        }
    }
}

TEST(OptimalPolicy, InteriorExample) {
    const auto p = optimal_release_time(kGo, kCosts);
    EXPECT_EQ(p.policy_case, PolicyCase::interior);
    EXPECT_NEAR(p.t_star, static_cast<double>(10.0L * std::log(20.0L)), 1e-12);
    EXPECT_NEAR(p.t_star, 29.9573, 5e-5);
    ASSERT_TRUE(p.t0.has_value());
    EXPECT_EQ(*p.t0, p.t_star);
    EXPECT_EQ(p.expected_cost_at_t_star, expected_cost(kGo, kCosts, p.t_star));
    const auto grid = oracle::grid_argmin(
        [](long double T) { return oracle::go_cost(100, 0.1, 1, 5, 2, 100, T); }, 100.0, 100001);
    EXPECT_NEAR(p.t_star, grid.t, 1e-3);
    EXPECT_LE(p.expected_cost_at_t_star, static_cast<double>(grid.value) + 1e-9);
}

TEST(OptimalPolicy, NoTestingExample) {
    const auto p = optimal_release_time(GoParams{10.0, 0.01}, CostParams{1, 2, 1, 0, 100});
    EXPECT_EQ(p.policy_case, PolicyCase::no_testing);
    EXPECT_EQ(p.t_star, 0.0);
    EXPECT_FALSE(p.t0.has_value());
}

TEST(OptimalPolicy, FullLifecycleExample) {
    const auto p = optimal_release_time(kGo, CostParams{1, 5, 2, 0, 20});
    EXPECT_EQ(p.policy_case, PolicyCase::full_lifecycle);
    EXPECT_EQ(p.t_star, 20.0);
    ASSERT_TRUE(p.t0.has_value());
    EXPECT_NEAR(*p.t0, 29.9573, 5e-5);
}

TEST(OptimalPolicy, ZeroTestingCostMeansTestWholeLifecycle) {
    const auto p = optimal_release_time(kGo, CostParams{1, 5, 0, 0, 100});
    EXPECT_EQ(p.policy_case, PolicyCase::full_lifecycle);
    EXPECT_EQ(p.t_star, 100.0);
}

TEST(OptimalPolicyProperty, BranchFactsFromCostScaling) {
    // Raising the testing cost c3 eventually favours no testing at all.
    CostParams c = kCosts;
    PolicyCase last = PolicyCase::interior;
    for (double c3 = 0.5; c3 <= 100.0; c3 *= 2.0) {
        c.c3 = c3;
        last = optimal_release_time(kGo, c).policy_case;
    }
    EXPECT_EQ(last, PolicyCase::no_testing);
    // Raising c2 pushes T0 upward until min(T0, t) selects t.
    c = kCosts;
    c.lifecycle_t = 40.0;
    double prev_t0 = 0.0;
    for (double c2 = 2.0; c2 <= 1e4; c2 *= 3.0) {
        c.c2 = c2;
        const auto p = optimal_release_time(kGo, c);
        if (p.t0) {
            EXPECT_GT(*p.t0, prev_t0);
            prev_t0 = *p.t0;
        }
        last = p.policy_case;
    }
    EXPECT_EQ(last, PolicyCase::full_lifecycle);
}

TEST(OptimalPolicyProperty, InteriorOptimumIsStationary) {
    for (const auto& s : samples(100, true, 2)) {
        const auto p = optimal_release_time(s.go, s.costs);
        if (p.policy_case != PolicyCase::interior || p.t_star < 1e-3 ||
            p.t_star > s.costs.lifecycle_t - 1e-3) {
            continue;
        }
        const double h = 1e-4;
        const long double fd =
            (oracle::go_cost(s.go.a, s.go.b, s.costs.c1, s.costs.c2, s.costs.c3, s.costs.lifecycle_t,
                             p.t_star + h) -
             oracle::go_cost(s.go.a, s.go.b, s.costs.c1, s.costs.c2, s.costs.c3, s.costs.lifecycle_t,
                             p.t_star - h)) /
            (2.0L * h);
        EXPECT_LT(std::fabs(static_cast<double>(fd)), 1e-4 * s.costs.c3);
    }
}

TEST(OptimalPolicyProperty, NoTestingWhenRateBelowCostRatio) {
    for (const auto& s : samples(100, false, 3)) {
        const auto p = optimal_release_time(s.go, s.costs);
        EXPECT_EQ(p.policy_case, PolicyCase::no_testing);
        const auto grid = oracle::grid_argmin(
            [&](long double T) {
                return oracle::go_cost(s.go.a, s.go.b, s.costs.c1, s.costs.c2, s.costs.c3,
                                       s.costs.lifecycle_t, T);
            },
            s.costs.lifecycle_t, 2001);
        EXPECT_EQ(grid.t, 0.0);
    }
}

TEST(NumericOptimizer, AgreesWithClosedForm) {
    for (const auto& s : samples(100, true, 4)) {
        const auto closed = optimal_release_time(s.go, s.costs);
        const auto numeric = optimize_release_numeric(
            make_cost_function(s.go, std::nullopt, s.costs, false), s.costs.lifecycle_t);
        EXPECT_LT(std::fabs(closed.t_star - numeric.t_star), 1e-4);
        EXPECT_EQ(closed.policy_case, numeric.policy_case);
    }
}

TEST(NumericOptimizer, ConstantCostPicksZero) {
    const auto p = optimize_release_numeric(make_cost_function([](double) { return 7.0; }), 10.0);
    EXPECT_EQ(p.t_star, 0.0);
    EXPECT_EQ(p.policy_case, PolicyCase::no_testing);
    EXPECT_EQ(p.expected_cost_at_t_star, 7.0);
}

TEST(NumericOptimizer, BoundaryMinimumAtLifecycle) {
    const auto p = optimize_release_numeric(make_cost_function([](double t) { return -t; }), 10.0);
    EXPECT_EQ(p.t_star, 10.0);
    EXPECT_EQ(p.policy_case, PolicyCase::full_lifecycle);
}

TEST(NumericOptimizer, NonFiniteCostIsNumericError) {
    EXPECT_THROW(optimize_release_numeric(
                     make_cost_function([](double t) { return t > 5 ? std::nan("") : t; }), 10.0),
                 NumericError);
}

TEST(NumericOptimizer, HandlesOhbaAndMusaOkumoto) {
    for (const ModelParams m : {ModelParams{OhbaParams{100.0, 0.2}}, ModelParams{MusaOkumotoParams{10.0, 0.05}}}) {
        const CostParams c{1.0, 5.0, 0.5, 0.0, 100.0};
        const auto p = optimize_release_numeric(make_cost_function(m, std::nullopt, c, false), 100.0);
        const auto grid = oracle::grid_argmin(
            [&](long double T) { return static_cast<long double>(expected_cost(m, c, static_cast<double>(T))); },
            100.0, 100001);
        EXPECT_NEAR(p.t_star, grid.t, 2e-3);
        EXPECT_LE(p.expected_cost_at_t_star, static_cast<double>(grid.value) + 1e-9);
    }
}

TEST(CostCurve, ThousandPointsEndingAtLifecycle) {
    const auto curve = cost_curve(make_cost_function(kGo, std::nullopt, kCosts, false), 100.0);
    ASSERT_EQ(curve.release_times.size(), 1000u);
    EXPECT_EQ(curve.release_times.front(), 0.0);
    EXPECT_EQ(curve.release_times.back(), 100.0);
    for (std::size_t i = 0; i < curve.costs.size(); i += 97) {
        EXPECT_NEAR(curve.costs[i], expected_cost(kGo, kCosts, curve.release_times[i]), 1e-9);
    }
}

TEST(Multiversion, TermByTermExample) {
    const CostParams c{1.0, 5.0, 2.0, 2.0, 100.0};
    const PreviousVersion prev = ModelParams{GoParams{20.0, 0.05}};
    const long double n = oracle::go(20, 0.05, 10);
    const long double ref = oracle::go_cost_two_versions(100, 0.1, 1, 5, 2, 2, 100, 10, n);
    EXPECT_NEAR(expected_cost_multiversion(kGo, prev, c, 10.0), static_cast<double>(ref), 1e-10);
}

TEST(MultiversionProperty, ReducesExactlyToSingleVersion) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& s : samples(100, true, 6)) {
        const PreviousVersion prev = ModelParams{OhbaParams{1.0 + 50.0 * u(rng), 0.01 + u(rng)}};
        CostParams equal = s.costs;
        equal.c4 = equal.c2;
        CostParams other = s.costs;
        other.c4 = 3.0 * u(rng);
        for (int i = 0; i <= 20; ++i) {
            const double T = i == 20 ? s.costs.lifecycle_t : s.costs.lifecycle_t * i / 20.0;
            const double base = expected_cost(s.go, s.costs, T);
            EXPECT_EQ(expected_cost_multiversion(s.go, std::nullopt, other, T), base);
            EXPECT_EQ(expected_cost_multiversion(s.go, prev, equal, T), base);
        }
    }
}

TEST(Multiversion, NumericOptimumEqualsSingleVersionWhenC4EqualsC2) {
    CostParams c = kCosts;
    c.c4 = c.c2;
    const PreviousVersion prev = ModelParams{GoParams{20.0, 0.05}};
    const auto single = optimize_release_numeric(make_cost_function(kGo, std::nullopt, c, false), 100.0);
    const auto multi = optimize_release_numeric(make_cost_function(kGo, prev, c, true), 100.0);
    EXPECT_EQ(single.t_star, multi.t_star);
    EXPECT_EQ(single.expected_cost_at_t_star, multi.expected_cost_at_t_star);
}

TEST(Multiversion, BatchedMatchesPointwise) {
    const CostParams c{1.0, 5.0, 2.0, 3.0, 100.0};
    const PreviousVersion prev = ModelParams{MusaOkumotoParams{4.0, 0.2}};
    const auto f = make_cost_function(kGo, prev, c, true);
    std::vector<double> t{0.0, 1.0, 17.5, 63.0, 100.0}, out(t.size());
    f(t, out);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(out[i], expected_cost_multiversion(kGo, prev, c, t[i]), 1e-10);
    }
}
