#include <random>

#include <gtest/gtest.h>

#include "srgm/decision.hpp"
#include "srgm/error.hpp"

using namespace srgm;

namespace {

std::vector<ModuleNode> flat(const std::vector<std::string>& ids) {
    std::vector<ModuleNode> g;
    for (const auto& id : ids) g.push_back({id, {}, true});
    return g;
}

const ReleasePolicy kPolicy{10.0, PolicyCase::interior, 100.0, 10.0};

int rank(Category c) { return static_cast<int>(c); }

}  // namespace

TEST(Categorize, ThresholdExample) {
    const std::vector<ModuleWeight> w{{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
    const auto r = categorize(w, flat({"a", "b", "c"}));
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].category, Category::very_high);
    EXPECT_EQ(r[1].category, Category::very_high);
    EXPECT_EQ(r[2].category, Category::high);
    for (const auto& a : r) EXPECT_FALSE(a.tie);
}

TEST(Categorize, AllFiveBuckets) {
    const CategoryThresholds t;
    EXPECT_EQ(t.classify(0.30), Category::very_high);
    EXPECT_EQ(t.classify(0.2999), Category::high);
    EXPECT_EQ(t.classify(0.10), Category::medium);
    EXPECT_EQ(t.classify(0.05), Category::low);
    EXPECT_EQ(t.classify(0.0499), Category::very_low);
}

TEST(Categorize, TiesFlaggedAndOrderedById) {
    const std::vector<ModuleWeight> w{{"z", 0.25}, {"a", 0.25}, {"m", 0.5}};
    const auto r = categorize(w, flat({"z", "a", "m"}));
    EXPECT_EQ(r[0].module_id, "m");
    EXPECT_EQ(r[1].module_id, "a");
    EXPECT_EQ(r[2].module_id, "z");
    EXPECT_TRUE(r[1].tie);
    EXPECT_TRUE(r[2].tie);
    EXPECT_FALSE(r[0].tie);
    EXPECT_EQ(r[1].category, r[2].category);
}

TEST(Categorize, UntestedParentPromotesChildOneStep) {
    const std::vector<ModuleWeight> w{{"parent", 0.6}, {"child", 0.15}};
    std::vector<ModuleNode> g{{"parent", {}, false}, {"child", {"parent"}, false}};
    auto r = categorize(w, g);
    EXPECT_EQ(r[1].module_id, "child");
    EXPECT_EQ(r[1].base_category, Category::medium);
    EXPECT_EQ(r[1].category, Category::high);
    EXPECT_TRUE(r[1].boosted);
    g[0].tested = true;
    r = categorize(w, g);
    EXPECT_EQ(r[1].category, Category::medium);
    EXPECT_FALSE(r[1].boosted);
}

TEST(Categorize, CyclesAndUnknownIdsRejected) {
    const std::vector<ModuleNode> cyc{{"a", {"b"}, false}, {"b", {"c"}, false}, {"c", {"a"}, false}};
    try {
        check_dependency_graph(cyc);
        FAIL();
    } catch (const InputError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("a -> b -> c -> a"), std::string::npos) << msg;
    }
    const std::vector<ModuleNode> unknown{{"a", {"ghost"}, false}};
    try {
        check_dependency_graph(unknown);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
    }
    const std::vector<ModuleNode> dup{{"a", {}, false}, {"a", {}, false}};
    EXPECT_THROW(check_dependency_graph(dup), InputError);
}

TEST(Categorize, InvalidThresholds) {
    CategoryThresholds t{{0.3, 0.3, 0.1, 0.05}};
    EXPECT_THROW(t.validate(), InputError);
    t = {{0.3, 0.2, 0.1, 0.0}};
    EXPECT_THROW(t.validate(), InputError);
}

TEST(CategorizeProperty, IdempotentAndPromotionBounded) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 9;
        std::vector<ModuleWeight> w;
        std::vector<ModuleNode> g;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            w.push_back({"m" + std::to_string(i), u(rng)});
            sum += w.back().p_k;
        }
        for (auto& x : w) x.p_k /= sum;
        for (int i = 0; i < n; ++i) {
            ModuleNode node{w[i].id, {}, u(rng) < 0.5};
            for (int j = 0; j < i; ++j) {
                if (u(rng) < 0.3) node.parents.push_back(w[j].id);  // edges to earlier ids only
            }
            g.push_back(node);
        }
        const auto first = categorize(w, g);
        std::vector<ModuleWeight> again;
        for (const auto& a : first) again.push_back({a.module_id, a.p_k});
        EXPECT_EQ(categorize(again, g), first);
        for (const auto& a : first) {
            const int step = rank(a.base_category) - rank(a.category);
            EXPECT_GE(step, 0);
            EXPECT_LE(step, 1);
            EXPECT_EQ(step == 1, a.boosted && a.base_category != Category::very_high);
        }
    }
}

TEST(Deviation, TimeExamples) {
    EXPECT_EQ(deviation_time(10.0, 10.0), 0.0);
    EXPECT_NEAR(deviation_time(12.0, 10.0), 0.2, 1e-15);
    EXPECT_EQ(deviation_time(5.0, 10.0), -0.5);
    EXPECT_THROW(deviation_time(1.0, 0.0), DomainError);
}

TEST(Deviation, CostExamples) {
    EXPECT_EQ(deviation_cost(100.0, 100.0), 0.0);
    EXPECT_EQ(deviation_cost(150.0, 100.0), 0.5);
    EXPECT_EQ(deviation_cost(0.0, 100.0), -1.0);
    EXPECT_THROW(deviation_cost(1.0, 0.0), InputError);
    EXPECT_THROW(deviation_cost(1.0, -3.0), InputError);
}

TEST(LimitingFactor, ExamplesAndSymmetry) {
    EXPECT_EQ(limiting_factor(0.0, 0.0), 0.0);
    EXPECT_NEAR(limiting_factor(0.2, 0.5), 0.7, 1e-15);
    EXPECT_EQ(limiting_factor(0.3, -0.3), 0.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double a = u(rng), b = u(rng);
        EXPECT_EQ(limiting_factor(a, b), limiting_factor(b, a));
    }
}

TEST(WeightedLimitingFactor, Examples) {
    EXPECT_DOUBLE_EQ(weighted_limiting_factor(120, 100, 30, 10, 1.0), 0.2);
    EXPECT_DOUBLE_EQ(weighted_limiting_factor(120, 100, 11, 10, 0.0), 0.1);
    EXPECT_NEAR(weighted_limiting_factor(120, 100, 11, 10, 0.5), 0.15, 1e-15);
    EXPECT_NEAR(weighted_limiting_factor(150, 100, 12, 10, 0.5), 0.35, 1e-15);
    EXPECT_THROW(weighted_limiting_factor(1, 0, 1, 1, 0.5), DomainError);
    EXPECT_THROW(weighted_limiting_factor(1, 1, 1, 0, 0.5), DomainError);
    EXPECT_THROW(weighted_limiting_factor(1, 1, 1, 1, 1.5), InputError);
}

TEST(WeightedLimitingFactorProperty, LinearInOddsWithExactEndpoints) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double c = 100 * u(rng), cs = 100 * u(rng), t = 10 * u(rng), ts = 10 * u(rng);
        const double beta = (c - cs) / cs, alpha = (t - ts) / ts;
        EXPECT_EQ(weighted_limiting_factor(c, cs, t, ts, 1.0), beta);
        EXPECT_EQ(weighted_limiting_factor(c, cs, t, ts, 0.0), alpha);
        const double mid = weighted_limiting_factor(c, cs, t, ts, 0.5);
        EXPECT_NEAR(mid, 0.5 * (alpha + beta), 1e-14);
        const double q = weighted_limiting_factor(c, cs, t, ts, 0.25);
        EXPECT_NEAR(q, 0.25 * beta + 0.75 * alpha, 1e-14);
    }
}

TEST(Recommend, RuleTable) {
    EXPECT_EQ(recommend(0.0, 0.3, {10, 100, 0, 0}, Category::high).recommendation,
              Recommendation::release);
    EXPECT_EQ(recommend(0.4, 0.3, {10, 100, 0, 0}, Category::high).recommendation,
              Recommendation::reject);
    EXPECT_EQ(recommend(0.1, 0.3, {10, 100, 3, 1}, Category::high).recommendation,
              Recommendation::continue_testing);
    EXPECT_EQ(recommend(0.3, 0.3, {10, 100, 1, 1}, Category::high).recommendation,
              Recommendation::release);
    EXPECT_THROW(recommend(0.0, -0.1, {}, Category::high), InputError);
}

TEST(RecommendProperty, MonotoneInDelta) {
    for (std::uint64_t found : {0u, 5u}) {
        const TestOutcome o{10, 100, found, 2};
        int prev = -1;
        for (double delta = -1.0; delta <= 1.0; delta += 0.01) {
            const auto r = recommend(delta, 0.3, o, Category::low).recommendation;
            const int severity = r == Recommendation::release ? 0 : r == Recommendation::continue_testing ? 1 : 2;
            EXPECT_GE(severity, prev);
            prev = severity;
        }
    }
}

TEST(Decide, OnTargetActualsRelease) {
    std::vector<CategoryActuals> a;
    for (auto c : kCategoryOrder) a.push_back({c, {10.0, 100.0, 0, 0}});
    const auto r = decide(kPolicy, a, {0.3, 0.5, StringencyMode::cumulative, DeltaKind::weighted});
    EXPECT_EQ(r.overall, Recommendation::release);
    EXPECT_FALSE(r.triggering_category.has_value());
    for (const auto& d : r.decisions) {
        EXPECT_EQ(d.alpha, 0.0);
        EXPECT_EQ(d.beta, 0.0);
        EXPECT_EQ(d.delta, 0.0);
        EXPECT_EQ(d.weighted_delta, 0.0);
    }
}

TEST(Decide, WeightedExampleAndTriggeringCategory) {
    const std::vector<CategoryActuals> a{{Category::medium, {12.0, 150.0, 0, 0}},
                                         {Category::very_high, {10.0, 100.0, 0, 0}}};
    const auto r = decide(kPolicy, a, {0.3, 0.5, StringencyMode::cumulative, DeltaKind::weighted});
    ASSERT_EQ(r.decisions.size(), 2u);
    EXPECT_EQ(r.decisions[0].category, Category::very_high);
    EXPECT_NEAR(r.decisions[1].weighted_delta, 0.35, 1e-15);
    EXPECT_NEAR(r.decisions[1].delta, 0.7, 1e-15);
    EXPECT_EQ(r.decisions[1].recommendation, Recommendation::reject);
    EXPECT_EQ(r.overall, Recommendation::reject);
    EXPECT_EQ(r.triggering_category, Category::medium);
}

TEST(Decide, CumulativeAndPerCategoryModes) {
    std::vector<CategoryActuals> a;
    for (auto c : kCategoryOrder) a.push_back({c, {11.0, 110.0, 0, 0}});  // delta 0.1 each
    const auto cum = decide(kPolicy, a, {0.35, 0.5, StringencyMode::cumulative, DeltaKind::weighted});
    EXPECT_EQ(cum.decisions[2].recommendation, Recommendation::release);
    EXPECT_NEAR(cum.decisions[2].cumulative_delta, 0.3, 1e-12);
    EXPECT_EQ(cum.decisions[3].recommendation, Recommendation::reject);
    EXPECT_EQ(cum.triggering_category, Category::low);
    const auto per = decide(kPolicy, a, {0.3, 0.5, StringencyMode::per_category, DeltaKind::weighted});
    EXPECT_EQ(per.overall, Recommendation::release);
    const auto plain = decide(kPolicy, a, {0.3, 0.5, StringencyMode::per_category, DeltaKind::plain});
    EXPECT_NEAR(plain.decisions[0].checked_delta, 0.2, 1e-12);
    EXPECT_EQ(plain.overall, Recommendation::release);
}

TEST(Decide, ContinueWhenFaultsExceedTolerance) {
    const std::vector<CategoryActuals> a{{Category::high, {10.0, 100.0, 2, 1}}};
    const auto r = decide(kPolicy, a, {0.3, 0.5, StringencyMode::cumulative, DeltaKind::weighted});
    EXPECT_EQ(r.overall, Recommendation::continue_testing);
    EXPECT_EQ(r.triggering_category, Category::high);
}

TEST(Decide, NoTestingPolicyIsDomainError) {
    const ReleasePolicy none{0.0, PolicyCase::no_testing, 50.0, std::nullopt};
    EXPECT_THROW(decide(none, {}, {}), DomainError);
}

TEST(Decide, DuplicateCategoryRejected) {
    const std::vector<CategoryActuals> a{{Category::high, {}}, {Category::high, {}}};
    EXPECT_THROW(decide(kPolicy, a, {0.3}), InputError);
}
