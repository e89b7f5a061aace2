#pragma once

// Priority categories with dependency boosting, time/cost deviations,
// limiting factors and the release/continue/reject rule.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srgm/release.hpp"

namespace srgm {

/// Ordered from highest to lowest priority.
enum class Category { very_high, high, medium, low, very_low };

inline constexpr std::array<Category, 5> kCategoryOrder{
    Category::very_high, Category::high, Category::medium, Category::low, Category::very_low};

std::string_view to_string(Category c);
Category parse_category(std::string_view name);

/// Four p_k cut points; p >= cuts[0] is VERY_HIGH, p >= cuts[1] HIGH, and so
/// on, below cuts[3] is VERY_LOW.
struct CategoryThresholds {
    std::array<double, 4> cuts{0.30, 0.20, 0.10, 0.05};

    /// InputError unless strictly decreasing inside (0, 1).
    void validate() const;
    Category classify(double p) const;
};

struct ModuleWeight {
    std::string id;
    double p_k = 0.0;
};

struct ModuleNode {
    std::string id;
    std::vector<std::string> parents;  ///< modules this one depends on
    bool tested = false;
};

struct PriorityAssignment {
    std::string module_id;
    double p_k = 0.0;
    Category category = Category::very_low;
    Category base_category = Category::very_low;
    bool boosted = false;
    bool tie = false;  ///< another module has the same p_k; manual review advised

    bool operator==(const PriorityAssignment&) const = default;
};

/// Throws InputError for unknown or duplicate ids; the message of a cycle
/// error lists the cycle ("a -> b -> a").
void check_dependency_graph(std::span<const ModuleNode> graph);

/// Buckets modules by p_k, then promotes a module one category when any
/// untested parent sits in a strictly higher base category. Output is sorted
/// by p_k descending, then id ascending.
std::vector<PriorityAssignment> categorize(std::span<const ModuleWeight> weights,
                                           std::span<const ModuleNode> graph,
                                           const CategoryThresholds& thresholds = {});

struct TestOutcome {
    double actual_time = 0.0;
    double actual_cost = 0.0;
    std::uint64_t faults_found = 0;
    std::uint64_t faults_tolerated = 0;
};

/// (T_a - T*) / T*. DomainError when T* <= 0: the no-testing policy leaves the
/// deviation undefined.
double deviation_time(double actual_time, double optimal_time);

/// (C_a - C_0) / C_0. InputError when C_0 <= 0.
double deviation_cost(double actual_cost, double optimal_cost);

inline double limiting_factor(double alpha, double beta) { return alpha + beta; }

/// p (C - C*) / C* + (1 - p) (T - T*) / T*, with p the odds in favour of cost.
double weighted_limiting_factor(double cost, double optimal_cost, double time,
                                double optimal_time, double p);

enum class Recommendation { release, continue_testing, reject };

std::string_view to_string(Recommendation r);

struct Decision {
    Category category = Category::very_high;
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;             ///< alpha + beta
    double weighted_delta = 0.0;
    double cumulative_delta = 0.0;  ///< running sum of the checked delta kind
    double checked_delta = 0.0;     ///< value compared against the stringency
    double stringency = 0.0;
    Recommendation recommendation = Recommendation::release;
};

/// REJECT when delta > stringency; otherwise RELEASE if the faults found fit
/// the tolerance, else CONTINUE_TESTING. InputError for negative stringency.
Decision recommend(double delta, double stringency, const TestOutcome& outcome, Category category);

enum class StringencyMode { cumulative, per_category };
enum class DeltaKind { plain, weighted };

std::string_view to_string(StringencyMode m);
std::string_view to_string(DeltaKind k);
StringencyMode parse_stringency_mode(std::string_view s);
DeltaKind parse_delta_kind(std::string_view s);

struct DecisionSettings {
    double stringency = 0.0;
    double cost_odds = 0.5;
    StringencyMode mode = StringencyMode::cumulative;
    DeltaKind kind = DeltaKind::weighted;
};

struct CategoryActuals {
    Category category = Category::very_high;
    TestOutcome outcome;
};

struct DecisionReport {
    std::vector<Decision> decisions;  ///< VERY_HIGH first
    Recommendation overall = Recommendation::release;
    std::optional<Category> triggering_category;
};

/// Evaluates categories from VERY_HIGH down, carrying the cumulative delta.
/// DomainError when the policy is NO_TESTING.
DecisionReport decide(const ReleasePolicy& policy, std::span<const CategoryActuals> actuals,
                      const DecisionSettings& settings);

}  // namespace srgm
