#pragma once

// Expected cost of testing plus operation, the cost-ratio threshold, the
// closed-form two-case optimal release policy for the Goel-Okumoto model,
// the multi-version cost extension and a numeric optimizer for the rest.

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "srgm/nhpp.hpp"

namespace srgm {

struct CostParams {
    double c1 = 0.0;           ///< cost per fault fixed during testing
    double c2 = 0.0;           ///< cost per fault fixed in operation, > c1
    double c3 = 0.0;           ///< testing cost per unit time
    double c4 = 0.0;           ///< cost per previous-version fault surfacing during testing
    double lifecycle_t = 0.0;  ///< software life-cycle length
};

/// Throws InputError unless c1, c3, c4 >= 0, lifecycle_t > 0, c2 > c1 and
/// all values are finite.
void validate(const CostParams& costs);

enum class PolicyCase { no_testing, interior, full_lifecycle };

std::string_view to_string(PolicyCase c);
PolicyCase parse_policy_case(std::string_view name);

struct ReleasePolicy {
    double t_star = 0.0;
    PolicyCase policy_case = PolicyCase::no_testing;
    double expected_cost_at_t_star = 0.0;  ///< C0 used by the cost deviation
    std::optional<double> t0;              ///< unconstrained optimum, when finite
};

/// The previous version's mean-value function; nullopt is n(T) == 0.
using PreviousVersion = std::optional<ModelParams>;

/// c1 m(T) + c2 [m(t) - m(T)] + c3 T for any model. DomainError when T is
/// outside [0, lifecycle_t].
double expected_cost(const ModelParams& model, const CostParams& costs, double release_time);

/// c3 / (c2 - c1). InputError when c2 <= c1.
double cost_ratio(const CostParams& costs);

/// Closed-form policy: T0 = ln(ab / Cr) / b and T* = min(T0, t) when ab > Cr,
/// otherwise T* = 0.
ReleasePolicy optimal_release_time(const GoParams& go, const CostParams& costs);

/// Multi-version cost
///   c1 m(T) + c2 [m(t) - m(T) - n(T)] + c3 T + c4 n(T),
/// evaluated as the single-version cost plus (c4 - c2) n(T). The rewrite is
/// algebraically identical and makes the prev == 0 and c4 == c2 cases
/// reproduce expected_cost bit for bit.
///
/// Note: n(T) is subtracted from the current version's operational residual
/// as written in the original model; callers comparing versions should keep
/// that coupling in mind.
double expected_cost_multiversion(const ModelParams& current, const PreviousVersion& previous,
                                  const CostParams& costs, double release_time);

/// Cost evaluated over a batch of release times.
using BatchCost = std::function<void(std::span<const double>, std::span<double>)>;

/// Vectorized cost function; multiversion selects the extended expression.
BatchCost make_cost_function(const ModelParams& current, const PreviousVersion& previous,
                             const CostParams& costs, bool multiversion);

/// Adapts a scalar cost function.
BatchCost make_cost_function(std::function<double(double)> cost);

/// Grid scan (1000 points) then golden-section refinement around the best
/// grid point to 1e-6; the endpoints 0 and lifecycle_t are always candidates
/// and the smallest T wins ties. NumericError on non-finite costs.
ReleasePolicy optimize_release_numeric(const BatchCost& cost, double lifecycle_t);

struct CostCurve {
    std::vector<double> release_times;
    std::vector<double> costs;
};

/// `points` equally spaced samples of the cost over [0, lifecycle_t].
CostCurve cost_curve(const BatchCost& cost, double lifecycle_t, std::size_t points = 1000);

}  // namespace srgm
