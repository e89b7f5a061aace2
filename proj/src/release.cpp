#include "srgm/release.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "srgm/error.hpp"
#include "srgm/kernels.hpp"

namespace srgm {
namespace {

constexpr std::size_t kGridPoints = 1000;
constexpr double kGoldenTolerance = 1e-6;

void require_release_time(const CostParams& costs, double release_time) {
    if (!(release_time >= 0.0 && release_time <= costs.lifecycle_t)) {
        throw DomainError("release time " + std::to_string(release_time) +
                          " outside [0, " + std::to_string(costs.lifecycle_t) + "]");
    }
}

double single_version(const CostParams& k, double m, double m_life, double release_time) {
    double c = k.c1 * m + k.c2 * (m_life - m);
    return c + k.c3 * release_time;
}

double evaluate(const BatchCost& cost, double release_time) {
    const double t[1] = {release_time};
    double out[1] = {0.0};
    cost(t, out);
    if (!std::isfinite(out[0])) {
        throw NumericError("cost is not finite at T = " + std::to_string(release_time));
    }
    return out[0];
}

PolicyCase classify(double t_star, double lifecycle_t) {
    if (t_star == 0.0) return PolicyCase::no_testing;
    if (t_star >= lifecycle_t) return PolicyCase::full_lifecycle;
    return PolicyCase::interior;
}

std::vector<double> grid(double lifecycle_t, std::size_t points) {
    std::vector<double> t(points);
    for (std::size_t i = 0; i < points; ++i) {
        t[i] = lifecycle_t * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    t.back() = lifecycle_t;
    return t;
}

}  // namespace

void validate(const CostParams& k) {
    for (double v : {k.c1, k.c2, k.c3, k.c4, k.lifecycle_t}) {
        if (!std::isfinite(v)) throw InputError("cost parameters must be finite");
    }
    if (k.c1 < 0.0 || k.c3 < 0.0 || k.c4 < 0.0) {
        throw InputError("cost parameters c1, c3 and c4 must be nonnegative");
    }
    if (!(k.lifecycle_t > 0.0)) throw InputError("life-cycle length must be positive");
    if (!(k.c2 > k.c1)) throw InputError("operational fix cost c2 must exceed testing fix cost c1");
}

std::string_view to_string(PolicyCase c) {
    switch (c) {
        case PolicyCase::no_testing:
            return "NO_TESTING";
        case PolicyCase::interior:
            return "INTERIOR";
        case PolicyCase::full_lifecycle:
            return "FULL_LIFECYCLE";
    }
    return "UNKNOWN";
}

PolicyCase parse_policy_case(std::string_view name) {
    for (PolicyCase c : {PolicyCase::no_testing, PolicyCase::interior, PolicyCase::full_lifecycle}) {
        if (name == to_string(c)) return c;
    }
    throw InputError("unknown policy case '" + std::string(name) + "'");
}

double expected_cost(const ModelParams& model, const CostParams& costs, double release_time) {
    validate(costs);
    require_release_time(costs, release_time);
    return single_version(costs, mean_value(model, release_time),
                          mean_value(model, costs.lifecycle_t), release_time);
}

double cost_ratio(const CostParams& costs) {
    if (!(costs.c2 > costs.c1)) {
        throw InputError("cost ratio undefined: c2 must exceed c1");
    }
    return costs.c3 / (costs.c2 - costs.c1);
}

ReleasePolicy optimal_release_time(const GoParams& go, const CostParams& costs) {
    validate(costs);
    validate(ModelParams{go});
    const double ratio = cost_ratio(costs);
    const double ab = go.a * go.b;

    ReleasePolicy policy;
    if (ab > ratio) {
        const double t0 = ratio > 0.0 ? std::log(ab / ratio) / go.b
                                      : std::numeric_limits<double>::infinity();
        if (std::isfinite(t0)) policy.t0 = t0;
        if (t0 < costs.lifecycle_t) {
            policy.t_star = t0;
            policy.policy_case = PolicyCase::interior;
        } else {
            policy.t_star = costs.lifecycle_t;
            policy.policy_case = PolicyCase::full_lifecycle;
        }
    } else {
        policy.t_star = 0.0;
        policy.policy_case = PolicyCase::no_testing;
    }
    policy.expected_cost_at_t_star = expected_cost(go, costs, policy.t_star);
    return policy;
}

double expected_cost_multiversion(const ModelParams& current, const PreviousVersion& previous,
                                  const CostParams& costs, double release_time) {
    const double base = expected_cost(current, costs, release_time);
    if (!previous) return base;
    return base + (costs.c4 - costs.c2) * mean_value(*previous, release_time);
}

BatchCost make_cost_function(const ModelParams& current, const PreviousVersion& previous,
                             const CostParams& costs, bool multiversion) {
    validate(costs);
    validate(current);
    if (previous) validate(*previous);
    kernels::CostCoefficients k{costs.c1, costs.c2, costs.c3, costs.c4 - costs.c2,
                                mean_value(current, costs.lifecycle_t)};
    const PreviousVersion prev = multiversion ? previous : std::nullopt;
    return [current, prev, k, costs](std::span<const double> t, std::span<double> out) {
        for (double ti : t) require_release_time(costs, ti);
        std::vector<double> m(t.size());
        mean_values(current, t, m);
        std::vector<double> n;
        if (prev) {
            n.resize(t.size());
            mean_values(*prev, t, n);
        }
        kernels::combine_cost(k, t, m, n, out);
    };
}

BatchCost make_cost_function(std::function<double(double)> cost) {
    return [cost = std::move(cost)](std::span<const double> t, std::span<double> out) {
        if (t.size() != out.size()) throw InputError("cost batch size mismatch");
        for (std::size_t i = 0; i < t.size(); ++i) out[i] = cost(t[i]);
    };
}

ReleasePolicy optimize_release_numeric(const BatchCost& cost, double lifecycle_t) {
    if (!(lifecycle_t > 0.0) || !std::isfinite(lifecycle_t)) {
        throw InputError("life-cycle length must be positive and finite");
    }
    const std::vector<double> t = grid(lifecycle_t, kGridPoints);
    std::vector<double> c(t.size());
    cost(t, c);
    std::size_t best = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c[i])) {
            throw NumericError("cost is not finite at T = " + std::to_string(t[i]));
        }
        if (c[i] < c[best]) best = i;
    }

    // Golden-section search on the bracket around the best grid point.
    double lo = t[best == 0 ? 0 : best - 1];
    double hi = t[best + 1 < t.size() ? best + 1 : best];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = evaluate(cost, x1);
    double f2 = evaluate(cost, x2);
    while (hi - lo > kGoldenTolerance) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = evaluate(cost, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = evaluate(cost, x2);
        }
    }
    const double refined = f1 <= f2 ? x1 : x2;

    struct Candidate {
        double t;
        double cost;
    };
    const Candidate candidates[] = {
        {0.0, c.front()},
        {t[best], c[best]},
        {refined, evaluate(cost, refined)},
        {lifecycle_t, c.back()},
    };
    Candidate winner = candidates[0];
    for (const Candidate& cand : candidates) {
        if (cand.cost < winner.cost || (cand.cost == winner.cost && cand.t < winner.t)) {
            winner = cand;
        }
    }

    ReleasePolicy policy;
    policy.t_star = winner.t;
    policy.expected_cost_at_t_star = winner.cost;
    policy.policy_case = classify(winner.t, lifecycle_t);
    return policy;
}

CostCurve cost_curve(const BatchCost& cost, double lifecycle_t, std::size_t points) {
    if (points < 2) throw InputError("cost curve needs at least two points");
    CostCurve curve;
    curve.release_times = grid(lifecycle_t, points);
    curve.costs.resize(points);
    cost(curve.release_times, curve.costs);
    for (std::size_t i = 0; i < points; ++i) {
        if (!std::isfinite(curve.costs[i])) {
            throw NumericError("cost is not finite at T = " +
                               std::to_string(curve.release_times[i]));
        }
    }
    return curve;
}

}  // namespace srgm
