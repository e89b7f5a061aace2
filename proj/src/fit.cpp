#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "srgm/error.hpp"
#include "srgm/nhpp.hpp"

namespace srgm {
namespace {

constexpr double kMinIncrement = 1e-12;
// Log-parameters beyond this are treated as a diverging fit.
constexpr double kLogBound = 50.0;
constexpr double kMinCurvature = 1e-6;

using Point = std::array<double, 2>;

ModelParams from_log(ModelKind kind, const Point& x) {
    const double p0 = std::exp(x[0]);
    const double p1 = std::exp(x[1]);
    switch (kind) {
        case ModelKind::go:
            return GoParams{p0, p1};
        case ModelKind::ohba:
            return OhbaParams{p0, p1};
        case ModelKind::mo:
            return MusaOkumotoParams{p0, p1};
    }
    throw InputError("unknown model kind");
}

struct Objective {
    ModelKind kind;
    const FaultDataset* data;

    double operator()(const Point& x) const {
        if (std::abs(x[0]) > kLogBound || std::abs(x[1]) > kLogBound) {
            return std::numeric_limits<double>::infinity();
        }
        const double ll = log_likelihood(from_log(kind, x), *data);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
    }
};

struct SimplexResult {
    Point best;
    double value;
    bool converged;
    int iterations;
};

// Nelder-Mead with the standard reflection/expansion/contraction/shrink
// coefficients (1, 2, 1/2, 1/2).
SimplexResult nelder_mead(const Objective& f, Point start, const FitOptions& options) {
    std::array<Point, 3> v{start, start, start};
    v[1][0] += 0.5;
    v[2][1] += 0.5;
    std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};

    auto order = [&] {
        std::array<int, 3> idx{0, 1, 2};
        std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return fv[i] < fv[j]; });
        const auto v_copy = v;
        const auto f_copy = fv;
        for (int i = 0; i < 3; ++i) {
            v[i] = v_copy[idx[i]];
            fv[i] = f_copy[idx[i]];
        }
    };
    auto along = [](const Point& c, const Point& w, double t) {
        return Point{c[0] + t * (w[0] - c[0]), c[1] + t * (w[1] - c[1])};
    };

    int it = 0;
    bool converged = false;
    for (; it < options.max_iterations; ++it) {
        order();
        double size = 0.0;
        for (int i = 1; i < 3; ++i) {
            size = std::max({size, std::abs(v[i][0] - v[0][0]), std::abs(v[i][1] - v[0][1])});
        }
        const double spread = std::abs(fv[2] - fv[0]);
        if (std::isfinite(fv[0]) && size < options.tolerance &&
            spread <= 1e-12 * (1.0 + std::abs(fv[0]))) {
            converged = true;
            break;
        }

        const Point centroid{(v[0][0] + v[1][0]) / 2.0, (v[0][1] + v[1][1]) / 2.0};
        const Point reflected = along(centroid, v[2], -1.0);
        const double fr = f(reflected);
        if (fr < fv[0]) {
            const Point expanded = along(centroid, v[2], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                v[2] = expanded;
                fv[2] = fe;
            } else {
                v[2] = reflected;
                fv[2] = fr;
            }
            continue;
        }
        if (fr < fv[1]) {
            v[2] = reflected;
            fv[2] = fr;
            continue;
        }
        const bool outside = fr < fv[2];
        const Point contracted = along(centroid, outside ? reflected : v[2], 0.5);
        const double fc = f(contracted);
        if (fc < (outside ? fr : fv[2])) {
            v[2] = contracted;
            fv[2] = fc;
            continue;
        }
        for (int i = 1; i < 3; ++i) {
            v[i] = along(v[0], v[i], 0.5);
            fv[i] = f(v[i]);
        }
    }
    order();
    return {v[0], fv[0], converged, it};
}

// Product of the shape parameter and the observation span. Below this the
// fitted curve is linear to within about 1e-6 over the data, so the scale is
// not identified and the likelihood keeps rising towards the boundary.
double curvature(const ModelParams& p, double horizon) {
    return std::visit(
        [horizon](const auto& q) -> double {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, GoParams>) return q.b * horizon;
            if constexpr (std::is_same_v<T, OhbaParams>) return q.phi * horizon;
            if constexpr (std::is_same_v<T, MusaOkumotoParams>) return q.lambda0 * q.theta * horizon;
        },
        p);
}

std::array<Point, 3> starting_points(const FaultDataset& data, ModelKind kind) {
    const double faults = static_cast<double>(data.total_faults());
    const double horizon = data.last_time();
    const std::array<double, 3> rate_scale{1.0, 1.0 / 3.0, 3.0};
    std::array<Point, 3> starts{};
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (kind == ModelKind::mo) {
            starts[i] = {std::log(rate_scale[i] * 1.2 * faults / horizon), std::log(1.0 / faults)};
        } else {
            starts[i] = {std::log(1.2 * faults), std::log(rate_scale[i] / horizon)};
        }
    }
    return starts;
}

}  // namespace

double log_likelihood(const ModelParams& p, const FaultDataset& data) {
    const auto& obs = data.observations();
    std::vector<double> times(obs.size());
    std::transform(obs.begin(), obs.end(), times.begin(), [](const auto& o) { return o.time; });
    std::vector<double> m(obs.size());
    mean_values(p, times, m);

    double ll = 0.0;
    double prev_m = 0.0;
    std::uint64_t prev_k = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!std::isfinite(m[i])) return -std::numeric_limits<double>::infinity();
        const double dm = std::max(m[i] - prev_m, kMinIncrement);
        const double k = static_cast<double>(obs[i].cumulative_faults - prev_k);
        ll += k * std::log(dm) - dm - std::lgamma(k + 1.0);
        prev_m = m[i];
        prev_k = obs[i].cumulative_faults;
    }
    return ll;
}

FitResult fit_model(const FaultDataset& data, ModelKind kind, const FitOptions& options) {
    if (data.size() < 3) throw InputError("fitting requires at least 3 observations");
    if (data.total_faults() == 0) throw InputError("fitting requires at least one observed fault");
    if (options.max_iterations <= 0 || !(options.tolerance > 0.0)) {
        throw InputError("fit options require positive iteration cap and tolerance");
    }

    const Objective objective{kind, &data};
    const auto starts = starting_points(data, kind);

    // Starts are evaluated in index order; strict improvement is required to
    // displace an earlier start.
    SimplexResult best{};
    int best_index = -1;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        const SimplexResult r = nelder_mead(objective, starts[i], options);
        if (best_index < 0 || r.value < best.value) {
            best = r;
            best_index = static_cast<int>(i);
        }
    }

    FitResult result{from_log(kind, best.best), -best.value, best.converged, best.iterations,
                     best_index};
    const bool inside = std::abs(best.best[0]) < kLogBound - 1.0 &&
                        std::abs(best.best[1]) < kLogBound - 1.0;
    if (!inside || !std::isfinite(best.value)) result.converged = false;
    if (!(curvature(result.params, data.last_time()) > kMinCurvature)) result.converged = false;
    if (result.converged) {
        try {
            validate(result.params);
        } catch (const InputError&) {
            result.converged = false;
        }
    }
    return result;
}

}  // namespace srgm
