#include "srgm/nhpp.hpp"

#include <cmath>
#include <string>

#include "srgm/error.hpp"
#include "srgm/kernels.hpp"

namespace srgm {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_time(double t) {
    if (!(t >= 0.0)) throw DomainError("time must be nonnegative, got " + std::to_string(t));
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::go:
            return "go";
        case ModelKind::ohba:
            return "ohba";
        case ModelKind::mo:
            return "mo";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "go") return ModelKind::go;
    if (name == "ohba") return ModelKind::ohba;
    if (name == "mo") return ModelKind::mo;
    throw InputError("unknown model kind '" + std::string(name) + "' (expected go, ohba or mo)");
}

ModelKind kind_of(const ModelParams& params) {
    return std::visit(Overloaded{[](const GoParams&) { return ModelKind::go; },
                                 [](const OhbaParams&) { return ModelKind::ohba; },
                                 [](const MusaOkumotoParams&) { return ModelKind::mo; }},
                      params);
}

void validate(const ModelParams& params) {
    std::visit(Overloaded{
                   [](const GoParams& p) {
                       if (!positive_finite(p.a) || !positive_finite(p.b))
                           throw InputError("GO parameters require a > 0 and b > 0");
                   },
                   [](const OhbaParams& p) {
                       if (!positive_finite(p.n) || !positive_finite(p.phi))
                           throw InputError("Ohba parameters require n > 0 and phi > 0");
                   },
                   [](const MusaOkumotoParams& p) {
                       if (!positive_finite(p.lambda0) || !positive_finite(p.theta))
                           throw InputError(
                               "Musa-Okumoto parameters require lambda0 > 0 and theta > 0");
                   }},
               params);
}

double mean_value(const GoParams& p, double t) {
    require_time(t);
    return p.a * -std::expm1(-p.b * t);
}

double mean_value(const OhbaParams& p, double t) {
    require_time(t);
    const double u = p.phi * t;
    if (std::isinf(u)) return p.n;
    return p.n * (-std::expm1(-u) - u * std::exp(-u));
}

double mean_value(const MusaOkumotoParams& p, double t) {
    require_time(t);
    return std::log1p(p.lambda0 * p.theta * t) / p.theta;
}

double mean_value(const ModelParams& p, double t) {
    return std::visit([t](const auto& m) { return mean_value(m, t); }, p);
}

void mean_values(const ModelParams& p, std::span<const double> t, std::span<double> out) {
    for (double ti : t) require_time(ti);
    std::visit(Overloaded{[&](const GoParams& m) { kernels::mean_value_go(m.a, m.b, t, out); },
                          [&](const OhbaParams& m) {
                              kernels::mean_value_ohba(m.n, m.phi, t, out);
                          },
                          [&](const MusaOkumotoParams& m) {
                              kernels::mean_value_mo(m.lambda0, m.theta, t, out);
                          }},
               p);
}

double intensity(const ModelParams& p, double t) {
    require_time(t);
    return std::visit(
        Overloaded{[t](const GoParams& m) { return m.a * m.b * std::exp(-m.b * t); },
                   [t](const OhbaParams& m) {
                       if (std::isinf(t)) return 0.0;
                       return m.n * m.phi * m.phi * t * std::exp(-m.phi * t);
                   },
                   [t](const MusaOkumotoParams& m) {
                       return m.lambda0 / (m.lambda0 * m.theta * t + 1.0);
                   }},
        p);
}

double intensity_supremum(const ModelParams& p, double horizon) {
    return std::visit(Overloaded{[](const GoParams& m) { return m.a * m.b; },
                                 [horizon](const OhbaParams& m) {
                                     // peak at t = 1/phi
                                     if (horizon * m.phi < 1.0) return intensity(m, horizon);
                                     return m.n * m.phi / std::exp(1.0);
                                 },
                                 [](const MusaOkumotoParams& m) { return m.lambda0; }},
                      p);
}

FaultDataset::FaultDataset(std::vector<FaultObservation> observations, std::string time_unit)
    : observations_(std::move(observations)), time_unit_(std::move(time_unit)) {
    if (observations_.empty()) throw InputError("fault dataset is empty");
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& o = observations_[i];
        if (!std::isfinite(o.time)) {
            throw InputError("observation " + std::to_string(i + 1) + ": time is not finite");
        }
        if (i == 0) {
            if (!(o.time > 0.0)) throw InputError("observation 1: time must be > 0");
            continue;
        }
        const auto& prev = observations_[i - 1];
        if (!(o.time > prev.time)) {
            throw InputError("observation " + std::to_string(i + 1) +
                             ": times must be strictly increasing");
        }
        if (o.cumulative_faults < prev.cumulative_faults) {
            throw InputError("observation " + std::to_string(i + 1) +
                             ": cumulative faults must be nondecreasing");
        }
    }
}

FaultDataset FaultDataset::from_event_times(std::span<const double> events, double horizon,
                                            std::size_t intervals, std::string time_unit) {
    if (intervals == 0) throw InputError("binning requires at least one interval");
    if (!(horizon > 0.0)) throw DomainError("binning horizon must be positive");
    std::vector<FaultObservation> obs;
    obs.reserve(intervals);
    std::size_t idx = 0;
    for (std::size_t i = 1; i <= intervals; ++i) {
        const double edge = i == intervals ? horizon
                                           : horizon * static_cast<double>(i) /
                                                 static_cast<double>(intervals);
        while (idx < events.size() && events[idx] <= edge) ++idx;
        obs.push_back({edge, static_cast<std::uint64_t>(idx)});
    }
    return FaultDataset(std::move(obs), std::move(time_unit));
}

}  // namespace srgm
