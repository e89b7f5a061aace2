#include "srgm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srgm/error.hpp"
#include "srgm/kernels.hpp"

namespace srgm {
namespace {

void require_unit(double v, const char* field, const std::string& id) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InputError("module '" + id + "': " + field + " must lie in [0, 1]");
    }
}

}  // namespace

void validate(const ModuleRecord& m) {
    if (m.id.empty()) throw InputError("module id must not be empty");
    if (m.procedure_ccs.empty()) {
        throw InputError("module '" + m.id + "': at least one procedure complexity is required");
    }
    if (std::any_of(m.procedure_ccs.begin(), m.procedure_ccs.end(),
                    [](std::uint32_t cc) { return cc == 0; })) {
        throw InputError("module '" + m.id + "': procedure complexities must be positive");
    }
    if (m.lloc == 0) throw InputError("module '" + m.id + "': lloc must be positive");
    if (std::find(m.depends_on.begin(), m.depends_on.end(), m.id) != m.depends_on.end()) {
        throw InputError("module '" + m.id + "' depends on itself");
    }
    if (!(m.production_hours >= 0.0) || !std::isfinite(m.production_hours)) {
        throw InputError("module '" + m.id + "': production_hours must be nonnegative");
    }
    if (!(m.size_score >= 0.0) || !std::isfinite(m.size_score)) {
        throw InputError("module '" + m.id + "': size_score must be nonnegative");
    }
    require_unit(m.programming_path_score, "programming_path_score", m.id);
    require_unit(m.reporter_skill_score, "reporter_skill_score", m.id);
    require_unit(m.weight_priority_score, "weight_priority_score", m.id);
    require_unit(m.reuse_fraction, "reuse_fraction", m.id);
    for (double calib : {m.coupling.calib_k, m.coupling.calib_a, m.coupling.calib_b,
                         m.coupling.calib_c}) {
        if (!(calib > 0.0) || !std::isfinite(calib)) {
            throw InputError("module '" + m.id + "': coupling calibration constants must be positive");
        }
    }
    if (m.maintenance && m.maintenance->mt == 0) {
        throw InputError("module '" + m.id + "': maintenance module count must be >= 1");
    }
    if (m.historical_faults && !(*m.historical_faults >= 0.0)) {
        throw InputError("module '" + m.id + "': historical_faults must be nonnegative");
    }
}

std::uint64_t total_cyclomatic_complexity(std::span<const std::uint32_t> ccs) {
    if (ccs.empty()) throw InputError("total cyclomatic complexity needs at least one procedure");
    const std::uint64_t sum = std::accumulate(ccs.begin(), ccs.end(), std::uint64_t{0});
    return sum - ccs.size() + 1;
}

double decision_density(std::uint64_t cc, std::uint64_t lloc) {
    if (lloc == 0) throw DomainError("decision density undefined for zero logical lines");
    return static_cast<double>(cc) / static_cast<double>(lloc);
}

double coupling(const CouplingInputs& in) {
    const double denom = in.di + in.calib_a * in.ci + in.do_ + in.calib_b * in.co + in.gd +
                         in.calib_c * in.gc + in.w + in.r;
    if (!(denom > 0.0)) throw InputError("coupling undefined: module has no connections");
    const double c = 1.0 - in.calib_k / denom;
    return std::clamp(c, 0.0, std::nextafter(1.0, 0.0));
}

double layout_cost(std::span<const LayoutTransition> transitions) {
    if (transitions.empty()) throw InputError("layout cost needs at least one transition");
    std::vector<double> freq(transitions.size());
    std::vector<double> cost(transitions.size());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        if (!(transitions[i].frequency >= 0.0) || !(transitions[i].cost >= 0.0)) {
            throw InputError("layout transitions need nonnegative frequency and cost");
        }
        freq[i] = transitions[i].frequency;
        cost[i] = transitions[i].cost;
    }
    return kernels::dot(freq, cost);
}

double layout_appropriateness(double optimal_cost, double proposed_cost) {
    if (!(optimal_cost > 0.0)) throw InputError("optimal layout cost must be positive");
    if (!(proposed_cost > 0.0)) throw InputError("proposed layout cost must be positive");
    return 100.0 * optimal_cost / proposed_cost;
}

double software_maturity_index(const MaintenanceCounts& c) {
    if (c.mt == 0) throw InputError("software maturity index needs at least one module");
    const double churn = static_cast<double>(c.fa) + c.fc + c.fd;
    return (static_cast<double>(c.mt) - churn) / c.mt;
}

const std::array<const char*, kFeatureCount>& feature_names() {
    static const std::array<const char*, kFeatureCount> names{
        "production_hours",      "decision_density", "programming_path", "size",
        "reporter_skill",        "weight_priority",  "non_reuse",        "coupling",
        "layout_inefficiency",   "immaturity",
    };
    return names;
}

RawFeatures raw_features(const ModuleRecord& m) {
    validate(m);
    const auto tcc = total_cyclomatic_complexity(m.procedure_ccs);
    double layout = 0.0;
    if (m.layout) {
        const double proposed = layout_cost(m.layout->transitions);
        layout = 1.0 - layout_appropriateness(m.layout->optimal_layout_cost, proposed) / 100.0;
    }
    const double immaturity = m.maintenance ? 1.0 - software_maturity_index(*m.maintenance) : 0.0;
    return {
        m.production_hours,
        decision_density(tcc, m.lloc),
        m.programming_path_score,
        m.size_score,
        m.reporter_skill_score,
        m.weight_priority_score,
        1.0 - m.reuse_fraction,
        coupling(m.coupling),
        layout,
        immaturity,
    };
}

FeatureRanges project_ranges(std::span<const ModuleRecord> modules) {
    if (modules.empty()) throw InputError("feature ranges need at least one module");
    FeatureRanges r;
    r.min = raw_features(modules.front());
    r.max = r.min;
    for (const auto& m : modules.subspan(1)) {
        const RawFeatures f = raw_features(m);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            r.min[i] = std::min(r.min[i], f[i]);
            r.max[i] = std::max(r.max[i], f[i]);
        }
    }
    return r;
}

RawFeatures feature_vector(const ModuleRecord& record, const FeatureRanges& ranges) {
    const RawFeatures raw = raw_features(record);
    RawFeatures scaled{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const double span = ranges.max[i] - ranges.min[i];
        scaled[i] = span > 0.0 ? std::clamp((raw[i] - ranges.min[i]) / span, 0.0, 1.0) : 0.5;
    }
    return scaled;
}

}  // namespace srgm
