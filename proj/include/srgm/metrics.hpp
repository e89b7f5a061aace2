#pragma once

// Per-module prioritization metrics and the normalized feature vector fed
// to the priority network. Metric inputs are declared, never extracted from
// source code.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srgm {

struct CouplingInputs {
    std::uint32_t di = 0;   ///< input data parameters
    std::uint32_t ci = 0;   ///< input control parameters
    std::uint32_t do_ = 0;  ///< output data parameters
    std::uint32_t co = 0;   ///< output control parameters
    std::uint32_t gd = 0;   ///< globals used as data
    std::uint32_t gc = 0;   ///< globals used as control
    std::uint32_t w = 0;    ///< fan-out
    std::uint32_t r = 0;    ///< fan-in
    double calib_k = 1.0;
    double calib_a = 1.0;
    double calib_b = 1.0;
    double calib_c = 1.0;
};

struct LayoutTransition {
    double frequency = 0.0;
    double cost = 0.0;
};

struct LayoutInputs {
    std::vector<LayoutTransition> transitions;
    double optimal_layout_cost = 0.0;
};

struct MaintenanceCounts {
    std::uint32_t mt = 0;  ///< modules in the current release
    std::uint32_t fc = 0;  ///< changed
    std::uint32_t fa = 0;  ///< added
    std::uint32_t fd = 0;  ///< deleted since the preceding release
};

struct ModuleRecord {
    std::string id;
    std::string name;
    std::vector<std::string> depends_on;
    std::vector<std::uint32_t> procedure_ccs;
    std::uint32_t lloc = 0;
    CouplingInputs coupling;
    std::optional<LayoutInputs> layout;
    std::optional<MaintenanceCounts> maintenance;
    double production_hours = 0.0;
    double programming_path_score = 0.0;  ///< [0, 1]
    double size_score = 0.0;
    double reporter_skill_score = 0.0;    ///< [0, 1]
    double weight_priority_score = 0.0;   ///< [0, 1]
    double reuse_fraction = 0.0;          ///< [0, 1]
    bool tested = false;
    std::optional<double> historical_faults;  ///< training target source
};

/// Field-level checks on one record (ranges, self-dependency, positive LLOC).
/// Throws InputError naming the module.
void validate(const ModuleRecord& record);

/// Sum(CC) - Count(CC) + 1.
std::uint64_t total_cyclomatic_complexity(std::span<const std::uint32_t> ccs);

double decision_density(std::uint64_t cc, std::uint64_t lloc);

/// 1 - k / (di + a ci + do + b co + gd + c gc + w + r), clamped to [0, 1).
double coupling(const CouplingInputs& in);

/// Sum of frequency * cost over the transitions.
double layout_cost(std::span<const LayoutTransition> transitions);

/// 100 * optimal / proposed.
double layout_appropriateness(double optimal_cost, double proposed_cost);

/// [M_T - (F_a + F_c + F_d)] / M_T.
double software_maturity_index(const MaintenanceCounts& counts);

inline constexpr std::size_t kFeatureCount = 10;
using RawFeatures = std::array<double, kFeatureCount>;

/// Names in feature order.
const std::array<const char*, kFeatureCount>& feature_names();

/// Unscaled features in the fixed order: production hours, decision density,
/// programming path, size, reporter skill, weight priority, 1 - reuse,
/// coupling, 1 - LA/100 (0 without layout), 1 - SMI (0 without maintenance).
RawFeatures raw_features(const ModuleRecord& record);

struct FeatureRanges {
    RawFeatures min{};
    RawFeatures max{};
};

/// Per-feature min and max over a project. InputError for an empty project.
FeatureRanges project_ranges(std::span<const ModuleRecord> modules);

/// Min-max scaled features; a feature that is constant over the project maps
/// to 0.5.
RawFeatures feature_vector(const ModuleRecord& record, const FeatureRanges& ranges);

}  // namespace srgm
