#pragma once

// NHPP software reliability growth models: mean-value functions, failure
// intensities, grouped-data maximum-likelihood fitting and a thinning
// simulator used as a test oracle.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace srgm {

/// Goel-Okumoto exponential model, m(t) = a(1 - e^{-bt}).
struct GoParams {
    double a = 0.0;  ///< expected eventual number of faults
    double b = 0.0;  ///< per-fault detection rate
};

/// Ohba delayed S-shaped model, m(t) = n[1 - (1 + phi t)e^{-phi t}].
struct OhbaParams {
    double n = 0.0;
    double phi = 0.0;
};

/// Musa-Okumoto logarithmic Poisson model, m(t) = ln(lambda0 theta t + 1) / theta.
struct MusaOkumotoParams {
    double lambda0 = 0.0;  ///< initial failure intensity
    double theta = 0.0;    ///< intensity decay per observed fault
};

using ModelParams = std::variant<GoParams, OhbaParams, MusaOkumotoParams>;

enum class ModelKind { go, ohba, mo };

std::string_view to_string(ModelKind kind);
/// Accepts "go", "ohba", "mo"; throws InputError otherwise.
ModelKind parse_model_kind(std::string_view name);
ModelKind kind_of(const ModelParams& params);

/// Throws InputError unless both parameters are finite and positive.
void validate(const ModelParams& params);

double mean_value(const GoParams& p, double t);
double mean_value(const OhbaParams& p, double t);
double mean_value(const MusaOkumotoParams& p, double t);
double mean_value(const ModelParams& p, double t);

/// Batched mean value over many times through the SIMD kernels. Times must be
/// nonnegative.
void mean_values(const ModelParams& p, std::span<const double> t, std::span<double> out);

/// Analytic derivative of the mean value.
double intensity(const ModelParams& p, double t);

/// Supremum of the intensity over [0, horizon]. Exact for each model.
double intensity_supremum(const ModelParams& p, double horizon);

struct FaultObservation {
    double time = 0.0;
    std::uint64_t cumulative_faults = 0;
};

/// Cumulative fault counts at strictly increasing observation times.
class FaultDataset {
public:
    /// Throws InputError on: empty list, first time <= 0, non-increasing
    /// times, decreasing counts, non-finite times.
    explicit FaultDataset(std::vector<FaultObservation> observations,
                          std::string time_unit = "unspecified");

    const std::vector<FaultObservation>& observations() const { return observations_; }
    const std::string& time_unit() const { return time_unit_; }
    std::uint64_t total_faults() const { return observations_.back().cumulative_faults; }
    double last_time() const { return observations_.back().time; }
    std::size_t size() const { return observations_.size(); }

    /// Bins event times into cumulative counts at `intervals` equally spaced
    /// observation times ending at `horizon`.
    static FaultDataset from_event_times(std::span<const double> events, double horizon,
                                         std::size_t intervals,
                                         std::string time_unit = "unspecified");

private:
    std::vector<FaultObservation> observations_;
    std::string time_unit_;
};

/// Grouped-data NHPP log-likelihood
///   sum_i [k_i ln(dm_i) - dm_i - ln(k_i!)]
/// with dm_i = m(t_i) - m(t_{i-1}) clamped below at 1e-12. Non-finite
/// mean values yield -inf.
double log_likelihood(const ModelParams& p, const FaultDataset& data);

struct FitOptions {
    int max_iterations = 5000;     ///< Nelder-Mead iterations per start
    double tolerance = 1e-10;      ///< simplex size in log-parameter space
};

struct FitResult {
    ModelParams params;
    double log_likelihood = 0.0;
    bool converged = false;
    int iterations = 0;
    int best_start = 0;
};

/// Maximum-likelihood fit from three moment-style starting points.
/// Throws InputError when the dataset has fewer than 3 observations or no
/// faults. Never returns invalid parameters with converged == true.
FitResult fit_model(const FaultDataset& data, ModelKind kind, const FitOptions& options = {});

/// Event times of one NHPP realization on [0, horizon] by thinning against
/// the exact intensity supremum. Deterministic for a given seed. Throws
/// DomainError unless horizon is finite and positive.
std::vector<double> simulate_nhpp(const ModelParams& p, double horizon, std::uint64_t seed);

}  // namespace srgm
