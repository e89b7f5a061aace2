#pragma once

// Data-parallel inner loops shared by the model, cost and network code.
//
// Every kernel has a scalar reference implementation; AVX2 (x86-64) and NEON
// (AArch64) variants are compiled when the target supports them and chosen at
// runtime from the CPU's capabilities. The linear kernels (axpy, dot,
// combine_cost) are bit-identical across variants: dot uses a fixed
// four-lane reduction order on every ISA. Transcendental kernels agree with
// the scalar reference to a few ulp.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace srgm::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool is_available(Isa isa);

/// Best available variant, unless overridden.
Isa active_isa();

/// Forces a variant (for tests and benchmarks). Throws InputError when the
/// variant is not available. Pass nullopt to restore automatic selection.
void set_isa_override(std::optional<Isa> isa);

/// RAII wrapper around set_isa_override.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa);
    ~ScopedIsa();
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    std::optional<Isa> previous_;
};

// All kernels require out.size() == in.size() (or the matching input span);
// a size mismatch throws InputError. Output may alias input.

void exp(std::span<const double> x, std::span<double> out);
void expm1(std::span<const double> x, std::span<double> out);
/// Domain x > -1 with 1 + x a normal double.
void log1p(std::span<const double> x, std::span<double> out);
/// out[i] = 1 / (1 + exp(-gain * x[i])).
void sigmoid(double gain, std::span<const double> x, std::span<double> out);

/// Mean-value functions evaluated over a vector of times.
void mean_value_go(double a, double b, std::span<const double> t, std::span<double> out);
void mean_value_ohba(double n, double phi, std::span<const double> t, std::span<double> out);
void mean_value_mo(double lambda0, double theta, std::span<const double> t,
                   std::span<double> out);

/// Coefficients of the (multi-version) expected-cost expression
///   c1*m + c2*(m_life - m) + c3*T + prev_coeff*n
/// where prev_coeff = c4 - c2 and n is the previous version's mean value.
struct CostCoefficients {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double prev_coeff = 0.0;
    double m_life = 0.0;
};

/// prev may be empty (treated as n == 0, and the term is skipped exactly).
void combine_cost(const CostCoefficients& k, std::span<const double> release_times,
                  std::span<const double> m, std::span<const double> prev,
                  std::span<double> out);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Sum of x[i]*y[i] accumulated in four interleaved lanes, combined as
/// (l0 + l1) + (l2 + l3).
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace srgm::kernels
