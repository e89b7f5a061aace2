#include <cmath>

#include "table.hpp"

namespace srgm::kernels::detail {
namespace {

void exp_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void expm1_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::expm1(x[i]);
}

void log1p_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log1p(x[i]);
}

void sigmoid_scalar(double gain, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (1.0 + std::exp(-gain * x[i]));
}

void go_scalar(double a, double b, const double* t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * -std::expm1(-b * t[i]);
}

void ohba_scalar(double scale, double phi, const double* t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = phi * t[i];
        out[i] = scale * (-std::expm1(-u) - u * std::exp(-u));
    }
}

void mo_scalar(double lambda0, double theta, const double* t, double* out, std::size_t n) {
    const double rate = lambda0 * theta;
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log1p(rate * t[i]) / theta;
}

void combine_cost_scalar(const CostCoefficients& k, const double* release_times,
                         const double* m, const double* prev, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double c = k.c1 * m[i] + k.c2 * (k.m_life - m[i]);
        c = c + k.c3 * release_times[i];
        if (prev != nullptr) c = c + k.prev_coeff * prev[i];
        out[i] = c;
    }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) lane[i % 4] = lane[i % 4] + x[i] * y[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

constexpr KernelTable kScalar{
    Isa::scalar,   exp_scalar,          expm1_scalar, log1p_scalar, sigmoid_scalar,
    go_scalar,     ohba_scalar,         mo_scalar,    combine_cost_scalar,
    axpy_scalar,   dot_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace srgm::kernels::detail
