#pragma once

#include <cstddef>

#include "srgm/kernels.hpp"

namespace srgm::kernels::detail {

struct KernelTable {
    Isa isa;
    void (*exp)(const double* x, double* out, std::size_t n);
    void (*expm1)(const double* x, double* out, std::size_t n);
    void (*log1p)(const double* x, double* out, std::size_t n);
    void (*sigmoid)(double gain, const double* x, double* out, std::size_t n);
    void (*mean_value_go)(double a, double b, const double* t, double* out, std::size_t n);
    void (*mean_value_ohba)(double scale, double phi, const double* t, double* out,
                            std::size_t n);
    void (*mean_value_mo)(double lambda0, double theta, const double* t, double* out,
                          std::size_t n);
    // prev may be nullptr
    void (*combine_cost)(const CostCoefficients& k, const double* release_times,
                         const double* m, const double* prev, double* out, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace srgm::kernels::detail
