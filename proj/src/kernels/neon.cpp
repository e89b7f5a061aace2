// AArch64 only. Transcendental kernels reuse the scalar reference; the
// linear kernels keep the same operation order as the scalar code.

#include <arm_neon.h>

#include "table.hpp"

namespace srgm::kernels::detail {
namespace {

void combine_cost_neon(const CostCoefficients& k, const double* release_times, const double* m,
                       const double* prev, double* out, std::size_t n) {
    const float64x2_t c1 = vdupq_n_f64(k.c1), c2 = vdupq_n_f64(k.c2), c3 = vdupq_n_f64(k.c3);
    const float64x2_t pc = vdupq_n_f64(k.prev_coeff), life = vdupq_n_f64(k.m_life);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t mv = vld1q_f64(m + i);
        float64x2_t c = vaddq_f64(vmulq_f64(c1, mv), vmulq_f64(c2, vsubq_f64(life, mv)));
        c = vaddq_f64(c, vmulq_f64(c3, vld1q_f64(release_times + i)));
        if (prev != nullptr) c = vaddq_f64(c, vmulq_f64(pc, vld1q_f64(prev + i)));
        vst1q_f64(out + i, c);
    }
    for (; i < n; ++i) {
        double c = k.c1 * m[i] + k.c2 * (k.m_life - m[i]);
        c = c + k.c3 * release_times[i];
        if (prev != nullptr) c = c + k.prev_coeff * prev[i];
        out[i] = c;
    }
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double dot_neon(const double* x, const double* y, std::size_t n) {
    // Two registers emulate the four reference lanes.
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    double lane[4];
    vst1q_f64(lane, lo);
    vst1q_f64(lane + 2, hi);
    for (; i < n; ++i) lane[i % 4] = lane[i % 4] + x[i] * y[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

const KernelTable* neon_table() {
    static const KernelTable table = [] {
        KernelTable t = scalar_table();
        t.isa = Isa::neon;
        t.combine_cost = combine_cost_neon;
        t.axpy = axpy_neon;
        t.dot = dot_neon;
        return t;
    }();
    return &table;
}

}  // namespace srgm::kernels::detail
