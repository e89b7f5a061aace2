// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "table.hpp"

namespace srgm::kernels::detail {
namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

constexpr double kLog2e = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93145751953125e-1;
constexpr double kLn2Lo = 1.42860682030941723212e-6;

// Inverse factorials 1/13! ... 1/2!
constexpr double kInvFact[] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
};

// 2^k for int32 lanes with k + 1023 in [1, 2046].
inline __m256d pow2(__m128i k) {
    __m256i biased = _mm256_add_epi64(_mm256_cvtepi32_epi64(k), _mm256_set1_epi64x(1023));
    return _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
}

struct Reduced {
    __m256d r;       // |r| <= ln2/2
    __m128i n;       // x = n*ln2 + r
};

inline Reduced reduce(__m256d x) {
    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, set1(-746.0)), set1(709.9));
    const __m256d nf = _mm256_round_pd(_mm256_mul_pd(xc, set1(kLog2e)),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nf, set1(kLn2Hi), xc);
    r = _mm256_fnmadd_pd(nf, set1(kLn2Lo), r);
    return {r, _mm256_cvtpd_epi32(nf)};
}

// e^r - 1 on the reduced interval, Taylor to degree 13.
inline __m256d expm1_reduced(__m256d r) {
    __m256d q = set1(kInvFact[0]);
    for (int i = 1; i < 12; ++i) q = _mm256_fmadd_pd(q, r, set1(kInvFact[i]));
    return _mm256_fmadd_pd(q, _mm256_mul_pd(r, r), r);
}

inline __m256d keep_nan(__m256d result, __m256d x) {
    return _mm256_blendv_pd(result, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
}

inline __m256d exp_pd(__m256d x) {
    const Reduced red = reduce(x);
    const __m256d p = _mm256_add_pd(expm1_reduced(red.r), set1(1.0));
    // Two-step scaling keeps each factor a normal power of two.
    const __m128i half = _mm_srai_epi32(red.n, 1);
    const __m128i rest = _mm_sub_epi32(red.n, half);
    return keep_nan(_mm256_mul_pd(_mm256_mul_pd(p, pow2(half)), pow2(rest)), x);
}

inline __m256d expm1_pd(__m256d x) {
    const Reduced red = reduce(x);
    const __m256d pm1 = expm1_reduced(red.r);
    const __m128i half = _mm_srai_epi32(red.n, 1);
    const __m128i rest = _mm_sub_epi32(red.n, half);
    const __m256d scale = _mm256_mul_pd(pow2(half), pow2(rest));
    // 2^n (p + 1) - 1 == 2^n p + (2^n - 1); exact for n == 0.
    const __m256d result = _mm256_fmadd_pd(scale, pm1, _mm256_sub_pd(scale, set1(1.0)));
    return keep_nan(result, x);
}

inline __m256d log1p_pd(__m256d x) {
    const __m256d one = set1(1.0);
    const __m256d u = _mm256_add_pd(one, x);

    const __m256i bits = _mm256_castpd_si256(u);
    const __m256i biased_exp = _mm256_srli_epi64(bits, 52);
    const __m256i mant_bits =
        _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                        _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant_bits);
    const __m256d big = _mm256_cmp_pd(m, set1(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), big);

    // Small nonnegative integer to double through the 2^52 magic constant.
    const __m256d magic = set1(4503599627370496.0);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(biased_exp, _mm256_castpd_si256(magic))), magic);
    e = _mm256_sub_pd(e, set1(1023.0));
    e = _mm256_add_pd(e, _mm256_and_pd(big, one));

    // log(m) = 2 atanh(s), s = (m - 1) / (m + 1)
    const __m256d f = _mm256_sub_pd(m, one);
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(set1(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    __m256d poly = set1(2.0 / 25.0);
    for (int k = 11; k >= 0; --k) poly = _mm256_fmadd_pd(poly, z, set1(2.0 / (2 * k + 1)));
    const __m256d log_m = _mm256_mul_pd(s, poly);

    const __m256d log_u = _mm256_fmadd_pd(
        e, set1(6.93359375e-1), _mm256_fmadd_pd(e, set1(-2.121944400546905827679e-4), log_m));
    // Recover the bits lost when forming 1 + x.
    const __m256d lost = _mm256_sub_pd(x, _mm256_sub_pd(u, one));
    __m256d result = _mm256_add_pd(log_u, _mm256_div_pd(lost, u));

    const __m256d inf = set1(__builtin_inf());
    result = _mm256_blendv_pd(result, inf, _mm256_cmp_pd(u, inf, _CMP_EQ_OQ));
    result = _mm256_blendv_pd(result, set1(-__builtin_inf()), _mm256_cmp_pd(u, _mm256_setzero_pd(), _CMP_EQ_OQ));
    result = _mm256_blendv_pd(result, set1(__builtin_nan("")),
                              _mm256_cmp_pd(u, _mm256_setzero_pd(), _CMP_LT_OQ));
    return keep_nan(result, x);
}

// Applies a 4-wide functor to n elements; the tail goes through a padded
// register so every element sees the same arithmetic.
template <class F>
inline void map4(const double* x, double* out, std::size_t n, F f) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, f(_mm256_loadu_pd(x + i)));
    if (i < n) {
        alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
        const std::size_t rem = n - i;
        for (std::size_t j = 0; j < rem; ++j) buf[j] = x[i + j];
        _mm256_store_pd(buf, f(_mm256_load_pd(buf)));
        for (std::size_t j = 0; j < rem; ++j) out[i + j] = buf[j];
    }
}

inline __m256d neg(__m256d v) { return _mm256_xor_pd(v, set1(-0.0)); }

void exp_avx2(const double* x, double* out, std::size_t n) { map4(x, out, n, exp_pd); }
void expm1_avx2(const double* x, double* out, std::size_t n) { map4(x, out, n, expm1_pd); }
void log1p_avx2(const double* x, double* out, std::size_t n) { map4(x, out, n, log1p_pd); }

void sigmoid_avx2(double gain, const double* x, double* out, std::size_t n) {
    const __m256d g = set1(-gain);
    map4(x, out, n, [g](__m256d v) {
        return _mm256_div_pd(set1(1.0), _mm256_add_pd(set1(1.0), exp_pd(_mm256_mul_pd(g, v))));
    });
}

void go_avx2(double a, double b, const double* t, double* out, std::size_t n) {
    const __m256d va = set1(a);
    const __m256d vb = set1(-b);
    map4(t, out, n, [=](__m256d v) {
        return _mm256_mul_pd(va, neg(expm1_pd(_mm256_mul_pd(vb, v))));
    });
}

void ohba_avx2(double scale, double phi, const double* t, double* out, std::size_t n) {
    const __m256d vs = set1(scale);
    const __m256d vphi = set1(phi);
    map4(t, out, n, [=](__m256d v) {
        const __m256d u = _mm256_mul_pd(vphi, v);
        const __m256d head = neg(expm1_pd(neg(u)));
        return _mm256_mul_pd(vs, _mm256_sub_pd(head, _mm256_mul_pd(u, exp_pd(neg(u)))));
    });
}

void mo_avx2(double lambda0, double theta, const double* t, double* out, std::size_t n) {
    const __m256d rate = set1(lambda0 * theta);
    const __m256d vtheta = set1(theta);
    map4(t, out, n, [=](__m256d v) {
        return _mm256_div_pd(log1p_pd(_mm256_mul_pd(rate, v)), vtheta);
    });
}

void combine_cost_avx2(const CostCoefficients& k, const double* release_times, const double* m,
                       const double* prev, double* out, std::size_t n) {
    const __m256d c1 = set1(k.c1), c2 = set1(k.c2), c3 = set1(k.c3);
    const __m256d pc = set1(k.prev_coeff), life = set1(k.m_life);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mv = _mm256_loadu_pd(m + i);
        __m256d c = _mm256_add_pd(_mm256_mul_pd(c1, mv), _mm256_mul_pd(c2, _mm256_sub_pd(life, mv)));
        c = _mm256_add_pd(c, _mm256_mul_pd(c3, _mm256_loadu_pd(release_times + i)));
        if (prev != nullptr) c = _mm256_add_pd(c, _mm256_mul_pd(pc, _mm256_loadu_pd(prev + i)));
        _mm256_storeu_pd(out + i, c);
    }
    for (; i < n; ++i) {
        double c = k.c1 * m[i] + k.c2 * (k.m_life - m[i]);
        c = c + k.c3 * release_times[i];
        if (prev != nullptr) c = c + k.prev_coeff * prev[i];
        out[i] = c;
    }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = set1(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                              _mm256_mul_pd(va, _mm256_loadu_pd(x + i))));
    }
    for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    for (; i < n; ++i) lane[i % 4] = lane[i % 4] + x[i] * y[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

constexpr KernelTable kAvx2{
    Isa::avx2, exp_avx2, expm1_avx2, log1p_avx2,        sigmoid_avx2, go_avx2,
    ohba_avx2, mo_avx2,  combine_cost_avx2, axpy_avx2, dot_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace srgm::kernels::detail
