#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "srgm/error.hpp"
#include "srgm/kernels.hpp"

namespace k = srgm::kernels;

namespace {

std::vector<k::Isa> vector_isas() {
    std::vector<k::Isa> out;
    for (auto isa : {k::Isa::avx2, k::Isa::neon}) {
        if (k::is_available(isa)) out.push_back(isa);
    }
    return out;
}

std::int64_t ulp_distance(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return 0;
    if (a == b) return 0;
    auto key = [](double v) {
        const auto bits = std::bit_cast<std::int64_t>(v);
        return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
    };
    const auto d = key(a) - key(b);
    return d < 0 ? -d : d;
}

std::vector<double> uniform(std::size_t n, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

using Unary = void (*)(std::span<const double>, std::span<double>);

std::vector<double> run_unary(Unary f, k::Isa isa, const std::vector<double>& x) {
    k::ScopedIsa scope(isa);
    std::vector<double> out(x.size());
    f(x, out);
    return out;
}

void expect_close_ulp(const std::vector<double>& ref, const std::vector<double>& got,
                      std::int64_t max_ulp, const std::vector<double>& x) {
    ASSERT_EQ(ref.size(), got.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ASSERT_LE(ulp_distance(ref[i], got[i]), max_ulp)
            << "x=" << x[i] << " ref=" << ref[i] << " got=" << got[i];
    }
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
    EXPECT_TRUE(k::is_available(k::Isa::scalar));
    k::ScopedIsa scope(k::Isa::scalar);
    EXPECT_EQ(k::active_isa(), k::Isa::scalar);
}

TEST(Kernels, OverrideRejectsMissingIsa) {
    for (auto isa : {k::Isa::avx2, k::Isa::neon}) {
        if (!k::is_available(isa)) {
            EXPECT_THROW(k::set_isa_override(isa), srgm::InputError);
        }
    }
}

TEST(Kernels, SizeMismatchIsInputError) {
    std::vector<double> x(3), out(2);
    EXPECT_THROW(k::exp(x, out), srgm::InputError);
    EXPECT_THROW(k::dot(x, out), srgm::InputError);
    EXPECT_THROW(k::axpy(1.0, x, out), srgm::InputError);
}

TEST(Kernels, ScalarMatchesStdLibrary) {
    k::ScopedIsa scope(k::Isa::scalar);
    const auto x = uniform(257, -30.0, 30.0, 1);
    std::vector<double> out(x.size());
    k::exp(x, out);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(out[i], std::exp(x[i]));
    k::expm1(x, out);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(out[i], std::expm1(x[i]));
}

TEST(Kernels, TranscendentalsAgreeWithScalarWithinFewUlp) {
    for (auto isa : vector_isas()) {
        SCOPED_TRACE(std::string(k::to_string(isa)));
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 31u, 1000u}) {
            auto x = uniform(n, -700.0, 700.0, 10 + n);
            EXPECT_NO_FATAL_FAILURE(expect_close_ulp(run_unary(k::exp, k::Isa::scalar, x),
                                                     run_unary(k::exp, isa, x), 2, x));
            auto small = uniform(n, -1.0, 1.0, 20 + n);
            EXPECT_NO_FATAL_FAILURE(expect_close_ulp(run_unary(k::expm1, k::Isa::scalar, small),
                                                     run_unary(k::expm1, isa, small), 4, small));
            auto wide = uniform(n, -40.0, 40.0, 30 + n);
            EXPECT_NO_FATAL_FAILURE(expect_close_ulp(run_unary(k::expm1, k::Isa::scalar, wide),
                                                     run_unary(k::expm1, isa, wide), 4, wide));
            auto pos = uniform(n, -0.999, 1e6, 40 + n);
            EXPECT_NO_FATAL_FAILURE(expect_close_ulp(run_unary(k::log1p, k::Isa::scalar, pos),
                                                     run_unary(k::log1p, isa, pos), 4, pos));
            auto tiny = uniform(n, -1e-6, 1e-6, 50 + n);
            EXPECT_NO_FATAL_FAILURE(expect_close_ulp(run_unary(k::log1p, k::Isa::scalar, tiny),
                                                     run_unary(k::log1p, isa, tiny), 4, tiny));
        }
    }
}

TEST(Kernels, TranscendentalSpecialValues) {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> x{0.0, -0.0, inf, -inf, nan, 800.0, -800.0, 1e-300, -1e-300};
    const std::vector<double> lx{0.0, -0.0, inf, -1.0, nan, -2.0, 1e-300, 1e300};
    for (auto isa : vector_isas()) {
        SCOPED_TRACE(std::string(k::to_string(isa)));
        expect_close_ulp(run_unary(k::exp, k::Isa::scalar, x), run_unary(k::exp, isa, x), 2, x);
        expect_close_ulp(run_unary(k::expm1, k::Isa::scalar, x), run_unary(k::expm1, isa, x), 4, x);
        const auto ref = run_unary(k::log1p, k::Isa::scalar, lx);
        const auto got = run_unary(k::log1p, isa, lx);
        for (std::size_t i = 0; i < lx.size(); ++i) {
            if (std::isnan(ref[i])) {
                EXPECT_TRUE(std::isnan(got[i])) << lx[i];
            } else {
                EXPECT_LE(ulp_distance(ref[i], got[i]), 4) << lx[i];
            }
        }
    }
}

TEST(Kernels, SigmoidAndMeanValuesAgree) {
    for (auto isa : vector_isas()) {
        SCOPED_TRACE(std::string(k::to_string(isa)));
        const auto x = uniform(203, -20.0, 20.0, 7);
        const auto t = uniform(203, 0.0, 200.0, 8);
        auto eval = [&](k::Isa which) {
            k::ScopedIsa scope(which);
            std::vector<std::vector<double>> r(4, std::vector<double>(x.size()));
            k::sigmoid(0.7, x, r[0]);
            k::mean_value_go(100.0, 0.1, t, r[1]);
            k::mean_value_ohba(80.0, 0.4, t, r[2]);
            k::mean_value_mo(10.0, 0.5, t, r[3]);
            return r;
        };
        const auto ref = eval(k::Isa::scalar);
        const auto got = eval(isa);
        for (std::size_t j = 0; j < ref.size(); ++j) {
            EXPECT_NO_FATAL_FAILURE(expect_close_ulp(ref[j], got[j], 16, j == 0 ? x : t));
        }
    }
}

TEST(Kernels, LinearKernelsBitIdentical) {
    for (auto isa : vector_isas()) {
        SCOPED_TRACE(std::string(k::to_string(isa)));
        for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 7u, 8u, 9u, 100u, 1001u}) {
            const auto x = uniform(n, -1.0, 1.0, 100 + n);
            const auto y0 = uniform(n, -1.0, 1.0, 200 + n);
            const auto t = uniform(n, 0.0, 100.0, 300 + n);
            const auto m = uniform(n, 0.0, 100.0, 400 + n);
            const auto prev = uniform(n, 0.0, 30.0, 500 + n);
            const k::CostCoefficients coeffs{1.0, 5.0, 2.0, -2.0, 99.99};
            auto eval = [&](k::Isa which) {
                k::ScopedIsa scope(which);
                std::vector<double> y = y0;
                k::axpy(0.37, x, y);
                std::vector<double> c(n), c0(n);
                k::combine_cost(coeffs, t, m, prev, c);
                k::combine_cost(coeffs, t, m, {}, c0);
                return std::tuple{y, c, c0, k::dot(x, y0)};
            };
            const auto ref = eval(k::Isa::scalar);
            const auto got = eval(isa);
            EXPECT_EQ(std::get<0>(ref), std::get<0>(got));
            EXPECT_EQ(std::get<1>(ref), std::get<1>(got));
            EXPECT_EQ(std::get<2>(ref), std::get<2>(got));
            EXPECT_EQ(std::bit_cast<std::uint64_t>(std::get<3>(ref)),
                      std::bit_cast<std::uint64_t>(std::get<3>(got)));
        }
    }
}

TEST(Kernels, DotUsesFourLaneOrder) {
    k::ScopedIsa scope(k::Isa::scalar);
    const std::vector<double> x{1e16, 1.0, -1e16, 1.0, 1.0};
    const std::vector<double> y{1.0, 1.0, 1.0, 1.0, 1.0};
    // lanes: (1e16 + 1), 1, -1e16, 1  ->  ((1e16 + 1) + 1) + (-1e16 + 1)
    const double l0 = 1e16 + 1.0;
    const double expected = (l0 + 1.0) + (-1e16 + 1.0);
    EXPECT_EQ(k::dot(x, y), expected);
}

TEST(Kernels, CombineCostWithoutPreviousSkipsTerm) {
    k::ScopedIsa scope(k::Isa::scalar);
    const std::vector<double> t{0.0, 10.0}, m{0.0, 63.0}, zeros{0.0, 0.0};
    std::vector<double> a(2), b(2);
    const k::CostCoefficients coeffs{1.0, 5.0, 2.0, 0.0, 100.0};
    k::combine_cost(coeffs, t, m, {}, a);
    k::combine_cost(coeffs, t, m, zeros, b);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a[0], 500.0);
}
