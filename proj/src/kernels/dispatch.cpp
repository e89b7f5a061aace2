#include <atomic>
#include <string>

#include "srgm/error.hpp"
#include "table.hpp"

namespace srgm::kernels {
namespace detail {
#if !defined(SRGM_KERNELS_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !defined(SRGM_KERNELS_NEON)
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

using detail::KernelTable;

bool cpu_supports(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* table_for(Isa isa) {
    if (!cpu_supports(isa)) return nullptr;
    switch (isa) {
        case Isa::scalar:
            return &detail::scalar_table();
        case Isa::avx2:
            return detail::avx2_table();
        case Isa::neon:
            return detail::neon_table();
    }
    return nullptr;
}

const KernelTable& automatic() {
    static const KernelTable* const table = [] {
        for (Isa isa : {Isa::avx2, Isa::neon}) {
            if (const KernelTable* t = table_for(isa)) return t;
        }
        return &detail::scalar_table();
    }();
    return *table;
}

std::atomic<const KernelTable*> g_override{nullptr};

const KernelTable& current() {
    const KernelTable* forced = g_override.load(std::memory_order_acquire);
    return forced != nullptr ? *forced : automatic();
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw InputError(std::string(what) + ": span sizes differ (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
    }
}

}  // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

bool is_available(Isa isa) { return table_for(isa) != nullptr; }

Isa active_isa() { return current().isa; }

void set_isa_override(std::optional<Isa> isa) {
    if (!isa) {
        g_override.store(nullptr, std::memory_order_release);
        return;
    }
    const KernelTable* t = table_for(*isa);
    if (t == nullptr) {
        throw InputError("kernel variant '" + std::string(to_string(*isa)) +
                         "' is not available on this machine");
    }
    g_override.store(t, std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) {
    const KernelTable* forced = g_override.load(std::memory_order_acquire);
    if (forced != nullptr) previous_ = forced->isa;
    set_isa_override(isa);
}

ScopedIsa::~ScopedIsa() { set_isa_override(previous_); }

void exp(std::span<const double> x, std::span<double> out) {
    require_same_size(x.size(), out.size(), "exp");
    current().exp(x.data(), out.data(), x.size());
}

void expm1(std::span<const double> x, std::span<double> out) {
    require_same_size(x.size(), out.size(), "expm1");
    current().expm1(x.data(), out.data(), x.size());
}

void log1p(std::span<const double> x, std::span<double> out) {
    require_same_size(x.size(), out.size(), "log1p");
    current().log1p(x.data(), out.data(), x.size());
}

void sigmoid(double gain, std::span<const double> x, std::span<double> out) {
    require_same_size(x.size(), out.size(), "sigmoid");
    current().sigmoid(gain, x.data(), out.data(), x.size());
}

void mean_value_go(double a, double b, std::span<const double> t, std::span<double> out) {
    require_same_size(t.size(), out.size(), "mean_value_go");
    current().mean_value_go(a, b, t.data(), out.data(), t.size());
}

void mean_value_ohba(double n, double phi, std::span<const double> t, std::span<double> out) {
    require_same_size(t.size(), out.size(), "mean_value_ohba");
    current().mean_value_ohba(n, phi, t.data(), out.data(), t.size());
}

void mean_value_mo(double lambda0, double theta, std::span<const double> t,
                   std::span<double> out) {
    require_same_size(t.size(), out.size(), "mean_value_mo");
    current().mean_value_mo(lambda0, theta, t.data(), out.data(), t.size());
}

void combine_cost(const CostCoefficients& k, std::span<const double> release_times,
                  std::span<const double> m, std::span<const double> prev,
                  std::span<double> out) {
    require_same_size(release_times.size(), out.size(), "combine_cost");
    require_same_size(m.size(), out.size(), "combine_cost");
    if (!prev.empty()) require_same_size(prev.size(), out.size(), "combine_cost");
    current().combine_cost(k, release_times.data(), m.data(), prev.empty() ? nullptr : prev.data(),
                           out.data(), out.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_size(x.size(), y.size(), "axpy");
    current().axpy(alpha, x.data(), y.data(), x.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
    require_same_size(x.size(), y.size(), "dot");
    return current().dot(x.data(), y.data(), x.size());
}

}  // namespace srgm::kernels
