#include <cmath>
#include <random>
#include <string>

#include "srgm/error.hpp"
#include "srgm/nhpp.hpp"

namespace srgm {
namespace {

// 53 random bits mapped to [0, 1); independent of the standard library's
// distribution implementations so event files are portable.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<double> simulate_nhpp(const ModelParams& p, double horizon, std::uint64_t seed) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("simulation horizon must be positive and finite, got " +
                          std::to_string(horizon));
    }
    validate(p);
    const double bound = intensity_supremum(p, horizon);
    std::mt19937_64 rng(seed);
    std::vector<double> events;
    if (!(bound > 0.0)) return events;

    double t = 0.0;
    while (true) {
        t += -std::log1p(-uniform01(rng)) / bound;
        if (t > horizon) break;
        if (uniform01(rng) * bound <= intensity(p, t)) events.push_back(t);
    }
    return events;
}

}  // namespace srgm
