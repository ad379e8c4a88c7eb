#pragma once

#include <cstdint>
#include <vector>

#include "essvi/pipeline.hpp"
#include "essvi/slice.hpp"

namespace essvi {

/// Deterministic, platform-independent uniform generator (splitmix64 core).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

struct SynthConfig {
    std::uint64_t seed = 42;
    int n_maturities = 5;
    int n_strikes = 11;        // odd count puts a strike exactly at the forward
    double half_spread = 0.02; // proportional half-spread; pct spread = 2x this
    double mid_noise = 0.0;    // multiplicative mid perturbation amplitude
    double underlying = 100.0;
    double rate = 0.02;        // flat curve
    double dividend_yield = 0.0;
};

struct SynthResult {
    OptionChain chain;
    std::vector<EssviSlice> surface;  // the generating truth
};

/// Draws a strictly G-feasible eSSVI surface from the rectangular box and
/// prices calls and puts on a log-moneyness grid around each forward.
SynthResult generate_chain(const SynthConfig& config);

}  // namespace essvi
