#include <doctest.h>

#include <cmath>

#include "essvi/black_scholes.hpp"
#include "essvi/errors.hpp"
#include "essvi/synth.hpp"

using essvi::PricingInput;

namespace {

// Independent closed-form Black evaluation via erf, coded separately from
// the library's cumulative normal.
double black_oracle(double fwd, double strike, double rate, double t, double w, bool is_call) {
    const double sq = std::sqrt(w);
    const double d1 = (std::log(fwd / strike) + 0.5 * w) / sq;
    const double d2 = d1 - sq;
    auto N = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
    const double call = std::exp(-rate * t) * (fwd * N(d1) - strike * N(d2));
    if (is_call) return call;
    return call - std::exp(-rate * t) * (fwd - strike);
}

}  // namespace

TEST_CASE("degenerate variance at the money prices to zero") {
    CHECK(essvi::price({100.0, 100.0, 0.0, 1.0, 1e-22, true}) < 1e-8);
    CHECK(essvi::price({100.0, 100.0, 0.0, 1.0, 1e-16, true}) <
          essvi::price({100.0, 100.0, 0.0, 1.0, 1e-12, true}));
}

TEST_CASE("put-call parity is exact") {
    essvi::Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double fwd = rng.uniform(50.0, 200.0);
        const double strike = fwd * std::exp(rng.uniform(-1.0, 1.0));
        const double rate = rng.uniform(-0.01, 0.08);
        const double t = rng.uniform(0.05, 3.0);
        const double w = rng.uniform(1e-4, 1.0);
        const double call = essvi::price({fwd, strike, rate, t, w, true});
        const double put = essvi::price({fwd, strike, rate, t, w, false});
        const double parity = std::exp(-rate * t) * (fwd - strike);
        CHECK(std::abs(call - put - parity) < 1e-12 * std::max(1.0, fwd));
    }
}

TEST_CASE("price matches the independent erf-based evaluation") {
    CHECK(essvi::price({100.0, 100.0, 0.0, 1.0, 0.04, true}) ==
          doctest::Approx(black_oracle(100.0, 100.0, 0.0, 1.0, 0.04, true)).epsilon(1e-10));

    essvi::Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
        const double fwd = rng.uniform(50.0, 200.0);
        const double strike = fwd * std::exp(rng.uniform(-1.5, 1.5));
        const double rate = rng.uniform(0.0, 0.08);
        const double t = rng.uniform(0.05, 3.0);
        const double w = rng.uniform(1e-4, 1.0);
        for (bool is_call : {true, false}) {
            const double p = essvi::price({fwd, strike, rate, t, w, is_call});
            const double o = black_oracle(fwd, strike, rate, t, w, is_call);
            CHECK(std::abs(p - o) <= 1e-10 * std::max(1.0, std::abs(o)));
        }
    }
}

TEST_CASE("price is strictly increasing in total variance") {
    essvi::Rng rng(33);
    for (int i = 0; i < 200; ++i) {
        const double fwd = rng.uniform(50.0, 200.0);
        const double strike = fwd * std::exp(rng.uniform(-0.8, 0.8));
        const double t = rng.uniform(0.1, 2.0);
        double prev = -1.0;
        for (double w = 0.01; w < 0.5; w += 0.01) {
            const double p = essvi::price({fwd, strike, 0.02, t, w, true});
            CHECK(p > prev);
            prev = p;
        }
    }
}

TEST_CASE("vega vanishes deep out of the money") {
    CHECK(essvi::vega({100.0, 100.0 * std::exp(10.0), 0.0, 1.0, 0.04, true}) < 1e-8 * 100.0);
    CHECK(essvi::vega({100.0, 100.0 * std::exp(-10.0), 0.0, 1.0, 0.04, false}) < 1e-8 * 100.0);
}

TEST_CASE("at the money vega simplification") {
    const double fwd = 120.0, rate = 0.03, t = 0.75, w = 0.09;
    const double expected = std::exp(-rate * t) * fwd *
                            essvi::norm_pdf(0.5 * std::sqrt(w)) * std::sqrt(t);
    CHECK(essvi::vega({fwd, fwd, rate, t, w, true}) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("vega matches a finite difference in volatility") {
    essvi::Rng rng(44);
    for (int i = 0; i < 300; ++i) {
        const double fwd = rng.uniform(50.0, 200.0);
        const double strike = fwd * std::exp(rng.uniform(-0.6, 0.6));
        const double rate = rng.uniform(0.0, 0.06);
        const double t = rng.uniform(0.1, 2.0);
        const double sigma = rng.uniform(0.1, 0.6);
        const double h = 1e-5;
        auto at = [&](double s) {
            return essvi::price({fwd, strike, rate, t, s * s * t, true});
        };
        const double fd = (at(sigma + h) - at(sigma - h)) / (2.0 * h);
        const double v = essvi::vega({fwd, strike, rate, t, sigma * sigma * t, true});
        CHECK(v == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("implied variance round trip on a single case") {
    const double w0 = 0.0625;
    const double p = essvi::price({100.0, 110.0, 0.02, 0.5, w0, true});
    const double w = essvi::implied_total_variance(p, 100.0, 110.0, 0.02, 0.5, true);
    CHECK(w == doctest::Approx(w0).epsilon(1e-8));
}

TEST_CASE("price below intrinsic is rejected") {
    // forward ITM call: intrinsic e^{-rt}(F - K) = 19.6...; ask for less
    CHECK_THROWS_AS(essvi::implied_total_variance(5.0, 120.0, 100.0, 0.02, 1.0, true),
                    essvi::PriceOutOfBounds);
    CHECK_THROWS_AS(essvi::implied_total_variance(-0.01, 100.0, 100.0, 0.0, 1.0, true),
                    essvi::PriceOutOfBounds);
    // above the discounted-forward cap
    CHECK_THROWS_AS(essvi::implied_total_variance(101.0, 100.0, 100.0, 0.0, 1.0, true),
                    essvi::PriceOutOfBounds);
}

TEST_CASE("implied variance round trip over a random batch") {
    essvi::Rng rng(55);
    double max_err = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double fwd = rng.uniform(50.0, 200.0);
        const double strike = fwd * std::exp(rng.uniform(-1.0, 1.0));
        const double rate = rng.uniform(0.0, 0.06);
        const double t = rng.uniform(0.05, 2.5);
        const double sigma = rng.uniform(0.05, 1.0);
        const double w0 = sigma * sigma * t;
        const bool is_call = strike >= fwd;
        const double p = essvi::price({fwd, strike, rate, t, w0, is_call});
        // below ~1e-6 of the forward the vega is too small for any solver to
        // recover the variance in double precision
        if (!(p > 1e-6 * fwd)) continue;
        const double w = essvi::implied_total_variance(p, fwd, strike, rate, t, is_call);
        max_err = std::max(max_err, std::abs(w - w0) / w0);
    }
    CHECK(max_err < 1e-7);
}
