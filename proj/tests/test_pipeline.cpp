#include <doctest.h>

#include <cmath>

#include "essvi/black_scholes.hpp"
#include "essvi/errors.hpp"
#include "essvi/pipeline.hpp"
#include "essvi/synth.hpp"
#include "test_util.hpp"

using essvi::OptionChain;
using essvi::OptionQuote;

namespace {

OptionChain parity_chain(double S, double rate, double q_yield, double t,
                         const std::vector<double>& strikes, double spread = 0.0) {
    OptionChain chain;
    chain.quote_date = "2024-01-02";
    chain.underlying = S;
    chain.curve = {{0.05, rate}, {10.0, rate}};
    const double fwd = S * std::exp((rate - q_yield) * t);
    for (double K : strikes) {
        const double w = 0.04 * t;  // flat 20% vol
        for (bool is_call : {true, false}) {
            const double mid = essvi::price({fwd, K, rate, t, w, is_call});
            chain.quotes.push_back(
                {"E", t, K, mid * (1.0 - spread), mid * (1.0 + spread), is_call});
        }
    }
    return chain;
}

}  // namespace

TEST_CASE("rate interpolation is linear with flat extrapolation") {
    const std::vector<essvi::RatePoint> curve{{0.5, 0.02}, {1.0, 0.03}, {2.0, 0.05}};
    CHECK(essvi::interpolate_rate(curve, 0.1) == doctest::Approx(0.02));
    CHECK(essvi::interpolate_rate(curve, 0.75) == doctest::Approx(0.025));
    CHECK(essvi::interpolate_rate(curve, 1.5) == doctest::Approx(0.04));
    CHECK(essvi::interpolate_rate(curve, 5.0) == doctest::Approx(0.05));
    CHECK(essvi::interpolate_rate(curve, 1.0) == doctest::Approx(0.03));
}

TEST_CASE("dividend yield is zero in a parity world") {
    const auto chain = parity_chain(100.0, 0.03, 0.0, 0.5, {90, 95, 100, 105, 110});
    CHECK(std::abs(essvi::implied_dividend_yield(chain, 0.5)) < 1e-12);
}

TEST_CASE("flat synthetic dividend yield is recovered") {
    const auto chain = parity_chain(100.0, 0.03, 0.02, 0.75, {90, 95, 100, 105, 110});
    CHECK(essvi::implied_dividend_yield(chain, 0.75) == doctest::Approx(0.02).epsilon(1e-10));

    essvi::SynthConfig cfg;
    cfg.seed = 9;
    cfg.dividend_yield = 0.02;
    const auto synth = essvi::generate_chain(cfg);
    for (int i = 0; i < 3; ++i) {
        const double t = 0.1 + 0.2 * i;  // the generator's maturity grid
        CHECK(essvi::implied_dividend_yield(synth.chain, t) ==
              doctest::Approx(0.02).epsilon(1e-8));
    }
}

TEST_CASE("single pair inverts directly") {
    // C - P + K e^{-rt} = S e^{-q t} with q = 0.03
    OptionChain chain;
    chain.underlying = 100.0;
    chain.curve = {{0.05, 0.02}, {10.0, 0.02}};
    const double t = 1.0, K = 100.0, rate = 0.02;
    const double target = 100.0 * std::exp(-0.03 * t);
    const double cp = target - K * std::exp(-rate * t);  // C - P
    chain.quotes.push_back({"E", t, K, 10.0 + cp, 10.0 + cp, true});
    chain.quotes.push_back({"E", t, K, 10.0, 10.0, false});
    CHECK(essvi::implied_dividend_yield(chain, t) == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("missing and degenerate pairs raise") {
    OptionChain chain;
    chain.underlying = 100.0;
    chain.curve = {{0.05, 0.0}, {10.0, 0.0}};
    chain.quotes.push_back({"E", 1.0, 100.0, 5.0, 5.0, true});  // call only
    CHECK_THROWS_AS(essvi::implied_dividend_yield(chain, 1.0), essvi::NoPairs);

    chain.quotes.push_back({"E", 1.0, 100.0, 200.0, 200.0, false});  // absurd put
    CHECK_THROWS_AS(essvi::implied_dividend_yield(chain, 1.0),
                    essvi::NonPositiveLogArgument);
}

TEST_CASE("forward carry relation") {
    OptionChain chain;
    chain.underlying = 100.0;
    chain.curve = {{0.05, 0.05}, {10.0, 0.05}};
    CHECK(essvi::forward(chain, 1.0, 0.05) == doctest::Approx(100.0));
    CHECK(essvi::forward(chain, 1.0, 0.02) == doctest::Approx(100.0 * std::exp(0.03)));
}

TEST_CASE("forward is recovered from a synthetic chain") {
    essvi::SynthConfig cfg;
    cfg.seed = 13;
    cfg.rate = 0.03;
    const auto synth = essvi::generate_chain(cfg);
    const auto anchors = essvi::filter_chain(synth.chain);
    REQUIRE(anchors.size() == 5);
    for (const auto& a : anchors) {
        const double true_fwd = cfg.underlying * std::exp(cfg.rate * a.maturity);
        CHECK(a.forward == doctest::Approx(true_fwd).epsilon(1e-8));
    }
}

TEST_CASE("all-wide quotes empty the chain") {
    auto chain = parity_chain(100.0, 0.02, 0.0, 0.5, {90, 95, 100, 105, 110}, 0.05);
    // proportional half-spread 5% means a 10% percentage spread everywhere
    CHECK_THROWS_AS(essvi::filter_chain(chain), essvi::EmptyChain);
}

TEST_CASE("a strike exactly at the forward anchors with k* = 0") {
    const double S = 100.0, rate = 0.02, t = 0.5;
    const double fwd = S * std::exp(rate * t);
    auto chain = parity_chain(S, rate, 0.0, t, {fwd * 0.9, fwd, fwd * 1.1}, 0.01);
    const auto anchors = essvi::filter_chain(chain);
    REQUIRE(anchors.size() == 1);
    CHECK(anchors[0].k_star == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(anchors[0].theta_star == doctest::Approx(0.04 * t).epsilon(1e-7));
}

TEST_CASE("synthetic chains survive intact at 2% spreads") {
    essvi::SynthConfig cfg;
    cfg.seed = 21;
    const auto synth = essvi::generate_chain(cfg);
    const auto anchors = essvi::filter_chain(synth.chain);
    REQUIRE(anchors.size() == 5);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const auto& a = anchors[i];
        CHECK(a.maturity == doctest::Approx(synth.surface[i].maturity));
        if (i > 0) CHECK(a.maturity > anchors[i - 1].maturity);
        // the generator puts a strike at the forward, so theta* is the
        // generating slice's ATM variance up to inversion error
        CHECK(std::abs(a.k_star) < 1e-9);
        CHECK(a.theta_star == doctest::Approx(synth.surface[i].theta).epsilon(1e-6));
        for (const auto& q : a.quotes) {
            CHECK((q.ask - q.bid) / q.mid <= 0.05 + 1e-12);
            if (q.is_call) CHECK(q.strike >= a.forward * (1.0 - 1e-9));
            if (!q.is_call) CHECK(q.strike <= a.forward * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("a single wide maturity is dropped, the rest survive") {
    essvi::SynthConfig cfg;
    cfg.seed = 34;
    auto synth = essvi::generate_chain(cfg);
    for (auto& q : synth.chain.quotes) {
        if (std::abs(q.maturity - 0.5) < 1e-12) {  // widen the third maturity
            const double mid = 0.5 * (q.bid + q.ask);
            q.bid = mid * 0.95;
            q.ask = mid * 1.05;
        }
    }
    const auto anchors = essvi::filter_chain(synth.chain);
    REQUIRE(anchors.size() == 4);
    for (const auto& a : anchors) CHECK(std::abs(a.maturity - 0.5) > 1e-12);
}

TEST_CASE("theta* is nondecreasing for symmetric generating surfaces") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        essvi::SynthConfig cfg;
        cfg.seed = seed;
        auto synth = essvi::generate_chain(cfg);
        // symmetrize: rho = 0 keeps ATM variance monotone
        std::vector<essvi::EssviSlice> sym = synth.surface;
        for (auto& s : sym) s.rho = 0.0;
        essvi::OptionChain chain = synth.chain;
        chain.quotes.clear();
        for (const auto& s : sym) {
            const double fwd = cfg.underlying * std::exp(cfg.rate * s.maturity);
            for (int j = -5; j <= 5; ++j) {
                const double k = 0.3 * j / 5.0;
                const double K = fwd * std::exp(k);
                const double w = essvi::total_variance(s, k);
                for (bool is_call : {true, false}) {
                    const double mid = essvi::price({fwd, K, cfg.rate, s.maturity, w, is_call});
                    if (!(mid > 1e-10)) continue;
                    chain.quotes.push_back({"E", s.maturity, K, mid * 0.99, mid * 1.01, is_call});
                }
            }
        }
        const auto anchors = essvi::filter_chain(chain);
        for (std::size_t i = 1; i < anchors.size(); ++i)
            CHECK(anchors[i].theta_star >= anchors[i - 1].theta_star - 1e-12);
    }
}

TEST_CASE("filtering is stable on its own output") {
    essvi::SynthConfig cfg;
    cfg.seed = 55;
    const auto synth = essvi::generate_chain(cfg);
    const auto first = essvi::filter_chain(synth.chain);

    // re-materialize a chain from the surviving quotes and filter again
    essvi::OptionChain again;
    again.quote_date = synth.chain.quote_date;
    again.underlying = synth.chain.underlying;
    again.curve = synth.chain.curve;
    for (const auto& a : first)
        for (const auto& q : a.quotes)
            again.quotes.push_back({"E", a.maturity, q.strike, q.bid, q.ask, q.is_call});
    const auto second = essvi::filter_chain(again);

    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second[i].maturity == doctest::Approx(first[i].maturity));
        CHECK(second[i].quotes.size() <= first[i].quotes.size());
    }
}
