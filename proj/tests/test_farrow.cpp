#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bsync/farrow.hpp"
#include "support/oracles.hpp"

using namespace bsync;

static InterpWindow window_of(cplx a, cplx b, cplx c, cplx d, double mu) {
    InterpWindow w;
    w.r = {a, b, c, d};
    w.mu = mu;
    return w;
}

TEST_CASE("interpolate: polynomial reproduction") {
    // constants, any mu
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
        const cplx c(oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3));
        const double mu = oracle::uniform(rng, 0.0, 0.999999);
        CHECK(std::abs(interpolate(window_of(c, c, c, c, mu)) - c) < 1e-14);
    }
    // the ramp (-1, 0, 1, 2) at mu = 0.25 is 1.25
    CHECK(std::abs(interpolate(window_of(-1.0, 0.0, 1.0, 2.0, 0.25)) - cplx(1.25, 0.0)) < 1e-14);
    // the cubic i^3 at mu = 0.5 is 1.5^3
    CHECK(std::abs(interpolate(window_of(-1.0, 0.0, 1.0, 8.0, 0.5)) - cplx(3.375, 0.0)) < 1e-14);
}

TEST_CASE("interpolate: direct Lagrange oracle on random windows") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        cplx w[4];
        for (cplx& v : w)
            v = cplx(oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2));
        const double mu = oracle::uniform(rng, 0.0, 0.999999);
        const cplx got = interpolate(window_of(w[0], w[1], w[2], w[3], mu));
        CHECK(std::abs(got - oracle::lagrange4(w, mu)) <= 1e-12);
    }
}

TEST_CASE("interpolate: Farrow coefficients match the Lagrange basis") {
    // unit-vector windows expose the basis polynomials evaluated at 1 + mu
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 32; ++trial) {
        const double mu = oracle::uniform(rng, 0.0, 0.999999);
        for (int i = 0; i < 4; ++i) {
            cplx w[4] = {};
            w[i] = 1.0;
            const cplx got = interpolate(window_of(w[0], w[1], w[2], w[3], mu));
            CHECK(std::abs(got - oracle::lagrange4(w, mu)) < 1e-14);
        }
    }
}

TEST_CASE("interpolate: linearity and complex consistency") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        cplx a[4], b[4], s[4];
        for (int j = 0; j < 4; ++j) {
            a[j] = cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1));
            b[j] = cplx(oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1));
        }
        const cplx alpha(oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2));
        for (int j = 0; j < 4; ++j)
            s[j] = alpha * a[j] + b[j];
        const double mu = oracle::uniform(rng, 0.0, 0.999999);
        const cplx lhs = interpolate(window_of(s[0], s[1], s[2], s[3], mu));
        const cplx rhs = alpha * interpolate(window_of(a[0], a[1], a[2], a[3], mu)) +
                         interpolate(window_of(b[0], b[1], b[2], b[3], mu));
        CHECK(std::abs(lhs - rhs) < 1e-12);

        // real/imag parts interpolate independently
        cplx re[4], im[4];
        for (int j = 0; j < 4; ++j) {
            re[j] = a[j].real();
            im[j] = a[j].imag();
        }
        const cplx whole = interpolate(window_of(a[0], a[1], a[2], a[3], mu));
        const cplx parts(interpolate(window_of(re[0], re[1], re[2], re[3], mu)).real(),
                         interpolate(window_of(im[0], im[1], im[2], im[3], mu)).real());
        CHECK(std::abs(whole - parts) < 1e-13);
    }
}

TEST_CASE("interpolate: mu domain") {
    CHECK_THROWS_AS(interpolate(window_of(0, 0, 0, 0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(interpolate(window_of(0, 0, 0, 0, -0.1)), std::invalid_argument);
    CHECK_NOTHROW(interpolate(window_of(0, 0, 0, 0, 0.0)));
}

static ReceiverSamples make_tones(int n_symbols) {
    // smooth bandlimited test signal: two tones well inside the band
    ReceiverSamples rx;
    rx.assumed_symbol_period = 1.0;
    rx.count_symbols = n_symbols;
    rx.samples.resize(2 * static_cast<std::size_t>(n_symbols));
    for (std::size_t m = 0; m < rx.samples.size(); ++m) {
        const double t = static_cast<double>(m);
        rx.samples[m] = cplx(std::cos(2 * std::numbers::pi * 0.03 * t + 0.4),
                             std::sin(2 * std::numbers::pi * 0.05 * t));
    }
    return rx;
}

TEST_CASE("fractional_delay: identity, integer shift, round trip") {
    const ReceiverSamples rx = make_tones(300);

    const ReceiverSamples same = fractional_delay(rx, 0.0);
    CHECK(same.samples == rx.samples);

    // one full sample period: pure index shift, exact on the interior
    const double ts = 0.5 * rx.assumed_symbol_period;
    const ReceiverSamples shifted = fractional_delay(rx, ts);
    for (std::size_t m = 4; m + 4 < rx.samples.size(); ++m)
        CHECK(std::abs(shifted.samples[m] - rx.samples[m - 1]) < 1e-12);

    // +d then -d recovers the signal within 1e-3 RMS (interior)
    const double d = 0.2345 * ts;
    const ReceiverSamples roundtrip = fractional_delay(fractional_delay(rx, d), -d);
    double err2 = 0.0, ref2 = 0.0;
    std::size_t n = 0;
    for (std::size_t m = 8; m + 8 < rx.samples.size(); ++m) {
        err2 += std::norm(roundtrip.samples[m] - rx.samples[m]);
        ref2 += std::norm(rx.samples[m]);
        ++n;
    }
    CHECK(std::sqrt(err2 / n) / std::sqrt(ref2 / n) < 1e-3);
}

TEST_CASE("fractional_delay: edge fill accounting") {
    const ReceiverSamples rx = make_tones(40);
    const ReceiverSamples out = fractional_delay(rx, 0.31);
    CHECK(out.edge_filled > 0);
    CHECK(out.edge_filled < 8);
    CHECK(out.samples.size() == rx.samples.size());
}
