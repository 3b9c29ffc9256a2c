#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bsync/harness.hpp"
#include "bsync/rng.hpp"
#include "bsync/serialize.hpp"
#include "support/oracles.hpp"

using namespace bsync;

namespace {

const HarnessContext& shared_context() {
    static const HarnessContext ctx = make_context(TrialConfig{});
    return ctx;
}

} // namespace

TEST_CASE("count_ber: positional comparison") {
    const auto truth = generate_symbols(Modulation::BPSK, 250, 3);
    auto same = truth;
    CHECK(count_ber(same, truth) == std::pair<long long, long long>{0, 250});

    auto flipped = truth;
    for (cplx& s : flipped.symbols)
        s = -s;
    CHECK(count_ber(flipped, truth) == std::pair<long long, long long>{250, 250});

    // one-position cyclic shift: brute-force oracle count
    auto shifted = truth;
    for (std::size_t k = 0; k < shifted.symbols.size(); ++k)
        shifted.symbols[k] = truth.symbols[(k + 1) % truth.symbols.size()];
    long long expected = 0;
    for (std::size_t k = 0; k < truth.symbols.size(); ++k)
        expected += shifted.symbols[k] != truth.symbols[k];
    const auto [errs, bits] = count_ber(shifted, truth);
    CHECK(errs == expected);
    CHECK(bits == 250);
    CHECK(errs > 250 / 2 - 4 * 16);  // ~N/2 for random data
    CHECK(errs < 250 / 2 + 4 * 16);

    SymbolSequence shorter = truth;
    shorter.symbols.pop_back();
    CHECK_THROWS_AS(count_ber(shorter, truth), std::invalid_argument);
}

TEST_CASE("count_ber: QPSK Gray mapping counts rail flips") {
    const double s = 1.0 / std::sqrt(2.0);
    SymbolSequence truth;
    truth.modulation = Modulation::QPSK;
    truth.symbols = {cplx(s, s), cplx(-s, s), cplx(-s, -s)};
    SymbolSequence decided = truth;
    decided.symbols[0] = cplx(-s, s);   // one rail flip: 1 bit
    decided.symbols[1] = cplx(s, -s);   // both rails: 2 bits
    const auto [errs, bits] = count_ber(decided, truth);
    CHECK(errs == 3);
    CHECK(bits == 6);
}

TEST_CASE("align_offset finds a whole-symbol shift") {
    const auto truth = generate_symbols(Modulation::BPSK, 300, 5);
    SymbolSequence lagged;
    lagged.modulation = Modulation::BPSK;
    lagged.symbols.resize(truth.symbols.size());
    for (std::size_t k = 0; k < truth.symbols.size(); ++k)
        lagged.symbols[k] = truth.symbols[std::min(k + 2, truth.symbols.size() - 1)];
    CHECK(align_offset(lagged, truth, 4) == 2);
    CHECK(align_offset(truth, truth, 4) == 0);
}

TEST_CASE("pipeline names round-trip") {
    for (Pipeline p : {Pipeline::corrected, Pipeline::uncorrected, Pipeline::burst_by_burst,
                       Pipeline::genie})
        CHECK(pipeline_from_string(to_string(p)) == p);
    CHECK(pipeline_from_string("burst_by_burst") == Pipeline::burst_by_burst);
    CHECK_FALSE(pipeline_from_string("nope").has_value());
}

TEST_CASE("config validation") {
    TrialConfig c;
    c.burst_len = 8;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = TrialConfig{};
    c.eps = 0.6;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = TrialConfig{};
    c.tau_over_t = 0.5;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = TrialConfig{};
    c.dft_len = 100;
    c.burst_len = 300;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c = TrialConfig{};
    c.pipeline = Pipeline::burst_by_burst;
    c.segment_len = 8;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    CHECK_NOTHROW(validate(TrialConfig{}));
}

TEST_CASE("run_trial: corrected pipeline on the noiseless slip scenario") {
    const HarnessContext& ctx = shared_context();
    TrialConfig c;
    c.burst_len = 300;
    c.eps = 0.1;
    c.tau_over_t = 0.2;
    c.pipeline = Pipeline::corrected;
    c.seed = 7;
    const BerRecord r = run_trial(c, ctx);
    CHECK(r.ber == 0.0);
    CHECK(r.bit_errors == 0);
    CHECK(r.bits_total == 300);
    CHECK(r.slip_detected);
    CHECK(r.k_hat > 10.0);
    CHECK(r.k_hat < 12.0);
    CHECK(std::abs(r.rate_error_final) < 0.005);
    CHECK(r.converged);
}

TEST_CASE("run_trial: uncorrected pipeline suffers from the slip") {
    const HarnessContext& ctx = shared_context();
    TrialConfig c;
    c.burst_len = 300;
    c.eps = 0.1;
    c.tau_over_t = 0.2;
    c.pipeline = Pipeline::uncorrected;
    c.seed = 7;
    const BerRecord r = run_trial(c, ctx);
    CHECK(r.ber > 0.05);
    CHECK(r.slip_detected);
    CHECK(r.rate_error_final == doctest::Approx(0.1));
}

TEST_CASE("burst_by_burst: no drift means no penalty") {
    const HarnessContext& ctx = shared_context();
    for (int seg : {50, 60}) {
        TrialConfig c;
        c.burst_len = 300;
        c.eps = 0.0;
        c.tau_over_t = 0.2;
        c.pipeline = Pipeline::burst_by_burst;
        c.segment_len = seg;
        c.seed = 11;
        const BerRecord r = run_trial(c, ctx);
        CHECK(r.ber == 0.0);
    }
}

TEST_CASE("burst_by_burst: small offsets degrade gracefully, large ones badly") {
    const HarnessContext& ctx = shared_context();
    auto aggregate = [&](double eps) {
        long long errs = 0, bits = 0;
        for (int t = 0; t < 60; ++t) {
            TrialConfig c;
            c.burst_len = 300;
            c.eps = eps;
            c.tau_over_t = 0.2;
            c.ebn0_db = 10.0;
            c.pipeline = Pipeline::burst_by_burst;
            c.segment_len = 50;
            c.seed = seed_hash(808ULL, static_cast<std::uint64_t>(eps * 1e4), t);
            const BerRecord r = run_trial(c, ctx);
            errs += r.bit_errors;
            bits += r.bits_total;
        }
        return static_cast<double>(errs) / static_cast<double>(bits);
    };
    const double small = aggregate(0.005);
    const double large = aggregate(0.1);
    CHECK(small < large);
    CHECK(large > 0.3);  // slips inside every segment
}

TEST_CASE("burst_by_burst: segment bookkeeping") {
    const HarnessContext& ctx = shared_context();
    TrialConfig c;
    c.burst_len = 130;  // 50 + 50 + 30-tail absorbed into the last segment
    c.eps = 0.0;
    c.tau_over_t = 0.1;
    c.seed = 3;
    const FrontEnd fe = build_front_end(c, ctx);
    const SyncResult r = burst_by_burst(*fe.resampler()(fe.true_rate), ctx.gain, 50,
                                        RecoveryConfig{}, Modulation::BPSK);
    CHECK(r.decided.symbols.size() == 130);
    CHECK(r.synced.samples.size() == 260);
    CHECK(r.decided.symbols == fe.symbols.symbols);
    CHECK_THROWS_AS(burst_by_burst(*fe.resampler()(fe.true_rate), ctx.gain, 8, RecoveryConfig{},
                                   Modulation::BPSK),
                    std::invalid_argument);
}

TEST_CASE("ber_sweep matches run_trial aggregation and reproduces byte-identical CSV") {
    SweepSpec spec;
    spec.base.pipeline = Pipeline::corrected;
    spec.base.ebn0_db = 8.0;
    spec.base.eps = 0.1;
    spec.base.tau_over_t = 0.2;
    spec.ebn0_db = {8.0};
    spec.eps = {0.1};
    spec.burst_len = {100};
    spec.trials_per_point = 5;
    spec.base_seed = 99;

    const auto rows = ber_sweep(spec);
    REQUIRE(rows.size() == 1);

    const HarnessContext ctx = make_context(spec.base);
    long long errs = 0, bits = 0;
    for (int t = 0; t < 5; ++t) {
        TrialConfig c = spec.base;
        c.burst_len = 100;
        c.seed = seed_hash(99ULL, std::size_t{0}, std::size_t{0}, std::size_t{0},
                           static_cast<std::uint64_t>(t));
        const BerRecord r = run_trial(c, ctx);
        errs += r.bit_errors;
        bits += r.bits_total;
    }
    CHECK(rows[0].errors == errs);
    CHECK(rows[0].bits == bits);
    CHECK(rows[0].ber == doctest::Approx(static_cast<double>(errs) / bits));

    const auto rows2 = ber_sweep(spec);
    CHECK(to_csv(rows) == to_csv(rows2));
    CHECK(to_csv(rows).rfind("ebn0_db,eps,burst_len,pipeline,trials,bits,errors,ber,slip_rate,"
                             "k_hat_mean,iter_mean\n", 0) == 0);
}

TEST_CASE("genie pipeline matches the analytic BPSK error rate") {
    const HarnessContext& ctx = shared_context();
    const double ebn0_db = 6.0;
    long long errs = 0, bits = 0;
    for (int t = 0; t < 100; ++t) {
        TrialConfig c;
        c.burst_len = 1000;
        c.ebn0_db = ebn0_db;
        c.eps = 0.1;  // the genie knows the true rate, eps must not matter
        c.tau_over_t = 0.2;
        c.pipeline = Pipeline::genie;
        c.seed = seed_hash(7070ULL, t);
        const BerRecord r = run_trial(c, ctx);
        errs += r.bit_errors;
        bits += r.bits_total;
    }
    const double measured = static_cast<double>(errs) / static_cast<double>(bits);
    const double theory = oracle::q_func(std::sqrt(2.0 * std::pow(10.0, ebn0_db / 10.0)));
    CHECK(measured > 0.5 * theory);
    CHECK(measured < 2.0 * theory);
}

TEST_CASE("zero rate offset: corrected pipeline tracks the genie within a factor of 3") {
    const HarnessContext& ctx = shared_context();
    auto aggregate = [&](Pipeline p) {
        long long errs = 0, bits = 0;
        for (int t = 0; t < 600; ++t) {
            TrialConfig c;
            c.burst_len = 300;
            c.ebn0_db = 8.0;
            c.eps = 0.0;
            c.tau_over_t = 0.2;
            c.pipeline = p;
            c.seed = seed_hash(9090ULL, static_cast<int>(p), t);
            const BerRecord r = run_trial(c, ctx);
            errs += r.bit_errors;
            bits += r.bits_total;
        }
        return std::pair{errs, bits};
    };
    const auto [ge, gb] = aggregate(Pipeline::genie);
    const auto [ce, cb] = aggregate(Pipeline::corrected);
    const double genie = static_cast<double>(ge) / gb;
    const double corrected = static_cast<double>(ce) / cb;
    const double slack = 3.0 / static_cast<double>(cb);  // a few Poisson counts
    CHECK(corrected <= 3.0 * genie + slack);
    CHECK(corrected >= genie - slack);
}

TEST_CASE("rate-offset sweep trend: |eps| = 0.2 is no better than |eps| = 0.05") {
    const HarnessContext& ctx = shared_context();
    auto aggregate = [&](double mag) {
        long long errs = 0, bits = 0;
        for (double sign : {1.0, -1.0}) {
            for (int t = 0; t < 120; ++t) {
                TrialConfig c;
                c.burst_len = 300;
                c.ebn0_db = 8.0;
                c.eps = sign * mag;
                c.tau_over_t = 0.2;
                c.pipeline = Pipeline::corrected;
                c.seed = seed_hash(111ULL, static_cast<std::uint64_t>(sign * mag * 1e4), t);
                const BerRecord r = run_trial(c, ctx);
                errs += r.bit_errors;
                bits += r.bits_total;
            }
        }
        return static_cast<double>(errs) / static_cast<double>(bits);
    };
    CHECK(aggregate(0.2) >= aggregate(0.05));
}

TEST_CASE("slip report serializes with stable field names") {
    TimingErrorSequence u;
    u.u.resize(500);
    for (int k = 0; k < 500; ++k)
        u.u[static_cast<std::size_t>(k)] = 0.1 + std::cos(2.0 * std::numbers::pi * k / 11.0);
    const SlipReport rep = detect(u, 5000, kDefaultSlipThreshold);
    const std::string json = to_json(rep);
    CHECK(json.find("\"schema_version\":1") != std::string::npos);
    CHECK(json.find("\"q\":") != std::string::npos);
    CHECK(json.find("\"K_hat\":") != std::string::npos);
    CHECK(json.find("\"is_slip\":true") != std::string::npos);
    CHECK(json.find("\"dominance\":") != std::string::npos);
    CHECK(json.find("\"L\":5000") != std::string::npos);
}
