#include "bsync/harness.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bsync/rng.hpp"

namespace bsync {

const char* to_string(Pipeline pipeline) {
    switch (pipeline) {
        case Pipeline::corrected: return "corrected";
        case Pipeline::uncorrected: return "uncorrected";
        case Pipeline::burst_by_burst: return "burst-by-burst";
        case Pipeline::genie: return "genie";
    }
    return "?";
}

std::optional<Pipeline> pipeline_from_string(std::string_view name) {
    if (name == "corrected") return Pipeline::corrected;
    if (name == "uncorrected") return Pipeline::uncorrected;
    if (name == "burst-by-burst" || name == "burst_by_burst") return Pipeline::burst_by_burst;
    if (name == "genie") return Pipeline::genie;
    return std::nullopt;
}

void validate(const TrialConfig& config) {
    if (config.burst_len < 16)
        throw std::invalid_argument("config: burst length must be >= 16 symbols");
    if (config.dft_len < config.burst_len)
        throw std::invalid_argument("config: dft_len must be >= burst length");
    if (!(config.eps > -0.5 && config.eps < 0.5))
        throw std::invalid_argument("config: eps must lie in (-0.5, 0.5)");
    if (!(config.tau_over_t >= -0.4 && config.tau_over_t <= 0.4))
        throw std::invalid_argument("config: tau must lie in [-0.4, 0.4] symbols");
    if (config.pipeline == Pipeline::burst_by_burst && config.segment_len < 16)
        throw std::invalid_argument("config: segment length must be >= 16 symbols");
    if (!(config.threshold > 0.0))
        throw std::invalid_argument("config: threshold must be positive");
    if (config.max_rounds < 1)
        throw std::invalid_argument("config: max_rounds must be >= 1");
}

HarnessContext make_context(const TrialConfig& config) {
    HarnessContext ctx;
    ctx.modulation = config.modulation;
    ctx.symbol_period = 1.0;
    ctx.pulse = srrc_pulse(config.rolloff, config.span, config.oversampling);
    // Fixed calibration seed: the gain is a property of the pulse shape, not
    // of the trial stream.
    ctx.gain = calibrate_gain(ctx.pulse, ctx.modulation, seed_hash(0xca11b247ULL),
                              ctx.symbol_period);
    return ctx;
}

ResampleFn FrontEnd::resampler() const {
    const SampleStream* stream = &matched;
    const double tau_offset = tau;
    const int n = symbols.count();
    return [stream, tau_offset, n](double rate) -> std::optional<ReceiverSamples> {
        if (!(rate > 0.0))
            return std::nullopt;
        try {
            return resample_two_sps(*stream, 1.0 / rate, tau_offset, n);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
}

FrontEnd build_front_end(const TrialConfig& config, const HarnessContext& ctx) {
    validate(config);
    const double t_sym = ctx.symbol_period;

    FrontEnd fe;
    fe.true_rate = 1.0 / t_sym;
    fe.assumed_rate = (1.0 + config.eps) * fe.true_rate;
    fe.tau = config.tau_over_t * t_sym;
    fe.symbols = generate_symbols(ctx.modulation, config.burst_len,
                                  seed_hash(config.seed, 0x73796dULL));

    SampleStream tx = synthesize_burst(fe.symbols, ctx.pulse, t_sym);

    // Zero-pad (noise fills it after impairments) so every sampling instant
    // any pipeline may request stays inside the interpolation support. The
    // correction loop can probe candidate rates well below the assumed one.
    const double t_prime_max = config.pipeline == Pipeline::corrected
                                   ? 2.75 * t_sym
                                   : std::max(t_sym, t_sym / (1.0 + config.eps));
    const double ts = tx.sample_period;
    const double t_hi = (2.0 * config.burst_len - 1.0) * 0.5 * t_prime_max +
                        std::abs(fe.tau) + 4.0 * ts;
    const double t_lo = -std::abs(fe.tau) - 4.0 * ts;
    const double stream_end = tx.time_of(tx.size() - 1);
    std::size_t head = 0, tail = 0;
    if (t_lo < tx.origin)
        head = static_cast<std::size_t>(std::ceil((tx.origin - t_lo) / ts));
    if (t_hi > stream_end)
        tail = static_cast<std::size_t>(std::ceil((t_hi - stream_end) / ts));
    if (head > 0 || tail > 0)
        tx = pad_stream(tx, head, tail);

    ChannelSpec channel;
    channel.ebn0_db = config.ebn0_db;
    channel.rate_offset = config.eps;
    channel.delay = fe.tau;
    channel.bits_per_symbol = bits_per_symbol(ctx.modulation);

    fe.matched = matched_filter(apply_impairments(tx, channel, seed_hash(config.seed, 0x6e6f69ULL)),
                                ctx.pulse);
    return fe;
}

std::pair<long long, long long> count_ber(const SymbolSequence& decided,
                                          const SymbolSequence& truth) {
    if (decided.symbols.size() != truth.symbols.size())
        throw std::invalid_argument("count_ber: sequence length mismatch");
    if (decided.modulation != truth.modulation)
        throw std::invalid_argument("count_ber: modulation mismatch");

    long long errors = 0;
    const std::size_t n = truth.symbols.size();
    if (truth.modulation == Modulation::BPSK) {
        for (std::size_t k = 0; k < n; ++k)
            errors += (decided.symbols[k].real() >= 0.0) != (truth.symbols[k].real() >= 0.0);
        return {errors, static_cast<long long>(n)};
    }
    // Gray-mapped QPSK: one bit per rail, so bit errors are rail sign flips.
    for (std::size_t k = 0; k < n; ++k) {
        errors += (decided.symbols[k].real() >= 0.0) != (truth.symbols[k].real() >= 0.0);
        errors += (decided.symbols[k].imag() >= 0.0) != (truth.symbols[k].imag() >= 0.0);
    }
    return {errors, 2 * static_cast<long long>(n)};
}

int align_offset(const SymbolSequence& decided, const SymbolSequence& truth, int max_shift) {
    const int n = static_cast<int>(truth.symbols.size());
    int best_shift = 0;
    long long best_matches = -1;
    for (int shift = -max_shift; shift <= max_shift; ++shift) {
        long long matches = 0;
        for (int k = 0; k < n; ++k) {
            const int j = k + shift;
            if (j < 0 || j >= n)
                continue;
            if ((decided.symbols[static_cast<std::size_t>(k)].real() >= 0.0) ==
                    (truth.symbols[static_cast<std::size_t>(j)].real() >= 0.0) &&
                (decided.symbols[static_cast<std::size_t>(k)].imag() >= 0.0) ==
                    (truth.symbols[static_cast<std::size_t>(j)].imag() >= 0.0))
                ++matches;
        }
        if (matches > best_matches ||
            (matches == best_matches && std::abs(shift) < std::abs(best_shift))) {
            best_matches = matches;
            best_shift = shift;
        }
    }
    return best_shift;
}

SyncResult burst_by_burst(const ReceiverSamples& rx, const DetectorGain& gain, int segment_len,
                          const RecoveryConfig& config, Modulation mod) {
    if (segment_len < 16)
        throw std::invalid_argument("burst_by_burst: segment_len must be >= 16");

    SyncResult out;
    out.decided.modulation = mod;
    out.converged = true;
    out.synced.assumed_symbol_period = rx.assumed_symbol_period;
    out.corrected_rate.rate = 1.0 / rx.assumed_symbol_period;
    out.corrected_rate.converged = true;

    const int n = rx.count_symbols;
    int start = 0;
    bool first = true;
    while (start < n) {
        int len = std::min(segment_len, n - start);
        if (n - start - len < 16)
            len = n - start;  // absorb a short tail into this segment

        ReceiverSamples part;
        part.assumed_symbol_period = rx.assumed_symbol_period;
        part.count_symbols = len;
        part.samples.assign(rx.samples.begin() + 2 * start,
                            rx.samples.begin() + 2 * (start + len));

        const SyncResult seg = recover(part, gain, config, mod);
        out.decided.symbols.insert(out.decided.symbols.end(), seg.decided.symbols.begin(),
                                   seg.decided.symbols.end());
        out.synced.samples.insert(out.synced.samples.end(), seg.synced.samples.begin(),
                                  seg.synced.samples.end());
        out.mu_history.insert(out.mu_history.end(), seg.mu_history.begin(),
                              seg.mu_history.end());
        out.iterations += seg.iterations;
        out.converged = out.converged && seg.converged;
        if (first) {
            out.decimation_phase = seg.decimation_phase;
            first = false;
        }
        start += len;
    }
    out.synced.count_symbols = n;
    return out;
}

BerRecord run_trial(const TrialConfig& config, const HarnessContext& ctx) {
    const FrontEnd fe = build_front_end(config, ctx);
    const ResampleFn resample = fe.resampler();
    const TimingErrorFn ted = [](const ReceiverSamples& rx) { return gardner_errors(rx); };

    BerRecord rec;
    rec.config = config;

    SyncResult sync;
    switch (config.pipeline) {
        case Pipeline::genie: {
            // True rate and delay known: decisions only.
            const ReceiverSamples rx =
                resample_two_sps(fe.matched, 1.0 / fe.true_rate, 0.0, config.burst_len);
            std::vector<cplx> at_symbols(static_cast<std::size_t>(config.burst_len));
            for (int k = 0; k < config.burst_len; ++k)
                at_symbols[static_cast<std::size_t>(k)] =
                    rx.samples[static_cast<std::size_t>(2 * k)];
            sync.decided = decide(at_symbols, ctx.modulation);
            sync.converged = true;
            rec.rate_error_final = 0.0;
            break;
        }
        case Pipeline::uncorrected:
        case Pipeline::burst_by_burst: {
            const auto rx = resample(fe.assumed_rate);
            if (!rx)
                throw std::runtime_error("run_trial: assumed rate outside stream support");
            const SlipReport diag = detect(ted(*rx), config.dft_len, config.threshold);
            rec.slip_detected = diag.is_slip;
            rec.k_hat = diag.is_slip ? diag.k_hat : 0.0;
            sync = config.pipeline == Pipeline::uncorrected
                       ? recover(*rx, ctx.gain, config.recovery, ctx.modulation)
                       : burst_by_burst(*rx, ctx.gain, config.segment_len, config.recovery,
                                        ctx.modulation);
            rec.rate_error_final = config.eps;
            break;
        }
        case Pipeline::corrected: {
            const CorrectedRate corrected = resolve_rate(resample, ted, fe.assumed_rate,
                                                         config.dft_len, config.threshold,
                                                         config.max_rounds);
            const auto rx = resample(corrected.rate);
            if (!rx)
                throw std::runtime_error("run_trial: corrected rate outside stream support");
            sync = recover(*rx, ctx.gain, config.recovery, ctx.modulation);
            sync.corrected_rate = corrected;
            rec.slip_detected = corrected.rounds > 0;
            rec.k_hat = corrected.history.empty() ? 0.0 : corrected.history.front().k_hat;
            rec.rate_error_final = (corrected.rate - fe.true_rate) / fe.true_rate;
            break;
        }
    }

    const auto [errors, bits] = count_ber(sync.decided, fe.symbols);
    rec.bit_errors = errors;
    rec.bits_total = bits;
    rec.ber = static_cast<double>(errors) / static_cast<double>(bits);
    rec.iterations = sync.iterations;
    rec.converged = sync.converged && sync.corrected_rate.converged;
    return rec;
}

BerRecord run_trial(const TrialConfig& config) {
    return run_trial(config, make_context(config));
}

std::vector<SweepRow> ber_sweep(const SweepSpec& spec) {
    if (spec.ebn0_db.empty() || spec.eps.empty() || spec.burst_len.empty())
        throw std::invalid_argument("ber_sweep: empty grid axis");
    if (spec.trials_per_point < 1)
        throw std::invalid_argument("ber_sweep: trials_per_point must be >= 1");

    const HarnessContext ctx = make_context(spec.base);

    std::vector<SweepRow> rows;
    for (std::size_t ie = 0; ie < spec.ebn0_db.size(); ++ie) {
        for (std::size_t ix = 0; ix < spec.eps.size(); ++ix) {
            for (std::size_t ib = 0; ib < spec.burst_len.size(); ++ib) {
                SweepRow row;
                row.ebn0_db = spec.ebn0_db[ie];
                row.eps = spec.eps[ix];
                row.burst_len = spec.burst_len[ib];
                row.pipeline = spec.base.pipeline;
                row.trials = spec.trials_per_point;

                long long slips = 0;
                double k_hat_sum = 0.0;
                long long iters = 0;
                for (int t = 0; t < spec.trials_per_point; ++t) {
                    TrialConfig cfg = spec.base;
                    cfg.ebn0_db = row.ebn0_db;
                    cfg.eps = row.eps;
                    cfg.burst_len = row.burst_len;
                    cfg.seed = seed_hash(spec.base_seed, ie, ix, ib,
                                         static_cast<std::uint64_t>(t));
                    const BerRecord rec = run_trial(cfg, ctx);
                    row.bits += rec.bits_total;
                    row.errors += rec.bit_errors;
                    iters += rec.iterations;
                    if (rec.slip_detected) {
                        ++slips;
                        k_hat_sum += rec.k_hat;
                    }
                    row.all_converged = row.all_converged && rec.converged;
                }
                row.ber = static_cast<double>(row.errors) / static_cast<double>(row.bits);
                row.slip_rate = static_cast<double>(slips) / row.trials;
                row.k_hat_mean = slips > 0 ? k_hat_sum / static_cast<double>(slips) : 0.0;
                row.iter_mean = static_cast<double>(iters) / row.trials;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

std::string to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "ebn0_db,eps,burst_len,pipeline,trials,bits,errors,ber,slip_rate,"
                      "k_hat_mean,iter_mean\n";
    char buf[64];
    for (const SweepRow& r : rows) {
        out += format_double(r.ebn0_db);
        out += ',';
        out += format_double(r.eps);
        out += ',';
        std::snprintf(buf, sizeof buf, "%d,%s,%d,%lld,%lld,", r.burst_len,
                      to_string(r.pipeline), r.trials, r.bits, r.errors);
        out += buf;
        out += format_double(r.ber);
        out += ',';
        out += format_double(r.slip_rate);
        out += ',';
        out += format_double(r.k_hat_mean);
        out += ',';
        out += format_double(r.iter_mean);
        out += '\n';
    }
    return out;
}

} // namespace bsync
