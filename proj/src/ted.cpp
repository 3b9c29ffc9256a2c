#include "bsync/ted.hpp"

#include <cmath>
#include <stdexcept>

#include "bsync/rng.hpp"

namespace bsync {

TimingErrorSequence gardner_errors(const ReceiverSamples& rx) {
    if (rx.count_symbols < 3)
        throw std::invalid_argument("gardner_errors: need at least 3 symbols");
    TimingErrorSequence out;
    out.symbol_period_assumed = rx.assumed_symbol_period;
    const int n = rx.count_symbols - 2;
    out.u.resize(static_cast<std::size_t>(n));
    const cplx* s = rx.samples.data();
    for (int k = 0; k < n; ++k)
        out.u[static_cast<std::size_t>(k)] =
            (std::conj(s[2 * k + 1]) * (s[2 * k + 2] - s[2 * k])).real();
    return out;
}

std::vector<SCurvePoint> s_curve(const PulseShape& pulse, Modulation mod,
                                 const std::vector<double>& offsets, int symbols_per_point,
                                 std::uint64_t seed, double symbol_period) {
    if (symbols_per_point < 3)
        throw std::invalid_argument("s_curve: need at least 3 symbols per point");
    const double half = 0.5 * symbol_period;
    for (double d : offsets)
        if (!(d > -half && d < half))
            throw std::invalid_argument("s_curve: offsets must lie in (-T/2, T/2)");

    // One noiseless burst, matched filtered once, resampled at each offset.
    const SymbolSequence symbols = generate_symbols(mod, symbols_per_point, seed);
    const SampleStream stream =
        matched_filter(synthesize_burst(symbols, pulse, symbol_period), pulse);

    std::vector<SCurvePoint> out;
    out.reserve(offsets.size());
    for (double d : offsets) {
        const ReceiverSamples rx = resample_two_sps(stream, symbol_period, d, symbols_per_point);
        const TimingErrorSequence err = gardner_errors(rx);
        double mean = 0.0;
        for (double v : err.u)
            mean += v;
        mean /= static_cast<double>(err.u.size());
        double var = 0.0;
        for (double v : err.u)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(err.u.size() - 1);
        out.push_back({d, mean, std::sqrt(var / static_cast<double>(err.u.size()))});
    }
    return out;
}

DetectorGain calibrate_gain(const PulseShape& pulse, Modulation mod, std::uint64_t seed,
                            double symbol_period) {
    constexpr int kSymbols = 20000;
    const double d = symbol_period / 64.0;
    const auto pts = s_curve(pulse, mod, {-d, d}, kSymbols, seed, symbol_period);
    const double slope = (pts[1].mean_u - pts[0].mean_u) / (2.0 * d);
    if (!(slope > 0.0))
        throw std::runtime_error("calibrate_gain: non-positive S-curve slope (degenerate pulse)");
    return DetectorGain{slope, pulse.id()};
}

} // namespace bsync
