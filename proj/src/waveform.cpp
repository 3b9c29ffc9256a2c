#include "bsync/waveform.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "bsync/farrow.hpp"
#include "bsync/rng.hpp"

namespace bsync {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.70710678118654752440;
} // namespace

int bits_per_symbol(Modulation mod) {
    return mod == Modulation::QPSK ? 2 : 1;
}

const char* to_string(Modulation mod) {
    return mod == Modulation::QPSK ? "qpsk" : "bpsk";
}

std::string PulseShape::id() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "srrc(beta=%g,span=%d,q=%d)", rolloff, span, oversampling);
    return buf;
}

SymbolSequence generate_symbols(Modulation mod, int count, std::uint64_t seed) {
    if (count < 1)
        throw std::invalid_argument("generate_symbols: count must be >= 1");
    std::mt19937_64 rng(mix64(seed));
    SymbolSequence out;
    out.modulation = mod;
    out.symbols.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const std::uint64_t r = rng();
        if (mod == Modulation::BPSK) {
            out.symbols.emplace_back((r & 1u) ? 1.0 : -1.0, 0.0);
        } else {
            const double re = (r & 1u) ? kInvSqrt2 : -kInvSqrt2;
            const double im = (r & 2u) ? kInvSqrt2 : -kInvSqrt2;
            out.symbols.emplace_back(re, im);
        }
    }
    return out;
}

namespace {

// SRRC impulse response at t (symbol units), with the removable
// singularities at t = 0 and |4*beta*t| = 1 evaluated by their limits.
double srrc_value(double t, double beta) {
    if (std::abs(t) < 1e-10)
        return 1.0 - beta + 4.0 * beta / kPi;
    const double x = 4.0 * beta * t;
    if (beta > 0.0 && std::abs(std::abs(x) - 1.0) < 1e-9) {
        const double a = kPi / (4.0 * beta);
        return (beta / std::sqrt(2.0)) *
               ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
    }
    return (std::sin(kPi * t * (1.0 - beta)) + x * std::cos(kPi * t * (1.0 + beta))) /
           (kPi * t * (1.0 - x * x));
}

} // namespace

PulseShape srrc_pulse(double rolloff, int span, int oversampling) {
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("srrc_pulse: rolloff must lie in [0, 1]");
    if (span < 4)
        throw std::invalid_argument("srrc_pulse: span must be >= 4 symbols");
    if (oversampling < 4)
        throw std::invalid_argument("srrc_pulse: oversampling must be >= 4");
    if ((span * oversampling) % 2 != 0)
        throw std::invalid_argument("srrc_pulse: span*oversampling must be even");

    PulseShape pulse;
    pulse.rolloff = rolloff;
    pulse.span = span;
    pulse.oversampling = oversampling;

    const int n = span * oversampling;
    const int center = n / 2;
    pulse.taps.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i - center) / oversampling;
        pulse.taps[static_cast<std::size_t>(i)] = srrc_value(t, rolloff);
    }
    double energy = 0.0;
    for (double v : pulse.taps)
        energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : pulse.taps)
        v *= scale;
    return pulse;
}

SampleStream synthesize_burst(const SymbolSequence& symbols, const PulseShape& pulse,
                              double symbol_period) {
    if (symbols.symbols.empty())
        throw std::invalid_argument("synthesize_burst: empty symbol sequence");
    if (!(symbol_period > 0.0))
        throw std::invalid_argument("synthesize_burst: symbol_period must be positive");

    const int q = pulse.oversampling;
    const std::size_t taps = pulse.taps.size();
    const std::size_t n = symbols.symbols.size();

    SampleStream out;
    out.sample_period = symbol_period / q;
    out.origin = -0.5 * static_cast<double>(taps - 1) * out.sample_period;
    out.samples.assign((n - 1) * static_cast<std::size_t>(q) + taps, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = symbols.symbols[i];
        cplx* dst = out.samples.data() + i * static_cast<std::size_t>(q);
        for (std::size_t j = 0; j < taps; ++j)
            dst[j] += a * pulse.taps[j];
    }
    return out;
}

SampleStream pad_stream(const SampleStream& stream, std::size_t head, std::size_t tail) {
    SampleStream out;
    out.sample_period = stream.sample_period;
    out.origin = stream.origin - static_cast<double>(head) * stream.sample_period;
    out.samples.assign(head + stream.samples.size() + tail, cplx{});
    std::copy(stream.samples.begin(), stream.samples.end(), out.samples.begin() + head);
    return out;
}

SampleStream apply_impairments(const SampleStream& stream, const ChannelSpec& channel,
                               std::uint64_t seed) {
    SampleStream out = stream;

    if (channel.carrier_offset != 0.0 || channel.phase != 0.0) {
        for (std::size_t m = 0; m < out.samples.size(); ++m) {
            const double ang = 2.0 * kPi * channel.carrier_offset * out.time_of(m) + channel.phase;
            out.samples[m] *= cplx(std::cos(ang), std::sin(ang));
        }
    }

    if (std::isfinite(channel.ebn0_db)) {
        // Unit-energy taps make the matched-filter decision noise variance
        // equal to the per-sample variance, so sigma^2 = Eb / 10^(dB/10).
        const double eb = 1.0 / channel.bits_per_symbol;
        const double n0 = eb / std::pow(10.0, channel.ebn0_db / 10.0);
        const double sigma = std::sqrt(0.5 * n0);
        std::mt19937_64 rng(mix64(seed));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (cplx& v : out.samples) {
            const double re = sigma * gauss(rng);
            const double im = sigma * gauss(rng);
            v += cplx(re, im);
        }
    }
    return out;
}

SampleStream matched_filter(const SampleStream& stream, const PulseShape& pulse) {
    const std::size_t n = stream.samples.size();
    const std::size_t k = pulse.taps.size();
    if (n == 0)
        throw std::invalid_argument("matched_filter: empty stream");

    SampleStream out;
    out.sample_period = stream.sample_period;
    out.origin = stream.origin - 0.5 * static_cast<double>(k - 1) * stream.sample_period;
    out.samples.assign(n + k - 1, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        const cplx v = stream.samples[i];
        if (v == cplx{})
            continue;
        cplx* dst = out.samples.data() + i;
        for (std::size_t j = 0; j < k; ++j)
            dst[j] += v * pulse.taps[j];
    }
    return out;
}

ReceiverSamples resample_two_sps(const SampleStream& stream, double assumed_symbol_period,
                                 double tau, int count_symbols) {
    if (count_symbols < 1)
        throw std::invalid_argument("resample_two_sps: count_symbols must be >= 1");
    if (!(assumed_symbol_period > 0.0))
        throw std::invalid_argument("resample_two_sps: symbol period must be positive");
    if (stream.samples.size() < 4)
        throw std::invalid_argument("resample_two_sps: stream too short to interpolate");

    const double lo = 2.0;
    const double hi = static_cast<double>(stream.samples.size()) - 2.0;
    const double half = 0.5 * assumed_symbol_period;

    ReceiverSamples out;
    out.assumed_symbol_period = assumed_symbol_period;
    out.count_symbols = count_symbols;
    out.samples.resize(2 * static_cast<std::size_t>(count_symbols));
    for (int k = 0; k < 2 * count_symbols; ++k) {
        const double t = half * k + tau;
        const double pos = (t - stream.origin) / stream.sample_period;
        if (pos < lo || pos > hi) {
            char msg[96];
            std::snprintf(msg, sizeof msg,
                          "resample_two_sps: instant k=%d outside stream support", k);
            throw std::runtime_error(msg);
        }
        out.samples[static_cast<std::size_t>(k)] = interpolate_at(stream.samples, pos);
    }
    return out;
}

void check_channel(const ChannelSpec& channel, double symbol_period) {
    const double dft = std::abs(channel.carrier_offset) * symbol_period;
    if (dft > 0.01)
        std::fprintf(stderr, "bsync: warning: carrier offset times symbol period = %g "
                             "violates df*T << 1; timing estimates may degrade\n", dft);
}

void write_iq(const SampleStream& stream, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("write_iq: cannot open " + path);
    for (const cplx& v : stream.samples) {
        const double re = v.real();
        const double im = v.imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof re);
        f.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

std::vector<cplx> read_iq(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("read_iq: cannot open " + path);
    std::vector<cplx> out;
    double re = 0.0, im = 0.0;
    while (f.read(reinterpret_cast<char*>(&re), sizeof re) &&
           f.read(reinterpret_cast<char*>(&im), sizeof im))
        out.emplace_back(re, im);
    return out;
}

} // namespace bsync
