#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

// Transmit-side waveform synthesis, AWGN channel impairments, matched
// filtering and receiver-clock resampling for burst-mode simulation.
//
// Conventions used throughout:
//  - the transmitted symbol n peaks at absolute time n*T on the stream axis;
//  - pulse taps are unit-energy on the oversampled grid (sum of squares = 1),
//    so a matched-filtered decision variable has unit signal amplitude and
//    the per-sample complex noise variance equals N0 directly.

namespace bsync {

using cplx = std::complex<double>;

enum class Modulation { BPSK, QPSK };

int bits_per_symbol(Modulation mod);
const char* to_string(Modulation mod);

struct SymbolSequence {
    std::vector<cplx> symbols;  // unit-energy alphabet points
    Modulation modulation = Modulation::BPSK;

    int count() const { return static_cast<int>(symbols.size()); }
};

// Square-root raised cosine transmit/receive pulse, truncated to `span`
// symbols and sampled at `oversampling` points per symbol.
struct PulseShape {
    double rolloff = 0.5;
    int span = 10;
    int oversampling = 16;
    std::vector<double> taps;  // span*oversampling + 1 entries, even symmetric

    std::string id() const;
};

// Complex baseband samples on a uniform time grid.
struct SampleStream {
    std::vector<cplx> samples;
    double sample_period = 0.0;
    double origin = 0.0;  // absolute time of samples[0]

    std::size_t size() const { return samples.size(); }
    double time_of(std::size_t m) const { return origin + static_cast<double>(m) * sample_period; }
};

struct ChannelSpec {
    double ebn0_db = std::numeric_limits<double>::infinity();  // +inf disables noise
    double carrier_offset = 0.0;  // cycles/second
    double phase = 0.0;           // radians
    double delay = 0.0;           // seconds; realized by offsetting the resampling instants
    double rate_offset = 0.0;     // normalized symbol-rate offset, in (-0.5, 0.5)
    int bits_per_symbol = 1;      // Eb = Es / bits_per_symbol for the noise scaling
};

// Two samples per nominal symbol, taken with the receiver's (possibly wrong)
// clock. samples[2k] is the believed symbol instant, samples[2k+1] the
// midpoint.
struct ReceiverSamples {
    std::vector<cplx> samples;
    double assumed_symbol_period = 1.0;
    int count_symbols = 0;
    int edge_filled = 0;  // outputs produced with a clamped interpolation window
};

// Uniform i.i.d. symbols from the unit-energy alphabet; deterministic per seed.
SymbolSequence generate_symbols(Modulation mod, int count, std::uint64_t seed);

// Closed-form SRRC taps, removable singularities evaluated by their limits,
// normalized so the self-convolution peak equals 1.
PulseShape srrc_pulse(double rolloff, int span, int oversampling);

// Superposition of pulse copies at symbol spacing, with half a pulse span of
// head/tail transient. Symbol i peaks at time i*symbol_period.
SampleStream synthesize_burst(const SymbolSequence& symbols, const PulseShape& pulse,
                              double symbol_period = 1.0);

// Zero-fill extension on either side (head samples shift the origin back).
SampleStream pad_stream(const SampleStream& stream, std::size_t head, std::size_t tail);

// Carrier rotation e^{j(2*pi*df*t + theta)} followed by complex white
// Gaussian noise with per-sample variance Eb/10^(ebn0_db/10). The delay
// field is not applied here; see resample_two_sps.
SampleStream apply_impairments(const SampleStream& stream, const ChannelSpec& channel,
                               std::uint64_t seed);

// Linear convolution with the pulse taps; origin adjusted so the composite
// pulse h(*)h stays centered (zero group-delay bookkeeping).
SampleStream matched_filter(const SampleStream& stream, const PulseShape& pulse);

// Cubic-Lagrange (Farrow) interpolation of the stream at the instants
// t_k = k*(T'/2) + tau for k = 0..2*count_symbols-1. This one operation
// realizes both the receiver clock error (T' != T) and the timing offset.
// Throws if any instant falls outside the support minus a 2-sample margin,
// naming the first offending k.
ReceiverSamples resample_two_sps(const SampleStream& stream, double assumed_symbol_period,
                                 double tau, int count_symbols);

// Warns on stderr when the carrier offset violates df*T << 1.
void check_channel(const ChannelSpec& channel, double symbol_period);

// Raw interleaved float64 I/Q, little-endian [re,im] pairs.
void write_iq(const SampleStream& stream, const std::string& path);
std::vector<cplx> read_iq(const std::string& path);

} // namespace bsync
