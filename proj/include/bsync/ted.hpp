#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsync/waveform.hpp"

// Gardner timing error detector and its gain calibration.

namespace bsync {

struct TimingErrorSequence {
    std::vector<double> u;  // count_symbols - 2 entries, one per symbol
    double symbol_period_assumed = 1.0;
};

// Slope of the S-curve at the origin, in error units per second of offset.
// The raw Gardner output is only proportional to the offset; this converts
// it into time for the recovery loop.
struct DetectorGain {
    double gain = 0.0;
    std::string pulse_id;
};

// u(k) = Re{ r*(k+1/2) [r(k+1) - r(k)] } on the 2-samples-per-symbol stream.
TimingErrorSequence gardner_errors(const ReceiverSamples& rx);

struct SCurvePoint {
    double offset = 0.0;  // seconds
    double mean_u = 0.0;
    double stderr_u = 0.0;
};

// Mean detector output versus static timing offset, from one noiseless
// random burst resampled at each offset. Offsets must lie in (-T/2, T/2).
std::vector<SCurvePoint> s_curve(const PulseShape& pulse, Modulation mod,
                                 const std::vector<double>& offsets, int symbols_per_point,
                                 std::uint64_t seed, double symbol_period = 1.0);

// Central finite difference of the S-curve at offsets +-T/64 over 2e4
// noiseless symbols. Throws on a non-positive slope (degenerate pulse).
DetectorGain calibrate_gain(const PulseShape& pulse, Modulation mod, std::uint64_t seed,
                            double symbol_period = 1.0);

} // namespace bsync
