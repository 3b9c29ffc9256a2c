#pragma once

#include "bsync/cycleslip.hpp"
#include "bsync/farrow.hpp"
#include "bsync/ted.hpp"

// Feed-forward iterative timing recovery: estimate the residual constant
// delay from the mean detector output, remove it with the interpolator,
// repeat until the estimate is below tolerance, then decimate to symbol
// rate and decide.

namespace bsync {

struct RecoveryConfig {
    double tolerance = 0.01;  // seconds; 0.01*T at the default symbol period
    int max_iters = 20;
    double damping = 1.0;

    static RecoveryConfig for_symbol_period(double symbol_period) {
        return RecoveryConfig{0.01 * symbol_period, 20, 1.0};
    }
};

struct SyncResult {
    SymbolSequence decided;
    std::vector<double> mu_history;  // seconds, one entry per iteration
    int iterations = 0;
    bool converged = false;
    CorrectedRate corrected_rate;  // filled by the rate-correction stage when it ran
    ReceiverSamples synced;        // final 2-sps samples, for diagnostics
    int decimation_phase = 0;      // polyphase kept for decisions (0 = even)
};

// mean(u) / gain: the sample mean of the detector output converted to
// seconds via the calibrated gain.
double estimate_mu(const TimingErrorSequence& u, const DetectorGain& gain);

// Nearest alphabet point, per sample.
SymbolSequence decide(const std::vector<cplx>& samples, Modulation mod);

// The iterative loop. Expects a slip-free (rate-corrected) front end; the
// varying part of the delay is handled by the rate correction, not here.
SyncResult recover(const ReceiverSamples& rx, const DetectorGain& gain,
                   const RecoveryConfig& config, Modulation mod);

} // namespace bsync
