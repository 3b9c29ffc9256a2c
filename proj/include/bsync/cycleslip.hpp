#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bsync/ted.hpp"

// Cycle-slip detection from the spectrum of the timing-error sequence and
// iterative symbol-rate correction. A rate offset eps wraps the detector
// output with period K = (1+eps)/eps symbols, which shows up as a dominant
// non-DC line at bin L/K of the zero-padded DFT.

namespace bsync {

struct SlipReport {
    int q = 0;               // strongest non-DC bin (positive-frequency half)
    double k_hat = 0.0;      // slip period estimate L/q, in symbols
    bool is_slip = false;
    double dominance = 0.0;  // |U(q)| / |U(0)|
    int dft_len = 0;
};

// A slip is declared when the peak exceeds DC outright, mirroring the
// argmax-over-all-bins decision rule the ratio implements.
constexpr double kDefaultSlipThreshold = 1.0;
constexpr int kDefaultMaxRounds = 5;

// Zero-padded L-point DFT of u with the e^{+j 2 pi k l / L} kernel; no
// windowing, no detrending.
std::vector<cplx> spectrum(const TimingErrorSequence& u, int dft_len);

// Peak search over bins [ceil(2L/N)+1, floor(0.26 L)], whitened by the
// detector noise envelope: the low bins are excluded so the Dirichlet
// mainlobe of the constant-offset term cannot masquerade as a slip, the
// high bins because the detector noise spectrum rises toward half the
// symbol rate. is_slip when the peak dominates DC by `threshold`.
SlipReport detect(const TimingErrorSequence& u, int dft_len, double threshold);

// Both corrections (1 -+ 1/K)*rate: the DFT magnitude cannot determine the
// sign of eps, so the caller evaluates both candidates. Requires k_hat > 1.
std::pair<double, double> rate_hypotheses(double rate_assumed, double k_hat);

struct CorrectionRound {
    double k_hat = 0.0;
    int chosen_sign = 0;  // -1 picked (1 - 1/K), +1 picked (1 + 1/K)
};

struct CorrectedRate {
    double rate = 0.0;
    int rounds = 0;  // corrections applied
    std::vector<CorrectionRound> history;
    bool converged = false;  // spectrum went DC-dominant within max_rounds
};

using ResampleFn = std::function<std::optional<ReceiverSamples>(double rate)>;
using TimingErrorFn = std::function<TimingErrorSequence(const ReceiverSamples&)>;

// Detect-correct loop: while a slip is present, evaluate both rate
// hypotheses by re-detection and keep the one with lower dominance. A
// resample_fn returning nullopt marks that candidate as infeasible.
CorrectedRate resolve_rate(const ResampleFn& resample_fn, const TimingErrorFn& u_fn,
                           double rate_initial, int dft_len, double threshold, int max_rounds);

} // namespace bsync
