#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bsync/recovery.hpp"

// Monte-Carlo experiment driver: single end-to-end trials, BER sweeps and
// CSV output, with deterministic per-trial seeding.

namespace bsync {

enum class Pipeline { corrected, uncorrected, burst_by_burst, genie };

const char* to_string(Pipeline pipeline);
std::optional<Pipeline> pipeline_from_string(std::string_view name);

struct TrialConfig {
    Modulation modulation = Modulation::BPSK;
    int burst_len = 300;
    double ebn0_db = std::numeric_limits<double>::infinity();
    double eps = 0.0;          // normalized symbol-rate offset, in (-0.5, 0.5)
    double tau_over_t = 0.2;   // initial timing offset, in [-0.4, 0.4] symbols
    int dft_len = 5000;
    Pipeline pipeline = Pipeline::corrected;
    int segment_len = 50;      // burst_by_burst only
    std::uint64_t seed = 1;

    // experiment constants (paper setup)
    double rolloff = 0.5;
    int span = 10;
    int oversampling = 16;
    double threshold = kDefaultSlipThreshold;
    int max_rounds = kDefaultMaxRounds;
    RecoveryConfig recovery{};
};

void validate(const TrialConfig& config);  // throws std::invalid_argument

// Pulse and detector gain are deterministic per configuration and expensive
// to rebuild, so sweeps share one context across trials.
struct HarnessContext {
    PulseShape pulse;
    DetectorGain gain;
    Modulation modulation = Modulation::BPSK;
    double symbol_period = 1.0;
};

HarnessContext make_context(const TrialConfig& config);

// Transmitted burst after channel and matched filter, plus the closures the
// slip-correction loop needs. Padding covers every candidate rate the
// correction loop may probe.
struct FrontEnd {
    SymbolSequence symbols;
    SampleStream matched;
    double tau = 0.0;
    double assumed_rate = 1.0;
    double true_rate = 1.0;

    ResampleFn resampler() const;
};

FrontEnd build_front_end(const TrialConfig& config, const HarnessContext& ctx);

struct BerRecord {
    TrialConfig config;
    long long bit_errors = 0;
    long long bits_total = 0;
    double ber = 0.0;
    bool slip_detected = false;
    double k_hat = 0.0;            // first-round estimate when a slip was declared
    double rate_error_final = 0.0; // (final rate - true rate) / true rate
    int iterations = 0;
    bool converged = true;
};

BerRecord run_trial(const TrialConfig& config, const HarnessContext& ctx);
BerRecord run_trial(const TrialConfig& config);

// Splits rx into segments and recovers each independently at the
// uncorrected rate, concatenating the decisions. A trailing fragment
// shorter than 16 symbols is absorbed into the previous segment.
SyncResult burst_by_burst(const ReceiverSamples& rx, const DetectorGain& gain, int segment_len,
                          const RecoveryConfig& config, Modulation mod);

// Positional comparison mapped to bits (BPSK 1, QPSK 2 Gray-mapped bits per
// symbol). No realignment: misalignment from uncorrected slips counts as
// errors by design.
std::pair<long long, long long> count_ber(const SymbolSequence& decided,
                                          const SymbolSequence& truth);

// Whole-symbol alignment search for BER accounting experiments (not part of
// the blind receiver): shift in [-max_shift, max_shift] maximizing symbol
// agreement, comparing decided[k] with truth[k + shift].
int align_offset(const SymbolSequence& decided, const SymbolSequence& truth, int max_shift);

struct SweepSpec {
    TrialConfig base;  // pipeline, modulation, tau, dft_len, segment_len, ...
    std::vector<double> ebn0_db{8.0};
    std::vector<double> eps{0.1};
    std::vector<int> burst_len{300};
    int trials_per_point = 100;
    std::uint64_t base_seed = 1;
};

struct SweepRow {
    double ebn0_db = 0.0;
    double eps = 0.0;
    int burst_len = 0;
    Pipeline pipeline = Pipeline::corrected;
    int trials = 0;
    long long bits = 0;
    long long errors = 0;
    double ber = 0.0;
    double slip_rate = 0.0;
    double k_hat_mean = 0.0;  // over slip-flagged trials; 0 when none
    double iter_mean = 0.0;
    bool all_converged = true;  // not a CSV column; drives --strict
};

// Grid order: ebn0 (outer), eps, burst_len. Per-trial seeds are a stable
// hash of (base_seed, grid indices, trial index), so results do not depend
// on execution order.
std::vector<SweepRow> ber_sweep(const SweepSpec& spec);

// Header + one row per grid point, floats with 10 significant digits.
std::string to_csv(const std::vector<SweepRow>& rows);

} // namespace bsync
