#include "bsync/recovery.hpp"

#include <cmath>
#include <stdexcept>

namespace bsync {

double estimate_mu(const TimingErrorSequence& u, const DetectorGain& gain) {
    if (u.u.empty())
        throw std::invalid_argument("estimate_mu: empty timing-error sequence");
    if (!(gain.gain > 0.0))
        throw std::invalid_argument("estimate_mu: gain must be positive");
    double mean = 0.0;
    for (double v : u.u)
        mean += v;
    mean /= static_cast<double>(u.u.size());
    return mean / gain.gain;
}

SymbolSequence decide(const std::vector<cplx>& samples, Modulation mod) {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    SymbolSequence out;
    out.modulation = mod;
    out.symbols.reserve(samples.size());
    for (const cplx& v : samples) {
        if (mod == Modulation::BPSK) {
            out.symbols.emplace_back(v.real() >= 0.0 ? 1.0 : -1.0, 0.0);
        } else {
            out.symbols.emplace_back(v.real() >= 0.0 ? kInvSqrt2 : -kInvSqrt2,
                                     v.imag() >= 0.0 ? kInvSqrt2 : -kInvSqrt2);
        }
    }
    return out;
}

SyncResult recover(const ReceiverSamples& rx, const DetectorGain& gain,
                   const RecoveryConfig& config, Modulation mod) {
    if (config.max_iters < 1)
        throw std::invalid_argument("recover: max_iters must be >= 1");
    if (!(config.tolerance > 0.0))
        throw std::invalid_argument("recover: tolerance must be positive");
    if (!(config.damping > 0.0 && config.damping <= 1.0))
        throw std::invalid_argument("recover: damping must lie in (0, 1]");

    SyncResult result;
    ReceiverSamples work = rx;
    for (int iter = 0; iter < config.max_iters; ++iter) {
        const TimingErrorSequence u = gardner_errors(work);
        const double mu = estimate_mu(u, gain);
        result.mu_history.push_back(mu);
        if (std::abs(mu) < config.tolerance) {
            result.converged = true;
            break;
        }
        work = fractional_delay(work, config.damping * mu);
    }
    result.iterations = static_cast<int>(result.mu_history.size());

    // On-symbol samples carry more power than mid-symbol ones for beta > 0;
    // pick the decimation phase accordingly.
    double power[2] = {0.0, 0.0};
    for (std::size_t m = 0; m < work.samples.size(); ++m)
        power[m & 1] += std::norm(work.samples[m]);
    result.decimation_phase = power[1] > power[0] ? 1 : 0;

    std::vector<cplx> decisions(static_cast<std::size_t>(work.count_symbols));
    for (int k = 0; k < work.count_symbols; ++k)
        decisions[static_cast<std::size_t>(k)] =
            work.samples[static_cast<std::size_t>(2 * k + result.decimation_phase)];
    result.decided = decide(decisions, mod);

    // Until the rate-correction stage fills it in, report the front end rate.
    result.corrected_rate.rate = 1.0 / rx.assumed_symbol_period;
    result.corrected_rate.converged = true;
    result.synced = std::move(work);
    return result;
}

} // namespace bsync
