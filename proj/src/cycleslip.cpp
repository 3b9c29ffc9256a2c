#include "bsync/cycleslip.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace bsync {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex g_fftw_mutex;
} // namespace

std::vector<cplx> spectrum(const TimingErrorSequence& u, int dft_len) {
    const int n = static_cast<int>(u.u.size());
    if (dft_len < n || dft_len < 1)
        throw std::invalid_argument("spectrum: dft_len must be >= length(u)");

    std::vector<cplx> in(static_cast<std::size_t>(dft_len), cplx{});
    std::vector<cplx> out(static_cast<std::size_t>(dft_len));
    for (int k = 0; k < n; ++k)
        in[static_cast<std::size_t>(k)] = cplx(u.u[static_cast<std::size_t>(k)], 0.0);

    // The e^{+j 2 pi k l / L} kernel is FFTW's unnormalized backward transform.
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = fftw_plan_dft_1d(dft_len, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

SlipReport detect(const TimingErrorSequence& u, int dft_len, double threshold) {
    if (!(threshold > 0.0))
        throw std::invalid_argument("detect: threshold must be positive");
    const std::vector<cplx> spec = spectrum(u, dft_len);
    const int n = static_cast<int>(u.u.size());

    // Low edge: Dirichlet mainlobe of the constant-offset term. High edge:
    // the detector's difference operation high-passes channel noise toward
    // half the symbol rate, so bins above ~0.26 cycles/symbol are noise
    // dominated at practical SNRs and would swamp the slip line; capping
    // there still covers slip periods K >= ~3.9 symbols.
    int lo = static_cast<int>(std::ceil(2.0 * dft_len / n)) + 1;
    const int hi = static_cast<int>(std::floor(0.26 * dft_len));
    if (lo > hi)
        lo = hi;

    // The search is whitened by the detector noise envelope: differencing
    // samples one symbol apart colors the noise PSD like (2 - cos 2 pi f),
    // and an unweighted argmax picks top-of-band noise over the slip line
    // at moderate SNR. The reported magnitudes stay unweighted.
    constexpr double kTwoPi = 6.28318530717958647692;
    int q = lo;
    double best = -1.0;
    for (int l = lo; l <= hi; ++l) {
        const double weight = 2.0 - std::cos(kTwoPi * l / dft_len);
        const double metric = std::abs(spec[static_cast<std::size_t>(l)]) / weight;
        if (metric > best) {
            best = metric;
            q = l;
        }
    }
    const double peak = std::abs(spec[static_cast<std::size_t>(q)]);

    const double dc = std::abs(spec[0]);
    double dominance;
    if (dc > 0.0)
        dominance = peak / dc;
    else
        dominance = peak > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;

    SlipReport report;
    report.q = q;
    report.k_hat = static_cast<double>(dft_len) / q;
    report.dominance = dominance;
    report.is_slip = dominance > threshold;
    report.dft_len = dft_len;
    return report;
}

std::pair<double, double> rate_hypotheses(double rate_assumed, double k_hat) {
    if (!(k_hat > 1.0))
        throw std::invalid_argument("rate_hypotheses: k_hat must exceed 1");
    const double step = 1.0 / k_hat;
    return {(1.0 - step) * rate_assumed, (1.0 + step) * rate_assumed};
}

CorrectedRate resolve_rate(const ResampleFn& resample_fn, const TimingErrorFn& u_fn,
                           double rate_initial, int dft_len, double threshold, int max_rounds) {
    if (max_rounds < 1)
        throw std::invalid_argument("resolve_rate: max_rounds must be >= 1");

    CorrectedRate out;
    out.rate = rate_initial;
    out.converged = false;

    const auto dominance_of = [&](double rate) -> double {
        const auto rx = resample_fn(rate);
        if (!rx)
            return std::numeric_limits<double>::infinity();
        return detect(u_fn(*rx), dft_len, threshold).dominance;
    };

    for (int round = 0; round <= max_rounds; ++round) {
        const auto rx = resample_fn(out.rate);
        if (!rx)
            break;  // current rate not evaluable; flagged via converged=false
        const SlipReport report = detect(u_fn(*rx), dft_len, threshold);
        if (!report.is_slip) {
            out.converged = true;
            break;
        }
        if (round == max_rounds)
            break;  // correction budget exhausted with a slip still present

        const auto [rate_minus, rate_plus] = rate_hypotheses(out.rate, report.k_hat);
        const double dom_minus = dominance_of(rate_minus);
        const double dom_plus = dominance_of(rate_plus);
        if (!std::isfinite(dom_minus) && !std::isfinite(dom_plus))
            break;  // neither candidate evaluable

        const int sign = dom_minus <= dom_plus ? -1 : +1;
        out.rate = sign < 0 ? rate_minus : rate_plus;
        out.history.push_back({report.k_hat, sign});
        out.rounds = static_cast<int>(out.history.size());
    }
    return out;
}

} // namespace bsync
