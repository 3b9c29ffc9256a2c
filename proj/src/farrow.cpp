#include "bsync/farrow.hpp"

#include <cmath>
#include <stdexcept>

namespace bsync {

namespace {

// Farrow branch sums for the cubic Lagrange kernel through abscissae
// {-1, 0, 1, 2}, evaluated at 1 + mu.
inline cplx farrow_eval(const cplx& rm1, const cplx& r0, const cplx& r1, const cplx& r2,
                        double mu) {
    const cplx c3 = (r2 - rm1) * (1.0 / 6.0) + (r0 - r1) * 0.5;
    const cplx c2 = (r0 + r2) * 0.5 - r1;
    const cplx c1 = rm1 * (1.0 / 6.0) - r0 + r1 * 0.5 + r2 * (1.0 / 3.0);
    return ((c3 * mu + c2) * mu + c1) * mu + r1;
}

} // namespace

cplx interpolate(const InterpWindow& window) {
    if (!(window.mu >= 0.0 && window.mu < 1.0))
        throw std::invalid_argument("interpolate: mu must lie in [0, 1)");
    return farrow_eval(window.r[0], window.r[1], window.r[2], window.r[3], window.mu);
}

cplx interpolate_at(const std::vector<cplx>& samples, double position, bool* edge) {
    if (samples.size() < 4)
        throw std::invalid_argument("interpolate_at: need at least 4 samples");
    const double lo = 2.0;
    const double hi = static_cast<double>(samples.size()) - 2.0;
    double p = position;
    bool clamped = false;
    if (p < lo) { p = lo; clamped = true; }
    if (p > hi) { p = hi; clamped = true; }
    if (edge)
        *edge = clamped;
    const double fl = std::floor(p);
    const std::size_t n = static_cast<std::size_t>(fl);
    const double mu = p - fl;
    return farrow_eval(samples[n - 2], samples[n - 1], samples[n], samples[n + 1], mu);
}

ReceiverSamples fractional_delay(const ReceiverSamples& stream, double shift_seconds) {
    if (shift_seconds == 0.0)
        return stream;
    ReceiverSamples out = stream;
    out.edge_filled = 0;
    const double sample_shift = shift_seconds / (0.5 * stream.assumed_symbol_period);
    for (std::size_t m = 0; m < stream.samples.size(); ++m) {
        bool edge = false;
        out.samples[m] = interpolate_at(stream.samples, static_cast<double>(m) - sample_shift,
                                        &edge);
        out.edge_filled += edge ? 1 : 0;
    }
    return out;
}

} // namespace bsync
