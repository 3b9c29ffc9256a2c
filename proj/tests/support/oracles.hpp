#pragma once

// Test-side oracles, independent of the library implementation paths they
// check: product-form Lagrange evaluation, a naive DFT, the analytic raised
// cosine, and the AWGN BPSK error rate.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Direct Lagrange interpolation through (xs[i], ys[i]), product form.
inline cplx lagrange(const double* xs, const cplx* ys, int n, double x) {
    cplx acc{};
    for (int i = 0; i < n; ++i) {
        double w = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            w *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        acc += ys[i] * w;
    }
    return acc;
}

// The four-point window convention used by the interpolator: samples at
// abscissae -1, 0, 1, 2, value taken at 1 + mu.
inline cplx lagrange4(const cplx* window, double mu) {
    static const double xs[4] = {-1.0, 0.0, 1.0, 2.0};
    return lagrange(xs, window, 4, 1.0 + mu);
}

// U(l) = sum_k u(k) e^{+j 2 pi k l / L}, evaluated directly.
inline cplx naive_dft_bin(const std::vector<double>& u, int dft_len, int bin) {
    const double w = 2.0 * std::numbers::pi * bin / dft_len;
    cplx acc{};
    for (std::size_t k = 0; k < u.size(); ++k)
        acc += u[k] * cplx(std::cos(w * k), std::sin(w * k));
    return acc;
}

// Raised cosine pulse (the SRRC self-convolution), t in symbol units.
inline double raised_cosine(double t, double beta) {
    const double pi = std::numbers::pi;
    const double sinc = std::abs(t) < 1e-12 ? 1.0 : std::sin(pi * t) / (pi * t);
    if (beta == 0.0)
        return sinc;
    const double d = 1.0 - 4.0 * beta * beta * t * t;
    if (std::abs(d) < 1e-9) {
        // t = +-1/(2 beta)
        return sinc * pi / 4.0;
    }
    return sinc * std::cos(pi * beta * t) / d;
}

// Gaussian tail, Q(x) = P(N(0,1) > x).
inline double q_func(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + x * (hi - lo);
}

} // namespace oracle
