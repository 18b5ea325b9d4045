#pragma once

#include <cstdint>
#include <vector>

#include "lmreg/series.hpp"

namespace lmreg {

// Exact autocovariance of unit-variance fractional Gaussian noise,
// 0.5 (|k+1|^{2h} - 2|k|^{2h} + |k-1|^{2h}); equals 1 at lag 0 and vanishes
// identically for h = 1/2, k >= 1.
double acvf_fgn(std::int64_t k, double h);

// Exact stationary Gaussian sample with mean mu, standard deviation gamma
// and ACVF gamma^2 acvf_fgn(k, h). Circulant embedding is the primary path;
// eigenvalues in [-1e-10, 0] are clipped to 0 and anything more negative
// falls back to the O(n^2) Durbin-Levinson recursion.
LMSeries gen_fgn(std::size_t n, double h, double mu, double gamma, std::uint64_t seed);

struct MACoefficients {
    std::vector<double> b;  // b_0..b_J, normalized
    std::size_t J = 0;
    // |sum_{j<=J} b_j^2 - 1|: the variance deficit left by truncating the
    // analytically normalized coefficient sequence at J.
    double norm_error = 0.0;
};

// FARIMA(0, H-1/2, 0) moving-average coefficients b_j computed by the stable
// ratio recursion and divided by sqrt(Gamma(1-2d)/Gamma(1-d)^2), the closed
// form of the infinite sum of squares, so the full sequence has unit energy.
MACoefficients ma_coeffs(double H, std::size_t J);

// u_t = sum_{j=0}^{J} b_j eps_{t-j} with i.i.d. standard Gaussian eps and
// J = n + burn_in. Requires burn_in >= n.
LMSeries gen_farima_ma(std::size_t n, double H, std::uint64_t seed, std::size_t burn_in);
LMSeries gen_farima_ma(std::size_t n, double H, std::uint64_t seed);

// Same marginal process sampled exactly: circulant embedding of the exact
// FARIMA autocovariance. The truncated moving average loses a material part
// of the long-lag covariance for H near 1 (at d = 0.4 the deficit at lag k
// is ~1.5 (k/J)^{0.2} of the true value), which exact sampling avoids; the
// study harness uses this path.
LMSeries gen_farima_exact(std::size_t n, double H, std::uint64_t seed);

// Default truncation rule: burn_in = max(n, 10000).
std::size_t default_burn_in(std::size_t n);

// Exact normalized FARIMA(0, H-1/2, 0) autocovariance at lags 0..K
// (gamma_u(0) = 1 up to the analytic normalization).
std::vector<double> farima_acvf(double H, std::size_t K);

}  // namespace lmreg
