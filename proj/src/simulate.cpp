#include "lmreg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "lmreg/fft.hpp"
#include "lmreg/rng.hpp"
#include "lmreg/special.hpp"

namespace lmreg {

namespace {

// Distinct stream tags so the same numeric seed fed to different generators
// still yields independent Gaussian streams.
constexpr std::uint64_t kFgnStream = 0x66676e00u;
constexpr std::uint64_t kFarimaStream = 0x6661720au;
constexpr std::uint64_t kFarimaExactStream = 0x66657861u;

constexpr double kEigenClip = -1e-10;

// Durbin-Levinson sampling of a zero-mean Gaussian sequence with unit-lag-0
// autocovariance r. O(n^2) but needs no spectral positivity of the circulant.
std::vector<double> durbin_levinson_sample(const std::vector<double>& r,
                                           GaussianStream& g) {
    const std::size_t n = r.size();
    std::vector<double> x(n), phi(n, 0.0), phi_new(n, 0.0);
    double v = r[0];
    x[0] = std::sqrt(v) * g.next();
    for (std::size_t t = 1; t < n; ++t) {
        double acc = r[t];
        for (std::size_t j = 1; j < t; ++j) acc -= phi[j - 1] * r[t - j];
        const double kappa = acc / v;
        phi_new[t - 1] = kappa;
        for (std::size_t j = 0; j + 1 < t; ++j)
            phi_new[j] = phi[j] - kappa * phi[t - 2 - j];
        std::swap(phi, phi_new);
        v *= (1.0 - kappa * kappa);
        if (!(v > 0.0))
            throw std::runtime_error("durbin-levinson: innovation variance not positive");
        double mean = 0.0;
        for (std::size_t j = 0; j < t; ++j) mean += phi[j] * x[t - 1 - j];
        x[t] = mean + std::sqrt(v) * g.next();
    }
    return x;
}

}  // namespace

// the boundary h = 1/2 (exact white noise) is admitted by the generators
static void require_fgn_param(double h) {
    if (!(h >= 0.5 && h < 1.0))
        throw std::domain_error("h must lie in [1/2, 1), got " + std::to_string(h));
}

namespace {

// Exact stationary Gaussian sample with the given autocovariance (r[0] = 1):
// circulant embedding with eigenvalue clipping, Durbin-Levinson fallback.
std::vector<double> gaussian_stationary(std::size_t n,
                                        const std::function<double(std::size_t)>& acvf,
                                        GaussianStream& g) {
    std::size_t m = 2;
    while (m < 2 * (n - 1)) m <<= 1;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= m / 2; ++k) row[k] = acvf(k);
    for (std::size_t k = m / 2 + 1; k < m; ++k) row[k] = row[m - k];
    auto eig = fft::transform(row);

    bool embeddable = true;
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) {
        double ev = eig[k].real();
        if (ev < kEigenClip) {
            embeddable = false;
            break;
        }
        lambda[k] = std::max(ev, 0.0);
    }

    if (!embeddable) {
        std::vector<double> r(n);
        for (std::size_t k = 0; k < n; ++k) r[k] = acvf(k);
        return durbin_levinson_sample(r, g);
    }

    std::vector<std::complex<double>> w(m);
    w[0] = std::sqrt(lambda[0] / m) * g.next();
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double a = g.next();
        const double b = g.next();
        const double s = std::sqrt(lambda[k] / (2.0 * m));
        w[k] = std::complex<double>(s * a, s * b);
        w[m - k] = std::conj(w[k]);
    }
    w[m / 2] = std::sqrt(lambda[m / 2] / m) * g.next();
    auto z = fft::transform(w);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = z[t].real();
    return x;
}

}  // namespace

double acvf_fgn(std::int64_t k, double h) {
    require_fgn_param(h);
    if (k < 0) throw std::invalid_argument("acvf_fgn: lag must be >= 0");
    if (k == 0) return 1.0;
    const double kk = static_cast<double>(k);
    const double e = 2.0 * h;
    return 0.5 * (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(kk - 1.0, e));
}

LMSeries gen_fgn(std::size_t n, double h, double mu, double gamma, std::uint64_t seed) {
    require_fgn_param(h);
    if (n < 2) throw std::invalid_argument("gen_fgn: n must be >= 2");
    if (!(gamma > 0.0)) throw std::invalid_argument("gen_fgn: gamma must be > 0");

    GaussianStream g(derive_seed(seed, {kFgnStream}));
    const auto x = gaussian_stationary(
        n, [&](std::size_t k) { return acvf_fgn(static_cast<std::int64_t>(k), h); }, g);

    LMSeries out;
    out.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) out.values[t] = mu + gamma * x[t];
    out.kind = SeriesKind::fgn;
    out.params.h = h;
    out.seed = seed;
    return out;
}

LMSeries gen_farima_exact(std::size_t n, double H, std::uint64_t seed) {
    require_memory_param(H, "H");
    if (n < 2) throw std::invalid_argument("gen_farima_exact: n must be >= 2");
    GaussianStream g(derive_seed(seed, {kFarimaExactStream}));
    std::size_t m = 2;
    while (m < 2 * (n - 1)) m <<= 1;
    const auto r = farima_acvf(H, m / 2);
    const auto x = gaussian_stationary(n, [&](std::size_t k) { return r[k]; }, g);

    LMSeries out;
    out.values = x;
    out.kind = SeriesKind::farima_ma;
    out.params.H = H;
    out.seed = seed;
    return out;
}

MACoefficients ma_coeffs(double H, std::size_t J) {
    require_memory_param(H, "H");
    if (J < 1) throw std::invalid_argument("ma_coeffs: J must be >= 1");
    const double d = H - 0.5;
    MACoefficients out;
    out.J = J;
    out.b.resize(J + 1);
    out.b[0] = 1.0;
    for (std::size_t j = 1; j <= J; ++j)
        out.b[j] = out.b[j - 1] * (static_cast<double>(j) - 1.0 + d) / static_cast<double>(j);
    const double norm = std::sqrt(farima_sumsq(d));
    double ss = 0.0;
    for (auto& v : out.b) {
        v /= norm;
        ss += v * v;
    }
    out.norm_error = std::abs(ss - 1.0);
    return out;
}

std::size_t default_burn_in(std::size_t n) { return std::max<std::size_t>(n, 10000); }

LMSeries gen_farima_ma(std::size_t n, double H, std::uint64_t seed, std::size_t burn_in) {
    require_memory_param(H, "H");
    if (n < 2) throw std::invalid_argument("gen_farima_ma: n must be >= 2");
    if (burn_in < n) throw std::invalid_argument("gen_farima_ma: burn_in must be >= n");

    const std::size_t J = n + burn_in;
    const auto coef = ma_coeffs(H, J);
    GaussianStream g(derive_seed(seed, {kFarimaStream}));
    const auto eps = g.draw(n + J);  // innovations for times 1-J .. n
    const auto conv = fft::convolve(coef.b, eps);

    LMSeries out;
    out.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) out.values[t] = conv[t + J];
    out.kind = SeriesKind::farima_ma;
    out.params.H = H;
    out.seed = seed;
    return out;
}

LMSeries gen_farima_ma(std::size_t n, double H, std::uint64_t seed) {
    return gen_farima_ma(n, H, seed, default_burn_in(n));
}

std::vector<double> farima_acvf(double H, std::size_t K) {
    require_memory_param(H, "H");
    const double d = H - 0.5;
    std::vector<double> g(K + 1);
    g[0] = 1.0;  // normalized to unit variance
    for (std::size_t k = 1; k <= K; ++k)
        g[k] = g[k - 1] * (static_cast<double>(k) - 1.0 + d) / (static_cast<double>(k) - d);
    return g;
}

}  // namespace lmreg
