#include "lmreg/limits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lmreg/rng.hpp"
#include "lmreg/special.hpp"

namespace lmreg {

namespace {
constexpr std::uint64_t kZ2Stream1 = 0x7a320001u;
constexpr std::uint64_t kZ2Stream2 = 0x7a320002u;
constexpr std::uint64_t kBootStream = 0x626f6f74u;
}  // namespace

double a_beta(double z) {
    require_memory_param(z, "z");
    // B(z - 1/2, 2 - 2z)
    return std::exp(std::lgamma(z - 0.5) + std::lgamma(2.0 - 2.0 * z) -
                    std::lgamma(1.5 - z));
}

double correl_bilinear_product(double H, double h) {
    require_memory_param(H, "H");
    require_memory_param(h, "h");
    if (!(H + h > 1.5))
        throw std::domain_error("correl_bilinear_product: requires H + h > 3/2");
    const double s = 2.0 * H + 2.0 * h;
    return std::sqrt(2.0 * (s - 3.0) * (s - 2.0)) / (s - 1.0) *
           std::sqrt(H * h / ((2.0 * H - 1.0) * (2.0 * h - 1.0)));
}

double correl_quadratic_terms(double H) {
    require_memory_param(H, "H");
    if (!(H > 0.75)) throw std::domain_error("correl_quadratic_terms: requires H > 3/4");
    return 2.0 * H / (4.0 * H - 1.0) * std::sqrt((4.0 * H - 3.0) / (2.0 * H - 1.0));
}

struct Z2Sampler::Impl {
    Config cfg;
    double alphaH = 0.0, alphah = 0.0;  // kernel exponents (3 - 2a) / 2
    double Ctilde = 0.0;
    double psi1 = 0.0, psi2 = 0.0;

    std::vector<double> xl, xr, dx;  // x-cells, ascending
    std::vector<double> sw;          // s-cell widths (uniform)
    Eigen::MatrixXd FH, Fh;          // s-cells x x-cells, cell-averaged kernels
    Eigen::VectorXd gH, gh;          // ds-integrated kernels per x-cell
    Eigen::VectorXd Gdiag;           // diagonal correction weights
    double sdH = 0.0, sdh = 0.0;     // discrete sd of the first-order integrals
    double var_disc = 0.0, var_theory = 0.0, trunc_mass = 0.0;
    double domain_lo = 0.0;

    // exact integral of (s-x)_+^{-alpha} over [sl,sr] x [xcl,xcr], divided by
    // the cell area. The double-antiderivative second difference cancels
    // catastrophically once the cell area is tiny relative to the squared
    // distance (the far geometric cells); there the s-variation is
    // negligible, so the x-exact form at the s midpoint takes over.
    static double cell_avg(double sl, double sr, double xcl, double xcr, double alpha) {
        if (sr <= xcl) return 0.0;
        const double w = sr - sl, d = xcr - xcl;
        const double umax = sr - xcl;
        if (sl > xcr && w * d < 1e-13 * umax * umax) {
            const double sm = 0.5 * (sl + sr);
            const double q = 1.0 - alpha;
            return (std::pow(sm - xcl, q) - std::pow(sm - xcr, q)) / (q * d);
        }
        const double p = 2.0 - alpha;
        auto A2 = [&](double u) { return u > 0.0 ? std::pow(u, p) : 0.0; };
        const double num =
            A2(sr - xcl) - A2(sr - xcr) - A2(sl - xcl) + A2(sl - xcr);
        return num / ((1.0 - alpha) * p * w * d);
    }

    explicit Impl(const Config& c) : cfg(c) {
        require_memory_param(cfg.H, "H");
        require_memory_param(cfg.h, "h");
        if (cfg.grid_size < 64)
            throw std::invalid_argument("sample_z2: grid_size must be >= 64");
        if (!(cfg.gamma > 0.0)) throw std::invalid_argument("sample_z2: gamma must be > 0");
        if (!(std::min(cfg.H, cfg.h) > 0.75))
            throw std::domain_error("sample_z2: requires min(H, h) > 3/4");

        const double H = cfg.H, h = cfg.h;
        alphaH = (3.0 - 2.0 * H) / 2.0;
        alphah = (3.0 - 2.0 * h) / 2.0;
        const double Gu = cfg.Gu_theta > 0.0
                              ? cfg.Gu_theta
                              : std::exp(std::lgamma(1.5 - H) - std::lgamma(H - 0.5));
        const double GX = cfg.GX_theta > 0.0 ? cfg.GX_theta : h * (2.0 * h - 1.0);
        Ctilde = std::sqrt(Gu * GX / (a_beta(H) * a_beta(h)));
        psi1 = std::sqrt(Gu / (H * (2.0 * H - 1.0)));
        psi2 = std::sqrt(GX / (h * (2.0 * h - 1.0)));
        const double occupation =
            2.0 / ((2.0 * H + 2.0 * h - 3.0) * (2.0 * H + 2.0 * h - 2.0));
        var_theory = Ctilde * Ctilde * a_beta(H) * a_beta(h) * occupation;
        if (cfg.kind == LimitKind::z2_star) {
            // same Brownian measure adds the transposed-kernel overlap
            auto beta_fn = [](double p, double q) {
                return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
            };
            const double mixed = beta_fn(H - 0.5, 2.0 - H - h) * beta_fn(h - 0.5, 2.0 - H - h);
            var_theory += Ctilde * Ctilde * mixed * occupation;
        }

        build_grid();
        build_kernels();
    }

    // closed-form ds-integrated kernel g_a(x) = int_0^1 (s-x)_+^{-alpha} ds
    static double g_bar(double x, double alpha) {
        const double b = 1.0 - alpha;
        const double hi = 1.0 - x;
        if (hi <= 0.0) return 0.0;
        const double lo = std::max(-x, 0.0);
        return (std::pow(hi, b) - std::pow(lo, b)) / b;
    }

    void build_grid() {
        const std::size_t N = cfg.grid_size;
        const double L0 = 4.0;
        const double du = (1.0 + L0) / static_cast<double>(N);

        // || g_bar ||^2 over (-inf, 1], needed for the tail bound; quadrature
        // on a stretched grid plus the power tail beyond it.
        auto gbar_norm2 = [&](double alpha) {
            double acc = 0.0;
            double x = 1.0, step = du;
            while (x > -1e6) {
                const double xm = x - 0.5 * step;
                const double v = g_bar(xm, alpha);
                acc += v * v * step;
                x -= step;
                if (x < -8.0) step *= 1.05;
            }
            // tail: g_bar(x) ~ (-x)^{-alpha} for x << 0
            const double T = -x;
            acc += std::pow(T, 1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0);
            return acc;
        };
        const double n2H = gbar_norm2(alphaH);
        const double n2h = gbar_norm2(alphah);

        auto tail_bound = [&](double T) {
            return std::pow(T, 1.0 - 2.0 * alphaH) / (2.0 * alphaH - 1.0) * n2h +
                   std::pow(T, 1.0 - 2.0 * alphah) / (2.0 * alphah - 1.0) * n2H;
        };
        // reference scale: continuum variance of the raw double integral
        const double raw_var = 2.0 * a_beta(cfg.H) * a_beta(cfg.h) /
                               ((2.0 * cfg.H + 2.0 * cfg.h - 3.0) *
                                (2.0 * cfg.H + 2.0 * cfg.h - 2.0));
        double T = L0;
        double w = du;
        std::vector<double> ext;  // cell widths below -L0
        while (tail_bound(T) > 1e-3 * raw_var) {
            ext.push_back(w);
            T += w;
            w *= 1.15;
            if (ext.size() > 4000)
                throw std::runtime_error("sample_z2: domain extension failed to converge");
        }
        trunc_mass = tail_bound(T) / raw_var;
        domain_lo = -T;

        const std::size_t total = N + ext.size();
        xl.resize(total);
        xr.resize(total);
        dx.resize(total);
        double edge = -T;
        for (std::size_t i = 0; i < ext.size(); ++i) {
            const double width = ext[ext.size() - 1 - i];  // widest first
            xl[i] = edge;
            xr[i] = edge + width;
            edge = xr[i];
        }
        for (std::size_t i = 0; i < N; ++i) {
            xl[ext.size() + i] = edge;
            xr[ext.size() + i] = edge + du;
            edge += du;
        }
        xr[total - 1] = 1.0;  // pin the right edge against accumulation error
        for (std::size_t i = 0; i < total; ++i) dx[i] = xr[i] - xl[i];

        sw.assign(cfg.grid_size, 1.0 / static_cast<double>(cfg.grid_size));
    }

    void build_kernels() {
        const std::size_t M = sw.size(), N = dx.size();
        FH.resize(M, N);
        Fh.resize(M, N);
        double sl = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const double sr = sl + sw[k];
            for (std::size_t i = 0; i < N; ++i) {
                FH(k, i) = cell_avg(sl, sr, xl[i], xr[i], alphaH);
                Fh(k, i) = cell_avg(sl, sr, xl[i], xr[i], alphah);
            }
            sl = sr;
        }
        const Eigen::Map<const Eigen::VectorXd> D(dx.data(), N);
        const Eigen::Map<const Eigen::VectorXd> W(sw.data(), M);

        gH = FH.transpose() * W;
        gh = Fh.transpose() * W;
        sdH = std::sqrt(gH.cwiseAbs2().dot(D));
        sdh = std::sqrt(gh.cwiseAbs2().dot(D));
        Gdiag = (FH.cwiseProduct(Fh)).transpose() * W;

        // exact second moment of the discretized double integral
        const Eigen::MatrixXd CH = FH * D.asDiagonal() * FH.transpose();
        const Eigen::MatrixXd Ch = Fh * D.asDiagonal() * Fh.transpose();
        double v = W.transpose() * CH.cwiseProduct(Ch) * W;
        if (cfg.kind == LimitKind::z2_star) {
            // same measure: add the transposed-kernel overlap, drop diagonals
            const Eigen::MatrixXd CHh = FH * D.asDiagonal() * Fh.transpose();
            v += W.transpose() * CHh.cwiseProduct(CHh.transpose()) * W;
            for (Eigen::Index i = 0; i < Gdiag.size(); ++i)
                v -= 2.0 * Gdiag(i) * Gdiag(i) * dx[i] * dx[i];
        }
        var_disc = Ctilde * Ctilde * v;
    }

    double draw_kernel(GaussianStream& g1, GaussianStream& g2) const {
        const std::size_t N = dx.size();
        Eigen::VectorXd dB1(N), dB2(N);
        for (std::size_t i = 0; i < N; ++i) dB1(i) = std::sqrt(dx[i]) * g1.next();
        if (cfg.kind == LimitKind::z2_star) {
            dB2 = dB1;
        } else {
            for (std::size_t i = 0; i < N; ++i) dB2(i) = std::sqrt(dx[i]) * g2.next();
        }

        const Eigen::VectorXd AH = FH * dB1;
        const Eigen::VectorXd Ah = Fh * dB2;
        const Eigen::Map<const Eigen::VectorXd> W(sw.data(), sw.size());
        double z2 = AH.cwiseProduct(Ah).dot(W);
        if (cfg.kind == LimitKind::z2_star) {
            // Wiener-Ito integrals exclude the diagonal; E dB_i^2 = dx_i
            z2 -= Gdiag.dot(dB1.cwiseAbs2());
        }
        z2 *= Ctilde;

        if (cfg.kind != LimitKind::composite_slope) return z2;

        const double Z1 = psi1 * gH.dot(dB1) / sdH;
        const double Z2 = psi2 * gh.dot(dB2) / sdh;
        return (cfg.c1 * z2 - cfg.sigma0 * Z1 * Z2) / cfg.gamma;
    }
};

Z2Sampler::Z2Sampler(const Config& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
Z2Sampler::~Z2Sampler() = default;
Z2Sampler::Z2Sampler(Z2Sampler&&) noexcept = default;
Z2Sampler& Z2Sampler::operator=(Z2Sampler&&) noexcept = default;

double Z2Sampler::draw_one(std::uint64_t seed, std::uint64_t index) const {
    GaussianStream g1(derive_seed(seed, {kZ2Stream1, index}));
    GaussianStream g2(derive_seed(seed, {kZ2Stream2, index}));
    return impl_->draw_kernel(g1, g2);
}

LimitLawSample Z2Sampler::sample(std::size_t n_draws, std::uint64_t seed) const {
    LimitLawSample out;
    out.grid_size = impl_->cfg.grid_size;
    out.kind = impl_->cfg.kind;
    out.truncation_mass = impl_->trunc_mass;
    out.domain_lo = impl_->domain_lo;
    out.variance_discrete = impl_->var_disc;
    out.variance_theory = impl_->var_theory;
    out.draws.resize(n_draws);
    for (std::size_t i = 0; i < n_draws; ++i) out.draws[i] = draw_one(seed, i);
    return out;
}

double Z2Sampler::truncation_mass() const { return impl_->trunc_mass; }
double Z2Sampler::domain_lo() const { return impl_->domain_lo; }
double Z2Sampler::variance_discrete() const { return impl_->var_disc; }
double Z2Sampler::variance_theory() const { return impl_->var_theory; }

LimitLawSample sample_z2(double H, double h, LimitKind kind, std::size_t grid_size,
                         std::size_t n_draws, std::uint64_t seed) {
    Z2Sampler::Config cfg;
    cfg.H = H;
    cfg.h = h;
    cfg.kind = kind;
    cfg.grid_size = grid_size;
    return Z2Sampler(cfg).sample(n_draws, seed);
}

double kappa2_block_bootstrap(std::span<const double> summands, std::size_t block_len,
                              std::size_t B, std::uint64_t seed) {
    const std::size_t n = summands.size();
    if (n < 2) throw std::invalid_argument("kappa2_block_bootstrap: need n >= 2");
    if (block_len < 1 || block_len > n)
        throw std::invalid_argument("kappa2_block_bootstrap: need 1 <= block_len <= n");
    if (B < 2) throw std::invalid_argument("kappa2_block_bootstrap: need B >= 2");

    const std::size_t nstarts = n - block_len + 1;
    const std::size_t nblocks = (n + block_len - 1) / block_len;

    std::vector<double> block_sum(nstarts);
    // prefix sums for O(1) block sums
    std::vector<double> pre(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + summands[i];
    for (std::size_t s = 0; s < nstarts; ++s)
        block_sum[s] = pre[s + block_len] - pre[s];

    GaussianStream g(derive_seed(seed, {kBootStream}));
    std::vector<double> T(B);
    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t b = 0; b < B; ++b) {
        double total = 0.0;
        std::size_t filled = 0;
        for (std::size_t j = 0; j < nblocks; ++j) {
            const std::size_t s =
                static_cast<std::size_t>(g.uniform() * static_cast<double>(nstarts));
            const std::size_t start = std::min(s, nstarts - 1);
            const std::size_t take = std::min(block_len, n - filled);
            if (take == block_len) {
                total += block_sum[start];
            } else {
                total += pre[start + take] - pre[start];
            }
            filled += take;
        }
        T[b] = total / root_n;
    }
    double mean = 0.0;
    for (double t : T) mean += t;
    mean /= static_cast<double>(B);
    double var = 0.0;
    for (double t : T) var += (t - mean) * (t - mean);
    return var / static_cast<double>(B - 1);
}

std::size_t default_block_len(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n))));
}

}  // namespace lmreg
