#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace lmreg {

// a(z) = int_0^1 u^{z-3/2} (1-u)^{1-2z} du = B(z-1/2, 2-2z), closed form.
double a_beta(double z);

// Limit correlation of the bilinear and product terms in the slope expansion,
// valid for H + h > 3/2.
double correl_bilinear_product(double H, double h);

// Limit correlation of the centered square sum and the squared partial sum
// of the errors, valid for H > 3/4.
double correl_quadratic_terms(double H);

enum class LimitKind { z2_independent, z2_star, composite_slope };

struct LimitLawSample {
    std::vector<double> draws;
    std::size_t grid_size = 0;
    LimitKind kind = LimitKind::z2_independent;
    double truncation_mass = 0.0;  // estimated neglected variance fraction
    double domain_lo = 0.0;        // lower edge of the discretized domain
    double variance_discrete = 0.0;
    double variance_theory = 0.0;
};

// Monte Carlo sampler for the second-order chaos limit laws. The double
// Wiener integral is discretized by exact cell averages of the kernel on a
// grid over [domain_lo, 1]: uniform cells on [-4, 1], geometrically growing
// cells below until the analytic tail bound drops under 1e-3 of the
// variance. z2_star uses a single Brownian measure and drops the diagonal;
// composite_slope couples the first-order Gaussian limits to the same
// increments and returns (c1 Z2 - sigma0 Z1 Z2) / gamma.
class Z2Sampler {
  public:
    struct Config {
        double H = 0.9;
        double h = 0.9;
        LimitKind kind = LimitKind::z2_independent;
        std::size_t grid_size = 512;
        // plug-in constants for composite_slope
        double c1 = 1.0;
        double sigma0 = 0.0;
        double gamma = 1.0;
        // ACVF-scale constants: gamma_u(k) ~ Gu_theta k^{2H-2},
        // gamma_X(k) ~ GX_theta k^{2h-2}. Defaults (negative = derive) come
        // from the unit-variance FARIMA and fGn conventions.
        double Gu_theta = -1.0;
        double GX_theta = -1.0;
    };

    explicit Z2Sampler(const Config& cfg);
    ~Z2Sampler();
    Z2Sampler(Z2Sampler&&) noexcept;
    Z2Sampler& operator=(Z2Sampler&&) noexcept;

    // Draws are indexed: each one derives its own stream from (seed, index),
    // so any subset can be regenerated and threading cannot reorder results.
    double draw_one(std::uint64_t seed, std::uint64_t index) const;
    LimitLawSample sample(std::size_t n_draws, std::uint64_t seed) const;

    double truncation_mass() const;
    double domain_lo() const;
    double variance_discrete() const;  // second moment of the discretized Z2
    double variance_theory() const;    // continuum target for the same object

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LimitLawSample sample_z2(double H, double h, LimitKind kind, std::size_t grid_size,
                         std::size_t n_draws, std::uint64_t seed);

// Moving-block bootstrap estimate of Var(n^{-1/2} sum summands); resampled
// means are centered at the bootstrap expectation.
double kappa2_block_bootstrap(std::span<const double> summands, std::size_t block_len,
                              std::size_t B, std::uint64_t seed);

// Default block length ceil(n^{1/3}).
std::size_t default_block_len(std::size_t n);

}  // namespace lmreg
