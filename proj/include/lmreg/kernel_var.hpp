#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace lmreg {

enum class KernelKind { cosine, uniform, gaussian };

// Symmetric density kernels. cosine and uniform live on [-1, 1]; the
// gaussian kernel is truncated at |v| = 8 (tail mass < 1e-15).
struct Kernel {
    KernelKind kind = KernelKind::cosine;

    double operator()(double v) const;
    double support() const;  // half-width outside which the kernel is 0
    bool compact() const { return kind != KernelKind::gaussian; }

    static Kernel cosine() { return {KernelKind::cosine}; }
    static Kernel uniform() { return {KernelKind::uniform}; }
    static Kernel gaussian() { return {KernelKind::gaussian}; }
};

KernelKind kernel_kind_from_string(const std::string& s);
std::string to_string(KernelKind k);

// b = C n^{-delta}. `fixed` pins the realized value directly (delta = 0).
struct Bandwidth {
    double C = 1.0;
    double delta = 0.0;
    std::size_t n = 1;

    double value() const;
    static Bandwidth rule(double C, double delta, std::size_t n);
    static Bandwidth fixed(double b);
};

struct VarianceEstimate {
    double x = 0.0;
    double value = 0.0;    // sigma^2 estimate, >= 0
    double b = 0.0;        // bandwidth used
    double phi_n_x = 0.0;  // density factor s^{-1} phi((x - xbar)/s)
};

class out_of_support_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// sigma2_hat(x) = (1/(n phi_n(x))) sum_t K_b(x - X_t) e_t^2 with
// phi_n(x) = s^{-1} phi((x - xbar)/s). Evaluation is rejected outside
// [xbar - 6s, xbar + 6s], where the density factor amplifies noise
// astronomically; throws out_of_support_error there.
VarianceEstimate sigma2_hat(double x, std::span<const double> X,
                            std::span<const double> residuals, const Bandwidth& b,
                            const Kernel& k);

std::vector<VarianceEstimate> sigma2_grid(std::span<const double> grid,
                                          std::span<const double> X,
                                          std::span<const double> residuals,
                                          const Bandwidth& b, const Kernel& k);

enum class BandwidthCase { a, b };

struct DeltaRange {
    BandwidthCase regime;
    double lo;
    double hi;
};

// Feasible exponent range for b = O(n^{-delta}): case a when H < (1+h)/2,
// case b when H > (1+h)/2; the boundary is rejected.
DeltaRange bandwidth_range(double H, double h);

// mean of (estimate/truth - 1)^2 over the grid.
double ase(std::span<const double> estimates, std::span<const double> truth);

// Grid used throughout the simulation study: -1.50, -1.49, ..., 1.50.
std::vector<double> default_eval_grid();

// Study-calibrated bandwidth constants per (H, h); delta is 0.2 except 0.099
// at h = 0.95.
double default_bandwidth_constant(double H, double h);
double default_delta(double h);

}  // namespace lmreg
