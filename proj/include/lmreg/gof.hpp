#pragma once

#include <span>
#include <string>
#include <vector>

#include "lmreg/kernel_var.hpp"
#include "lmreg/regress.hpp"
#include "lmreg/whittle.hpp"

namespace lmreg {

// Right-continuous step function with jumps at the order statistics of the
// design points; value is 0 left of the first knot.
struct StepFunction {
    std::vector<double> knots;   // sorted, distinct
    std::vector<double> values;  // cumulative value at each knot

    double operator()(double x) const;
    // sup over the whole extended line of |value|; attained at a knot or at
    // -inf, so scanning the knot values suffices.
    double sup_abs() const;
    double total() const { return values.empty() ? 0.0 : values.back(); }
};

// Marked empirical process of the residuals: cumulative sums of
// Y_t - beta' r(X_t) in design order.
StepFunction vtilde(std::span<const double> X, std::span<const double> Y,
                    const FitResult& fit);

struct LooVariance {
    std::vector<double> V;       // V_i(X_i), one per observation
    std::vector<double> lambda;  // leave-one-out kernel scale Lambda_{-i}(X_i)
    double b = 0.0;
    KernelKind kernel = KernelKind::cosine;
};

// Leave-one-out variance estimates V_i(X_i) = Lambda_{-i}(X_i) phi^{-1/2}(X_i),
// Lambda_{-i}(x) = ((1/(n-1)) sum_{t != i} K_b(x - X_t) e_t^2)^{1/2}.
// The formulas assume a standard normal design density; with studentize set
// (the default, for real data) X is replaced by (X - xbar)/s first.
LooVariance loo_variance(std::span<const double> X, std::span<const double> residuals,
                         double b, const Kernel& k, bool studentize = true);

// J_n(x) = n^{-1} sum V_t I(X_t <= x) - [n^{-1} sum r(X_t) V_t]' An^{-1} alpha_n(x),
// alpha_n(x) = n^{-1} sum r(X_t) I(X_t <= x).
StepFunction jhat(std::span<const double> X, const LooVariance& loo, const Basis& basis);

struct GofResult {
    double Dn = 0.0;
    double p_value = 1.0;
    double sup_V = 0.0;
    double sup_J = 0.0;
    double H_hat = 0.0;
    double psi1_hat = 0.0;
    std::size_t n = 0;

    std::string to_json() const;
};

class degenerate_test_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// D_n = sup|Vtilde| / (n^{H_hat} psi1_hat sup|J_n|), two-sided normal
// p-value 2(1 - Phi(D_n)). Throws degenerate_test_error when sup|J_n| = 0
// (the test requires a nondegenerate limit scale).
GofResult dn_test(std::span<const double> X, std::span<const double> Y,
                  const FitResult& fit, const WhittleResult& whittle,
                  const LooVariance& loo, const Basis& basis);

// CSV rows (knot, Vtilde, Jhat) for plotting.
std::string gof_curves_csv(const StepFunction& vt, const StepFunction& jn);

}  // namespace lmreg
