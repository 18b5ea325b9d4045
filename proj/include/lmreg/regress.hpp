#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace lmreg {

enum class BasisKind { simple_linear, polynomial, through_origin, custom };

// Known regressor functions r(x). simple_linear is (1, x); polynomial of
// degree p is (1, x, ..., x^p); through_origin drops the constant.
class Basis {
  public:
    static Basis simple_linear();
    static Basis polynomial(int degree);
    static Basis through_origin(int degree);
    static Basis custom(std::vector<std::function<double(double)>> fns,
                        std::string name = "custom");

    int dim() const { return q_; }
    BasisKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool has_intercept() const;

    void eval(double x, std::span<double> out) const;
    std::vector<double> eval(double x) const;

  private:
    Basis(BasisKind k, int q, std::string name) : kind_(k), q_(q), name_(std::move(name)) {}
    BasisKind kind_;
    int q_;
    std::string name_;
    std::vector<std::function<double(double)>> fns_;  // custom only
};

struct FitResult {
    std::vector<double> beta_hat;
    std::vector<double> residuals;  // Y_t - beta_hat' r(X_t)
    double xbar = 0.0;
    double s2 = 0.0;                // sum (X_t - xbar)^2 / n
    std::vector<double> An;         // q x q row-major, sum r(X_t) r(X_t)' / n
    double residual_se = 0.0;       // sqrt(RSS / (n - q))
    std::size_t n = 0;
    std::string basis_kind;

    std::string to_json() const;
};

class singular_design_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Least squares via Householder QR on the design matrix; the normal
// equations hold to ~1e-9 of data scale. Throws singular_design_error when
// the sample moment matrix has condition number above 1e12.
FitResult fit_lse(std::span<const double> X, std::span<const double> Y, const Basis& basis);

// (sum X_i^2 V_i / n, sum V_i / n, s): plug-in estimates of c1, sigma0, gamma.
std::tuple<double, double, double> plugin_constants(std::span<const double> X,
                                                    std::span<const double> V, double s);

}  // namespace lmreg
