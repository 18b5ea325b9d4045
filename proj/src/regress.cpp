#include "lmreg/regress.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "lmreg/io_util.hpp"

namespace lmreg {

Basis Basis::simple_linear() { return Basis(BasisKind::simple_linear, 2, "simple_linear"); }

Basis Basis::polynomial(int degree) {
    if (degree < 0) throw std::invalid_argument("polynomial degree must be >= 0");
    return Basis(BasisKind::polynomial, degree + 1, "polynomial:" + std::to_string(degree));
}

Basis Basis::through_origin(int degree) {
    if (degree < 1) throw std::invalid_argument("through_origin degree must be >= 1");
    return Basis(BasisKind::through_origin, degree, "through_origin:" + std::to_string(degree));
}

Basis Basis::custom(std::vector<std::function<double(double)>> fns, std::string name) {
    if (fns.empty()) throw std::invalid_argument("custom basis needs at least one function");
    Basis b(BasisKind::custom, static_cast<int>(fns.size()), std::move(name));
    b.fns_ = std::move(fns);
    return b;
}

bool Basis::has_intercept() const {
    return kind_ == BasisKind::simple_linear || kind_ == BasisKind::polynomial;
}

void Basis::eval(double x, std::span<double> out) const {
    if (static_cast<int>(out.size()) != q_) throw std::invalid_argument("basis eval size");
    switch (kind_) {
        case BasisKind::simple_linear:
            out[0] = 1.0;
            out[1] = x;
            return;
        case BasisKind::polynomial: {
            double p = 1.0;
            for (int j = 0; j < q_; ++j, p *= x) out[j] = p;
            return;
        }
        case BasisKind::through_origin: {
            double p = x;
            for (int j = 0; j < q_; ++j, p *= x) out[j] = p;
            return;
        }
        case BasisKind::custom:
            for (int j = 0; j < q_; ++j) out[j] = fns_[j](x);
            return;
    }
}

std::vector<double> Basis::eval(double x) const {
    std::vector<double> out(q_);
    eval(x, std::span<double>(out));
    return out;
}

std::string FitResult::to_json() const {
    std::ostringstream os;
    os << "{\"beta_hat\":[";
    for (std::size_t j = 0; j < beta_hat.size(); ++j)
        os << (j ? "," : "") << io::format_double(beta_hat[j]);
    os << "],\"residual_se\":" << io::format_double(residual_se) << ",\"n\":" << n
       << ",\"basis\":\"" << basis_kind << "\"}";
    return os.str();
}

FitResult fit_lse(std::span<const double> X, std::span<const double> Y, const Basis& basis) {
    const std::size_t n = X.size();
    if (Y.size() != n) throw std::invalid_argument("fit_lse: X and Y length mismatch");
    const int q = basis.dim();
    if (n <= static_cast<std::size_t>(q))
        throw std::invalid_argument("fit_lse: need n > q observations");

    Eigen::MatrixXd D(n, q);
    std::vector<double> row(q);
    for (std::size_t t = 0; t < n; ++t) {
        basis.eval(X[t], std::span<double>(row));
        for (int j = 0; j < q; ++j) D(static_cast<Eigen::Index>(t), j) = row[j];
    }
    const Eigen::MatrixXd An = (D.transpose() * D) / static_cast<double>(n);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(An);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(q - 1);
    if (!(smin > 0.0) || !(smax / smin < 1e12))
        throw singular_design_error("fit_lse: design moment matrix is numerically singular");

    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(Y.data(), n);
    const Eigen::VectorXd beta = D.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd resid = y - D * beta;

    FitResult out;
    out.n = n;
    out.basis_kind = basis.name();
    out.beta_hat.assign(beta.data(), beta.data() + q);
    out.residuals.assign(resid.data(), resid.data() + n);
    out.An.resize(static_cast<std::size_t>(q) * q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) out.An[static_cast<std::size_t>(i) * q + j] = An(i, j);

    double xb = 0.0;
    for (double x : X) xb += x;
    out.xbar = xb / static_cast<double>(n);
    double s2 = 0.0;
    for (double x : X) s2 += (x - out.xbar) * (x - out.xbar);
    out.s2 = s2 / static_cast<double>(n);
    out.residual_se = std::sqrt(resid.squaredNorm() / static_cast<double>(n - q));
    return out;
}

std::tuple<double, double, double> plugin_constants(std::span<const double> X,
                                                    std::span<const double> V, double s) {
    const std::size_t n = X.size();
    if (V.size() != n) throw std::invalid_argument("plugin_constants: length mismatch");
    double c1 = 0.0, s0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (V[i] < 0.0) throw std::invalid_argument("plugin_constants: V must be nonnegative");
        c1 += X[i] * X[i] * V[i];
        s0 += V[i];
    }
    const double dn = static_cast<double>(n);
    return {c1 / dn, s0 / dn, s};
}

}  // namespace lmreg
