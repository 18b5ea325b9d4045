#include "lmreg/gof.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lmreg/io_util.hpp"
#include "lmreg/special.hpp"

namespace lmreg {

double StepFunction::operator()(double x) const {
    // index of last knot <= x
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    if (it == knots.begin()) return 0.0;
    return values[static_cast<std::size_t>(it - knots.begin()) - 1];
}

double StepFunction::sup_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::vector<std::size_t> order_by(std::span<const double> X) {
    std::vector<std::size_t> idx(X.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return X[a] < X[b]; });
    return idx;
}

// Cumulative sums of `marks` in X-order, collapsed to distinct knots so the
// intermediate values inside a tie group are never exposed.
StepFunction cumulate(std::span<const double> X, const std::vector<double>& marks) {
    const auto idx = order_by(X);
    StepFunction f;
    f.knots.reserve(X.size());
    f.values.reserve(X.size());
    double acc = 0.0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        acc += marks[idx[r]];
        const double x = X[idx[r]];
        if (!f.knots.empty() && f.knots.back() == x) {
            f.values.back() = acc;
        } else {
            f.knots.push_back(x);
            f.values.push_back(acc);
        }
    }
    return f;
}

}  // namespace

StepFunction vtilde(std::span<const double> X, std::span<const double> Y,
                    const FitResult& fit) {
    if (X.size() != Y.size() || X.size() != fit.residuals.size())
        throw std::invalid_argument("vtilde: length mismatch");
    return cumulate(X, fit.residuals);
}

LooVariance loo_variance(std::span<const double> X, std::span<const double> residuals,
                         double b, const Kernel& k, bool studentize) {
    const std::size_t n = X.size();
    if (residuals.size() != n) throw std::invalid_argument("loo_variance: length mismatch");
    if (n < 2) throw std::invalid_argument("loo_variance: need n >= 2");
    if (!(b > 0.0)) throw std::invalid_argument("loo_variance: bandwidth must be positive");

    std::vector<double> Z(X.begin(), X.end());
    if (studentize) {
        double m = 0.0;
        for (double x : Z) m += x;
        m /= static_cast<double>(n);
        double v = 0.0;
        for (double x : Z) v += (x - m) * (x - m);
        const double s = std::sqrt(v / static_cast<double>(n));
        if (!(s > 0.0)) throw std::invalid_argument("loo_variance: degenerate design");
        for (double& x : Z) x = (x - m) / s;
    }

    LooVariance out;
    out.b = b;
    out.kernel = k.kind;
    out.V.resize(n);
    out.lambda.resize(n);
    const double cut = b * k.support();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            if (t == i) continue;
            const double d = Z[i] - Z[t];
            if (std::abs(d) > cut) continue;
            acc += k(d / b) / b * residuals[t] * residuals[t];
        }
        out.lambda[i] = std::sqrt(acc / static_cast<double>(n - 1));
        out.V[i] = out.lambda[i] / std::sqrt(normal_pdf(Z[i]));
    }
    return out;
}

StepFunction jhat(std::span<const double> X, const LooVariance& loo, const Basis& basis) {
    const std::size_t n = X.size();
    if (loo.V.size() != n) throw std::invalid_argument("jhat: length mismatch");
    const int q = basis.dim();

    Eigen::MatrixXd An = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd R(n, q);
    std::vector<double> row(q);
    for (std::size_t t = 0; t < n; ++t) {
        basis.eval(X[t], std::span<double>(row));
        for (int j = 0; j < q; ++j) R(static_cast<Eigen::Index>(t), j) = row[j];
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) An(i, j) += row[i] * row[j];
    }
    An /= static_cast<double>(n);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(An);
    if (!lu.isInvertible())
        throw singular_design_error("jhat: sample moment matrix is singular");

    Eigen::VectorXd rv = Eigen::VectorXd::Zero(q);  // n^{-1} sum r(X_t) V_t
    for (std::size_t t = 0; t < n; ++t)
        rv += R.row(static_cast<Eigen::Index>(t)).transpose() * loo.V[t];
    rv /= static_cast<double>(n);
    const Eigen::VectorXd c = lu.solve(rv);  // An^{-1} (n^{-1} sum r V)

    // J(x) = prefix(V)/n - c' prefix(r)/n, evaluated at each knot
    const auto idx = order_by(X);
    StepFunction f;
    double accV = 0.0;
    Eigen::VectorXd accR = Eigen::VectorXd::Zero(q);
    const double dn = static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t t = idx[r];
        accV += loo.V[t];
        accR += R.row(static_cast<Eigen::Index>(t)).transpose();
        const double val = accV / dn - c.dot(accR) / dn;
        const double x = X[t];
        if (!f.knots.empty() && f.knots.back() == x) {
            f.values.back() = val;
        } else {
            f.knots.push_back(x);
            f.values.push_back(val);
        }
    }
    return f;
}

std::string GofResult::to_json() const {
    std::ostringstream os;
    os << "{\"Dn\":" << io::format_double(Dn) << ",\"p_value\":" << io::format_double(p_value)
       << ",\"sup_V\":" << io::format_double(sup_V) << ",\"sup_J\":" << io::format_double(sup_J)
       << ",\"H_hat\":" << io::format_double(H_hat)
       << ",\"psi1_hat\":" << io::format_double(psi1_hat) << ",\"n\":" << n << "}";
    return os.str();
}

GofResult dn_test(std::span<const double> X, std::span<const double> Y,
                  const FitResult& fit, const WhittleResult& whittle,
                  const LooVariance& loo, const Basis& basis) {
    const auto vt = vtilde(X, Y, fit);
    const auto jn = jhat(X, loo, basis);
    GofResult out;
    out.n = X.size();
    out.H_hat = whittle.H_hat;
    out.psi1_hat = whittle.psi1_hat;
    out.sup_V = vt.sup_abs();
    out.sup_J = jn.sup_abs();
    if (!(out.sup_J > 0.0))
        throw degenerate_test_error("dn_test: sup|J_n| = 0, test inapplicable");
    const double scale =
        std::pow(static_cast<double>(out.n), whittle.H_hat) * whittle.psi1_hat * out.sup_J;
    if (!(scale > 0.0))
        throw degenerate_test_error("dn_test: degenerate normalization");
    out.Dn = out.sup_V / scale;
    out.p_value = 2.0 * (1.0 - normal_cdf(out.Dn));
    return out;
}

std::string gof_curves_csv(const StepFunction& vt, const StepFunction& jn) {
    std::ostringstream os;
    os << "knot,Vtilde,Jhat\n";
    for (std::size_t i = 0; i < vt.knots.size(); ++i) {
        const double x = vt.knots[i];
        os << io::format_double(x) << "," << io::format_double(vt.values[i]) << ","
           << io::format_double(jn(x)) << "\n";
    }
    return os.str();
}

}  // namespace lmreg
