#include "lmreg/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lmreg {

void require_memory_param(double a, const char* what) {
    if (!(a > 0.5 && a < 1.0))
        throw std::domain_error(std::string(what) + " must lie in (1/2, 1), got " +
                                std::to_string(a));
}

double theta(double a) {
    require_memory_param(a, "memory parameter");
    return 2.0 * std::tgamma(2.0 - 2.0 * a) * std::cos(std::numbers::pi * (1.0 - a));
}

double d_const(double a) {
    require_memory_param(a, "memory parameter");
    return theta(a) / (a * (2.0 * a - 1.0));
}

double g_u_farima(double H) {
    require_memory_param(H, "H");
    const double d = H - 0.5;
    // Gamma(1-d)^2 / (2 pi Gamma(1-2d))
    const double lg = 2.0 * std::lgamma(1.0 - d) - std::lgamma(1.0 - 2.0 * d);
    return std::exp(lg) / (2.0 * std::numbers::pi);
}

double g_x_fgn(double h) { return 1.0 / d_const(h); }

double farima_sumsq(double d) {
    if (d == 0.0) return 1.0;
    return std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace lmreg
