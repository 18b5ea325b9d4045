#pragma once

#include <cstddef>

namespace lmreg {

// theta(a) = 2 Gamma(2-2a) cos(pi (1-a)), strictly positive on (1/2, 1).
double theta(double a);

// D(a) = theta(a) / (a (2a-1)); diverges as a -> 1/2+.
double d_const(double a);

// Spectral constant of the unit-variance FARIMA(0, H-1/2, 0) moving average:
// f_u(lambda) ~ G_u lambda^{1-2H} as lambda -> 0+.
double g_u_farima(double H);

// Spectral-scale constant induced by unit-variance fGn: G_X = 1 / D(h),
// so that gamma_X(k) ~ G_X theta(h) k^{-2(1-h)} matches the exact ACVF tail.
double g_x_fgn(double h);

// Sum of squared raw FARIMA(0,d,0) MA coefficients, Gamma(1-2d)/Gamma(1-d)^2.
double farima_sumsq(double d);

// Standard normal density and CDF.
double normal_pdf(double x);
double normal_cdf(double x);

// Throws std::domain_error unless 1/2 < a < 1. `what` names the parameter.
void require_memory_param(double a, const char* what);

}  // namespace lmreg
