#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lmreg/special.hpp"
#include "oracle_utils.hpp"

using namespace lmreg;

TEST_CASE("theta closed-form values") {
    // theta(3/4) = 2 Gamma(1/2) cos(pi/4) = sqrt(2 pi)
    CHECK(theta(0.75) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(theta(0.6) ==
          doctest::Approx(2.0 * std::tgamma(0.8) * std::cos(0.4 * std::numbers::pi))
              .epsilon(1e-12));
    CHECK(theta(0.51) > 0.0);
    CHECK(theta(0.99) > 0.0);
    CHECK_THROWS_AS(theta(0.5), std::domain_error);
    CHECK_THROWS_AS(theta(1.0), std::domain_error);
    CHECK_THROWS_AS(theta(0.3), std::domain_error);
}

TEST_CASE("d_const values and divergence near 1/2") {
    CHECK(d_const(0.75) == doctest::Approx(6.684342065682668).epsilon(1e-12));
    CHECK(d_const(0.9) == doctest::Approx(theta(0.9) / 0.72).epsilon(1e-12));
    // theta(a) ~ pi (2a-1) cancels the denominator zero: D -> 2 pi at 1/2+
    CHECK(d_const(0.5001) == doctest::Approx(2.0 * std::numbers::pi).epsilon(2e-4));
    CHECK(std::isfinite(d_const(0.500001)));
    CHECK_THROWS_AS(d_const(0.5), std::domain_error);
}

TEST_CASE("normal cdf/pdf sanity") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(2.0 * (1.0 - normal_cdf(1.959964)) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("farima spectral constant matches the acvf tail") {
    // For the unit-variance FARIMA sequence gamma_u(k) ~ G_u theta(H) k^{2H-2}
    // with G_u theta(H) = Gamma(1-d)/Gamma(d); both routes must agree.
    for (double H : {0.6, 0.75, 0.9}) {
        const double d = H - 0.5;
        const double lhs = g_u_farima(H) * theta(H);
        const double rhs = std::tgamma(1.0 - d) / std::tgamma(d);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("g_x convention: unit-variance fGn has G_X theta(h) = h(2h-1)") {
    for (double h : {0.6, 0.75, 0.9})
        CHECK(g_x_fgn(h) * theta(h) == doctest::Approx(h * (2.0 * h - 1.0)).epsilon(1e-12));
}
