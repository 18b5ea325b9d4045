#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lmreg/simulate.hpp"
#include "lmreg/special.hpp"
#include "lmreg/whittle.hpp"
#include "oracle_utils.hpp"

using namespace lmreg;

TEST_CASE("periodogram of the zero series vanishes") {
    const std::vector<double> x(64, 0.0);
    for (double v : periodogram(x).ordinates) CHECK(v == 0.0);
}

TEST_CASE("pure cosine concentrates at its own frequency") {
    const std::size_t n = 128, k = 9;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t)
        x[t] = std::cos(2.0 * std::numbers::pi * k * (t + 1.0) / n);
    const auto p = periodogram(x);
    const double peak = p.ordinates[k - 1];
    for (std::size_t j = 0; j < p.ordinates.size(); ++j)
        if (j != k - 1) CHECK(p.ordinates[j] <= 1e-9 * peak);
}

TEST_CASE("Parseval against the direct sum") {
    const auto x = gen_fgn(64, 0.8, 0.3, 1.0, 17).values;
    // direct O(n^2) periodogram
    std::vector<double> direct(64);
    for (std::size_t j = 0; j < 64; ++j) {
        const double lam = 2.0 * std::numbers::pi * j / 64.0;
        double re = 0.0, im = 0.0;
        for (std::size_t t = 0; t < 64; ++t) {
            re += x[t] * std::cos((t + 1.0) * lam);
            im += x[t] * std::sin((t + 1.0) * lam);
        }
        direct[j] = (re * re + im * im) / (2.0 * std::numbers::pi * 64.0);
    }
    const auto I = periodogram_all(x);
    double sumI = 0.0, sumX = 0.0, sumD = 0.0;
    for (std::size_t j = 0; j < 64; ++j) {
        CHECK(I[j] == doctest::Approx(direct[j]).epsilon(1e-9).scale(direct[0] + 1.0));
        sumI += I[j];
        sumD += direct[j];
    }
    for (double v : x) sumX += v * v;
    CHECK(sumI == doctest::Approx(sumX / (2.0 * std::numbers::pi)).epsilon(1e-9));
    CHECK(sumD == doctest::Approx(sumX / (2.0 * std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("adding a constant leaves the j >= 1 ordinates unchanged") {
    const auto x = gen_fgn(100, 0.7, 0.0, 1.0, 23).values;
    std::vector<double> shifted(x);
    for (double& v : shifted) v += 5.0;
    const auto p1 = periodogram(x);
    const auto p2 = periodogram(shifted);
    for (std::size_t j = 0; j < p1.ordinates.size(); ++j)
        CHECK(p2.ordinates[j] ==
              doctest::Approx(p1.ordinates[j]).epsilon(1e-9).scale(p1.ordinates[j] + 1e-12));
}

TEST_CASE("local whittle recovers H on simulated FARIMA") {
    const std::size_t n = 4096;
    const auto m = static_cast<std::size_t>(std::pow(double(n), 0.8));
    std::vector<double> hats;
    for (std::uint64_t s = 0; s < 100; ++s)
        hats.push_back(local_whittle(gen_farima_ma(n, 0.8, 900 + s).values, m).H_hat);
    CHECK(oracle::mean(hats) == doctest::Approx(0.8).epsilon(0.0625));  // 0.8 +- 0.05
}

TEST_CASE("whittle scale equivariance") {
    const auto x = gen_farima_ma(1024, 0.7, 41).values;
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= 3.0;
    const auto w1 = local_whittle(x, 128);
    const auto w2 = local_whittle(scaled, 128);
    CHECK(w2.H_hat == doctest::Approx(w1.H_hat).epsilon(1e-6));
    CHECK(w2.G_hat == doctest::Approx(9.0 * w1.G_hat).epsilon(1e-5));
}

TEST_CASE("H stays in the bracket; degenerate input throws") {
    const auto x = gen_farima_ma(512, 0.95, 55).values;
    const auto w = local_whittle(x, 64, {0.6, 0.7});
    CHECK(w.H_hat >= 0.6);
    CHECK(w.H_hat <= 0.7);
    CHECK(w.clamped);

    const std::vector<double> zeros(64, 0.0);
    CHECK_THROWS_AS(local_whittle(zeros, 8), degenerate_data_error);
    CHECK_THROWS_AS(local_whittle(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(local_whittle(x, 256), std::invalid_argument);
    CHECK_THROWS_AS(local_whittle(x, 64, {0.4, 0.9}), std::invalid_argument);
}

TEST_CASE("psi1_hat values") {
    CHECK(psi1_hat(1.0, 0.75) == doctest::Approx(std::sqrt(6.684342065682668)).epsilon(1e-10));
    CHECK(psi1_hat(0.0, 0.75) == 0.0);
    CHECK(psi1_hat(4.0, 0.75) == doctest::Approx(2.0 * psi1_hat(1.0, 0.75)).epsilon(1e-12));
    CHECK_THROWS_AS(psi1_hat(-1.0, 0.75), std::domain_error);
}

TEST_CASE("bandwidth growth condition") {
    // m = n^0.8 with H >= h: the expression falls from n to 2n once n is
    // large enough for the power factor to dominate the log factor
    const auto ok = check_bandwidth_condition(1e18, std::pow(1e18, 0.8), 0.9, 0.6);
    CHECK(ok.value > 0.0);
    CHECK(ok.satisfied_trend);

    // H < h with too small an exponent: still growing at this n
    const auto bad = check_bandwidth_condition(1e12, std::pow(1e12, 0.5), 0.6, 0.9);
    CHECK(bad.value > 0.0);
    CHECK_FALSE(bad.satisfied_trend);
}
