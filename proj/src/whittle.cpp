#include "lmreg/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lmreg/fft.hpp"
#include "lmreg/io_util.hpp"
#include "lmreg/special.hpp"

namespace lmreg {

namespace {

std::vector<double> dft_ordinates(std::span<const double> x, bool subtract_mean) {
    const std::size_t n = x.size();
    double mean = 0.0;
    if (subtract_mean) {
        for (double v : x) mean += v;
        mean /= static_cast<double>(n);
    }
    std::vector<std::complex<double>> in(n);
    for (std::size_t t = 0; t < n; ++t) in[t] = x[t] - mean;
    const auto out = fft::transform(in);
    const double scale = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(n));
    std::vector<double> I(n);
    for (std::size_t j = 0; j < n; ++j) I[j] = std::norm(out[j]) * scale;
    return I;
}

}  // namespace

Periodogram periodogram(std::span<const double> x, bool subtract_mean) {
    const std::size_t n = x.size();
    if (n < 4) throw std::invalid_argument("periodogram: need n >= 4");
    const auto I = dft_ordinates(x, subtract_mean);
    Periodogram p;
    const std::size_t half = n / 2;
    p.ordinates.resize(half);
    p.freqs.resize(half);
    for (std::size_t j = 1; j <= half; ++j) {
        p.ordinates[j - 1] = I[j];
        p.freqs[j - 1] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    }
    return p;
}

std::vector<double> periodogram_all(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("periodogram_all: empty series");
    return dft_ordinates(x, /*subtract_mean=*/false);
}

std::string WhittleResult::to_json() const {
    std::ostringstream os;
    os << "{\"H_hat\":" << io::format_double(H_hat)
       << ",\"G_hat\":" << io::format_double(G_hat)
       << ",\"psi1_hat\":" << io::format_double(psi1_hat) << ",\"m\":" << m
       << ",\"a1\":" << io::format_double(a1) << ",\"a2\":" << io::format_double(a2)
       << ",\"minimizer_iterations\":" << minimizer_iterations << "}";
    return os.str();
}

WhittleResult local_whittle(std::span<const double> x, std::size_t m,
                            std::pair<double, double> bracket) {
    const std::size_t n = x.size();
    if (n < 4) throw std::invalid_argument("local_whittle: need n >= 4");
    if (m < 1 || m >= (n + 1) / 2)
        throw std::invalid_argument("local_whittle: need 1 <= m < n/2");
    const auto [a1, a2] = bracket;
    if (!(0.5 < a1 && a1 < a2 && a2 < 1.0))
        throw std::invalid_argument("local_whittle: bracket must satisfy 1/2 < a1 < a2 < 1");

    const auto p = periodogram(x);
    double mean_loglam = 0.0;
    bool any_positive = false;
    std::vector<double> loglam(m), I(m);
    for (std::size_t j = 0; j < m; ++j) {
        loglam[j] = std::log(p.freqs[j]);
        I[j] = p.ordinates[j];
        mean_loglam += loglam[j];
        any_positive = any_positive || I[j] > 0.0;
    }
    mean_loglam /= static_cast<double>(m);
    if (!any_positive)
        throw degenerate_data_error("local_whittle: all low-frequency ordinates are zero");

    int evals = 0;
    auto Q = [&](double psi) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            acc += std::exp((2.0 * psi - 1.0) * loglam[j]) * I[j];
        return acc / static_cast<double>(m);
    };
    auto R = [&](double psi) {
        ++evals;
        return std::log(Q(psi)) - (2.0 * psi - 1.0) * mean_loglam;
    };

    // golden-section from 5 equispaced sub-brackets
    constexpr double gr = 0.6180339887498949;
    constexpr double tol = 1e-8;
    double best_psi = a1, best_val = R(a1);
    {
        const double vb = R(a2);
        if (vb < best_val) {
            best_val = vb;
            best_psi = a2;
        }
    }
    constexpr int kStarts = 5;
    for (int s = 0; s < kStarts; ++s) {
        double lo = a1 + (a2 - a1) * s / kStarts;
        double hi = a1 + (a2 - a1) * (s + 1) / kStarts;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = R(x1), f2 = R(x2);
        while (hi - lo > tol) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = R(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = R(x2);
            }
        }
        const double mid = 0.5 * (lo + hi);
        const double fm = R(mid);
        if (fm < best_val) {
            best_val = fm;
            best_psi = mid;
        }
    }

    // one parabolic refinement through (psi - d, psi, psi + d)
    {
        const double d = 64.0 * tol;
        const double lo = std::max(a1, best_psi - d), hi = std::min(a2, best_psi + d);
        const double mid = 0.5 * (lo + hi);
        const double f0 = R(lo), f1 = R(mid), f2 = R(hi);
        const double denom = (f0 - 2.0 * f1 + f2);
        if (denom > 0.0) {
            double cand = mid + 0.5 * (f0 - f2) / denom * (hi - mid);
            cand = std::clamp(cand, a1, a2);
            if (R(cand) < best_val) best_psi = cand;
        }
    }

    WhittleResult out;
    out.H_hat = std::clamp(best_psi, a1, a2);
    out.G_hat = Q(out.H_hat);
    out.psi1_hat = psi1_hat(out.G_hat, out.H_hat);
    out.m = m;
    out.a1 = a1;
    out.a2 = a2;
    out.minimizer_iterations = evals;
    out.clamped = (out.H_hat - a1 < 2.0 * tol) || (a2 - out.H_hat < 2.0 * tol);
    return out;
}

double psi1_hat(double G_hat, double H_hat) {
    if (G_hat < 0.0) throw std::domain_error("psi1_hat: G must be >= 0");
    if (G_hat == 0.0) return 0.0;
    return std::sqrt(G_hat * d_const(H_hat));
}

BandwidthCondition check_bandwidth_condition(double n, double m, double H, double h) {
    require_memory_param(H, "H");
    require_memory_param(h, "h");
    if (!(n > 1.0) || !(m > 0.0)) throw std::invalid_argument("check_bandwidth_condition: n > 1, m > 0");
    auto value_at = [&](double nn, double mm) {
        const double ln4 = std::pow(std::log(nn), 4);
        const double term1 = std::pow(mm / nn, 2.0 * H - 1.0);
        const double term2 = std::pow(mm, 2.0 * (H - h)) / std::pow(nn, 1.0 + H - 2.0 * h);
        return ln4 * (term1 + term2);
    };
    const double a = std::log(m) / std::log(n);
    BandwidthCondition out;
    out.value = value_at(n, m);
    out.value_at_2n = value_at(2.0 * n, std::pow(2.0 * n, a));
    out.satisfied_trend = out.value_at_2n < out.value;
    return out;
}

}  // namespace lmreg
