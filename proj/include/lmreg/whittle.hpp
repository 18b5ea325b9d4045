#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmreg {

// Periodogram ordinates I(lambda_j) = |(2 pi n)^{-1/2} sum_t x_t e^{i t lambda_j}|^2
// at the Fourier frequencies lambda_j = 2 pi j / n, j = 1..floor(n/2).
struct Periodogram {
    std::vector<double> ordinates;
    std::vector<double> freqs;
};

// subtract_mean recenters the series first; this only perturbs the j >= 1
// ordinates at the 1e-16 level but stabilizes the lowest frequencies.
Periodogram periodogram(std::span<const double> x, bool subtract_mean = true);

// All n raw DFT ordinates (j = 0..n-1), no centering. Satisfies
// sum_j I_j = (2 pi)^{-1} sum_t x_t^2.
std::vector<double> periodogram_all(std::span<const double> x);

struct WhittleResult {
    double H_hat = 0.0;
    double G_hat = 0.0;
    double psi1_hat = 0.0;
    std::size_t m = 0;
    double a1 = 0.0;
    double a2 = 0.0;
    int minimizer_iterations = 0;
    bool clamped = false;  // argmin landed on a bracket endpoint

    std::string to_json() const;
};

class degenerate_data_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Local Whittle estimate of (H, G) from the first m ordinates:
//   Q(psi) = (1/m) sum_{j<=m} lambda_j^{2 psi - 1} I(lambda_j),
//   R(psi) = log Q(psi) - (2 psi - 1) (1/m) sum_{j<=m} log lambda_j,
//   H_hat = argmin over the bracket, G_hat = Q(H_hat).
// The objective is not assumed unimodal: golden-section searches run from 5
// equispaced sub-brackets and the best minimum gets one parabolic refinement.
WhittleResult local_whittle(std::span<const double> x, std::size_t m,
                            std::pair<double, double> bracket = {0.501, 0.999});

// sqrt(G_hat * D(H_hat)); the scale constant in the limit of n^{-H} partial
// sums of the error process.
double psi1_hat(double G_hat, double H_hat);

struct BandwidthCondition {
    double value = 0.0;        // (ln n)^4 ((m/n)^{2H-1} + m^{2(H-h)} / n^{1+H-2h})
    double value_at_2n = 0.0;  // same expression at 2n with m scaled by the n^a rule
    bool satisfied_trend = false;
};

// Evaluates the bandwidth growth condition at (n, m) and at (2n, m(2n)) with
// the exponent a = log m / log n held fixed; n and m may be non-integer.
BandwidthCondition check_bandwidth_condition(double n, double m, double H, double h);

}  // namespace lmreg
