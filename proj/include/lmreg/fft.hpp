#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lmreg::fft {

// Unnormalized complex DFT of arbitrary length (FFTW backend, plans cached
// per size). forward: X_k = sum_t x_t exp(-2 pi i t k / n). Safe to call
// concurrently; plan creation is serialized internally.
void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out, bool inverse = false);

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& in,
                                            bool inverse = false);

// Linear convolution of two real sequences, length la + lb - 1.
// Uses a zero-padded FFT above a small size threshold, direct sum below.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

}  // namespace lmreg::fft
