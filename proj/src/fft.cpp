#include "lmreg/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lmreg::fft {

namespace {

// fftw_execute is thread-safe; plan creation is not. Plans are created once
// per (size, direction) with FFTW_UNALIGNED so they can run on any buffer.
class PlanCache {
  public:
    fftw_plan get(std::size_t n, bool inverse) {
        const auto key = std::make_pair(n, inverse);
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch_in(n), scratch_out(n);
        fftw_plan p = fftw_plan_dft_1d(
            static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch_in.data()),
            reinterpret_cast<fftw_complex*>(scratch_out.data()),
            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out, bool inverse) {
    const std::size_t n = in.size();
    if (out.size() != n) throw std::invalid_argument("fft: size mismatch");
    if (n == 0) return;
    if (n == 1) {
        out[0] = in[0];
        return;
    }
    fftw_plan p = cache().get(n, inverse);
    // out-of-place execute requires distinct buffers
    std::vector<std::complex<double>> tmp(in.begin(), in.end());
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<std::complex<double>> transform(const std::vector<std::complex<double>>& in,
                                            bool inverse) {
    std::vector<std::complex<double>> out(in.size());
    transform(std::span<const std::complex<double>>(in), std::span(out), inverse);
    return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t la = a.size(), lb = b.size(), lc = la + lb - 1;
    std::vector<double> out(lc, 0.0);
    if (la * lb <= (1u << 16)) {
        for (std::size_t i = 0; i < la; ++i)
            for (std::size_t j = 0; j < lb; ++j) out[i + j] += a[i] * b[j];
        return out;
    }
    std::size_t m = 1;
    while (m < lc) m <<= 1;
    std::vector<std::complex<double>> fa(m), fb(m);
    for (std::size_t i = 0; i < la; ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < lb; ++i) fb[i] = b[i];
    auto Fa = transform(fa);
    auto Fb = transform(fb);
    for (std::size_t i = 0; i < m; ++i) Fa[i] *= Fb[i];
    auto c = transform(Fa, /*inverse=*/true);
    for (std::size_t i = 0; i < lc; ++i) out[i] = c[i].real() / static_cast<double>(m);
    return out;
}

}  // namespace lmreg::fft
