#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmreg {

// Memory parameters in (1/2, 1): h for the design process, H for the errors.
struct MemoryParams {
    std::optional<double> h;
    std::optional<double> H;
};

enum class SeriesKind { fgn, farima_ma, ingested };

std::string to_string(SeriesKind k);
SeriesKind series_kind_from_string(const std::string& s);

// A simulated or ingested real-valued series with its memory metadata.
struct LMSeries {
    std::vector<double> values;
    SeriesKind kind = SeriesKind::ingested;
    MemoryParams params;
    std::optional<std::uint64_t> seed;

    std::size_t n() const { return values.size(); }
    double mean() const;
    double sd() const;  // 1/(n-1) convention
};

// Single-column CSV with header `value`; metadata goes to a key=value
// sidecar at <path>.meta (kind, h/H when set, seed, n).
void write_series_csv(const std::string& path, const LMSeries& s);
LMSeries read_series_csv(const std::string& path);

}  // namespace lmreg
