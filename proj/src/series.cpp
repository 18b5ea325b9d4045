#include "lmreg/series.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lmreg/io_util.hpp"

namespace lmreg {

std::string to_string(SeriesKind k) {
    switch (k) {
        case SeriesKind::fgn: return "fgn";
        case SeriesKind::farima_ma: return "farima_ma";
        case SeriesKind::ingested: return "ingested";
    }
    return "ingested";
}

SeriesKind series_kind_from_string(const std::string& s) {
    if (s == "fgn") return SeriesKind::fgn;
    if (s == "farima_ma") return SeriesKind::farima_ma;
    if (s == "ingested") return SeriesKind::ingested;
    throw std::invalid_argument("unknown series kind: " + s);
}

double LMSeries::mean() const {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double LMSeries::sd() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

void write_series_csv(const std::string& path, const LMSeries& s) {
    std::ostringstream body;
    body << "value\n";
    for (double v : s.values) body << io::format_double(v) << "\n";
    io::atomic_write(path, body.str());

    std::ostringstream meta;
    meta << "kind=" << to_string(s.kind) << "\n";
    if (s.params.h) meta << "h=" << io::format_double(*s.params.h) << "\n";
    if (s.params.H) meta << "H=" << io::format_double(*s.params.H) << "\n";
    if (s.seed) meta << "seed=" << *s.seed << "\n";
    meta << "n=" << s.n() << "\n";
    io::atomic_write(path + ".meta", meta.str());
}

LMSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);
    LMSeries s;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty series file: " + path);
    if (io::trim(line) != "value")
        throw std::runtime_error("series file must start with a `value` header: " + path);
    while (std::getline(in, line)) {
        line = io::trim(line);
        if (line.empty()) continue;
        s.values.push_back(std::stod(line));
    }
    if (s.values.size() < 2) throw std::runtime_error("series needs at least 2 values");
    for (double v : s.values)
        if (!std::isfinite(v)) throw std::runtime_error("series contains non-finite values");

    std::ifstream meta(path + ".meta");
    if (meta) {
        while (std::getline(meta, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = io::trim(line.substr(0, eq));
            const std::string val = io::trim(line.substr(eq + 1));
            if (key == "kind") s.kind = series_kind_from_string(val);
            else if (key == "h") s.params.h = std::stod(val);
            else if (key == "H") s.params.H = std::stod(val);
            else if (key == "seed") s.seed = std::stoull(val);
        }
    }
    return s;
}

}  // namespace lmreg
