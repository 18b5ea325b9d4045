#include "lmreg/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lmreg/io_util.hpp"
#include "lmreg/simulate.hpp"

namespace lmreg {

namespace {

bool is_missing(const std::string& v) {
    return v.empty() || v == "ND" || v == "NA" || v == "nd" || v == "na" || v == ".";
}

std::string month_of(const std::string& iso_date) {
    // YYYY-MM from YYYY-MM-DD; anything shorter is its own group
    return iso_date.size() >= 7 ? iso_date.substr(0, 7) : iso_date;
}

}  // namespace

std::vector<FxRecord> read_fx_csv(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty data file: " + path);
    const auto header = io::split_csv_line(line);
    std::size_t date_col = static_cast<std::size_t>(-1), val_col = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "date") date_col = i;
        if (header[i] == column) val_col = i;
    }
    if (date_col == static_cast<std::size_t>(-1))
        throw std::runtime_error("data file needs a `date` column: " + path);
    if (val_col == static_cast<std::size_t>(-1))
        throw std::runtime_error("data file has no column `" + column + "`: " + path);

    std::vector<FxRecord> out;
    std::string prev_date;
    while (std::getline(in, line)) {
        if (io::trim(line).empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (fields.size() <= std::max(date_col, val_col))
            throw std::runtime_error("short row in " + path + ": " + line);
        FxRecord rec;
        rec.date = fields[date_col];
        if (!prev_date.empty() && !(prev_date < rec.date))
            throw std::runtime_error("dates must be strictly increasing at " + rec.date);
        prev_date = rec.date;
        const std::string& v = fields[val_col];
        if (!is_missing(v)) {
            const double r = std::stod(v);
            if (!(r > 0.0))
                throw std::runtime_error("nonpositive rate at " + rec.date);
            rec.rate = r;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

LMSeries ingest_fx(const std::string& path, const std::string& column, bool monthly_last) {
    auto records = read_fx_csv(path, column);
    std::vector<double> rates;
    rates.reserve(records.size());
    if (monthly_last) {
        // keep the last present observation of each month
        std::string cur_month;
        std::optional<double> cur_rate;
        for (const auto& r : records) {
            if (!r.rate) continue;
            const auto m = month_of(r.date);
            if (m != cur_month && cur_rate) {
                rates.push_back(*cur_rate);
                cur_rate.reset();
            }
            cur_month = m;
            cur_rate = r.rate;
        }
        if (cur_rate) rates.push_back(*cur_rate);
    } else {
        for (const auto& r : records)
            if (r.rate) rates.push_back(*r.rate);
    }
    if (rates.size() < 3)
        throw std::runtime_error("insufficient data: need at least 3 usable rows");

    LMSeries s;
    s.kind = SeriesKind::ingested;
    s.values.resize(rates.size() - 1);
    for (std::size_t i = 1; i < rates.size(); ++i)
        s.values[i - 1] = std::log(rates[i]) - std::log(rates[i - 1]);
    return s;
}

std::string QQData::to_csv() const {
    std::ostringstream os;
    os << "sim_q,data_q\n";
    for (std::size_t i = 0; i < data_q.size(); ++i)
        os << io::format_double(sim_q[i]) << "," << io::format_double(data_q[i]) << "\n";
    return os.str();
}

QQData qq_data(std::span<const double> series, double h_hat, std::uint64_t seed) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("qq_data: need n >= 2");
    QQData out;
    out.data_q.assign(series.begin(), series.end());
    double m = 0.0;
    for (double v : out.data_q) m += v;
    m /= static_cast<double>(n);
    double v2 = 0.0;
    for (double v : out.data_q) v2 += (v - m) * (v - m);
    const double sd = std::sqrt(v2 / static_cast<double>(n - 1));
    if (sd > 0.0) {
        for (double& v : out.data_q) v = (v - m) / sd;
    } else {
        out.degenerate = true;
        for (double& v : out.data_q) v = 0.0;
    }
    std::sort(out.data_q.begin(), out.data_q.end());
    out.sim_q = gen_fgn(n, h_hat, 0.0, 1.0, seed).values;
    std::sort(out.sim_q.begin(), out.sim_q.end());
    return out;
}

std::string PipelineReport::to_json() const {
    std::ostringstream os;
    os << "{\"n\":" << n << ",\"x_file\":\"" << x_file << "\",\"y_file\":\"" << y_file
       << "\",\"x_mean\":" << io::format_double(x_mean)
       << ",\"x_sd\":" << io::format_double(x_sd)
       << ",\"y_mean\":" << io::format_double(y_mean)
       << ",\"y_sd\":" << io::format_double(y_sd)
       << ",\"H_x\":" << io::format_double(H_x) << ",\"H_y\":" << io::format_double(H_y)
       << ",\"H_resid\":" << io::format_double(H_resid)
       << ",\"H_resid_std\":" << io::format_double(H_resid_std)
       << ",\"fit\":" << fit.to_json() << ",\"gof\":" << gof.to_json() << "}";
    return os.str();
}

PipelineReport run_pipeline_series(const LMSeries& x, const LMSeries& y,
                                   const PipelineOptions& opt) {
    if (x.n() != y.n())
        throw std::invalid_argument("pipeline: X and Y series length mismatch");
    const std::size_t n = x.n();
    const std::size_t m = opt.m > 0 ? opt.m : n / 8;

    PipelineReport rep;
    rep.n = n;
    rep.x_mean = x.mean();
    rep.x_sd = x.sd();
    rep.y_mean = y.mean();
    rep.y_sd = y.sd();

    const std::pair<double, double> bracket{opt.a1, opt.a2};
    rep.H_x = local_whittle(x.values, m, bracket).H_hat;
    rep.H_y = local_whittle(y.values, m, bracket).H_hat;

    const Basis basis = opt.intercept ? Basis::simple_linear() : Basis::through_origin(1);
    rep.fit = fit_lse(x.values, y.values, basis);
    // an (up to rounding) exact fit leaves nothing to test against
    if (rep.fit.residual_se <= 1e-12 * std::max(rep.y_sd, 1e-300))
        throw degenerate_test_error("pipeline: residuals are numerically zero");

    // test in studentized units when requested; the fit above stays in the
    // original units for reporting
    std::vector<double> xv = x.values, yv = y.values;
    if (opt.standardize_for_test && rep.x_sd > 0.0 && rep.y_sd > 0.0) {
        for (double& v : xv) v = (v - rep.x_mean) / rep.x_sd;
        for (double& v : yv) v = (v - rep.y_mean) / rep.y_sd;
    }
    const LMSeries xs{xv, x.kind, x.params, x.seed};
    const LMSeries ys{yv, y.kind, y.params, y.seed};
    const FitResult fit_t = fit_lse(xs.values, ys.values, basis);

    const Kernel kern{opt.kernel};
    const Bandwidth bw = Bandwidth::rule(opt.bw_C, opt.bw_delta, n);

    // memory estimates from raw and variance-standardized residuals
    const auto w_raw = local_whittle(fit_t.residuals, m, bracket);
    rep.H_resid = w_raw.H_hat;
    std::vector<double> std_resid(n);
    {
        // evaluation points clamped into the supported window around xbar
        const double xm = fit_t.xbar;
        const double xs2 = std::sqrt(fit_t.s2);
        std::vector<double> pts(n);
        for (std::size_t t = 0; t < n; ++t)
            pts[t] = std::clamp(xs.values[t], xm - 5.99 * xs2, xm + 5.99 * xs2);
        const auto est = sigma2_grid(pts, xs.values, fit_t.residuals, bw, kern);
        for (std::size_t t = 0; t < n; ++t) {
            const double s = std::sqrt(std::max(est[t].value, 0.0));
            std_resid[t] = s > 0.0 ? fit_t.residuals[t] / s : 0.0;
        }
    }
    const auto w_std = local_whittle(std_resid, m, bracket);
    rep.H_resid_std = w_std.H_hat;

    const auto& w_test = opt.whittle_on_standardized ? w_std : w_raw;
    const auto loo = loo_variance(xs.values, fit_t.residuals, bw.value(), kern);
    rep.gof = dn_test(xs.values, ys.values, fit_t, w_test, loo, basis);
    return rep;
}

PipelineReport run_pipeline(const std::string& x_file, const std::string& y_file,
                            const PipelineOptions& opt) {
    const auto x = ingest_fx(x_file, opt.x_column, opt.monthly_last);
    const auto y = ingest_fx(y_file, opt.y_column, opt.monthly_last);
    auto rep = run_pipeline_series(x, y, opt);
    rep.x_file = x_file;
    rep.y_file = y_file;
    return rep;
}

}  // namespace lmreg
