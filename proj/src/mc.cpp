#include "lmreg/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lmreg/io_util.hpp"
#include "lmreg/kernel_var.hpp"
#include "lmreg/regress.hpp"
#include "lmreg/rng.hpp"
#include "lmreg/simulate.hpp"
#include "lmreg/special.hpp"
#include "lmreg/whittle.hpp"

namespace lmreg {

namespace {

constexpr std::uint64_t kTable1 = 1, kTable2 = 2, kTableAse = 4;
constexpr std::uint64_t kDesignStream = 0xd5;
constexpr std::uint64_t kErrorStream = 0xe5;

// Runs body(rep) for rep in [0, reps) across up to `threads` workers.
// Each index owns its seeds, so the partition cannot change results.
void parallel_reps(std::size_t reps, int threads, const std::function<void(std::size_t)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned nt = threads > 0 ? static_cast<unsigned>(threads) : (hw ? hw : 1u);
    nt = std::min<unsigned>(nt, reps ? static_cast<unsigned>(reps) : 1u);
    if (nt <= 1) {
        for (std::size_t r = 0; r < reps; ++r) body(r);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (unsigned w = 0; w < nt; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t r = w; r < reps; r += nt) body(r);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

std::size_t whittle_m(const ExperimentConfig& cfg, std::size_t n) {
    const double m = cfg.whittle_m_C * std::pow(static_cast<double>(n), cfg.whittle_m_a);
    auto mm = static_cast<std::size_t>(std::llround(m));
    mm = std::min<std::size_t>(mm, (n - 1) / 2);
    return std::max<std::size_t>(mm, 2);
}

CellStats summarize(std::vector<double> values, double truth) {
    CellStats s;
    s.reps = values.size();
    double acc = 0.0;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double e = values[i] - truth;
        sq[i] = e * e;
        acc += sq[i];
    }
    s.mse = acc / static_cast<double>(values.size());
    s.rmse = std::sqrt(s.mse);
    s.mean = s.mse;
    s.q1 = quantile_type7(sq, 0.25);
    s.median = quantile_type7(sq, 0.5);
    s.q3 = quantile_type7(sq, 0.75);
    return s;
}

CellStats summarize_raw(std::vector<double> values) {
    CellStats s;
    s.reps = values.size();
    double acc = 0.0, acc2 = 0.0;
    for (double v : values) {
        acc += v;
        acc2 += v * v;
    }
    s.mean = acc / static_cast<double>(values.size());
    s.mse = acc2 / static_cast<double>(values.size());
    s.rmse = std::sqrt(s.mse);
    s.q1 = quantile_type7(values, 0.25);
    s.median = quantile_type7(values, 0.5);
    s.q3 = quantile_type7(values, 0.75);
    return s;
}

}  // namespace

std::function<double(double)> sigma_function(const std::string& kind) {
    if (kind == "one_plus_x2")
        return [](double x) { return std::sqrt(1.0 + x * x); };
    if (kind == "constant") return [](double) { return 1.0; };
    throw std::invalid_argument("unknown sigma kind: " + kind);
}

double quantile_type7(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile of empty sample");
    std::sort(v.begin(), v.end());
    const double idx = p * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(idx));
    const auto hi = std::min(lo + 1, v.size() - 1);
    const double w = idx - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

double rmse(std::span<const double> estimates, double truth) {
    if (estimates.empty()) throw std::invalid_argument("rmse: empty input");
    double acc = 0.0;
    for (double e : estimates) acc += (e - truth) * (e - truth);
    return std::sqrt(acc / static_cast<double>(estimates.size()));
}

Replication simulate_model(const ExperimentConfig& cfg, std::uint64_t table_id, double H,
                           double h, std::size_t rep) {
    const auto sd_x = derive_seed(cfg.master_seed,
                                  {table_id, param_id(H), param_id(h), rep, kDesignStream});
    const auto sd_u = derive_seed(cfg.master_seed,
                                  {table_id, param_id(H), param_id(h), rep, kErrorStream});
    const auto sigma = sigma_function(cfg.sigma_kind);
    const auto X = gen_fgn(cfg.n, h, 0.0, 1.0, sd_x);
    const auto U = gen_farima_exact(cfg.n, H, sd_u);
    double u_sd = 1.0;
    if (cfg.error_sd_mode == "farima_raw") u_sd = std::sqrt(farima_sumsq(H - 0.5));
    else if (cfg.error_sd_mode != "unit")
        throw std::invalid_argument("unknown error_sd_mode: " + cfg.error_sd_mode);
    Replication out;
    out.X = X.values;
    out.Y.resize(cfg.n);
    for (std::size_t t = 0; t < cfg.n; ++t)
        out.Y[t] = cfg.beta0 + cfg.beta1 * out.X[t] + sigma(out.X[t]) * u_sd * U.values[t];
    return out;
}

const CellStats& TableResult::at(double H, double h) const {
    auto find = [](const std::vector<double>& g, double v) {
        for (std::size_t i = 0; i < g.size(); ++i)
            if (std::abs(g[i] - v) < 1e-12) return i;
        throw std::invalid_argument("grid value not in table");
    };
    return cells[find(H_grid, H)][find(h_grid, h)];
}

std::string TableResult::to_csv(const std::string& statistic) const {
    auto pick = [&](const CellStats& c) {
        if (statistic == "rmse") return c.rmse;
        if (statistic == "mse") return c.mse;
        if (statistic == "mean") return c.mean;
        if (statistic == "median") return c.median;
        if (statistic == "q1") return c.q1;
        if (statistic == "q3") return c.q3;
        throw std::invalid_argument("unknown statistic: " + statistic);
    };
    std::ostringstream os;
    os << "H\\h";
    for (double h : h_grid) os << "," << io::format_double(h);
    os << "\n";
    for (std::size_t i = 0; i < H_grid.size(); ++i) {
        os << io::format_double(H_grid[i]);
        for (std::size_t j = 0; j < h_grid.size(); ++j)
            os << "," << io::format_double(pick(cells[i][j]));
        os << "\n";
    }
    return os.str();
}

std::string TableResult::to_json() const {
    std::ostringstream os;
    os << "{\"table\":\"" << table_id << "\",\"n\":" << n
       << ",\"master_seed\":" << master_seed << ",\"H_grid\":[";
    for (std::size_t i = 0; i < H_grid.size(); ++i)
        os << (i ? "," : "") << io::format_double(H_grid[i]);
    os << "],\"h_grid\":[";
    for (std::size_t j = 0; j < h_grid.size(); ++j)
        os << (j ? "," : "") << io::format_double(h_grid[j]);
    os << "],\"cells\":[";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        os << (i ? "," : "") << "[";
        for (std::size_t j = 0; j < cells[i].size(); ++j) {
            const auto& c = cells[i][j];
            os << (j ? "," : "") << "{\"rmse\":" << io::format_double(c.rmse)
               << ",\"mse\":" << io::format_double(c.mse)
               << ",\"mean\":" << io::format_double(c.mean)
               << ",\"median\":" << io::format_double(c.median)
               << ",\"q1\":" << io::format_double(c.q1)
               << ",\"q3\":" << io::format_double(c.q3) << "}";
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

std::string TableResult::provenance_json() const {
    std::ostringstream os;
    os << "{\"table\":\"" << table_id << "\",\"n\":" << n << ",\"master_seed\":" << master_seed
       << ",\"reps\":" << (cells.empty() || cells[0].empty() ? 0 : cells[0][0].reps)
       << ",\"runtime_seconds\":" << io::format_double(runtime_seconds) << "}";
    return os.str();
}

namespace {

TableResult run_cells(const ExperimentConfig& cfg, std::uint64_t table_id,
                      const std::vector<double>& H_grid, const std::vector<double>& h_grid,
                      const std::function<double(const ExperimentConfig&, double, double,
                                                 std::size_t)>& statistic,
                      bool center_at_truth, double truth) {
    const auto t0 = std::chrono::steady_clock::now();
    TableResult out;
    out.table_id = table_id == kTable1 ? "table1" : (table_id == kTable2 ? "table2" : "ase");
    out.H_grid = H_grid;
    out.h_grid = h_grid;
    out.n = cfg.n;
    out.master_seed = cfg.master_seed;
    out.cells.resize(H_grid.size());
    for (std::size_t i = 0; i < H_grid.size(); ++i) {
        out.cells[i].resize(h_grid.size());
        for (std::size_t j = 0; j < h_grid.size(); ++j) {
            std::vector<double> vals(cfg.reps);
            parallel_reps(cfg.reps, cfg.threads, [&](std::size_t r) {
                vals[r] = statistic(cfg, H_grid[i], h_grid[j], r);
            });
            out.cells[i][j] =
                center_at_truth ? summarize(std::move(vals), truth) : summarize_raw(std::move(vals));
        }
    }
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace

TableResult run_table1(const ExperimentConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
    auto stat = [](const ExperimentConfig& c, double H, double h, std::size_t rep) {
        const auto data = simulate_model(c, kTable1, H, h, rep);
        const auto fit = fit_lse(data.X, data.Y, Basis::simple_linear());
        return fit.beta_hat[1];
    };
    auto out = run_cells(cfg, kTable1, cfg.H_grid, cfg.h_grid, stat, true, cfg.beta1);
    return out;
}

TableResult run_table2(const ExperimentConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
    auto stat = [](const ExperimentConfig& c, double H, double h, std::size_t rep) {
        const auto data = simulate_model(c, kTable2, H, h, rep);
        // slope-only pseudo residuals
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t t = 0; t < c.n; ++t) {
            sxy += data.X[t] * data.Y[t];
            sxx += data.X[t] * data.X[t];
        }
        const double b1 = sxy / sxx;
        std::vector<double> eps(c.n);
        for (std::size_t t = 0; t < c.n; ++t) eps[t] = data.Y[t] - b1 * data.X[t];
        const auto w = local_whittle(eps, whittle_m(c, c.n));
        return w.H_hat;
    };
    // H varies per row, so the truth varies per cell; run cell-by-cell
    const auto t0 = std::chrono::steady_clock::now();
    TableResult out;
    out.table_id = "table2";
    out.H_grid = cfg.H_grid;
    out.h_grid = cfg.h_grid;
    out.n = cfg.n;
    out.master_seed = cfg.master_seed;
    out.cells.resize(cfg.H_grid.size());
    for (std::size_t i = 0; i < cfg.H_grid.size(); ++i) {
        out.cells[i].resize(cfg.h_grid.size());
        for (std::size_t j = 0; j < cfg.h_grid.size(); ++j) {
            std::vector<double> vals(cfg.reps);
            parallel_reps(cfg.reps, cfg.threads, [&](std::size_t r) {
                vals[r] = stat(cfg, cfg.H_grid[i], cfg.h_grid[j], r);
            });
            out.cells[i][j] = summarize(std::move(vals), cfg.H_grid[i]);
        }
    }
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

TableResult run_ase_table(const ExperimentConfig& cfg, double H_fixed) {
    if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
    const auto grid = default_eval_grid();
    const auto sigma = sigma_function(cfg.sigma_kind);
    std::vector<double> truth(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = sigma(grid[i]);
        truth[i] = s * s;
    }
    auto stat = [&](const ExperimentConfig& c, double H, double h, std::size_t rep) {
        const auto data = simulate_model(c, kTableAse, H, h, rep);
        const auto fit = fit_lse(data.X, data.Y, Basis::simple_linear());
        const double C = c.bw_C > 0.0 ? c.bw_C : default_bandwidth_constant(H, h);
        const double delta = c.bw_delta > 0.0 ? c.bw_delta : default_delta(h);
        const auto est =
            sigma2_grid(grid, data.X, fit.residuals, Bandwidth::rule(C, delta, c.n),
                        Kernel::cosine());
        std::vector<double> vals(est.size());
        for (std::size_t i = 0; i < est.size(); ++i) vals[i] = est[i].value;
        return ase(vals, truth);
    };
    auto out = run_cells(cfg, kTableAse, {H_fixed}, cfg.h_grid, stat, false, 0.0);
    out.table_id = "ase_H" + io::format_double(H_fixed);
    return out;
}

}  // namespace lmreg
