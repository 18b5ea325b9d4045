#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lmreg {

// Variance shapes available to the generator. The simulation study uses
// sigma^2(x) = 1 + x^2 throughout.
std::function<double(double)> sigma_function(const std::string& kind);

struct ExperimentConfig {
    std::size_t n = 500;
    std::size_t reps = 400;
    std::vector<double> H_grid = {0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
    std::vector<double> h_grid = {0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
    double beta0 = 0.0;
    double beta1 = 2.0;
    std::string sigma_kind = "one_plus_x2";
    // local Whittle bandwidth rule m = round(C n^a); the constant is
    // calibrated against the reference table at n = 500
    double whittle_m_C = 1.37;
    double whittle_m_a = 0.8;
    // kernel bandwidth rule; non-positive C means the per-(H, h) calibrated
    // default, delta <= 0 means the study default for the given h
    double bw_C = -1.0;
    double bw_delta = -1.0;
    // error-process scale: "unit" keeps Var(u) = 1; "farima_raw" multiplies by
    // sqrt(Gamma(1-2d)/Gamma(1-d)^2), the variance of the unnormalized
    // FARIMA(0,d,0) output, which is what the reference tables reflect
    std::string error_sd_mode = "farima_raw";
    std::uint64_t master_seed = 20080415;
    int threads = 0;  // 0 = all hardware threads
};

struct CellStats {
    double rmse = 0.0;  // sqrt(mean squared error)
    double mse = 0.0;   // mean squared error
    double q1 = 0.0, median = 0.0, mean = 0.0, q3 = 0.0;
    std::size_t reps = 0;
};

struct TableResult {
    std::string table_id;
    std::vector<double> H_grid, h_grid;
    std::vector<std::vector<CellStats>> cells;  // [H index][h index]
    std::size_t n = 0;
    std::uint64_t master_seed = 0;
    double runtime_seconds = 0.0;

    const CellStats& at(double H, double h) const;
    std::string to_csv(const std::string& statistic) const;
    std::string to_json() const;
    std::string provenance_json() const;
};

// Slope-estimator error table: per (H, h) cell, the spread of beta1_hat - beta1
// over seeded replications of the heteroscedastic linear model.
TableResult run_table1(const ExperimentConfig& cfg);

// Local Whittle table: per (H, h) cell, the RMSE of H_hat computed from the
// slope-only pseudo residuals Y_t - beta1_hat X_t.
TableResult run_table2(const ExperimentConfig& cfg);

// ASE quartile summary of the kernel variance estimator over the fixed grid,
// one row per h at fixed H, with the study's calibrated bandwidths.
TableResult run_ase_table(const ExperimentConfig& cfg, double H_fixed);

double rmse(std::span<const double> estimates, double truth);

// R type-7 sample quantile on a copy of the data.
double quantile_type7(std::vector<double> v, double p);

// One replication of the generator: X (fGn, mean 0, unit variance), u
// (FARIMA), Y = beta0 + beta1 X + sigma(X) u. Streams derive from
// (master_seed, table_id, H, h, rep) so cells rerun in isolation.
struct Replication {
    std::vector<double> X, Y;
};
Replication simulate_model(const ExperimentConfig& cfg, std::uint64_t table_id, double H,
                           double h, std::size_t rep);

}  // namespace lmreg
