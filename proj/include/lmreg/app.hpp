#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmreg/gof.hpp"
#include "lmreg/kernel_var.hpp"
#include "lmreg/regress.hpp"
#include "lmreg/series.hpp"
#include "lmreg/whittle.hpp"

namespace lmreg {

struct FxRecord {
    std::string date;  // ISO-8601 day
    std::optional<double> rate;
};

// Parses a `date,<column>` CSV. Missing markers (ND, NA, empty) map to an
// absent rate; dates must be strictly increasing.
std::vector<FxRecord> read_fx_csv(const std::string& path, const std::string& column);

// Drop missing rows, optionally keep only each month's last observation,
// then return the differenced log series (length usable-1).
LMSeries ingest_fx(const std::string& path, const std::string& column = "value",
                   bool monthly_last = false);

struct QQData {
    std::vector<double> data_q;  // sorted standardized data values
    std::vector<double> sim_q;   // sorted simulated fGn of matching length
    bool degenerate = false;     // constant input series

    std::string to_csv() const;
};

// Paired quantiles of the standardized series against one simulated
// unit-variance fGn path with the supplied memory parameter.
QQData qq_data(std::span<const double> series, double h_hat, std::uint64_t seed);

struct PipelineOptions {
    std::uint64_t seed = 1;
    std::size_t m = 0;  // 0: floor(n/8)
    double a1 = 0.501, a2 = 0.999;
    KernelKind kernel = KernelKind::cosine;
    double bw_C = 1.0, bw_delta = 0.2;
    bool intercept = true;                  // include the intercept in the fitted basis
    bool whittle_on_standardized = false;   // feed e_t / sigma_hat(X_t) into the test
    // studentize (X, Y) before computing the lack-of-fit statistic. D_n is
    // not scale-invariant (numerator is linear in the residual scale, the
    // denominator quadratic), so raw data in tiny units would blow it up.
    bool standardize_for_test = true;
    bool monthly_last = false;
    std::string x_column = "value";
    std::string y_column = "value";
};

struct PipelineReport {
    std::size_t n = 0;
    double x_mean = 0.0, x_sd = 0.0, y_mean = 0.0, y_sd = 0.0;
    double H_x = 0.0, H_y = 0.0;            // memory estimates of the ingested series
    double H_resid = 0.0, H_resid_std = 0.0;  // from e_t and e_t / sigma_hat
    FitResult fit;
    GofResult gof;
    std::string x_file, y_file;

    std::string to_json() const;
};

// Ingest -> least squares fit -> kernel variance -> local Whittle on the
// residuals (raw and standardized) -> lack-of-fit test.
PipelineReport run_pipeline(const std::string& x_file, const std::string& y_file,
                            const PipelineOptions& opt);

// Pipeline over already-ingested series (shared by CLI and bindings).
PipelineReport run_pipeline_series(const LMSeries& x, const LMSeries& y,
                                   const PipelineOptions& opt);

}  // namespace lmreg
