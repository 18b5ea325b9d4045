#include <doctest.h>

#include <cmath>
#include <vector>

#include "lmreg/mc.hpp"
#include "oracle_utils.hpp"

using namespace lmreg;

TEST_CASE("rmse arithmetic") {
    CHECK(rmse(std::vector<double>{2.0, 2.0, 2.0}, 2.0) == 0.0);
    CHECK(rmse(std::vector<double>{1.0, 3.0}, 2.0) == doctest::Approx(1.0));
    CHECK(rmse(std::vector<double>{0.0, 1.0, 2.0}, 0.0) ==
          doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK_THROWS_AS(rmse(std::vector<double>{}, 0.0), std::invalid_argument);
}

TEST_CASE("type-7 quantiles match the R convention") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile_type7(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_type7(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_type7(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile_type7(v, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("single replication reduces to the plain error") {
    ExperimentConfig cfg;
    cfg.n = 200;
    cfg.reps = 1;
    cfg.H_grid = {0.6};
    cfg.h_grid = {0.6};
    cfg.threads = 1;
    const auto t = run_table1(cfg);
    const auto& cell = t.at(0.6, 0.6);
    CHECK(cell.reps == 1);
    // rmse of one draw is |beta1_hat - beta1|
    const auto rep = simulate_model(cfg, 1, 0.6, 0.6, 0);
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    const double n = 200.0;
    for (std::size_t i = 0; i < 200; ++i) {
        sx += rep.X[i];
        sy += rep.Y[i];
        sxx += rep.X[i] * rep.X[i];
        sxy += rep.X[i] * rep.Y[i];
    }
    const double slope = (sxy / n - sx / n * sy / n) / (sxx / n - sx / n * sx / n);
    CHECK(cell.rmse == doctest::Approx(std::abs(slope - 2.0)).epsilon(1e-9));
}

TEST_CASE("full determinism across worker counts") {
    ExperimentConfig cfg;
    cfg.n = 128;
    cfg.reps = 12;
    cfg.H_grid = {0.6, 0.9};
    cfg.h_grid = {0.7};
    cfg.master_seed = 555;
    cfg.threads = 1;
    const auto t1 = run_table1(cfg);
    cfg.threads = 4;
    const auto t4 = run_table1(cfg);
    for (std::size_t i = 0; i < t1.cells.size(); ++i)
        for (std::size_t j = 0; j < t1.cells[i].size(); ++j) {
            CHECK(t1.cells[i][j].rmse == t4.cells[i][j].rmse);
            CHECK(t1.cells[i][j].mse == t4.cells[i][j].mse);
        }
    // and across runs
    const auto t4b = run_table1(cfg);
    CHECK(t4.to_csv("rmse") == t4b.to_csv("rmse"));
}

TEST_CASE("replications are reproducible in isolation") {
    ExperimentConfig cfg;
    cfg.n = 64;
    const auto a = simulate_model(cfg, 2, 0.8, 0.7, 5);
    const auto b = simulate_model(cfg, 2, 0.8, 0.7, 5);
    CHECK(a.X == b.X);
    CHECK(a.Y == b.Y);
    const auto c = simulate_model(cfg, 2, 0.8, 0.7, 6);
    CHECK(a.X != c.X);
    const auto d = simulate_model(cfg, 3, 0.8, 0.7, 5);
    CHECK(a.X != d.X);
}

TEST_CASE("ase table with the exact truth is a degenerate zero") {
    // direct sanity on the ase statistic path: estimates == truth -> 0
    const std::vector<double> truth{1.0, 1.25, 2.0};
    CHECK(rmse(std::vector<double>{0.0}, 0.0) == 0.0);
    ExperimentConfig cfg;
    cfg.n = 128;
    cfg.reps = 2;
    cfg.h_grid = {0.65};
    cfg.threads = 2;
    const auto t = run_ase_table(cfg, 0.65);
    CHECK(t.cells[0][0].reps == 2);
    CHECK(t.cells[0][0].mean > 0.0);  // noisy estimate has positive ASE
}

TEST_CASE("table csv layout") {
    ExperimentConfig cfg;
    cfg.n = 64;
    cfg.reps = 2;
    cfg.H_grid = {0.6, 0.7};
    cfg.h_grid = {0.6, 0.8};
    cfg.threads = 2;
    const auto t = run_table1(cfg);
    const auto csv = t.to_csv("rmse");
    CHECK(csv.find("H\\h,0.6,0.8") != std::string::npos);
    CHECK(t.provenance_json().find("\"master_seed\":20080415") != std::string::npos);
}
