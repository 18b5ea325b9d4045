#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lmreg/app.hpp"
#include "lmreg/gof.hpp"
#include "lmreg/kernel_var.hpp"
#include "lmreg/limits.hpp"
#include "lmreg/mc.hpp"
#include "lmreg/regress.hpp"
#include "lmreg/series.hpp"
#include "lmreg/simulate.hpp"
#include "lmreg/special.hpp"
#include "lmreg/whittle.hpp"

namespace py = pybind11;
using namespace lmreg;

namespace {

using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const DArray& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Basis basis_from_name(const std::string& s) {
    if (s == "simple_linear") return Basis::simple_linear();
    if (s.rfind("polynomial:", 0) == 0) return Basis::polynomial(std::stoi(s.substr(11)));
    if (s.rfind("through_origin:", 0) == 0)
        return Basis::through_origin(std::stoi(s.substr(15)));
    throw std::invalid_argument("unknown basis: " + s);
}

LimitKind limit_kind_from_name(const std::string& s) {
    if (s == "z2_independent") return LimitKind::z2_independent;
    if (s == "z2_star") return LimitKind::z2_star;
    if (s == "composite_slope") return LimitKind::composite_slope;
    throw std::invalid_argument("unknown limit kind: " + s);
}

py::dict cell_to_dict(const CellStats& c) {
    py::dict d;
    d["rmse"] = c.rmse;
    d["mse"] = c.mse;
    d["mean"] = c.mean;
    d["median"] = c.median;
    d["q1"] = c.q1;
    d["q3"] = c.q3;
    d["reps"] = c.reps;
    return d;
}

py::dict table_to_dict(const TableResult& t) {
    py::dict d;
    d["table_id"] = t.table_id;
    d["H_grid"] = t.H_grid;
    d["h_grid"] = t.h_grid;
    d["n"] = t.n;
    d["master_seed"] = t.master_seed;
    d["runtime_seconds"] = t.runtime_seconds;
    py::list rows;
    for (const auto& row : t.cells) {
        py::list cells;
        for (const auto& c : row) cells.append(cell_to_dict(c));
        rows.append(cells);
    }
    d["cells"] = rows;
    return d;
}

ExperimentConfig make_config(std::size_t n, std::size_t reps, std::vector<double> H_grid,
                             std::vector<double> h_grid, std::uint64_t seed, int threads,
                             double m_C, double m_a, double bw_C, double bw_delta,
                             const std::string& error_sd_mode) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.reps = reps;
    if (!H_grid.empty()) cfg.H_grid = std::move(H_grid);
    if (!h_grid.empty()) cfg.h_grid = std::move(h_grid);
    cfg.master_seed = seed;
    cfg.threads = threads;
    cfg.whittle_m_C = m_C;
    cfg.whittle_m_a = m_a;
    cfg.bw_C = bw_C;
    cfg.bw_delta = bw_delta;
    cfg.error_sd_mode = error_sd_mode;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_lmreg, m) {
    m.doc() = "long-memory heteroscedastic regression: simulation, estimation and "
              "lack-of-fit testing";

    // constants
    m.def("theta", &theta, py::arg("a"));
    m.def("d_const", &d_const, py::arg("a"));
    m.def("a_beta", &a_beta, py::arg("z"));
    m.def("correl_bilinear_product", &correl_bilinear_product, py::arg("H"), py::arg("h"));
    m.def("correl_quadratic_terms", &correl_quadratic_terms, py::arg("H"));
    m.def("g_u_farima", &g_u_farima, py::arg("H"));
    m.def("g_x_fgn", &g_x_fgn, py::arg("h"));

    // simulation
    m.def("acvf_fgn", &acvf_fgn, py::arg("k"), py::arg("h"));
    m.def(
        "gen_fgn",
        [](std::size_t n, double h, double mu, double gamma, std::uint64_t seed) {
            return to_array(gen_fgn(n, h, mu, gamma, seed).values);
        },
        py::arg("n"), py::arg("h"), py::arg("mu") = 0.0, py::arg("gamma") = 1.0,
        py::arg("seed") = 1);
    m.def(
        "ma_coeffs",
        [](double H, std::size_t J) {
            const auto c = ma_coeffs(H, J);
            py::dict d;
            d["b"] = to_array(c.b);
            d["J"] = c.J;
            d["norm_error"] = c.norm_error;
            return d;
        },
        py::arg("H"), py::arg("J"));
    m.def(
        "gen_farima_ma",
        [](std::size_t n, double H, std::uint64_t seed, std::size_t burn_in) {
            return to_array(
                (burn_in ? gen_farima_ma(n, H, seed, burn_in) : gen_farima_ma(n, H, seed))
                    .values);
        },
        py::arg("n"), py::arg("H"), py::arg("seed") = 1, py::arg("burn_in") = 0);
    m.def(
        "gen_farima_exact",
        [](std::size_t n, double H, std::uint64_t seed) {
            return to_array(gen_farima_exact(n, H, seed).values);
        },
        py::arg("n"), py::arg("H"), py::arg("seed") = 1);
    m.def("farima_acvf", &farima_acvf, py::arg("H"), py::arg("K"));

    // regression
    m.def(
        "fit_lse",
        [](DArray X, DArray Y, const std::string& basis) {
            const auto fit = fit_lse(to_vec(X), to_vec(Y), basis_from_name(basis));
            py::dict d;
            d["beta_hat"] = to_array(fit.beta_hat);
            d["residuals"] = to_array(fit.residuals);
            d["xbar"] = fit.xbar;
            d["s2"] = fit.s2;
            d["residual_se"] = fit.residual_se;
            d["n"] = fit.n;
            d["basis"] = fit.basis_kind;
            return d;
        },
        py::arg("X"), py::arg("Y"), py::arg("basis") = "simple_linear");
    m.def(
        "plugin_constants",
        [](DArray X, DArray V, double s) { return plugin_constants(to_vec(X), to_vec(V), s); },
        py::arg("X"), py::arg("V"), py::arg("s"));

    // kernel variance
    m.def(
        "sigma2_hat",
        [](double x, DArray X, DArray resid, double C, double delta,
           const std::string& kernel) {
            const auto v = sigma2_hat(
                x, to_vec(X), to_vec(resid),
                delta == 0.0 ? Bandwidth::fixed(C) : Bandwidth::rule(C, delta, X.size()),
                Kernel{kernel_kind_from_string(kernel)});
            py::dict d;
            d["x"] = v.x;
            d["value"] = v.value;
            d["b"] = v.b;
            d["phi_n_x"] = v.phi_n_x;
            return d;
        },
        py::arg("x"), py::arg("X"), py::arg("residuals"), py::arg("C"),
        py::arg("delta") = 0.0, py::arg("kernel") = "cosine");
    m.def(
        "sigma2_grid",
        [](DArray grid, DArray X, DArray resid, double C, double delta,
           const std::string& kernel) {
            const auto est = sigma2_grid(
                to_vec(grid), to_vec(X), to_vec(resid),
                delta == 0.0 ? Bandwidth::fixed(C) : Bandwidth::rule(C, delta, X.size()),
                Kernel{kernel_kind_from_string(kernel)});
            std::vector<double> vals(est.size());
            for (std::size_t i = 0; i < est.size(); ++i) vals[i] = est[i].value;
            return to_array(vals);
        },
        py::arg("grid"), py::arg("X"), py::arg("residuals"), py::arg("C"),
        py::arg("delta") = 0.0, py::arg("kernel") = "cosine");
    m.def(
        "bandwidth_range",
        [](double H, double h) {
            const auto r = bandwidth_range(H, h);
            return py::make_tuple(r.regime == BandwidthCase::a ? "a" : "b", r.lo, r.hi);
        },
        py::arg("H"), py::arg("h"));
    m.def(
        "ase", [](DArray est, DArray truth) { return ase(to_vec(est), to_vec(truth)); },
        py::arg("estimates"), py::arg("truth"));
    m.def("default_eval_grid", []() { return to_array(default_eval_grid()); });

    // whittle
    m.def(
        "periodogram",
        [](DArray x, bool subtract_mean) {
            const auto p = periodogram(to_vec(x), subtract_mean);
            return py::make_tuple(to_array(p.freqs), to_array(p.ordinates));
        },
        py::arg("x"), py::arg("subtract_mean") = true);
    m.def(
        "local_whittle",
        [](DArray x, std::size_t m, double a1, double a2) {
            const auto w = local_whittle(to_vec(x), m, {a1, a2});
            py::dict d;
            d["H_hat"] = w.H_hat;
            d["G_hat"] = w.G_hat;
            d["psi1_hat"] = w.psi1_hat;
            d["m"] = w.m;
            d["a1"] = w.a1;
            d["a2"] = w.a2;
            d["minimizer_iterations"] = w.minimizer_iterations;
            d["clamped"] = w.clamped;
            return d;
        },
        py::arg("x"), py::arg("m"), py::arg("a1") = 0.501, py::arg("a2") = 0.999);
    m.def("psi1_hat", &psi1_hat, py::arg("G_hat"), py::arg("H_hat"));
    m.def(
        "check_bandwidth_condition",
        [](double n, double m, double H, double h) {
            const auto c = check_bandwidth_condition(n, m, H, h);
            return py::make_tuple(c.value, c.satisfied_trend);
        },
        py::arg("n"), py::arg("m"), py::arg("H"), py::arg("h"));

    // goodness of fit
    m.def(
        "gof_test",
        [](DArray X, DArray Y, const std::string& basis, std::size_t m, double bw_C,
           double bw_delta, const std::string& kernel) {
            const auto Xv = to_vec(X);
            const auto Yv = to_vec(Y);
            const Basis b = basis_from_name(basis);
            const auto fit = fit_lse(Xv, Yv, b);
            if (m == 0) m = Xv.size() / 8;
            const auto w = local_whittle(fit.residuals, m);
            const Bandwidth bw = Bandwidth::rule(bw_C, bw_delta, Xv.size());
            const Kernel k{kernel_kind_from_string(kernel)};
            const auto loo = loo_variance(Xv, fit.residuals, bw.value(), k);
            const auto g = dn_test(Xv, Yv, fit, w, loo, b);
            py::dict d;
            d["Dn"] = g.Dn;
            d["p_value"] = g.p_value;
            d["sup_V"] = g.sup_V;
            d["sup_J"] = g.sup_J;
            d["H_hat"] = g.H_hat;
            d["psi1_hat"] = g.psi1_hat;
            d["n"] = g.n;
            return d;
        },
        py::arg("X"), py::arg("Y"), py::arg("basis") = "simple_linear", py::arg("m") = 0,
        py::arg("bw_C") = 1.0, py::arg("bw_delta") = 0.2, py::arg("kernel") = "cosine");

    // limit laws
    m.def(
        "sample_z2",
        [](double H, double h, const std::string& kind, std::size_t grid_size,
           std::size_t n_draws, std::uint64_t seed, double c1, double sigma0, double gamma) {
            Z2Sampler::Config cfg;
            cfg.H = H;
            cfg.h = h;
            cfg.kind = limit_kind_from_name(kind);
            cfg.grid_size = grid_size;
            cfg.c1 = c1;
            cfg.sigma0 = sigma0;
            cfg.gamma = gamma;
            const auto s = Z2Sampler(cfg).sample(n_draws, seed);
            py::dict d;
            d["draws"] = to_array(s.draws);
            d["grid_size"] = s.grid_size;
            d["truncation_mass"] = s.truncation_mass;
            d["domain_lo"] = s.domain_lo;
            d["variance_discrete"] = s.variance_discrete;
            d["variance_theory"] = s.variance_theory;
            return d;
        },
        py::arg("H"), py::arg("h"), py::arg("kind") = "z2_independent",
        py::arg("grid_size") = 512, py::arg("n_draws") = 1000, py::arg("seed") = 1,
        py::arg("c1") = 1.0, py::arg("sigma0") = 0.0, py::arg("gamma") = 1.0);
    m.def(
        "kappa2_block_bootstrap",
        [](DArray summands, std::size_t block_len, std::size_t B, std::uint64_t seed) {
            return kappa2_block_bootstrap(to_vec(summands), block_len, B, seed);
        },
        py::arg("summands"), py::arg("block_len"), py::arg("B") = 400, py::arg("seed") = 1);
    m.def("default_block_len", &default_block_len, py::arg("n"));

    // Monte Carlo tables
    m.def(
        "run_table1",
        [](std::size_t n, std::size_t reps, std::vector<double> H_grid,
           std::vector<double> h_grid, std::uint64_t seed, int threads, double m_C,
           double m_a, double bw_C, double bw_delta, const std::string& error_sd_mode) {
            return table_to_dict(
                run_table1(make_config(n, reps, std::move(H_grid), std::move(h_grid), seed,
                                       threads, m_C, m_a, bw_C, bw_delta, error_sd_mode)));
        },
        py::arg("n") = 500, py::arg("reps") = 200, py::arg("H_grid") = std::vector<double>{},
        py::arg("h_grid") = std::vector<double>{}, py::arg("seed") = 20080415,
        py::arg("threads") = 0, py::arg("m_C") = 1.37, py::arg("m_a") = 0.8,
        py::arg("bw_C") = -1.0, py::arg("bw_delta") = -1.0,
        py::arg("error_sd_mode") = "farima_raw");
    m.def(
        "run_table2",
        [](std::size_t n, std::size_t reps, std::vector<double> H_grid,
           std::vector<double> h_grid, std::uint64_t seed, int threads, double m_C,
           double m_a, const std::string& error_sd_mode) {
            return table_to_dict(
                run_table2(make_config(n, reps, std::move(H_grid), std::move(h_grid), seed,
                                       threads, m_C, m_a, -1.0, -1.0, error_sd_mode)));
        },
        py::arg("n") = 500, py::arg("reps") = 200, py::arg("H_grid") = std::vector<double>{},
        py::arg("h_grid") = std::vector<double>{}, py::arg("seed") = 20080415,
        py::arg("threads") = 0, py::arg("m_C") = 1.37, py::arg("m_a") = 0.8,
        py::arg("error_sd_mode") = "farima_raw");
    m.def(
        "run_ase_table",
        [](double H_fixed, std::size_t n, std::size_t reps, std::vector<double> h_grid,
           std::uint64_t seed, int threads, double bw_C, double bw_delta,
           const std::string& error_sd_mode) {
            return table_to_dict(run_ase_table(
                make_config(n, reps, {}, std::move(h_grid), seed, threads, 1.37, 0.8, bw_C,
                            bw_delta, error_sd_mode),
                H_fixed));
        },
        py::arg("H_fixed"), py::arg("n") = 500, py::arg("reps") = 200,
        py::arg("h_grid") = std::vector<double>{}, py::arg("seed") = 20080415,
        py::arg("threads") = 0, py::arg("bw_C") = -1.0, py::arg("bw_delta") = -1.0,
        py::arg("error_sd_mode") = "farima_raw");
    m.def(
        "rmse", [](DArray est, double truth) { return rmse(to_vec(est), truth); },
        py::arg("estimates"), py::arg("truth"));

    // application
    m.def(
        "ingest_fx",
        [](const std::string& path, const std::string& column, bool monthly_last) {
            return to_array(ingest_fx(path, column, monthly_last).values);
        },
        py::arg("path"), py::arg("column") = "value", py::arg("monthly_last") = false);
    m.def(
        "qq_data",
        [](DArray series, double h_hat, std::uint64_t seed) {
            const auto q = qq_data(to_vec(series), h_hat, seed);
            return py::make_tuple(to_array(q.sim_q), to_array(q.data_q), q.degenerate);
        },
        py::arg("series"), py::arg("h_hat"), py::arg("seed") = 1);
    m.def(
        "run_pipeline",
        [](const std::string& x_file, const std::string& y_file, std::uint64_t seed,
           std::size_t m, bool intercept, bool standardize, const std::string& kernel,
           double bw_C, double bw_delta) {
            PipelineOptions opt;
            opt.seed = seed;
            opt.m = m;
            opt.intercept = intercept;
            opt.standardize_for_test = standardize;
            opt.kernel = kernel_kind_from_string(kernel);
            opt.bw_C = bw_C;
            opt.bw_delta = bw_delta;
            const auto r = run_pipeline(x_file, y_file, opt);
            py::dict d;
            d["n"] = r.n;
            d["x_mean"] = r.x_mean;
            d["x_sd"] = r.x_sd;
            d["y_mean"] = r.y_mean;
            d["y_sd"] = r.y_sd;
            d["H_x"] = r.H_x;
            d["H_y"] = r.H_y;
            d["H_resid"] = r.H_resid;
            d["H_resid_std"] = r.H_resid_std;
            d["beta_hat"] = to_array(r.fit.beta_hat);
            d["residual_se"] = r.fit.residual_se;
            d["Dn"] = r.gof.Dn;
            d["p_value"] = r.gof.p_value;
            d["json"] = r.to_json();
            return d;
        },
        py::arg("x_file"), py::arg("y_file"), py::arg("seed") = 1, py::arg("m") = 0,
        py::arg("intercept") = true, py::arg("standardize") = true,
        py::arg("kernel") = "cosine", py::arg("bw_C") = 1.0, py::arg("bw_delta") = 0.2);

    py::register_exception<singular_design_error>(m, "SingularDesignError");
    py::register_exception<degenerate_test_error>(m, "DegenerateTestError");
    py::register_exception<degenerate_data_error>(m, "DegenerateDataError");
    py::register_exception<out_of_support_error>(m, "OutOfSupportError");

    m.attr("__version__") = "0.1.0";
}
