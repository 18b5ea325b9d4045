#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "lmreg/app.hpp"
#include "lmreg/gof.hpp"
#include "lmreg/io_util.hpp"
#include "lmreg/kernel_var.hpp"
#include "lmreg/limits.hpp"
#include "lmreg/mc.hpp"
#include "lmreg/regress.hpp"
#include "lmreg/series.hpp"
#include "lmreg/simulate.hpp"
#include "lmreg/whittle.hpp"

namespace {

using namespace lmreg;

constexpr const char* kVersion = "lmreg 0.1.0";

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
    std::string format = "csv";
};

// stdout, or <out>/<name> when an output directory was given
void emit(const GlobalOpts& g, const std::string& name, const std::string& content) {
    if (g.out.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << "\n";
    } else {
        const auto path = (std::filesystem::path(g.out) / name).string();
        io::atomic_write(path, content);
        std::cerr << "wrote " << path << "\n";
    }
}

Basis parse_basis(const std::string& s) {
    if (s == "simple_linear") return Basis::simple_linear();
    if (s.rfind("polynomial:", 0) == 0) return Basis::polynomial(std::stoi(s.substr(11)));
    if (s.rfind("through_origin:", 0) == 0)
        return Basis::through_origin(std::stoi(s.substr(15)));
    throw CLI::ValidationError("basis", "unknown basis: " + s);
}

int cmd_simulate(const GlobalOpts& g, const std::string& kind, std::size_t n, double h,
                 double H, double mu, double gamma, std::size_t burn_in,
                 const std::string& z2_kind, std::size_t grid_size) {
    if (kind == "z2") {
        LimitKind lk = LimitKind::z2_independent;
        if (z2_kind == "z2_star") lk = LimitKind::z2_star;
        else if (z2_kind == "composite_slope") lk = LimitKind::composite_slope;
        else if (z2_kind != "z2_independent")
            throw CLI::ValidationError("z2-kind", "unknown limit kind: " + z2_kind);
        const auto sample = sample_z2(H, h, lk, grid_size, n, g.seed);
        std::ostringstream body;
        body << "value\n";
        for (double v : sample.draws) body << io::format_double(v) << "\n";
        emit(g, "z2_draws.csv", body.str());
        std::cerr << "truncation_mass=" << io::format_double(sample.truncation_mass)
                  << " domain_lo=" << io::format_double(sample.domain_lo) << "\n";
        return 0;
    }
    LMSeries s;
    if (kind == "fgn") {
        s = gen_fgn(n, h, mu, gamma, g.seed);
    } else if (kind == "farima") {
        s = burn_in ? gen_farima_ma(n, H, g.seed, burn_in) : gen_farima_ma(n, H, g.seed);
    } else if (kind == "farima_exact") {
        s = gen_farima_exact(n, H, g.seed);
    } else {
        throw CLI::ValidationError("kind", "unknown kind: " + kind);
    }
    std::ostringstream body;
    body << "value\n";
    for (double v : s.values) body << io::format_double(v) << "\n";
    if (g.out.empty()) {
        std::cout << body.str();
    } else {
        write_series_csv((std::filesystem::path(g.out) / (kind + ".csv")).string(), s);
        std::cerr << "wrote " << (std::filesystem::path(g.out) / (kind + ".csv")).string()
                  << "\n";
    }
    return 0;
}

int cmd_fit(const GlobalOpts& g, const std::string& xf, const std::string& yf,
            const std::string& basis) {
    const auto X = read_series_csv(xf);
    const auto Y = read_series_csv(yf);
    const auto fit = fit_lse(X.values, Y.values, parse_basis(basis));
    emit(g, "fit.json", fit.to_json());
    return 0;
}

int cmd_variance(const GlobalOpts& g, const std::string& xf, const std::string& yf,
                 const std::string& basis, double lo, double hi, double step, double C,
                 double delta, const std::string& kernel) {
    const auto X = read_series_csv(xf);
    const auto Y = read_series_csv(yf);
    const auto fit = fit_lse(X.values, Y.values, parse_basis(basis));
    std::vector<double> grid;
    for (double x = lo; x <= hi + 1e-12; x += step) grid.push_back(x);
    const auto est = sigma2_grid(grid, X.values, fit.residuals,
                                 Bandwidth::rule(C, delta, X.n()),
                                 Kernel{kernel_kind_from_string(kernel)});
    std::ostringstream os;
    os << "x,sigma2_hat\n";
    for (const auto& e : est)
        os << io::format_double(e.x) << "," << io::format_double(e.value) << "\n";
    emit(g, "variance.csv", os.str());
    return 0;
}

int cmd_whittle(const GlobalOpts& g, const std::string& file, std::size_t m, double a1,
                double a2) {
    const auto s = read_series_csv(file);
    if (m == 0) m = s.n() / 8;
    const auto w = local_whittle(s.values, m, {a1, a2});
    emit(g, "whittle.json", w.to_json());
    return 0;
}

int cmd_goftest(const GlobalOpts& g, const std::string& xf, const std::string& yf,
                const std::string& basis, std::size_t m, double C, double delta,
                const std::string& kernel, bool dump_curves) {
    const auto X = read_series_csv(xf);
    const auto Y = read_series_csv(yf);
    const Basis b = parse_basis(basis);
    const auto fit = fit_lse(X.values, Y.values, b);
    if (m == 0) m = X.n() / 8;
    const auto w = local_whittle(fit.residuals, m);
    const Bandwidth bw = Bandwidth::rule(C, delta, X.n());
    const Kernel k{kernel_kind_from_string(kernel)};
    const auto loo = loo_variance(X.values, fit.residuals, bw.value(), k);
    const auto gof = dn_test(X.values, Y.values, fit, w, loo, b);
    emit(g, "gof.json", gof.to_json());
    if (dump_curves) {
        const auto vt = vtilde(X.values, Y.values, fit);
        const auto jn = jhat(X.values, loo, b);
        emit(g, "gof_curves.csv", gof_curves_csv(vt, jn));
    }
    return 0;
}

int cmd_table(const GlobalOpts& g, int which, std::size_t n, std::size_t reps,
              std::vector<double> Hs, std::vector<double> hs, double m_C, double m_a,
              double bw_C, double bw_delta, const std::string& stat,
              const std::string& error_sd) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.reps = reps;
    cfg.error_sd_mode = error_sd;
    if (!Hs.empty()) cfg.H_grid = Hs;
    if (!hs.empty()) cfg.h_grid = hs;
    cfg.master_seed = g.seed;
    cfg.threads = g.threads;
    cfg.whittle_m_C = m_C;
    cfg.whittle_m_a = m_a;
    cfg.bw_C = bw_C;
    cfg.bw_delta = bw_delta;

    TableResult t;
    std::string default_stat;
    switch (which) {
        case 1:
            t = run_table1(cfg);
            default_stat = "mse";
            break;
        case 2:
            t = run_table2(cfg);
            default_stat = "rmse";
            break;
        case 4: t = run_ase_table(cfg, 0.65); default_stat = "median"; break;
        case 5: t = run_ase_table(cfg, 0.75); default_stat = "median"; break;
        case 6: t = run_ase_table(cfg, 0.85); default_stat = "median"; break;
        case 7: t = run_ase_table(cfg, 0.95); default_stat = "median"; break;
        default: throw CLI::ValidationError("which", "table must be 1, 2, 4, 5, 6 or 7");
    }
    if (g.format == "json") {
        emit(g, "table" + std::to_string(which) + ".json", t.to_json());
        return 0;
    }
    const std::string s = stat.empty() ? default_stat : stat;
    emit(g, "table" + std::to_string(which) + "_" + s + ".csv", t.to_csv(s));
    emit(g, "table" + std::to_string(which) + "_provenance.json", t.provenance_json());
    return 0;
}

int cmd_ingest(const GlobalOpts& g, const std::string& file, const std::string& column,
               bool monthly) {
    const auto s = ingest_fx(file, column, monthly);
    std::ostringstream os;
    os << "value\n";
    for (double v : s.values) os << io::format_double(v) << "\n";
    emit(g, "ingested.csv", os.str());
    std::ostringstream meta;
    meta << "n=" << s.n() << "\nmean=" << io::format_double(s.mean())
         << "\nsd=" << io::format_double(s.sd()) << "\n";
    std::cerr << meta.str();
    return 0;
}

int cmd_qq(const GlobalOpts& g, const std::string& file, double h) {
    const auto s = read_series_csv(file);
    const auto qq = qq_data(s.values, h, g.seed);
    if (qq.degenerate) std::cerr << "warning: constant series, degenerate quantiles\n";
    emit(g, "qq.csv", qq.to_csv());
    return 0;
}

int cmd_pipeline(const GlobalOpts& g, const std::string& xf, const std::string& yf,
                 PipelineOptions opt) {
    opt.seed = g.seed;
    const auto rep = run_pipeline(xf, yf, opt);
    emit(g, "pipeline.json", rep.to_json());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"estimation and lack-of-fit testing for heteroscedastic regression "
                 "with long-memory design and errors"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master RNG seed");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--out", g.out, "output directory (default: stdout)");
    app.add_option("--format", g.format, "csv or json outputs where applicable");
    app.set_version_flag("--version", std::string(kVersion) + " (" + __DATE__ + ")");

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate fGn or FARIMA series");
    sim->set_help_flag("--help", "print help");
    std::string sim_kind = "fgn";
    std::size_t sim_n = 500, sim_burn = 0;
    double sim_h = 0.75, sim_H = 0.75, sim_mu = 0.0, sim_gamma = 1.0;
    sim->add_option("--kind", sim_kind, "fgn, farima, farima_exact or z2 (limit-law draws)");
    sim->add_option("--n", sim_n, "series length");
    sim->add_option("--h", sim_h, "design memory parameter");
    sim->add_option("--H", sim_H, "error memory parameter");
    sim->add_option("--mu", sim_mu, "mean (fgn)");
    sim->add_option("--gamma", sim_gamma, "standard deviation (fgn)");
    sim->add_option("--burn-in", sim_burn, "MA burn-in (farima; 0 = default)");
    std::string sim_z2kind = "z2_independent";
    std::size_t sim_grid = 512;
    sim->add_option("--z2-kind", sim_z2kind,
                    "z2_independent, z2_star or composite_slope (kind=z2)");
    sim->add_option("--grid-size", sim_grid, "discretization cells (kind=z2)");

    // fit
    auto* fit = app.add_subcommand("fit", "least squares fit of Y on r(X)");
    std::string fit_x, fit_y, fit_basis = "simple_linear";
    fit->add_option("--x", fit_x, "X series csv")->required();
    fit->add_option("--y", fit_y, "Y series csv")->required();
    fit->add_option("--basis", fit_basis, "simple_linear, polynomial:k, through_origin:k");

    // variance
    auto* var = app.add_subcommand("variance", "kernel estimate of sigma^2 on a grid");
    std::string var_x, var_y, var_basis = "simple_linear", var_kernel = "cosine";
    double var_lo = -1.5, var_hi = 1.5, var_step = 0.01, var_C = 3.0, var_delta = 0.2;
    var->add_option("--x", var_x)->required();
    var->add_option("--y", var_y)->required();
    var->add_option("--basis", var_basis);
    var->add_option("--grid-lo", var_lo);
    var->add_option("--grid-hi", var_hi);
    var->add_option("--grid-step", var_step);
    var->add_option("--bw-C", var_C, "bandwidth constant");
    var->add_option("--bw-delta", var_delta, "bandwidth exponent");
    var->add_option("--kernel", var_kernel, "cosine, uniform or gaussian");

    // whittle
    auto* whi = app.add_subcommand("whittle", "local Whittle estimate of (H, G)");
    std::string whi_file;
    std::size_t whi_m = 0;
    double whi_a1 = 0.501, whi_a2 = 0.999;
    whi->add_option("--series", whi_file)->required();
    whi->add_option("--m", whi_m, "frequencies used (0 = n/8)");
    whi->add_option("--a1", whi_a1);
    whi->add_option("--a2", whi_a2);

    // goftest
    auto* gof = app.add_subcommand("goftest", "lack-of-fit test of a parametric fit");
    std::string gof_x, gof_y, gof_basis = "simple_linear", gof_kernel = "cosine";
    std::size_t gof_m = 0;
    double gof_C = 1.0, gof_delta = 0.2;
    bool gof_curves = false;
    gof->add_option("--x", gof_x)->required();
    gof->add_option("--y", gof_y)->required();
    gof->add_option("--basis", gof_basis);
    gof->add_option("--m", gof_m, "whittle frequencies (0 = n/8)");
    gof->add_option("--bw-C", gof_C);
    gof->add_option("--bw-delta", gof_delta);
    gof->add_option("--kernel", gof_kernel);
    gof->add_flag("--curves", gof_curves, "also emit (knot, Vtilde, Jhat) rows");

    // table
    auto* tab = app.add_subcommand("table", "replicate a simulation table");
    tab->set_help_flag("--help", "print help");
    int tab_which = 1;
    std::size_t tab_n = 500, tab_reps = 200;
    std::vector<double> tab_H, tab_h;
    double tab_mC = 1.0, tab_ma = 0.8, tab_bwC = -1.0, tab_bwD = -1.0;
    std::string tab_stat;
    tab->add_option("--which", tab_which, "1, 2, 4, 5, 6 or 7")->required();
    tab->add_option("--n", tab_n);
    tab->add_option("--reps", tab_reps);
    tab->add_option("--H", tab_H, "H grid values");
    tab->add_option("--h", tab_h, "h grid values");
    tab->add_option("--m-C", tab_mC, "whittle m rule constant");
    tab->add_option("--m-a", tab_ma, "whittle m rule exponent");
    tab->add_option("--bw-C", tab_bwC, "bandwidth constant (<=0: calibrated default)");
    tab->add_option("--bw-delta", tab_bwD, "bandwidth exponent (<=0: study default)");
    tab->add_option("--stat", tab_stat, "rmse, mse, mean, median, q1, q3");
    std::string tab_esd = "farima_raw";
    tab->add_option("--error-sd", tab_esd,
                    "error scale: farima_raw (reference-table convention) or unit");

    // ingest
    auto* ing = app.add_subcommand("ingest", "log-difference a date,value csv");
    std::string ing_file, ing_col = "value";
    bool ing_monthly = false;
    ing->add_option("--file", ing_file)->required();
    ing->add_option("--column", ing_col);
    ing->add_flag("--monthly-last", ing_monthly, "keep each month's last observation");

    // qq
    auto* qq = app.add_subcommand("qq", "quantiles against a simulated fGn");
    qq->set_help_flag("--help", "print help");
    std::string qq_file;
    double qq_h = 0.7;
    qq->add_option("--series", qq_file)->required();
    qq->add_option("--h", qq_h, "memory parameter of the comparison fGn")->required();

    // pipeline
    auto* pip = app.add_subcommand("pipeline", "ingest, fit, variance, whittle, test");
    std::string pip_x, pip_y;
    PipelineOptions popt;
    std::string pip_kernel = "cosine";
    bool pip_noint = false;
    pip->add_option("--x-file", pip_x)->required();
    pip->add_option("--y-file", pip_y)->required();
    pip->add_option("--m", popt.m, "whittle frequencies (0 = n/8)");
    pip->add_option("--a1", popt.a1);
    pip->add_option("--a2", popt.a2);
    pip->add_option("--bw-C", popt.bw_C);
    pip->add_option("--bw-delta", popt.bw_delta);
    pip->add_option("--kernel", pip_kernel);
    pip->add_option("--x-column", popt.x_column);
    pip->add_option("--y-column", popt.y_column);
    pip->add_flag("--no-intercept", pip_noint, "fit through the origin");
    pip->add_flag("--monthly-last", popt.monthly_last);
    pip->add_flag("--whittle-standardized", popt.whittle_on_standardized,
                  "scale the test with H from standardized residuals");
    bool pip_nostd = false;
    pip->add_flag("--no-standardize", pip_nostd,
                  "run the lack-of-fit statistic on raw units");

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(g, sim_kind, sim_n, sim_h, sim_H, sim_mu, sim_gamma, sim_burn,
                                sim_z2kind, sim_grid);
        if (fit->parsed()) return cmd_fit(g, fit_x, fit_y, fit_basis);
        if (var->parsed())
            return cmd_variance(g, var_x, var_y, var_basis, var_lo, var_hi, var_step, var_C,
                                var_delta, var_kernel);
        if (whi->parsed()) return cmd_whittle(g, whi_file, whi_m, whi_a1, whi_a2);
        if (gof->parsed())
            return cmd_goftest(g, gof_x, gof_y, gof_basis, gof_m, gof_C, gof_delta, gof_kernel,
                               gof_curves);
        if (tab->parsed())
            return cmd_table(g, tab_which, tab_n, tab_reps, tab_H, tab_h, tab_mC, tab_ma,
                             tab_bwC, tab_bwD, tab_stat, tab_esd);
        if (ing->parsed()) return cmd_ingest(g, ing_file, ing_col, ing_monthly);
        if (qq->parsed()) return cmd_qq(g, qq_file, qq_h);
        if (pip->parsed()) {
            popt.kernel = kernel_kind_from_string(pip_kernel);
            popt.intercept = !pip_noint;
            popt.standardize_for_test = !pip_nostd;
            return cmd_pipeline(g, pip_x, pip_y, popt);
        }
    } catch (const lmreg::degenerate_test_error& e) {
        std::cerr << "degenerate test: " << e.what() << "\n";
        return 2;
    } catch (const lmreg::degenerate_data_error& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
