"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import lmreg


def test_constants():
    assert lmreg.theta(0.75) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)
    assert lmreg.d_const(0.75) == pytest.approx(6.684342065682668, rel=1e-12)
    assert lmreg.a_beta(0.75) == pytest.approx(5.244115108584240, rel=1e-10)
    assert lmreg.correl_bilinear_product(0.9, 0.9) == pytest.approx(0.599556048773842, rel=1e-10)
    assert lmreg.correl_quadratic_terms(0.9) == pytest.approx(0.599556048773842, rel=1e-10)
    with pytest.raises(ValueError):
        lmreg.theta(0.4)


def test_generators_deterministic():
    a = lmreg.gen_fgn(256, 0.75, seed=42)
    b = lmreg.gen_fgn(256, 0.75, seed=42)
    assert np.array_equal(a, b)
    c = lmreg.gen_fgn(256, 0.75, seed=43)
    assert not np.array_equal(a, c)
    u = lmreg.gen_farima_exact(256, 0.8, seed=7)
    assert u.shape == (256,)
    assert np.all(np.isfinite(u))
    assert lmreg.acvf_fgn(0, 0.8) == 1.0


def test_ma_coeffs_normalization():
    c = lmreg.ma_coeffs(0.75, 8)
    assert c["b"][0] == pytest.approx(0.9204417878355910, rel=1e-10)
    assert c["norm_error"] > 0


def test_fit_and_gof():
    rng_x = lmreg.gen_fgn(500, 0.7, seed=5)
    u = lmreg.gen_farima_exact(500, 0.7, seed=6)
    y = 2.0 * rng_x + np.sqrt(1.0 + rng_x**2) * u
    fit = lmreg.fit_lse(rng_x, y)
    assert fit["beta_hat"][1] == pytest.approx(2.0, abs=0.25)
    # normal equations hold
    assert abs(np.sum(fit["residuals"])) < 1e-8 * np.sum(np.abs(y))

    g = lmreg.gof_test(rng_x, y)
    assert 0.0 <= g["p_value"] <= 1.0
    assert g["sup_J"] > 0

    exact = lmreg.fit_lse(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.0, 2.0]))
    assert exact["beta_hat"][0] == pytest.approx(0.5)
    assert exact["beta_hat"][1] == pytest.approx(0.5)


def test_whittle_recovers_H():
    u = lmreg.gen_farima_exact(4096, 0.8, seed=9)
    w = lmreg.local_whittle(u, m=760)
    assert w["H_hat"] == pytest.approx(0.8, abs=0.08)
    # scale equivariance
    w2 = lmreg.local_whittle(3.0 * u, m=760)
    assert w2["H_hat"] == pytest.approx(w["H_hat"], abs=1e-6)
    assert w2["G_hat"] == pytest.approx(9.0 * w["G_hat"], rel=1e-4)


def test_sigma2_hat_scale_law():
    x = lmreg.gen_fgn(400, 0.65, seed=11)
    r = lmreg.gen_farima_exact(400, 0.7, seed=12)
    v1 = lmreg.sigma2_hat(0.1, x, r, C=0.5)
    v2 = lmreg.sigma2_hat(0.1, x, 3.0 * r, C=0.5)
    assert v2["value"] == pytest.approx(9.0 * v1["value"], rel=1e-12)
    rng = lmreg.bandwidth_range(0.65, 0.85)
    assert rng == ("a", pytest.approx(0.075), pytest.approx(0.3))


def test_table_runner_deterministic():
    t1 = lmreg.run_table1(n=128, reps=8, H_grid=[0.7], h_grid=[0.7], seed=3, threads=1)
    t2 = lmreg.run_table1(n=128, reps=8, H_grid=[0.7], h_grid=[0.7], seed=3, threads=4)
    assert t1["cells"][0][0]["mse"] == t2["cells"][0][0]["mse"]


def test_sample_z2():
    s = lmreg.sample_z2(0.9, 0.9, grid_size=128, n_draws=200, seed=4)
    assert s["truncation_mass"] < 1e-3
    assert abs(np.mean(s["draws"])) < 4 * np.std(s["draws"]) / math.sqrt(200)


def test_ingest_and_pipeline(tmp_path):
    x = lmreg.gen_fgn(300, 0.7, seed=21)
    u = lmreg.gen_farima_exact(300, 0.65, seed=22)

    def write_levels(name, diffs):
        path = tmp_path / name
        lines = ["date,value"]
        level = 1.0
        for t in range(len(diffs) + 1):
            if t > 0:
                level *= math.exp(diffs[t - 1])
            lines.append(f"{1500 + t:04d}-03-01,{level!r}")
        path.write_text("\n".join(lines) + "\n")
        return str(path)

    dx = 0.002 * x
    dy = -0.5 * dx + 0.001 * np.sqrt(1 + x**2) * u
    fx = write_levels("x.csv", dx)
    fy = write_levels("y.csv", dy)

    ing = lmreg.ingest_fx(fx)
    assert ing.shape == (300,)
    assert np.allclose(ing, dx)

    rep = lmreg.run_pipeline(fx, fy, seed=2)
    assert rep["n"] == 300
    assert rep["beta_hat"][1] == pytest.approx(-0.5, abs=0.1)
    assert 0.0 <= rep["p_value"] <= 1.0

    rep2 = lmreg.run_pipeline(fx, fy, seed=2)
    assert rep["json"] == rep2["json"]


def test_kappa2_iid_case():
    rng = np.random.default_rng(17)
    x = rng.standard_normal(4000)
    est = lmreg.kappa2_block_bootstrap(x, block_len=1, B=600, seed=5)
    assert est == pytest.approx(1.0, abs=0.2)
