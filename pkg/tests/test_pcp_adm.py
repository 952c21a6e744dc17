"""Tests for the reference ADM principal component pursuit solver."""

import math

import numpy as np
import pytest

from l1pcp import synth
from l1pcp.matcore import frobenius_norm, l1_norm, nuclear_norm
from l1pcp.pcp_adm import AdmConfig, default_lambda, solve_pcp, spectral_norm_estimate


def test_default_lambda_values():
    assert default_lambda(2000, 2000) == pytest.approx(1 / math.sqrt(2000))
    assert default_lambda(1, 1) == 1.0
    assert default_lambda(100, 400) == pytest.approx(0.05)
    with pytest.raises(ValueError):
        default_lambda(0, 5)


def test_spectral_norm_estimate():
    m = np.diag([5.0, 2.0, 1.0])
    assert spectral_norm_estimate(m) == pytest.approx(5.0, rel=1e-6)
    assert spectral_norm_estimate(np.zeros((3, 3))) == 0.0


def test_zero_matrix_one_iteration():
    sol = solve_pcp(np.zeros((10, 10)))
    assert sol.converged
    assert sol.iterations == 1
    assert not sol.l.any() and not sol.s.any()
    assert sol.rank_of_l == 0


def test_uncorrupted_rank_one_gives_zero_sparse():
    rng = np.random.default_rng(0)
    m = np.outer(rng.standard_normal(40), rng.standard_normal(30))
    sol = solve_pcp(m)
    assert sol.converged
    assert frobenius_norm(m - sol.l) / frobenius_norm(m) <= 1e-6
    assert l1_norm(sol.s) / l1_norm(m) <= 1e-6


def test_config_validation():
    with pytest.raises(ValueError):
        AdmConfig(rho=1.0)
    with pytest.raises(ValueError):
        AdmConfig(tol=0.0)
    with pytest.raises(ValueError):
        AdmConfig(beta0=1.0, beta_max=0.5)


@pytest.mark.parametrize("seed", range(5))
def test_exact_recovery_small(seed):
    spec = synth.SynthSpec(m=200, n=200, rho_r=0.025, rho_s=0.05, rng_seed=seed)
    gt = synth.generate(spec)
    cfg = AdmConfig(tol=1e-7)
    sol = solve_pcp(gt.m_obs, cfg)
    assert sol.converged
    assert sol.final_residual <= cfg.tol
    assert synth.rel_err(sol.l, gt.l0) <= 100 * cfg.tol


def test_objective_not_worse_than_truth():
    spec = synth.SynthSpec(m=150, n=150, rho_r=0.02, rho_s=0.05, rng_seed=3)
    gt = synth.generate(spec)
    sol = solve_pcp(gt.m_obs)
    lam = default_lambda(150, 150)
    obj_star = nuclear_norm(sol.l) + lam * l1_norm(sol.s)
    obj_truth = nuclear_norm(gt.l0) + lam * l1_norm(gt.s0)
    assert obj_star <= obj_truth * (1 + 1e-3)


def test_feasibility_at_exit():
    spec = synth.SynthSpec(m=120, n=80, rho_r=0.02, rho_s=0.03, rng_seed=1)
    gt = synth.generate(spec)
    cfg = AdmConfig(tol=1e-6)
    sol = solve_pcp(gt.m_obs, cfg)
    res = frobenius_norm(gt.m_obs - sol.l - sol.s) / frobenius_norm(gt.m_obs)
    assert sol.converged
    assert res == pytest.approx(sol.final_residual)
    assert res <= cfg.tol


def test_max_iter_exhaustion_is_flagged():
    spec = synth.SynthSpec(m=100, n=100, rho_r=0.03, rho_s=0.05, rng_seed=0)
    gt = synth.generate(spec)
    sol = solve_pcp(gt.m_obs, AdmConfig(tol=1e-12, max_iter=3))
    assert not sol.converged
    assert sol.final_residual > 1e-12
    assert sol.iterations == 3
