"""Tests for synthetic data generation, checkerboard images, and metrics."""

import numpy as np
import pytest

from l1pcp import synth


def test_generate_rank_and_support_counts():
    spec = synth.SynthSpec(m=200, n=200, rho_r=0.02, rho_s=0.05, rng_seed=0)
    gt = synth.generate(spec)
    assert spec.rank == 4
    sig = np.linalg.svd(gt.l0, compute_uv=False)
    assert (sig > 1e-10 * sig[0]).sum() == 4
    assert np.count_nonzero(gt.s0) == spec.n_sparse
    np.testing.assert_array_equal(gt.m_obs, gt.l0 + gt.s0)


def test_generate_is_bit_reproducible():
    spec = synth.SynthSpec(m=50, n=60, rho_r=0.04, rho_s=0.1, rng_seed=7)
    a = synth.generate(spec)
    b = synth.generate(spec)
    np.testing.assert_array_equal(a.m_obs, b.m_obs)
    np.testing.assert_array_equal(a.l0, b.l0)
    np.testing.assert_array_equal(a.s0, b.s0)


def test_generate_zero_sparsity():
    gt = synth.generate(synth.SynthSpec(m=30, n=30, rho_r=0.1, rho_s=0.0))
    assert not gt.s0.any()
    np.testing.assert_array_equal(gt.m_obs, gt.l0)


def test_generate_sigma_scale():
    spec = synth.SynthSpec(m=40, n=40, rho_r=0.05, rho_s=0.1, sigma_scale=3.0)
    gt = synth.generate(spec)
    np.testing.assert_allclose(gt.m_obs, gt.l0 + 3.0 * gt.s0)


def test_generate_rejects_oversubscribed_support():
    with pytest.raises(ValueError):
        synth.generate(synth.SynthSpec(m=4, n=4, rho_r=0.25, rho_s=2.0))


def test_sparse_magnitude_statistics():
    # |U[-500, 500]| has mean 250; check within 5% on a large support
    spec = synth.SynthSpec(m=400, n=400, rho_r=0.01, rho_s=0.1, rng_seed=0)
    gt = synth.generate(spec)
    vals = np.abs(gt.s0[gt.s0 != 0])
    assert vals.size == spec.n_sparse >= 10_000
    assert abs(vals.mean() - 250.0) <= 0.05 * 250.0


def test_checkerboard_rank_two():
    img = synth.checkerboard(8, 4)
    assert img.shape == (8, 8)
    assert set(np.unique(img)) == {0.2, 0.8}
    sig = np.linalg.svd(img, compute_uv=False)
    assert (sig > 1e-10 * sig[0]).sum() == 2
    with pytest.raises(ValueError):
        synth.checkerboard(10, 3)


def test_corrupt_impulsive_counts():
    img = synth.checkerboard(512, 64)
    gt = synth.corrupt_impulsive(img, 0.1, 0)
    # impulse values 0/1 never coincide with the 0.2/0.8 clean levels, so
    # the count of corrupted pixels is exact
    assert np.count_nonzero(gt.s0) == round(0.1 * 512 * 512)
    bad_values = gt.m_obs[gt.m_obs != img]
    assert set(np.unique(bad_values)) <= {0.0, 1.0}


def test_corrupt_impulsive_zero_fraction():
    img = synth.checkerboard(16, 4)
    gt = synth.corrupt_impulsive(img, 0.0, 0)
    np.testing.assert_array_equal(gt.m_obs, img)
    assert not gt.s0.any()


def test_metrics_trivial_cases():
    l0 = np.ones((5, 4))
    assert synth.rel_err(l0, l0) == 0.0
    assert synth.max_dif(l0, l0) == 0.0
    assert synth.ave_dif(l0, l0) == 0.0
    shifted = l0 + 1.0
    assert synth.max_dif(shifted, l0) == 1.0
    assert synth.ave_dif(shifted, l0) == 1.0
    assert synth.rel_err(shifted, l0) == pytest.approx(1.0)


def test_write_pgm_bytes(tmp_path):
    img = np.array([[0.0, 0.5], [1.0, 2.0]])  # 2.0 clamps to 255
    path = tmp_path / "img.pgm"
    synth.write_pgm(path, img)
    raw = path.read_bytes()
    header, pixels = raw[: raw.index(b"255\n") + 4], raw[raw.index(b"255\n") + 4:]
    assert header == b"P5\n2 2\n255\n"
    assert list(pixels) == [0, 128, 255, 255]
