"""Synthetic problem generation and recovery metrics.

Ground truth follows the standard random model: the low-rank part is a
product of two Gaussian factor matrices, the sparse part has a uniformly
random support with entries i.i.d. uniform in [-magnitude, magnitude].
RNG is numpy's PCG64; factor and support streams are split off the spec
seed with SeedSequence.spawn so results are reproducible across platforms.
"""

from dataclasses import dataclass

import numpy as np

from .matcore import as_dense


@dataclass(frozen=True)
class SynthSpec:
    m: int
    n: int
    rho_r: float        # rank ratio r/m
    rho_s: float        # sparsity ratio p/(m*n)
    magnitude: float = 500.0
    sigma_scale: float = 1.0
    rng_seed: int = 0

    @property
    def rank(self):
        return int(round(self.rho_r * self.m))

    @property
    def n_sparse(self):
        return int(round(self.rho_s * self.m * self.n))


@dataclass(frozen=True)
class GroundTruth:
    m_obs: np.ndarray
    l0: np.ndarray
    s0: np.ndarray


def generate(spec):
    """Generate (M, L0, S0) with M = L0 + sigma_scale * S0, deterministic
    for a fixed rng_seed."""
    m, n, r, p = spec.m, spec.n, spec.rank, spec.n_sparse
    if p > m * n:
        raise ValueError(f"requested {p} sparse entries in a {m}x{n} matrix")
    ss_l, ss_s = np.random.SeedSequence(spec.rng_seed).spawn(2)

    rng_l = np.random.default_rng(ss_l)
    if r == 0:
        l0 = np.zeros((m, n))
    else:
        l0 = rng_l.standard_normal((m, r)) @ rng_l.standard_normal((n, r)).T

    rng_s = np.random.default_rng(ss_s)
    s0 = np.zeros(m * n)
    if p > 0:
        support = rng_s.choice(m * n, size=p, replace=False)
        s0[support] = rng_s.uniform(-spec.magnitude, spec.magnitude, size=p)
    s0 = s0.reshape(m, n)

    return GroundTruth(m_obs=l0 + spec.sigma_scale * s0, l0=l0, s0=s0)


def checkerboard(m, cell):
    """m x m checkerboard with levels 0.2/0.8; rank is exactly 2."""
    if m % cell != 0:
        raise ValueError(f"cell={cell} does not divide m={m}")
    idx = np.arange(m) // cell
    parity = (idx[:, None] + idx[None, :]) % 2
    return np.where(parity == 0, 0.2, 0.8)


def corrupt_impulsive(img, fraction, rng_seed):
    """Replace a uniform random fraction of pixels by 0 or the peak value
    1.0 (fair coin per pixel)."""
    img = as_dense(img)
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must be in [0, 1]")
    n_bad = int(round(fraction * img.size))
    rng = np.random.default_rng(rng_seed)
    corrupted = img.copy().ravel()
    if n_bad:
        pos = rng.choice(img.size, size=n_bad, replace=False)
        corrupted[pos] = rng.integers(0, 2, size=n_bad).astype(float)
    corrupted = corrupted.reshape(img.shape)
    return GroundTruth(m_obs=corrupted, l0=img, s0=corrupted - img)


def rel_err(l_star, l0):
    """Relative Frobenius error against the true low-rank matrix."""
    denom = np.linalg.norm(l0, "fro")
    return float(np.linalg.norm(l_star - l0, "fro") / denom) if denom else float(
        np.linalg.norm(l_star, "fro")
    )


def max_dif(l_star, l0):
    return float(np.abs(l_star - l0).max())


def ave_dif(l_star, l0):
    return float(np.abs(l_star - l0).sum() / np.asarray(l0).size)


def write_pgm(path, img):
    """Write an 8-bit binary PGM (P5), clamping [0,1] linearly to 0..255."""
    img = as_dense(img)
    pixels = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes(order="C"))
