"""Reference ADM solver for principal component pursuit:

    min ||L||_* + lambda * ||S||_l1   s.t.   M = L + S

Alternates a soft-threshold update of S, a singular-value-threshold update
of L, then the multiplier and penalty updates, until the relative Frobenius
residual ||M - L - S||_F / ||M||_F drops below tol.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .matcore import as_dense, frobenius_norm, soft_threshold, svt_with_rank


class PcpDivergenceError(RuntimeError):
    """The iteration produced non-finite values."""


@dataclass
class AdmConfig:
    """Hyperparameters for the ADM solvers.

    lam=None picks 1/sqrt(max(m, n)); beta0=None picks 1.25 over a
    power-iteration estimate of the spectral norm; beta_max=None picks
    1e7 * beta0.
    """

    lam: float | None = None
    tol: float = 1e-7
    beta0: float | None = None
    rho: float = 1.5
    beta_max: float | None = None
    max_iter: int = 1000

    def __post_init__(self):
        if self.rho <= 1:
            raise ValueError("rho must be > 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.beta0 is not None and self.beta_max is not None:
            if self.beta0 >= self.beta_max:
                raise ValueError("beta0 must be < beta_max")


@dataclass
class PcpSolution:
    l: np.ndarray
    s: np.ndarray
    iterations: int
    final_residual: float
    rank_of_l: int
    elapsed: float
    converged: bool
    method: str = "adm"
    stats: dict = field(default_factory=dict)


def default_lambda(m_rows, m_cols):
    """The exact-recovery weight 1/sqrt(max(m, n))."""
    if m_rows < 1 or m_cols < 1:
        raise ValueError("matrix dimensions must be >= 1")
    return 1.0 / math.sqrt(max(m_rows, m_cols))


def spectral_norm_estimate(m, iters=25):
    """Power-iteration estimate of the largest singular value.

    Deterministic: starts from the all-ones vector.
    """
    m = np.asarray(m, dtype=np.float64)
    v = np.ones(m.shape[1]) / math.sqrt(m.shape[1])
    sigma = 0.0
    for _ in range(iters):
        w = m @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = m.T @ (w / nw)
        sigma = np.linalg.norm(v)
        if sigma == 0:
            return 0.0
        v /= sigma
    return float(sigma)


def solve_pcp(m, cfg=None):
    """Solve PCP by ADM. Returns a PcpSolution; converged=False flags
    max_iter exhaustion with final_residual above tol."""
    t0 = time.perf_counter()
    m = as_dense(m)
    if m.size == 0:
        raise ValueError("matrix must be nonempty")
    cfg = cfg or AdmConfig()

    norm_m = frobenius_norm(m)
    if norm_m == 0.0:
        return PcpSolution(
            l=np.zeros_like(m), s=np.zeros_like(m), iterations=1,
            final_residual=0.0, rank_of_l=0,
            elapsed=time.perf_counter() - t0, converged=True,
        )

    lam = cfg.lam if cfg.lam is not None else default_lambda(*m.shape)
    beta = cfg.beta0 if cfg.beta0 is not None else 1.25 / max(
        spectral_norm_estimate(m), np.finfo(float).tiny
    )
    beta_max = cfg.beta_max if cfg.beta_max is not None else 1e7 * beta

    l = np.zeros_like(m)
    s = np.zeros_like(m)
    y = np.zeros_like(m)
    rank_l = 0
    residual = 1.0
    converged = False
    iters = 0

    for iters in range(1, cfg.max_iter + 1):
        s = soft_threshold(m - l + y / beta, lam / beta)
        l, rank_l = svt_with_rank(m - s + y / beta, 1.0 / beta)
        r = m - l - s
        residual = frobenius_norm(r) / norm_m
        if not np.isfinite(residual):
            raise PcpDivergenceError(
                f"non-finite residual at iteration {iters} (beta={beta:.3g})"
            )
        y += beta * r
        if residual <= cfg.tol:
            converged = True
            break
        beta = min(cfg.rho * beta, beta_max)

    return PcpSolution(
        l=l, s=s, iterations=iters, final_residual=residual,
        rank_of_l=rank_l, elapsed=time.perf_counter() - t0,
        converged=converged, stats={"beta_final": beta, "lambda": lam},
    )
