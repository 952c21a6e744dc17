"""Linear-time principal component pursuit by l1 filtering.

Pipeline: sample a small seed submatrix, recover it exactly with the
reference ADM solver, express the aligned column and row blocks in the
seed's column/row subspaces via l1 regression, and fill in the remaining
block with the generalized Nystrom formula. When no target rank is known,
the seed is grown geometrically until its recovered rank is consistent with
the oversampling rates, falling back to a full PCP solve once the seed
would exceed half the matrix.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .matcore import SkinnySvd, as_dense, frobenius_norm, svd
from .l1reg import solve_l1reg_columnwise
from .pcp_adm import AdmConfig, PcpSolution, default_lambda, solve_pcp

SEED_RANK_TOL = 1e-6

# The pipeline's internal solves run tighter than the standalone solver
# default: seed errors are amplified by the inverted seed spectrum in the
# completion step, so headroom here is cheap insurance on seed-sized blocks.
PIPELINE_TOL = 1e-9


class SeedRankZeroError(RuntimeError):
    """The recovered seed matrix is (numerically) zero."""


@dataclass(frozen=True)
class SeedRecovery:
    row_idx: np.ndarray
    col_idx: np.ndarray
    seed_svd: SkinnySvd
    seed_l: np.ndarray
    seed_s: np.ndarray
    r_prime: int
    pcp_iterations: int = 0


@dataclass(frozen=True)
class FilterResult:
    q_tilde: np.ndarray   # r' x (n - |col_idx|)
    p_tilde: np.ndarray   # r' x (m - |row_idx|)
    s_col: np.ndarray
    s_row: np.ndarray
    iterations: int = 0


@dataclass
class FilterConfig:
    s_r: float = 10.0
    s_c: float = 10.0
    rank_hint: int | None = None
    max_seed_fraction: float = 0.5
    rng_seed: int = 0
    adm: AdmConfig = field(default_factory=lambda: AdmConfig(tol=PIPELINE_TOL))
    cross_validate: bool = False
    rank_tol: float = SEED_RANK_TOL
    parallelism: int = 1

    def __post_init__(self):
        if self.s_r <= 1 or self.s_c <= 1:
            raise ValueError("oversampling rates must be > 1")
        if not 0 < self.max_seed_fraction <= 1:
            raise ValueError("max_seed_fraction must be in (0, 1]")


def sample_submatrix(m, n_rows, n_cols, rng_seed):
    """Sample row/column index sets uniformly without replacement.

    rng_seed may be an integer, a SeedSequence, or a Generator. Index sets
    are returned sorted; the block is M restricted to them.
    """
    m = as_dense(m)
    if n_rows > m.shape[0] or n_cols > m.shape[1]:
        raise ValueError(
            f"requested {n_rows}x{n_cols} block from {m.shape[0]}x{m.shape[1]} matrix"
        )
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    row_idx = np.sort(rng.choice(m.shape[0], size=n_rows, replace=False))
    col_idx = np.sort(rng.choice(m.shape[1], size=n_cols, replace=False))
    return row_idx, col_idx, m[np.ix_(row_idx, col_idx)]


def recover_seed(seed_block, adm=None, rank_tol=SEED_RANK_TOL,
                 row_idx=None, col_idx=None):
    """Recover the low-rank part of a sampled block by small-scale PCP and
    factor it. Raises SeedRankZeroError when the block carries no signal."""
    seed_block = as_dense(seed_block)
    adm = adm or AdmConfig()
    lam = default_lambda(*seed_block.shape)
    cfg = AdmConfig(lam=lam, tol=adm.tol, beta0=adm.beta0, rho=adm.rho,
                    beta_max=adm.beta_max, max_iter=adm.max_iter)
    sol = solve_pcp(seed_block, cfg)
    f = svd(sol.l, rank_tol=rank_tol)
    if f.rank == 0:
        raise SeedRankZeroError("seed recovery produced a zero low-rank part")
    # use the truncated reconstruction so downstream blocks share exact factors
    seed_l = f.reconstruct()
    if row_idx is None:
        row_idx = np.arange(seed_block.shape[0])
    if col_idx is None:
        col_idx = np.arange(seed_block.shape[1])
    return SeedRecovery(
        row_idx=np.asarray(row_idx), col_idx=np.asarray(col_idx),
        seed_svd=f, seed_l=seed_l, seed_s=seed_block - seed_l,
        r_prime=f.rank, pcp_iterations=sol.iterations,
    )


def filter_columns(m_c, u_s, cfg=None, parallelism=1):
    """Express the aligned column block as U^s Q + sparse residual."""
    m_c = as_dense(m_c)
    if m_c.shape[1] == 0:
        return np.zeros((u_s.shape[1], 0)), np.zeros_like(m_c), 0
    sol = solve_l1reg_columnwise(m_c, u_s, cfg, parallelism=parallelism)
    return sol.z, sol.e, sol.iterations


def filter_rows(m_r, v_s, cfg=None, parallelism=1):
    """Express the aligned row block as P^T (V^s)^T + sparse residual.

    Solved by transposing into column form over the same kernel.
    """
    m_r = as_dense(m_r)
    if m_r.shape[0] == 0:
        return np.zeros((v_s.shape[1], 0)), np.zeros_like(m_r), 0
    sol = solve_l1reg_columnwise(m_r.T, v_s, cfg, parallelism=parallelism)
    return sol.z, sol.e.T, sol.iterations


def nystrom_complete(seed, fr):
    """Completion block P^T Sigma^{-1} Q from the filtered factors."""
    if seed.r_prime < 1:
        raise ValueError("seed rank must be >= 1")
    return fr.p_tilde.T @ (fr.q_tilde / seed.seed_svd.sigma[:, None])


def nystrom_complete_via_pinv(l_row, seed_l, l_col, rank_tol=SEED_RANK_TOL):
    """Completion block L^r pinv(L^s) L^c, recomputing the pseudo-inverse
    from the seed matrix itself (independent cross-check path)."""
    f = svd(as_dense(seed_l), rank_tol=rank_tol)
    return as_dense(l_row) @ matcore.pseudo_inverse_apply(f, as_dense(l_col))


def assemble(seed, fr, completion, m_rows, m_cols):
    """Place the four recovered blocks back at their original indices."""
    row_idx, col_idx = seed.row_idx, seed.col_idx
    comp_rows = np.setdiff1d(np.arange(m_rows), row_idx)
    comp_cols = np.setdiff1d(np.arange(m_cols), col_idx)
    if fr.q_tilde.shape[1] != comp_cols.size or fr.p_tilde.shape[1] != comp_rows.size:
        raise RuntimeError("filter blocks inconsistent with index bookkeeping")
    if completion.shape != (comp_rows.size, comp_cols.size):
        raise RuntimeError("completion block inconsistent with index bookkeeping")

    l = np.empty((m_rows, m_cols))
    f = seed.seed_svd
    l[np.ix_(row_idx, col_idx)] = seed.seed_l
    l[np.ix_(row_idx, comp_cols)] = f.u @ fr.q_tilde
    l[np.ix_(comp_rows, col_idx)] = fr.p_tilde.T @ f.v.T
    l[np.ix_(comp_rows, comp_cols)] = completion
    return l


def _proposed_seed_shape(r, m_rows, m_cols, cfg):
    return int(round(cfg.s_r * r)), int(round(cfg.s_c * r))


def estimate_rank_and_solve(m, cfg=None):
    """Full l1-filtering solve with target-rank estimation.

    Grows the seed until its recovered rank is consistent with the
    oversampling rates; when the required seed would exceed
    max_seed_fraction of either dimension, solves the whole matrix by
    reference ADM instead (method="full-pcp-fallback").
    """
    t_start = time.perf_counter()
    m = as_dense(m)
    cfg = cfg or FilterConfig()
    m_rows, m_cols = m.shape

    ss = np.random.SeedSequence(cfg.rng_seed)

    def next_stream():
        return ss.spawn(1)[0]

    r = max(1, cfg.rank_hint or 1)
    seed = None
    attempts = 0
    t1 = 0.0
    while True:
        attempts += 1
        n_rows, n_cols = _proposed_seed_shape(r, m_rows, m_cols, cfg)
        if max(n_rows / m_rows, n_cols / m_cols) > cfg.max_seed_fraction:
            sol = solve_pcp(m, cfg.adm)
            sol.method = "full-pcp-fallback"
            sol.stats.update({"attempts": attempts, "proposed_seed": (n_rows, n_cols)})
            sol.elapsed = time.perf_counter() - t_start
            return sol
        n_rows, n_cols = min(n_rows, m_rows), min(n_cols, m_cols)

        t0 = time.perf_counter()
        row_idx, col_idx, block = sample_submatrix(m, n_rows, n_cols, next_stream())
        try:
            seed = recover_seed(block, cfg.adm, cfg.rank_tol, row_idx, col_idx)
        except SeedRankZeroError:
            t1 += time.perf_counter() - t0
            l = np.zeros_like(m)
            return PcpSolution(
                l=l, s=m.copy(), iterations=attempts, final_residual=0.0,
                rank_of_l=0, elapsed=time.perf_counter() - t_start, converged=True,
                method="degenerate-zero-seed", stats={"t1": t1, "attempts": attempts},
            )
        r_prime = seed.r_prime

        if cfg.cross_validate:
            ri2, ci2, block2 = sample_submatrix(m, n_rows, n_cols, next_stream())
            try:
                seed2 = recover_seed(block2, cfg.adm, cfg.rank_tol, ri2, ci2)
                r2 = seed2.r_prime
            except SeedRankZeroError:
                r2 = 0
            if r2 != r_prime:
                t1 += time.perf_counter() - t0
                r = max(r_prime, r2, r + 1)
                continue
        t1 += time.perf_counter() - t0

        if n_rows / r_prime >= cfg.s_r and n_cols / r_prime >= cfg.s_c:
            break
        # undersized seed: grow to the oversampled size for the observed rank
        r = max(r_prime, r + 1)

    t0 = time.perf_counter()
    comp_rows = np.setdiff1d(np.arange(m_rows), seed.row_idx)
    comp_cols = np.setdiff1d(np.arange(m_cols), seed.col_idx)
    m_c = m[np.ix_(seed.row_idx, comp_cols)]
    m_r = m[np.ix_(comp_rows, seed.col_idx)]
    q_tilde, s_col, it_c = filter_columns(m_c, seed.seed_svd.u, cfg.adm, cfg.parallelism)
    p_tilde, s_row, it_r = filter_rows(m_r, seed.seed_svd.v, cfg.adm, cfg.parallelism)
    fr = FilterResult(q_tilde=q_tilde, p_tilde=p_tilde, s_col=s_col,
                      s_row=s_row, iterations=max(it_c, it_r))
    t2 = time.perf_counter() - t0

    t0 = time.perf_counter()
    completion = nystrom_complete(seed, fr)
    l = assemble(seed, fr, completion, m_rows, m_cols)
    s = m - l
    t_assemble = time.perf_counter() - t0

    norm_m = frobenius_norm(m)
    residual = frobenius_norm(m - l - s) / norm_m if norm_m else 0.0
    return PcpSolution(
        l=l, s=s, iterations=seed.pcp_iterations + fr.iterations,
        final_residual=residual, rank_of_l=seed.r_prime,
        elapsed=time.perf_counter() - t_start, converged=True, method="l1-filter",
        stats={
            "t1": t1, "t2": t2, "t_assemble": t_assemble,
            "seed_rows": int(seed.row_idx.size), "seed_cols": int(seed.col_idx.size),
            "r_prime": seed.r_prime, "attempts": attempts,
            "seed_iterations": seed.pcp_iterations, "filter_iterations": fr.iterations,
        },
    )
