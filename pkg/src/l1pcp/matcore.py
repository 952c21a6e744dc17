"""Dense matrix primitives: norms, skinny SVD, and the two proximal operators
(soft thresholding and singular value thresholding) used by every solver."""

from dataclasses import dataclass

import numpy as np


class SvdConvergenceError(RuntimeError):
    """The underlying SVD factorization failed to converge."""


def as_dense(a):
    """Coerce *a* to a 2-D float64 array, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if not np.isfinite(arr).all():
        raise ValueError("matrix contains non-finite entries")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class SkinnySvd:
    """Skinny SVD: u (m×k) and v (n×k) with orthonormal columns, sigma
    strictly positive and nonincreasing."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def rank(self):
        return self.sigma.size

    def reconstruct(self):
        """Return u @ diag(sigma) @ v.T."""
        return (self.u * self.sigma) @ self.v.T


def frobenius_norm(m):
    return float(np.linalg.norm(m, "fro"))


def l1_norm(m):
    return float(np.abs(m).sum())


def linf_norm(m):
    return float(np.abs(m).max()) if np.asarray(m).size else 0.0


def l0_count(m, threshold=None):
    """Count entries with |x| > threshold.

    Recovered sparse parts carry solver-tolerance noise, so the default
    threshold is 1e-6 times the matrix linf norm rather than exact zero.
    """
    if threshold is None:
        threshold = 1e-6 * linf_norm(m)
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    return int((np.abs(m) > threshold).sum())


def soft_threshold(m, eta):
    """Elementwise soft shrinkage sgn(x) * max(|x| - eta, 0)."""
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    return np.sign(m) * np.maximum(np.abs(m) - eta, 0.0)


def svd(m, rank_tol=1e-8):
    """Skinny SVD of *m*, dropping singular values <= rank_tol * sigma_max.

    Exact zeros are always dropped, so the result has strictly positive
    singular values even at rank_tol=0.
    """
    m = np.asarray(m, dtype=np.float64)
    if rank_tol < 0:
        raise ValueError("rank_tol must be nonnegative")
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdConvergenceError(f"SVD failed on {m.shape} matrix: {exc}") from exc
    cutoff = rank_tol * (s[0] if s.size else 0.0)
    k = int((s > cutoff).sum())
    return SkinnySvd(u=u[:, :k].copy(), sigma=s[:k].copy(), v=vt[:k].T.copy())


def nuclear_norm(m):
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(m, dtype=np.float64), compute_uv=False).sum())


def svt_with_rank(w, eta):
    """Singular value thresholding, returning (matrix, retained_rank)."""
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    f = svd(w, rank_tol=0.0)
    s = f.sigma - eta
    k = int((s > 0).sum())
    if k == 0:
        return np.zeros_like(np.asarray(w, dtype=np.float64)), 0
    return (f.u[:, :k] * s[:k]) @ f.v[:, :k].T, k


def svt(w, eta):
    """Singular value thresholding: U S_eta(Sigma) V^T.

    Closed-form minimizer of eta*||A||_* + 0.5*||A - W||_F^2.
    """
    return svt_with_rank(w, eta)[0]


def pseudo_inverse_apply(f, rhs):
    """Apply V Sigma^{-1} U^T to *rhs* using the retained singular values."""
    rhs = np.asarray(rhs, dtype=np.float64)
    if f.u.shape[0] != rhs.shape[0]:
        raise ValueError(
            f"dimension mismatch: factor has {f.u.shape[0]} rows, rhs has {rhs.shape[0]}"
        )
    return f.v @ ((f.u.T @ rhs) / f.sigma[:, None])
