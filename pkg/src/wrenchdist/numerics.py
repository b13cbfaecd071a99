"""
Small dense linear algebra used by the rest of the package.

Matrices are 2d numpy arrays and vectors are 1d numpy arrays. Every
decomposition goes through the SVD so that rank decisions are made from
singular values with an explicit relative cutoff.
"""

from dataclasses import dataclass

import numpy as np

from .errors import Inconsistent


@dataclass(frozen=True)
class Tolerance:
    """
    rank_eps is relative to the largest singular value, residual_eps is an
    absolute bound on residual norms.
    """

    rank_eps: float = 1e-10
    residual_eps: float = 1e-9

    def __post_init__(self):
        if not (self.rank_eps > 0 and self.residual_eps > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def skew(r):
    """Return S(r), the 3x3 matrix with S(r) @ a == cross(r, a)."""
    x, y, z = np.asarray(r, dtype=float)
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0],
    ])


def _svd(M):
    return np.linalg.svd(M, full_matrices=True)


def _cutoff(s, tol):
    if s.size == 0:
        return 0.0
    return tol.rank_eps * s[0]


def rank(M, tol=DEFAULT_TOL):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > _cutoff(s, tol)))


def pseudo_inverse(M, tol=DEFAULT_TOL):
    """
    Moore-Penrose pseudo-inverse via the SVD.

    Singular values at or below ``tol.rank_eps * s_max`` are treated as zero,
    so the zero matrix maps to the zero matrix.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError("expected a 2d array")
    m, n = M.shape
    if M.size == 0:
        return np.zeros((n, m))
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((n, m))
    keep = s > _cutoff(s, tol)
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vh.T * s_inv) @ U.T


def _fix_signs(B, tol):
    # first entry of each column above rank_eps in magnitude is made positive
    B = B.copy()
    for j in range(B.shape[1]):
        col = B[:, j]
        idx = np.flatnonzero(np.abs(col) > tol.rank_eps)
        if idx.size and col[idx[0]] < 0:
            B[:, j] = -col
    return B


def null_space_basis(M, tol=DEFAULT_TOL):
    """
    Orthonormal basis of the null space of M, one column per dimension.

    Columns follow a deterministic sign convention: the first entry whose
    magnitude exceeds ``tol.rank_eps`` is positive. A full-column-rank input
    gives an ``(cols, 0)`` result.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError("expected a 2d array")
    m, n = M.shape
    if m == 0 or M.size == 0:
        return np.eye(n)
    U, s, Vh = _svd(M)
    r = 0 if s[0] == 0.0 else int(np.sum(s > _cutoff(s, tol)))
    return _fix_signs(Vh[r:].T, tol)


def orthonormal_basis(V, tol=DEFAULT_TOL):
    """Orthonormal basis for the column span of V (rank revealing)."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2:
        raise ValueError("expected a 2d array")
    if V.shape[1] == 0:
        return np.zeros((V.shape[0], 0))
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    r = 0 if s[0] == 0.0 else int(np.sum(s > _cutoff(s, tol)))
    return _fix_signs(U[:, :r], tol)


def solve_min_norm(A, b, tol=DEFAULT_TOL):
    """
    Minimum-norm solution ``pinv(A) @ b``.

    Raises Inconsistent when ``|A x - b| > residual_eps * (1 + |b|)``, i.e.
    when b is not in the range of A.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has {b.shape[0]} rows")
    x = pseudo_inverse(A, tol) @ b
    res = np.linalg.norm(A @ x - b)
    if res > tol.residual_eps * (1.0 + np.linalg.norm(b)):
        raise Inconsistent(f"right-hand side not in range of matrix (residual {res:.3e})")
    return x


def sqrt_spd(M):
    """Symmetric square root and inverse square root of an SPD matrix."""
    w, Q = np.linalg.eigh(M)
    if np.any(w <= 0):
        raise np.linalg.LinAlgError("matrix is not positive definite")
    r = np.sqrt(w)
    return (Q * r) @ Q.T, (Q / r) @ Q.T


def subspace_gap(A, B):
    """
    Largest principal angle (radians) between the column spans of A and B.

    Both inputs are orthonormalized first; spans of unequal dimension give
    pi/2.
    """
    Qa = orthonormal_basis(np.asarray(A, dtype=float))
    Qb = orthonormal_basis(np.asarray(B, dtype=float))
    if Qa.shape[1] != Qb.shape[1]:
        return np.pi / 2
    if Qa.shape[1] == 0:
        return 0.0
    # sine form stays accurate for small angles, unlike arccos of cosines
    resid = Qb - Qa @ (Qa.T @ Qb)
    s = np.linalg.norm(resid, 2)
    return float(np.arcsin(min(1.0, s)))
