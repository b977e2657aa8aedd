"""Small dense linear-algebra kernel used by every other module.

All routines work on float64 numpy arrays. Randomness goes through
``numpy.random.Generator`` (PCG64) built by :func:`make_rng`; one generator
per thread of work.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError

DEFAULT_RANK_TOL = 1e-9

# Taylor order and squaring cap for mat_exp. After scaling, ||M|| <= 1/2, so the
# truncation error of a degree-18 Taylor polynomial is below 0.5**19 / 19! ~ 1e-23.
_TAYLOR_ORDER = 18
_MAX_SQUARINGS = 64

RngStream = np.random.Generator


def make_rng(seed) -> RngStream:
    """Seeded PCG64 stream. ``seed`` may be an int or a sequence of ints."""
    return np.random.default_rng(seed)


def mat_exp(M: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a truncated Taylor series."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"mat_exp needs a square matrix, got shape {M.shape}")
    n = M.shape[0]
    norm = np.linalg.norm(M, 1)
    if not np.isfinite(norm):
        raise ValueError("mat_exp: non-finite entries")
    squarings = 0
    if norm > 0.5:
        squarings = min(int(np.ceil(np.log2(norm / 0.5))), _MAX_SQUARINGS)
    A = M / (2.0 ** squarings)

    eye = np.eye(n)
    # Horner evaluation of sum_{k<=N} A^k / k!
    E = eye + A / _TAYLOR_ORDER
    for k in range(_TAYLOR_ORDER - 1, 0, -1):
        E = eye + (A @ E) / k
    for _ in range(squarings):
        E = E @ E
    return E


def rank_tol(vectors, tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank of a family of vectors (or matrices, which are flattened).

    Counts singular values above ``tol`` times the largest one.
    """
    vectors = list(vectors)
    if not vectors:
        return 0
    flat = [np.asarray(v, dtype=float).ravel() for v in vectors]
    length = flat[0].size
    if any(v.size != length for v in flat):
        raise DimensionError("rank_tol: vectors have different lengths")
    if tol <= 0:
        raise ValueError("rank_tol: tol must be positive")
    s = np.linalg.svd(np.vstack(flat), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def lstsq(A: np.ndarray, y: np.ndarray):
    """Least-squares solve of ``A x = y``.

    Rank-deficient ``A`` is allowed; the minimum-norm minimizer (the
    pseudo-inverse solution) is returned. ``y`` may be a vector or a matrix of
    right-hand sides, in which case the residual is an array with one entry
    per column.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1:
        raise DimensionError("lstsq: A must be a matrix with at least one row")
    if y.shape[0] != A.shape[0]:
        raise DimensionError(f"lstsq: A has {A.shape[0]} rows but y has {y.shape[0]}")
    x, *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = np.linalg.norm(A @ x - y, axis=0)
    if y.ndim == 1:
        residual = float(residual)
    return x, residual


def null_space(A: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``A``."""
    A = np.asarray(A, dtype=float)
    _, s, vt = np.linalg.svd(A)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.count_nonzero(s > tol * scale))
    return vt[rank:].T.copy()


def random_skew(rng: RngStream, n: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((n, n)) * scale
    return (a - a.T) / 2.0


def is_orthogonal(M: np.ndarray, tol: float = 1e-10) -> bool:
    M = np.asarray(M, dtype=float)
    return bool(np.max(np.abs(M.T @ M - np.eye(M.shape[0]))) <= tol)


def commutator(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X
