"""Minkowski norms on the tangent space at the base point.

Only two families are instantiated: Riemannian norms sqrt(v^T Q v) and Randers
norms sqrt(v^T A v) + b.v with |b|_{A^{-1}} < 1. Their unit level sets
(indicatrices) are ellipsoids, centred at the origin for Riemannian norms and
off-centre for Randers norms; ``quadric_fit`` and ``randers_from_quadric`` go
from a cloud of orbit projections to the norm whose indicatrix contains it.

Distances are only computed for the round metric.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .numkit import lstsq, make_rng

CENTER_TOL = 1e-8
EIGEN_FLOOR = 1e-10
BOUNDARY_TOL = 1e-6
KFCL_REL_TOL = 1e-8


@dataclass(frozen=True)
class MinkowskiNorm:
    variant: str  # "riemannian" or "randers"
    A: np.ndarray  # Q for the riemannian variant
    b: np.ndarray | None = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("norm matrix must be square")
        if np.max(np.abs(A - A.T)) > 1e-12 * max(1.0, np.max(np.abs(A))):
            raise ValueError("norm matrix must be symmetric")
        if np.linalg.eigvalsh(A)[0] <= 0:
            raise ValueError("norm matrix must be positive definite")
        object.__setattr__(self, "A", A)
        if self.variant == "riemannian":
            if self.b is not None and np.any(self.b):
                raise ValueError("a riemannian norm has no linear term")
            object.__setattr__(self, "b", None)
        elif self.variant == "randers":
            b = np.asarray(self.b, dtype=float)
            if b.shape != (A.shape[0],):
                raise ValueError("randers covector has the wrong length")
            if b @ np.linalg.solve(A, b) >= 1.0:
                raise ValueError("randers covector must satisfy |b|_{A^-1} < 1")
            object.__setattr__(self, "b", b)
        else:
            raise ValueError(f"unknown norm variant {self.variant!r}")

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def beta_norm(self) -> float:
        """|b|_{A^-1}, i.e. sup b.v / sqrt(v^T A v); zero for riemannian norms."""
        if self.b is None:
            return 0.0
        return float(np.sqrt(self.b @ np.linalg.solve(self.A, self.b)))

    def __call__(self, v):
        return evaluate(self, v)

    def to_dict(self) -> dict:
        if self.variant == "riemannian":
            return {"variant": "riemannian", "Q": self.A.tolist()}
        return {"variant": "randers", "A": self.A.tolist(), "b": self.b.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MinkowskiNorm":
        if d["variant"] == "riemannian":
            return riemannian(d["Q"])
        return randers(d["A"], d["b"])

    @classmethod
    def from_json(cls, text: str) -> "MinkowskiNorm":
        return cls.from_dict(json.loads(text))


def riemannian(Q) -> MinkowskiNorm:
    return MinkowskiNorm("riemannian", np.asarray(Q, dtype=float))


def randers(A, b) -> MinkowskiNorm:
    return MinkowskiNorm("randers", np.asarray(A, dtype=float), np.asarray(b, dtype=float))


def evaluate(F: MinkowskiNorm, v):
    """F(v); v may be a single vector or an (n, d) batch."""
    v = np.asarray(v, dtype=float)
    quad = np.einsum("...i,ij,...j->...", v, F.A, v)
    out = np.sqrt(np.maximum(quad, 0.0))
    if F.b is not None:
        out = out + v @ F.b
    return out


@dataclass(frozen=True)
class KfclResult:
    is_constant: bool
    spread: float
    mean: float
    n: int


def kfcl_check(sample, F: MinkowskiNorm, rel_tol: float = KFCL_REL_TOL) -> KfclResult:
    """Is F constant on the sampled orbit projections?

    ``sample`` is an OrbitSample or an array of points. This is a finite-sample
    check: the result reports the spread max F - min F over the sample and
    the sample size, not a proof.
    """
    pts = np.asarray(getattr(sample, "points", sample), dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[0] == 0:
        raise ValueError("kfcl_check needs a non-empty sample")
    vals = evaluate(F, pts)
    spread = float(vals.max() - vals.min())
    mean = float(vals.mean())
    return KfclResult(bool(spread <= rel_tol * mean), spread, mean, int(pts.shape[0]))


# ---------------------------------------------------------------------------
# Quadric fitting


@dataclass(frozen=True)
class QuadricFit:
    Q: np.ndarray  # normalised so the ellipsoid is (v - c)^T Q (v - c) = 1 when PD
    center: np.ndarray | None
    residual: float
    classification: str  # "Riemannian", "Randers" or "neither"
    inconclusive: bool = False
    diagnostics: str = ""

    def to_dict(self) -> dict:
        return {
            "Q": self.Q.tolist(),
            "center": None if self.center is None else self.center.tolist(),
            "residual": self.residual,
            "classification": self.classification,
            "inconclusive": self.inconclusive,
            "diagnostics": self.diagnostics,
        }


def _quadric_design(pts: np.ndarray) -> np.ndarray:
    d = pts.shape[1]
    cols = []
    for i in range(d):
        for j in range(i, d):
            cols.append(pts[:, i] * pts[:, j] * (1.0 if i == j else 2.0))
    cols.extend(pts[:, i] for i in range(d))
    return np.column_stack(cols)


def quadric_fit(points) -> QuadricFit:
    """Least-squares fit of v^T Q v + l.v = 1, recentred when Q is positive definite.

    Classification: centre within 1e-8 of the origin -> "Riemannian";
    positive definite with the origin strictly inside -> "Randers"; anything
    else -> "neither". A fit whose boundary passes within 1e-6 of the origin
    is flagged inconclusive.
    """
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    need = d * (d + 3) // 2
    if n < need:
        raise PreconditionError(f"quadric_fit in dimension {d} needs at least {need} points, got {n}")
    D = _quadric_design(pts)
    coef, _ = lstsq(D, np.ones(n))
    Q = np.zeros((d, d))
    k = 0
    for i in range(d):
        for j in range(i, d):
            Q[i, j] = Q[j, i] = coef[k]
            k += 1
    ell = coef[k:]
    raw_residual = float(np.max(np.abs(D @ coef - 1.0)))

    eig = np.linalg.eigvalsh(Q)
    scale = max(np.max(np.abs(eig)), 1e-300)
    if eig[0] <= EIGEN_FLOOR * scale:
        return QuadricFit(Q, None, raw_residual, "neither", diagnostics=f"quadric not positive definite (eigenvalues {eig.tolist()})")

    c = -0.5 * np.linalg.solve(Q, ell)
    Qn = Q / (1.0 + c @ Q @ c)
    Qn = (Qn + Qn.T) / 2
    diffs = pts - c
    residual = float(np.max(np.abs(np.einsum("ni,ij,nj->n", diffs, Qn, diffs) - 1.0)))

    origin_level = float(np.sqrt(c @ Qn @ c))  # < 1 iff the origin is inside
    inconclusive = abs(1.0 - origin_level) <= BOUNDARY_TOL
    if np.linalg.norm(c) <= CENTER_TOL:
        cls, diag = "Riemannian", "centred ellipsoid"
    elif origin_level < 1.0:
        cls, diag = "Randers", "ellipsoid off-centre, origin inside"
    else:
        cls, diag = "neither", "origin outside the ellipsoid"
    if inconclusive:
        diag += "; origin within 1e-6 of the boundary"
    return QuadricFit(Qn, c, residual, cls, inconclusive, diag)


def randers_from_quadric(fit: QuadricFit) -> MinkowskiNorm:
    """The Riemannian or Randers norm whose indicatrix is the fitted ellipsoid.

    For (v - c)^T Q (v - c) = 1 with kappa = 1 - c^T Q c > 0, solving for the
    scale t with t v on the ellipsoid gives
    F(v) = sqrt(v^T A v) + b.v, A = (Q c c^T Q + kappa Q) / kappa^2, b = -Q c / kappa.
    """
    if fit.classification == "Riemannian":
        return riemannian(fit.Q)
    if fit.classification != "Randers":
        raise DomainError(f"no Minkowski norm for a fit classified {fit.classification!r}")
    Q, c = fit.Q, fit.center
    Qc = Q @ c
    kappa = 1.0 - c @ Qc
    A = (np.outer(Qc, Qc) + kappa * Q) / kappa**2
    A = (A + A.T) / 2
    return randers(A, -Qc / kappa)


def span_coordinates(points, tol: float = 1e-9):
    """Coordinates of points in an orthonormal basis of their linear span.

    Returns ``(coords, basis)`` with ``points ~= coords @ basis.T``. The span is
    linear, not affine, so the origin maps to the origin.
    """
    pts = np.asarray(points, dtype=float)
    _, s, vt = np.linalg.svd(pts, full_matrices=False)
    r = int(np.count_nonzero(s > tol * s[0])) if s.size and s[0] > 0 else 0
    basis = vt[:r].T
    return pts @ basis, basis


# ---------------------------------------------------------------------------
# Clifford-Wolf translations of the round sphere


def round_distances(g, n: int, seed) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if np.max(np.abs(g.T @ g - np.eye(g.shape[0]))) > 1e-10:
        raise PreconditionError("round_cw_check needs an orthogonal map")
    rng = make_rng(seed)
    p = rng.standard_normal((n, g.shape[0]))
    p /= np.linalg.norm(p, axis=1, keepdims=True)
    cos = np.einsum("ni,ni->n", p, p @ g.T)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def round_cw_check(model, g, n: int, seed) -> float:
    """max - min of the round distance d(p, g p) over n random points of the sphere.

    ``model`` only fixes the ambient dimension; pass None to use g's size.
    """
    g = np.asarray(g, dtype=float)
    if model is not None and g.shape[0] != model.ambient_dim:
        raise PreconditionError("isometry does not act on the model's ambient space")
    d = round_distances(g, n, seed)
    return float(d.max() - d.min())
