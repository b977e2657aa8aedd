"""Homogeneous sphere models G/H acting linearly on R^N.

Every model is a list of skew-symmetric real matrices (a basis of the Lie
algebra of G acting on the ambient space) plus a unit base point x0. The
Killing field of X at p is X p, and pr(X) = X x0. Group elements are always
explicit products of matrix exponentials, so they are orthogonal and
Ad(g) X = g X g^T.

Realification conventions:

* complex column vectors: coordinate z_k = x_k + i y_k occupies slots (2k, 2k+1)
  and a scalar a + bi acts as [[a, -b], [b, a]];
* quaternionic column vectors: q_k occupies slots 4k..4k+3 in the order
  (1, i, j, k); matrix entries act by left multiplication and the extra
  u(1) / sp(1) factors act on the whole vector by right multiplication.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import octonion as oc
from .errors import ConfigurationError, PreconditionError
from .numkit import lstsq, make_rng, mat_exp
from .spinlie import g2_subalgebra, gen_spin7, gen_spin9

KINDS = ("SO", "U", "SU", "Sp", "SpU1", "SpSp1", "G2", "Spin7", "Spin9")
_FIXED = {"G2", "Spin7", "Spin9"}

_QUNITS = np.eye(4)


def quaternion_left(q) -> np.ndarray:
    return np.column_stack([oc.qmul(q, e) for e in _QUNITS])


def quaternion_right(q) -> np.ndarray:
    return np.column_stack([oc.qmul(e, q) for e in _QUNITS])


def complex_to_real(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    n = Z.shape[0]
    out = np.zeros((2 * n, 2 * n))
    out[0::2, 0::2] = Z.real
    out[0::2, 1::2] = -Z.imag
    out[1::2, 0::2] = Z.imag
    out[1::2, 1::2] = Z.real
    return out


def quaternion_to_real(H) -> np.ndarray:
    """(n, n, 4) array of quaternion entries -> 4n x 4n real matrix."""
    H = np.asarray(H, dtype=float)
    n = H.shape[0]
    out = np.zeros((4 * n, 4 * n))
    for k in range(n):
        for l in range(n):
            if np.any(H[k, l]):
                out[4 * k : 4 * k + 4, 4 * l : 4 * l + 4] = quaternion_left(H[k, l])
    return out


def _so_basis(n):
    out = []
    for k in range(n):
        for l in range(k + 1, n):
            E = np.zeros((n, n))
            E[k, l], E[l, k] = -1.0, 1.0
            out.append(E)
    return out


def _u_basis(n, special=False):
    out = []
    if special:
        for k in range(n - 1):
            Z = np.zeros((n, n), complex)
            Z[k, k], Z[k + 1, k + 1] = 1j, -1j
            out.append(Z)
    else:
        for k in range(n):
            Z = np.zeros((n, n), complex)
            Z[k, k] = 1j
            out.append(Z)
    for k in range(n):
        for l in range(k + 1, n):
            Z = np.zeros((n, n), complex)
            Z[k, l], Z[l, k] = 1.0, -1.0
            out.append(Z)
            Z = np.zeros((n, n), complex)
            Z[k, l] = Z[l, k] = 1j
            out.append(Z)
    return [complex_to_real(Z) for Z in out]


def _sp_basis(n):
    out = []
    imag = _QUNITS[1:]
    for k in range(n):
        for u in imag:
            H = np.zeros((n, n, 4))
            H[k, k] = u
            out.append(H)
    for k in range(n):
        for l in range(k + 1, n):
            H = np.zeros((n, n, 4))
            H[k, l, 0], H[l, k, 0] = 1.0, -1.0
            out.append(H)
            for u in imag:
                H = np.zeros((n, n, 4))
                H[k, l] = H[l, k] = u
                out.append(H)
    return [quaternion_to_real(H) for H in out]


def _right_scalar(n, q) -> np.ndarray:
    return np.kron(np.eye(n), quaternion_right(q))


@dataclass(frozen=True)
class SphereModel:
    kind: str
    m: int | None
    lie_basis: np.ndarray  # (d, N, N)
    base_point: np.ndarray

    @property
    def ambient_dim(self) -> int:
        return self.base_point.size

    @property
    def dim(self) -> int:
        return self.lie_basis.shape[0]

    def element(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=float), self.lie_basis, axes=1)

    def random_element(self, rng, scale: float = 1.0) -> np.ndarray:
        return self.element(rng.standard_normal(self.dim) * scale)

    def pr(self, X) -> np.ndarray:
        return np.asarray(X) @ self.base_point

    def tangent_basis(self) -> np.ndarray:
        """Orthonormal basis of the tangent space at x0, as columns."""
        q, _ = np.linalg.qr(np.column_stack([self.base_point, np.eye(self.ambient_dim)]))
        return q[:, 1 : self.ambient_dim]

    def coefficients(self, X) -> np.ndarray:
        """Coordinates of X in lie_basis (least squares)."""
        A = self.lie_basis.reshape(self.dim, -1).T
        c, _ = lstsq(A, np.asarray(X, dtype=float).ravel())
        return c


def make_model(kind: str, m: int | None = None) -> SphereModel:
    """Build one of the nine transitive sphere actions.

    Classical kinds take a size parameter m >= 1 (SO: the sphere S^m;
    U, SU: S^{2m+1}; Sp, SpU1, SpSp1: S^{4m+3}). G2, Spin7 and Spin9 take none.
    """
    if kind not in KINDS:
        raise ConfigurationError(f"unknown sphere kind {kind!r}; expected one of {KINDS}")
    if kind in _FIXED:
        if m is not None:
            raise ConfigurationError(f"{kind} takes no size parameter")
    else:
        if m is None:
            m = 1
        if int(m) != m or m < 1:
            raise ConfigurationError(f"{kind} needs an integer size parameter m >= 1, got {m!r}")
        m = int(m)

    if kind == "SO":
        basis = _so_basis(m + 1)
        base = np.zeros(m + 1)
    elif kind in ("U", "SU"):
        basis = _u_basis(m + 1, special=kind == "SU")
        base = np.zeros(2 * m + 2)
        base[2 * m] = 1.0
    elif kind in ("Sp", "SpU1", "SpSp1"):
        n = m + 1
        basis = _sp_basis(n)
        if kind == "SpU1":
            basis.append(_right_scalar(n, _QUNITS[1]))
        elif kind == "SpSp1":
            basis.extend(_right_scalar(n, u) for u in _QUNITS[1:])
        base = np.zeros(4 * n)
        base[4 * m] = 1.0
    elif kind == "G2":
        basis = [d.a[1:, 1:] for d in g2_subalgebra()]
        base = oc.paper_basis().e(7)[1:].copy()
    elif kind == "Spin7":
        basis = [x.b for x in gen_spin7().elements]
        base = oc.ONE.copy()
    else:  # Spin9
        basis = [x.M for x in gen_spin9().elements]
        base = np.zeros(16)
        base[0] = 1.0

    if kind == "SO":
        base[-1] = 1.0
    lie_basis = np.array(basis, dtype=float)
    return SphereModel(kind, None if kind in _FIXED else m, lie_basis, base)


# ---------------------------------------------------------------------------


def _check_on_sphere(p, tol=1e-10):
    if abs(np.linalg.norm(p) - 1.0) > tol:
        raise PreconditionError("point is not on the unit sphere")


def killing_value(model: SphereModel, X, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    _check_on_sphere(p)
    return np.asarray(X) @ p


def adjoint(g, X) -> np.ndarray:
    """Ad(g) X = g X g^{-1}; g is orthogonal here, so g^{-1} = g^T."""
    return g @ X @ g.T


def random_group_element(model: SphereModel, rng, factors: int = 4) -> np.ndarray:
    """Product of exponentials of random Lie algebra elements, coefficients ~ U[-pi, pi]."""
    g = np.eye(model.ambient_dim)
    for _ in range(factors):
        g = mat_exp(model.element(rng.uniform(-np.pi, np.pi, model.dim))) @ g
    return g


def pullback_identity_check(model: SphereModel, X, g) -> float:
    """|g^{-1} (X (g x0)) - (g^{-1} X g) x0|: the value of X at g x0, pulled back."""
    X = np.asarray(X, dtype=float)
    ginv = np.linalg.inv(g)
    x0 = model.base_point
    left = ginv @ (X @ (g @ x0))
    right = (ginv @ X @ g) @ x0
    return float(np.linalg.norm(left - right))


@dataclass
class OrbitSample:
    kind: str
    X: np.ndarray
    seed: int | None
    points: np.ndarray
    conjugators: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "X": np.asarray(self.X).tolist(),
            "seed": self.seed,
            "points": np.asarray(self.points).tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "OrbitSample":
        d = json.loads(text)
        return cls(d["kind"], np.array(d["X"], dtype=float), d["seed"], np.array(d["points"], dtype=float))


def sample_orbit(model: SphereModel, X, n: int, seed, factors: int = 4) -> OrbitSample:
    """n points pr(Ad(g_i) X) for seeded random group elements g_i."""
    if n < 1:
        raise ValueError("sample_orbit needs n >= 1")
    X = np.asarray(X, dtype=float)
    rng = make_rng(seed)
    pts = np.empty((n, model.ambient_dim))
    gs = []
    for i in range(n):
        g = random_group_element(model, rng, factors)
        pts[i] = model.pr(adjoint(g, X))
        gs.append(g)
    return OrbitSample(model.kind, X, seed, pts, gs)


# ---------------------------------------------------------------------------
# Conjugation search


@dataclass
class ConjugationResult:
    g: np.ndarray
    distance: float
    success: bool
    evaluations: int
    restarts: int


class _Budget(Exception):
    pass


def find_conjugation(
    model: SphereModel,
    X,
    target,
    tol: float = 1e-6,
    budget: int = 100_000,
    seed=0,
    restarts: int = 32,
    iterations: int = 200,
    initial_step: float = np.pi / 4,
    polish_below: float = 1e-3,
    polish_iterations: int = 30,
) -> ConjugationResult:
    """Search g in G minimising |pr(Ad(g) X) - target|.

    Restart 0 starts at the identity, the others at exp of a random element
    with coefficients in [-pi, pi]. Each restart runs coordinate descent over
    left translations g <- exp(+-s B_l) g, halving s after a sweep without
    improvement; once s drops below ``polish_below`` it switches to damped
    Gauss-Newton steps using the exact derivative [B_l, Ad(g)X] x0.
    """
    X = np.asarray(X, dtype=float)
    target = np.asarray(target, dtype=float)
    B = model.lie_basis
    x0 = model.base_point
    Bx0 = B @ x0  # (d, N)
    rng = make_rng(seed)
    count = 0

    best_g, best_f = np.eye(model.ambient_dim), np.inf

    def objective(g):
        # every evaluation counts against the budget and updates the incumbent
        nonlocal count, best_g, best_f
        if count >= budget:
            raise _Budget
        count += 1
        f = float(np.linalg.norm(g @ (X @ (g.T @ x0)) - target))
        if f < best_f:
            best_g, best_f = g, f
        return f

    used = 0
    try:
        for r in range(restarts):
            used = r + 1
            g = np.eye(model.ambient_dim) if r == 0 else mat_exp(model.element(rng.uniform(-np.pi, np.pi, model.dim)))
            f = objective(g)

            step = initial_step
            for _ in range(iterations):
                if f <= tol or step < polish_below:
                    break
                plus = [mat_exp(step * Bl) for Bl in B]
                improved = False
                for P in plus:
                    for E in (P, P.T):
                        cand = E @ g
                        fc = objective(cand)
                        if fc < f:
                            g, f, improved = cand, fc, True
                            break
                if not improved:
                    step /= 2

            for _ in range(polish_iterations):
                if f <= tol * 1e-3:
                    break
                Y = adjoint(g, X)
                r_vec = Y @ x0 - target
                J = (B @ (Y @ x0)).T - Y @ Bx0.T  # column l: [B_l, Y] x0
                delta, _ = lstsq(J, -r_vec)
                accepted = False
                for _ in range(20):
                    cand = mat_exp(model.element(delta)) @ g
                    fc = objective(cand)
                    if fc < f:
                        g, f, accepted = cand, fc, True
                        break
                    delta = delta / 2
                if not accepted:
                    break

            if best_f <= tol:
                break
    except _Budget:
        pass
    return ConjugationResult(best_g, float(best_f), bool(best_f <= tol), count, used)
