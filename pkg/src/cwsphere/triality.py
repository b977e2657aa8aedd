"""Triality triples on the octonions: the concrete model of Spin(8).

A triality triple is (A, B, C) in SO(8)^3 with A(x) B(y) = C(xy); its
linearisation is a triple (a, b, c) of skew 8x8 matrices with
a(x) y + x b(y) = c(xy). The projection to SO(8) is fixed as (A, B, C) -> A;
the other two projections are not implemented.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import octonion as oc
from .errors import DegeneracyError, PreconditionError
from .numkit import DEFAULT_RANK_TOL, mat_exp, null_space

T = oc.STRUCTURE  # T[k, i, j] = (e_i e_j)_k
_EYE8 = np.eye(8)

ANALYTIC_TOL = 1e-12
SOLVE_TOL = 1e-9


def verify_triple(A, B, C) -> float:
    """max over basis pairs (p, q) of |A(e_p) B(e_q) - C(e_p e_q)|."""
    lhs = np.einsum("krs,rp,sq->pqk", T, A, B)
    rhs = np.einsum("kr,rpq->pqk", C, T)
    return float(np.max(np.linalg.norm(lhs - rhs, axis=-1)))


def inf_residual(a, b, c) -> float:
    """max over basis pairs of |a(e_p) e_q + e_p b(e_q) - c(e_p e_q)|."""
    lhs = np.einsum("krq,rp->pqk", T, a) + np.einsum("kpr,rq->pqk", T, b)
    rhs = np.einsum("kr,rpq->pqk", c, T)
    return float(np.max(np.linalg.norm(lhs - rhs, axis=-1)))


def _skew_defect(m) -> float:
    return float(np.max(np.abs(m + m.T)))


@dataclass(frozen=True)
class InfTriple:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def residual(self) -> float:
        return inf_residual(self.a, self.b, self.c)

    def skew_defect(self) -> float:
        return max(_skew_defect(self.a), _skew_defect(self.b), _skew_defect(self.c))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.a.ravel(), self.b.ravel(), self.c.ravel()])

    @classmethod
    def from_flat(cls, v) -> "InfTriple":
        v = np.asarray(v, dtype=float)
        return cls(v[:64].reshape(8, 8), v[64:128].reshape(8, 8), v[128:].reshape(8, 8))

    def __add__(self, other):
        return InfTriple(self.a + other.a, self.b + other.b, self.c + other.c)

    def __sub__(self, other):
        return InfTriple(self.a - other.a, self.b - other.b, self.c - other.c)

    def __mul__(self, s):
        return InfTriple(self.a * s, self.b * s, self.c * s)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist(), "c": self.c.tolist()}


@dataclass(frozen=True)
class TrialityTriple:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def residual(self) -> float:
        return verify_triple(self.A, self.B, self.C)

    def __matmul__(self, other: "TrialityTriple") -> "TrialityTriple":
        return TrialityTriple(self.A @ other.A, self.B @ other.B, self.C @ other.C)

    def inverse(self) -> "TrialityTriple":
        return TrialityTriple(self.A.T, self.B.T, self.C.T)

    def __neg__(self):
        # (A, -B, -C): the other lift of A
        return TrialityTriple(self.A, -self.B, -self.C)

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "B": self.B.tolist(), "C": self.C.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TrialityTriple":
        d = json.loads(text)
        return cls(np.array(d["A"], dtype=float), np.array(d["B"], dtype=float), np.array(d["C"], dtype=float))


def identity_triple() -> TrialityTriple:
    return TrialityTriple(_EYE8.copy(), _EYE8.copy(), _EYE8.copy())


# ---------------------------------------------------------------------------
# The linearised condition as one 512 x 192 matrix acting on vec(a), vec(b), vec(c).
# Rows are indexed by (p, q, k), columns of each block by the (row, col) entry
# of the corresponding 8x8 unknown, both in C order.


def _inf_system() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = np.eye(8)
    # a(e_p) e_q: sum_r T[k, r, q] a[r, p]
    Ma = np.einsum("krq,sp->pqkrs", T, d)
    # e_p b(e_q): sum_r T[k, p, r] b[r, q]
    Mb = np.einsum("kpr,sq->pqkrs", T, d)
    # -c(e_p e_q): -sum_r c[k', r] T[r, p, q] with k' = k
    Mc = -np.einsum("kl,rpq->pqklr", d, T)
    shape = (512, 64)
    return Ma.reshape(shape), Mb.reshape(shape), Mc.reshape(shape)


_MA, _MB, _MC = _inf_system()
_BLOCKS = (_MA, _MB, _MC)

# Rows m + m^T = 0. Without them the scalar triples (s I, t I, (s+t) I) also
# solve the linear condition and the kernel is two dimensions too large.
_SYM = (np.einsum("ir,js->ijrs", np.eye(8), np.eye(8)) + np.einsum("jr,is->ijrs", np.eye(8), np.eye(8))).reshape(64, 64)
_SYM = _SYM[[8 * i + j for i in range(8) for j in range(i, 8)]]


def inf_system_matrix(skew: bool = True) -> np.ndarray:
    """The homogeneous system in (vec a, vec b, vec c).

    With ``skew`` the symmetric parts of all three entries are forced to zero
    and the kernel is spin(8), of dimension 28.
    """
    M = np.hstack(_BLOCKS)
    if skew:
        Z = np.zeros_like(_SYM)
        M = np.vstack([M, np.hstack([_SYM, Z, Z]), np.hstack([Z, _SYM, Z]), np.hstack([Z, Z, _SYM])])
    return M


@lru_cache(maxsize=3)
def _completion_system(position: int):
    """System for the two unknown entries, its pseudo-inverse and its nullity."""
    others = [i for i in range(3) if i != position]
    Z = np.zeros_like(_SYM)
    M = np.vstack(
        [
            np.hstack([_BLOCKS[i] for i in others]),
            np.hstack([_SYM, Z]),
            np.hstack([Z, _SYM]),
        ]
    )
    nullity = null_space(M, DEFAULT_RANK_TOL).shape[1]
    return M, np.linalg.pinv(M), nullity


def solve_inf_triple(known, position: int = 0):
    """Complete a skew matrix sitting at ``position`` (0, 1 or 2) to an InfTriple.

    Returns ``(triple, nullity)`` where nullity is the dimension of the
    solution space of the homogeneous system once the known entry is fixed;
    it is 0 exactly when the completion is unique.
    """
    known = np.asarray(known, dtype=float)
    if _skew_defect(known) > 1e-10:
        raise PreconditionError("infinitesimal triality needs a skew-symmetric operator")
    others = [i for i in range(3) if i != position]
    M, pinv, nullity = _completion_system(position)
    rhs = np.concatenate([-_BLOCKS[position] @ known.ravel(), np.zeros(2 * _SYM.shape[0])])
    sol = pinv @ rhs
    parts = [None, None, None]
    parts[position] = known
    parts[others[0]] = sol[:64].reshape(8, 8)
    parts[others[1]] = sol[64:].reshape(8, 8)
    return InfTriple(*parts), nullity


def inf_lift(a):
    """Unique (b, c) with (a, b, c) an infinitesimal triality triple."""
    triple, nullity = solve_inf_triple(a, 0)
    if nullity != 0:
        raise DegeneracyError(f"inf_lift: homogeneous system has nullity {nullity}, expected 0")
    return triple.b, triple.c


def exp_triple(t: float, X: InfTriple) -> TrialityTriple:
    return TrialityTriple(mat_exp(t * X.a), mat_exp(t * X.b), mat_exp(t * X.c))


# ---------------------------------------------------------------------------
# Companions of an orthogonal first entry.


def _companion_matrix(A) -> np.ndarray:
    """Linear map vec(B) -> [A(e_p) B(e_q) - A(1) B(e_p e_q)]_{p,q,k}."""
    a1 = A[:, 0]
    La1 = oc.left_op(a1)
    d = np.eye(8)
    # A(e_p) B(e_q): sum_{r,s} T[k, r, s] A[r, p] B[s, q]
    first = np.einsum("krs,rp,tq->pqkst", T, A, d)
    # A(1) B(e_p e_q): sum_{s} La1[k, m] B[m, s] T[s, p, q]
    second = np.einsum("km,spq->pqkms", La1, T)
    return (first - second).reshape(512, 64)


@dataclass(frozen=True)
class CompanionResult:
    plus: TrialityTriple
    minus: TrialityTriple
    nullity: int
    residual: float


def companions(A, tol: float = 1e-10) -> CompanionResult:
    """The two triples (A, B, C), (A, -B, -C) lying over an orthogonal A.

    B spans the kernel of the linear system A(x) B(y) = A(1) B(xy); it is
    rescaled to be orthogonal and C = L_{A(1)} B. The returned ``plus``
    representative has the largest-magnitude entry of B positive.
    """
    A = np.asarray(A, dtype=float)
    if np.max(np.abs(A.T @ A - _EYE8)) > tol:
        raise PreconditionError("companions needs an orthogonal operator")
    kernel = null_space(_companion_matrix(A), DEFAULT_RANK_TOL)
    nullity = kernel.shape[1]
    if nullity != 1:
        raise DegeneracyError(f"companions: solution space has dimension {nullity}, expected 1")
    B = kernel[:, 0].reshape(8, 8)
    B *= np.sqrt(8.0) / np.linalg.norm(B)
    flat = B.ravel()
    if flat[np.argmax(np.abs(flat))] < 0:
        B = -B
    C = oc.left_op(A[:, 0]) @ B
    plus = TrialityTriple(A, B, C)
    minus = -plus
    return CompanionResult(plus, minus, nullity, max(plus.residual(), minus.residual()))


# ---------------------------------------------------------------------------
# The two analytic families used to generate spin(7) and spin(8).


def spin7_family(z) -> TrialityTriple:
    """(L_z R_conj(z), L_z, L_z) for a unit imaginary z."""
    Lz = oc.left_op(z)
    return TrialityTriple(Lz @ oc.right_op(oc.conj(z)), Lz, Lz.copy())


def spin8_family(z) -> TrialityTriple:
    """(L_z, R_z, L_z R_z) for a unit z."""
    Lz, Rz = oc.left_op(z), oc.right_op(z)
    return TrialityTriple(Lz, Rz, Lz @ Rz)


def in_spin7(triple: TrialityTriple, tol: float = 1e-10) -> bool:
    """A(1) = 1 test for membership in Spin(7)."""
    return bool(np.linalg.norm(triple.A[:, 0] - oc.ONE) <= tol)
