"""spin(7) < spin(8) < spin(9) from explicit generator sets.

spin(7) and spin(8) elements are infinitesimal triality triples; spin(9)
elements are skew 16x16 matrices on O + O. A spin(8) triple (a, b, c) sits in
spin(9) as diag(a, c). All octonion units e_i below are the relabelled basis
with e1 e2 = e3 e4 = e5 e6 = e7.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import octonion as oc
from .numkit import DEFAULT_RANK_TOL, lstsq, mat_exp, null_space, rank_tol
from .triality import InfTriple, solve_inf_triple, spin7_family

PAIRS = tuple(combinations(range(1, 8), 2))


@dataclass(frozen=True)
class Spin9Element:
    M: np.ndarray

    def flat(self) -> np.ndarray:
        return self.M.ravel()

    def skew_defect(self) -> float:
        return float(np.max(np.abs(self.M + self.M.T)))

    def __add__(self, other):
        return Spin9Element(self.M + other.M)

    def __sub__(self, other):
        return Spin9Element(self.M - other.M)

    def __mul__(self, s):
        return Spin9Element(self.M * s)

    __rmul__ = __mul__


@dataclass
class GeneratorSet:
    name: str
    elements: list
    labels: list = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def matrix(self) -> np.ndarray:
        """Flattened generators as columns."""
        return np.column_stack([_flat(x) for x in self.elements])

    def rank(self, tol: float = DEFAULT_RANK_TOL) -> int:
        return rank_tol([_flat(x) for x in self.elements], tol)

    def to_dict(self) -> dict:
        if self.elements and isinstance(self.elements[0], InfTriple):
            mats = [[x.a.tolist(), x.b.tolist(), x.c.tolist()] for x in self.elements]
        else:
            mats = [x.M.tolist() for x in self.elements]
        return {"name": self.name, "elements": mats, "labels": [list(l) for l in self.labels]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSet":
        d = json.loads(text)
        elements = []
        for m in d["elements"]:
            arr = np.array(m, dtype=float)
            elements.append(InfTriple(*arr) if arr.ndim == 3 else Spin9Element(arr))
        return cls(d["name"], elements, [tuple(l) for l in d["labels"]])


def _flat(x) -> np.ndarray:
    return x.flat() if isinstance(x, (InfTriple, Spin9Element)) else np.asarray(x, dtype=float).ravel()


def _e():
    return oc.paper_basis().vectors


def _L(i):
    return oc.left_op(_e()[i])


def _R(i):
    return oc.right_op(_e()[i])


# ---------------------------------------------------------------------------
# Generator sets


def gen_spin7() -> GeneratorSet:
    """21 triples (a, L_ei L_ej, L_ei L_ej), i < j, with a solved from triality."""
    return GeneratorSet("S1", list(_spin7_elements()), list(PAIRS))


@lru_cache(maxsize=None)
def _spin7_elements() -> tuple:
    elements = []
    for i, j in PAIRS:
        b = _L(i) @ _L(j)
        triple, nullity = solve_inf_triple(b, position=1)
        assert nullity == 0
        a = triple.a
        a.flags.writeable = False
        b.flags.writeable = False
        elements.append(InfTriple(a, b, b))
    return tuple(elements)


def gen_spin8() -> GeneratorSet:
    s1 = gen_spin7()
    extra = [InfTriple(_L(i), _R(i), _L(i) + _R(i)) for i in range(1, 8)]
    return GeneratorSet("S2", s1.elements + extra, s1.labels + [(i,) for i in range(1, 8)])


def embed(x: InfTriple) -> Spin9Element:
    """spin(8) -> spin(9), (a, b, c) -> diag(a, c)."""
    M = np.zeros((16, 16))
    M[:8, :8] = x.a
    M[8:, 8:] = x.c
    return Spin9Element(M)


def rotation_generator() -> np.ndarray:
    """d/dt f_t at 0, the block matrix [[0, 1], [-1, 0]]."""
    J = np.zeros((16, 16))
    J[:8, 8:] = np.eye(8)
    J[8:, :8] = -np.eye(8)
    return J


def twisted_generator(i: int) -> np.ndarray:
    """d/dt f_{t;i} at 0, the block matrix [[0, R_ei], [R_ei, 0]]."""
    K = np.zeros((16, 16))
    K[:8, 8:] = _R(i)
    K[8:, :8] = _R(i)
    return K


def f_t(t: float) -> np.ndarray:
    """(u, v) -> (cos t u + sin t v, -sin t u + cos t v)."""
    c, s = np.cos(t), np.sin(t)
    I = np.eye(8)
    return np.block([[c * I, s * I], [-s * I, c * I]])


def f_ti(t: float, i: int) -> np.ndarray:
    """(u, v) -> (cos t u + sin t v e_i, sin t u e_i + cos t v)."""
    c, s = np.cos(t), np.sin(t)
    I, R = np.eye(8), _R(i)
    return np.block([[c * I, s * R], [s * R, c * I]])


def gen_spin9() -> GeneratorSet:
    s2 = gen_spin8()
    elements = [embed(x) for x in s2.elements]
    elements.append(Spin9Element(rotation_generator()))
    elements.extend(Spin9Element(twisted_generator(i)) for i in range(1, 8))
    labels = s2.labels + [("f",)] + [("f", i) for i in range(1, 8)]
    return GeneratorSet("S3", elements, labels)


def maps_lines_to_lines(f, samples: int = 8, rng=None) -> float:
    """Defect of ``f`` in mapping octonionic lines {(u, u m)} to octonionic lines.

    For each probe m the image line is identified from u = 1 and the remaining
    basis u are checked against it. Returns the largest defect found.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = 0.0
    eye = np.eye(8)
    for _ in range(samples):
        m = rng.standard_normal(8)
        pts = np.hstack([eye, oc.mul(eye, m)])  # rows (u, u m)
        img = pts @ f.T
        first, second = img[:, :8], img[:, 8:]
        if oc.norm(first[0]) < 1e-8:
            worst = max(worst, float(np.max(np.abs(first))))
            continue
        m2 = oc.mul(oc.inverse(first[0]), second[0])
        worst = max(worst, float(np.max(np.abs(oc.mul(first, m2) - second))))
    return worst


# ---------------------------------------------------------------------------
# Brackets and closure


def bracket(X, Y):
    if isinstance(X, InfTriple) and isinstance(Y, InfTriple):
        return InfTriple(X.a @ Y.a - Y.a @ X.a, X.b @ Y.b - Y.b @ X.b, X.c @ Y.c - Y.c @ X.c)
    if isinstance(X, Spin9Element) and isinstance(Y, Spin9Element):
        return Spin9Element(X.M @ Y.M - Y.M @ X.M)
    raise TypeError(f"cannot bracket {type(X).__name__} with {type(Y).__name__}")


def span_distance(G: GeneratorSet, vectors) -> np.ndarray:
    """Euclidean distance of each flattened vector to span(G)."""
    V = np.column_stack([_flat(v) for v in vectors])
    _, res = lstsq(G.matrix(), V)
    return np.atleast_1d(res)


def closure_check(G: GeneratorSet) -> float:
    """Largest distance of [X, Y] to span(G), relative to |[X, Y]|, over all pairs."""
    brackets = [bracket(x, y) for x, y in combinations(G.elements, 2)]
    norms = np.array([np.linalg.norm(_flat(b)) for b in brackets])
    dist = span_distance(G, brackets)
    if norms.max() == 0.0:
        return 0.0
    # commuting pairs give round-off sized brackets; compare those absolutely
    zero = norms <= 1e-10 * norms.max()
    rel = np.where(zero, dist, dist / np.where(zero, 1.0, norms))
    return float(np.max(rel))


# ---------------------------------------------------------------------------
# g2 and the closed-form pattern of the spin(7) first entries


def g2_subalgebra() -> list:
    """Basis of {(d, d, d)} inside span(S1): the derivations of O."""
    s1 = gen_spin7()
    diff = np.column_stack([(x.a - x.b).ravel() for x in s1.elements])
    coeffs = null_space(diff)
    basis = []
    for lam in coeffs.T:
        d = sum(l * x.a for l, x in zip(lam, s1.elements))
        basis.append(InfTriple(d, d.copy(), d.copy()))
    return basis


def derivation_defect(d) -> float:
    """max over imaginary basis pairs of |d(xy) - d(x) y - x d(y)|."""
    e = np.eye(8)[1:]
    xy = oc.mul(e[:, None, :], e[None, :, :])
    lhs = xy @ d.T
    dx = e @ d.T
    rhs = oc.mul(dx[:, None, :], e[None, :, :]) + oc.mul(e[:, None, :], dx[None, :, :])
    return float(np.max(np.linalg.norm(lhs - rhs, axis=-1)))


def pattern_spin7_first_entry(i: int, j: int) -> np.ndarray:
    """2(E_ji - E_ij) written in the relabelled basis, as a storage-coordinate matrix."""
    e = _e()
    return 2.0 * (np.outer(e[j], e[i]) - np.outer(e[i], e[j]))


def s1_pattern_report() -> list:
    """Compare each solved first entry of S1 with the closed form 2(E_ji - E_ij).

    Each record gives the pair, the sign s minimising |a - s * pattern| and the
    remaining deviation; a deviation above round-off is a genuine mismatch.
    """
    out = []
    for (i, j), x in zip(PAIRS, gen_spin7().elements):
        p = pattern_spin7_first_entry(i, j)
        devs = {s: float(np.max(np.abs(x.a - s * p))) for s in (1, -1)}
        s = min(devs, key=devs.get)
        out.append({"pair": (i, j), "sign": s, "deviation": devs[s]})
    return out


# ---------------------------------------------------------------------------
# Numerical differentiation of the one-parameter curves used to generate spin(7)


def _curve(i: int, j: int, t: float):
    e = _e()
    z = np.cos(t) * e[i] + np.sin(t) * e[j]
    return spin7_family(z) @ spin7_family(e[i])


def curve_generator_crosscheck(h: float = 1e-5) -> dict:
    """Central-difference derivatives of T(z'(t)) T(e_i) at t = 0, for every i < j.

    T(z) = (L_z R_conj(z), L_z, L_z) and z'(t) = cos t e_i + sin t e_j. The raw
    derivative is returned for inspection; its right translate back to the
    identity, D(0) gamma(0)^{-1}, is what must lie in span(S1).
    """
    s1 = gen_spin7()
    records = []
    worst = 0.0
    for i, j in PAIRS:
        plus, minus, base = _curve(i, j, h), _curve(i, j, -h), _curve(i, j, 0.0)
        D = [(p - m) / (2 * h) for p, m in zip((plus.A, plus.B, plus.C), (minus.A, minus.B, minus.C))]
        xi = InfTriple(D[0] @ base.A.T, D[1] @ base.B.T, D[2] @ base.C.T)
        analytic = _L(j) @ _L(i)
        dist = float(span_distance(s1, [xi])[0])
        worst = max(worst, dist)
        records.append(
            {
                "pair": (i, j),
                "second_entry_error": float(np.max(np.abs(D[1] - analytic))),
                "span_distance": dist,
            }
        )
    return {"h": h, "max_span_distance": worst, "pairs": records}


def one_parameter_subgroup(X: InfTriple, t: float):
    from .triality import exp_triple

    return exp_triple(t, X)


def exp_spin9(X: Spin9Element, t: float = 1.0) -> np.ndarray:
    return mat_exp(t * X.M)
