import numpy as np
import pytest

from cwsphere import octonion as oc
from cwsphere import triality as tr
from cwsphere.errors import DegeneracyError, PreconditionError
from cwsphere.numkit import mat_exp, null_space, random_skew
from cwsphere.spinlie import gen_spin7, gen_spin8

E = oc.paper_basis().e
I8 = np.eye(8)


def _random_spin8_inf(rng):
    coeffs = rng.standard_normal(28)
    out = None
    for c, x in zip(coeffs, gen_spin8().elements):
        out = c * x if out is None else out + c * x
    return out


# -- verify_triple ---------------------------------------------------------


def test_identity_triple():
    assert tr.verify_triple(I8, I8, I8) == 0.0
    assert tr.identity_triple().residual() == 0.0


def test_spin7_family_e1():
    assert tr.spin7_family(E(1)).residual() < 1e-12


def test_families_random(rng):
    for z in oc.random_unit_imaginary(rng, 20):
        assert tr.spin7_family(z).residual() < 1e-12
    for w in oc.random_octonions(rng, 20):
        w /= oc.norm(w)
        assert tr.spin8_family(w).residual() < 1e-12


def test_verify_detects_wrong_triple(rng):
    R = mat_exp(random_skew(rng, 8))
    assert tr.verify_triple(R, I8, I8) > 1e-3


def test_verify_off_grid_by_bilinearity(rng):
    t = tr.spin8_family(oc.ONE * np.cos(0.3) + np.sin(0.3) * E(2))
    for x, y in zip(oc.random_octonions(rng, 100), oc.random_octonions(rng, 100)):
        lhs = oc.mul(t.A @ x, t.B @ y)
        assert np.max(np.abs(lhs - t.C @ oc.mul(x, y))) < 1e-12 * (1 + oc.norm(x) * oc.norm(y))


# -- the linear system -------------------------------------------------------


def test_kernel_dimensions():
    assert null_space(tr.inf_system_matrix(skew=True)).shape[1] == 28
    # scalar triples (sI, tI, (s+t)I) also solve the unconstrained system
    assert null_space(tr.inf_system_matrix(skew=False)).shape[1] == 30


# -- inf_lift ----------------------------------------------------------------


def test_inf_lift_zero():
    b, c = tr.inf_lift(np.zeros((8, 8)))
    assert np.max(np.abs(b)) == 0 and np.max(np.abs(c)) == 0


def test_inf_lift_left_multiplication():
    L, R = oc.left_op(E(1)), oc.right_op(E(1))
    b, c = tr.inf_lift(L)
    assert np.max(np.abs(b - R)) < 1e-10
    assert np.max(np.abs(c - (L + R))) < 1e-10


def test_inf_lift_matches_curve_derivative():
    # d/dt L_{cos t + sin t e_i} at 0, by finite differences
    h = 1e-6
    for i in range(1, 8):
        z = lambda t: np.cos(t) * oc.ONE + np.sin(t) * E(i)
        fam = [tr.spin8_family(z(s)) for s in (h, -h)]
        a = (fam[0].A - fam[1].A) / (2 * h)
        b, c = tr.inf_lift(a)
        assert np.max(np.abs(b - (fam[0].B - fam[1].B) / (2 * h))) < 1e-8
        assert np.max(np.abs(c - (fam[0].C - fam[1].C) / (2 * h))) < 1e-8


def test_inf_lift_random_off_grid(rng):
    a = random_skew(rng, 8)
    b, c = tr.inf_lift(a)
    X = tr.InfTriple(a, b, c)
    assert X.residual() <= 1e-9
    assert X.skew_defect() < 1e-12
    for x, y in zip(oc.random_octonions(rng, 100), oc.random_octonions(rng, 100)):
        lhs = oc.mul(a @ x, y) + oc.mul(x, b @ y)
        assert np.max(np.abs(lhs - c @ oc.mul(x, y))) < 1e-9


def test_inf_lift_cycles_through_other_positions(rng):
    a = random_skew(rng, 8)
    b, c = tr.inf_lift(a)
    for pos, known in ((1, b), (2, c)):
        X, nullity = tr.solve_inf_triple(known, pos)
        assert nullity == 0
        assert np.max(np.abs(X.a - a)) < 1e-9


def test_inf_lift_rejects_non_skew(rng):
    with pytest.raises(PreconditionError):
        tr.inf_lift(rng.standard_normal((8, 8)))


# -- companions --------------------------------------------------------------


def test_companions_identity():
    res = tr.companions(I8)
    assert res.nullity == 1
    np.testing.assert_allclose(res.plus.B, I8, atol=1e-12)
    np.testing.assert_allclose(res.plus.C, I8, atol=1e-12)
    np.testing.assert_allclose(res.minus.B, -I8, atol=1e-12)


def test_companions_spin7_family():
    L = oc.left_op(E(1))
    res = tr.companions(L @ oc.right_op(oc.conj(E(1))))
    assert res.residual < 1e-9
    # unique up to sign
    s = np.sign(np.sum(res.plus.B * L))
    assert np.max(np.abs(s * res.plus.B - L)) < 1e-10
    assert np.max(np.abs(s * res.plus.C - L)) < 1e-10


def test_companions_path_lift_oracle(rng):
    for _ in range(10):
        a = random_skew(rng, 8)
        b, c = tr.inf_lift(a)
        T = tr.exp_triple(1.0, tr.InfTriple(a, b, c))
        res = tr.companions(T.A)
        s = np.sign(np.sum(res.plus.B * T.B))
        assert np.max(np.abs(s * res.plus.B - T.B)) < 1e-9
        assert np.max(np.abs(s * res.plus.C - T.C)) < 1e-9


def test_companions_sign_convention(rng):
    res = tr.companions(mat_exp(random_skew(rng, 8)))
    flat = res.plus.B.ravel()
    assert flat[np.argmax(np.abs(flat))] > 0
    assert np.max(np.abs(res.plus.B.T @ res.plus.B - I8)) < 1e-9


def test_companions_rejects_non_orthogonal(rng):
    with pytest.raises(PreconditionError):
        tr.companions(2 * I8)


def test_companions_degenerate_raises(monkeypatch):
    monkeypatch.setattr(tr, "_companion_matrix", lambda A: np.zeros((512, 64)))
    with pytest.raises(DegeneracyError):
        tr.companions(I8)


# -- exp_triple and group structure -------------------------------------------


def test_exp_triple_at_zero(rng):
    X = _random_spin8_inf(rng)
    T = tr.exp_triple(0.0, X)
    for M in (T.A, T.B, T.C):
        np.testing.assert_array_equal(M, I8)


def test_exp_triple_left_multiplication_closed_form():
    L, R = oc.left_op(E(1)), oc.right_op(E(1))
    T = tr.exp_triple(np.pi / 2, tr.InfTriple(L, R, L + R))
    assert np.max(np.abs(T.A - oc.left_op(E(1)))) < 1e-12
    assert T.residual() < 1e-9


def test_exp_triple_valid_for_all_t(rng):
    X = _random_spin8_inf(rng) * 0.3
    for t in np.linspace(-np.pi, np.pi, 9):
        assert tr.exp_triple(t, X).residual() <= 1e-9


def test_exp_triple_inverse(rng):
    X = _random_spin8_inf(rng)
    t = rng.uniform(-np.pi, np.pi)
    P = tr.exp_triple(t, X) @ tr.exp_triple(-t, X)
    for M in (P.A, P.B, P.C):
        assert np.max(np.abs(M - I8)) < 1e-10


def test_closure_under_products(rng):
    gens = gen_spin8().elements
    for _ in range(20):
        P = tr.identity_triple()
        for k in rng.integers(0, 28, size=5):
            P = P @ tr.exp_triple(rng.uniform(-np.pi, np.pi), gens[k])
        assert P.residual() <= 1e-9


def test_sign_ambiguity(rng):
    T = tr.exp_triple(1.0, _random_spin8_inf(rng))
    assert T.residual() < 1e-9
    assert (-T).residual() < 1e-9
    assert tr.verify_triple(T.A, -T.B, T.C) > 0.1


def test_spin7_condition_equivalence(rng):
    s1 = gen_spin7().elements
    for _ in range(20):
        c = rng.standard_normal(21)
        X = sum((ci * x for ci, x in zip(c[1:], s1[1:])), c[0] * s1[0])
        T = tr.exp_triple(1.0, X)
        assert tr.in_spin7(T)
        assert np.max(np.abs(T.B - T.C)) <= 1e-9
    for _ in range(20):
        T = tr.exp_triple(1.0, _random_spin8_inf(rng))
        assert not tr.in_spin7(T)
        assert np.max(np.abs(T.B - T.C)) > 1e-9


def test_triple_inverse(rng):
    T = tr.exp_triple(0.7, _random_spin8_inf(rng))
    P = T @ T.inverse()
    assert np.max(np.abs(P.A - I8)) < 1e-12


def test_triality_json_roundtrip(rng):
    T = tr.exp_triple(0.4, _random_spin8_inf(rng))
    back = tr.TrialityTriple.from_json(T.to_json())
    for k in "ABC":
        np.testing.assert_array_equal(getattr(back, k), getattr(T, k))
    assert set(T.to_dict()) == {"A", "B", "C"}


def test_inf_triple_flat_roundtrip(rng):
    X = _random_spin8_inf(rng)
    Y = tr.InfTriple.from_flat(X.flat())
    np.testing.assert_array_equal(Y.a, X.a)
    np.testing.assert_array_equal(Y.c, X.c)
    assert ((X - X) * 3).residual() == 0.0
