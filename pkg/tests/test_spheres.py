import json

import numpy as np
import pytest

from cwsphere import octonion as oc
from cwsphere import spheres as sp
from cwsphere.caselab import spin7_line_element
from cwsphere.errors import ConfigurationError, PreconditionError
from cwsphere.numkit import rank_tol
from cwsphere.spinlie import embed, g2_subalgebra
from cwsphere.triality import InfTriple

E = oc.paper_basis().e

# kind, m, ambient dim, dim of G
CASES = [
    ("SO", 2, 3, 3),
    ("SO", 4, 5, 10),
    ("U", 1, 4, 4),
    ("U", 2, 6, 9),
    ("SU", 1, 4, 3),
    ("SU", 2, 6, 8),
    ("Sp", 1, 8, 10),
    ("SpU1", 1, 8, 11),
    ("SpSp1", 1, 8, 13),
    ("Sp", 2, 12, 21),
    ("G2", None, 7, 14),
    ("Spin7", None, 8, 21),
    ("Spin9", None, 16, 36),
]


@pytest.fixture(scope="module")
def models():
    return {(k, m): sp.make_model(k, m) for k, m, _, _ in CASES}


@pytest.mark.parametrize("kind,m,N,d", CASES)
def test_model_shape_and_invariants(models, kind, m, N, d):
    M = models[kind, m]
    assert M.ambient_dim == N and M.dim == d
    assert abs(np.linalg.norm(M.base_point) - 1) < 1e-15
    for B in M.lie_basis:
        assert np.max(np.abs(B + B.T)) < 1e-12
    assert rank_tol(list(M.lie_basis.reshape(d, -1))) == d
    # transitive: pr is onto the tangent space
    assert rank_tol(list(M.lie_basis @ M.base_point)) == N - 1


@pytest.mark.parametrize("kind,m", [("Florp", 1), ("U", 0), ("U", 1.5), ("Sp", -2), ("Spin7", 3), ("G2", 1)])
def test_invalid_configuration(kind, m):
    with pytest.raises(ConfigurationError):
        sp.make_model(kind, m)


def test_default_size_parameter():
    assert sp.make_model("U").m == 1


def test_base_point_conventions(models):
    np.testing.assert_array_equal(models["U", 2].base_point, np.eye(6)[4])
    np.testing.assert_array_equal(models["Sp", 1].base_point, np.eye(8)[4])
    np.testing.assert_array_equal(models["Spin7", None].base_point, oc.ONE)
    np.testing.assert_array_equal(models["Spin9", None].base_point, np.eye(16)[0])


def test_complex_realification_is_homomorphism(rng):
    Z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    W = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(sp.complex_to_real(Z @ W), sp.complex_to_real(Z) @ sp.complex_to_real(W), atol=1e-12)


def test_quaternion_left_right_commute(rng):
    p, q = rng.standard_normal(4), rng.standard_normal(4)
    L, R = sp.quaternion_left(p), sp.quaternion_right(q)
    np.testing.assert_allclose(L @ R, R @ L, atol=1e-14)
    np.testing.assert_allclose(L @ q, oc.qmul(p, q), atol=1e-14)
    np.testing.assert_allclose(R @ p, oc.qmul(p, q), atol=1e-14)


# -- pr and killing values -----------------------------------------------------


def test_spin7_pr_of_first_generator(models):
    M = models["Spin7", None]
    X = oc.left_op(E(1)) @ oc.left_op(E(2))
    np.testing.assert_allclose(M.pr(X), E(7), atol=1e-15)


def test_spin9_pr(models):
    M = models["Spin9", None]
    L, R = oc.left_op(E(1)), oc.right_op(E(1))
    X = embed(InfTriple(L, R, L + R)).M
    want = np.concatenate([E(1), np.zeros(8)])
    np.testing.assert_allclose(M.pr(X), want, atol=1e-15)
    np.testing.assert_allclose(sp.killing_value(M, X, M.base_point), want, atol=1e-15)


def test_hopf_field(models, rng):
    M = models["U", 1]
    X = sp.complex_to_real(1j * np.eye(2))
    for p in rng.standard_normal((50, 4)):
        p /= np.linalg.norm(p)
        v = sp.killing_value(M, X, p)
        assert abs(np.linalg.norm(v) - 1) < 1e-12
        assert abs(v @ p) < 1e-12


def test_killing_value_zero_and_tangent(models, rng):
    for M in models.values():
        p = rng.standard_normal(M.ambient_dim)
        p /= np.linalg.norm(p)
        assert np.all(sp.killing_value(M, np.zeros_like(M.lie_basis[0]), p) == 0)
        assert abs(sp.killing_value(M, M.random_element(rng), p) @ p) < 1e-10


def test_killing_value_off_sphere(models):
    M = models["U", 1]
    with pytest.raises(PreconditionError):
        sp.killing_value(M, M.lie_basis[0], np.ones(4))


@pytest.mark.parametrize("key", [("U", 1), ("U", 2), ("Spin9", None), ("SpSp1", 1), ("G2", None)])
def test_pullback_identity(models, rng, key):
    M = models[key]
    X = M.random_element(rng)
    assert sp.pullback_identity_check(M, X, np.eye(M.ambient_dim)) == 0.0
    for _ in range(5):
        g = sp.random_group_element(M, rng)
        assert sp.pullback_identity_check(M, X, g) < 1e-10


def test_group_elements_orthogonal(models, rng):
    for M in models.values():
        g = sp.random_group_element(M, rng)
        assert np.max(np.abs(g.T @ g - np.eye(M.ambient_dim))) < 1e-12


def test_coefficients_roundtrip(models, rng):
    M = models["Sp", 1]
    c = rng.standard_normal(M.dim)
    np.testing.assert_allclose(M.coefficients(M.element(c)), c, atol=1e-12)


def test_tangent_basis(models):
    M = models["Spin9", None]
    T = M.tangent_basis()
    assert T.shape == (16, 15)
    np.testing.assert_allclose(T.T @ T, np.eye(15), atol=1e-12)
    assert np.max(np.abs(T.T @ M.base_point)) < 1e-12


# -- orbit sampling --------------------------------------------------------------


def test_central_orbit_is_a_point(models):
    M = models["U", 2]
    X = sp.complex_to_real(1j * np.eye(3))
    S = sp.sample_orbit(M, X, 50, seed=3)
    assert np.max(np.abs(S.points - M.pr(X))) < 1e-10
    assert np.max(np.abs(np.linalg.norm(S.points, axis=1) - 1)) < 1e-10


def test_spsp1_factor_orbit_round(models):
    M = models["SpSp1", 1]
    X = M.lie_basis[-1]  # right multiplication by k
    S = sp.sample_orbit(M, X, 100, seed=4)
    norms = np.linalg.norm(S.points, axis=1)
    assert np.max(np.abs(norms - np.linalg.norm(M.pr(X)))) < 1e-10


def test_u2_orbit_tangent(models):
    M = models["U", 1]
    X = sp.complex_to_real(np.diag([1j, -1j]))
    S = sp.sample_orbit(M, X, 200, seed=5)
    assert np.max(np.abs(S.points @ M.base_point)) < 1e-10
    # a genuine surface, not a point or curve
    centred = S.points - S.points.mean(axis=0)
    assert np.linalg.matrix_rank(centred, tol=1e-6) == 3


def test_sample_orbit_deterministic(models, rng):
    M = models["Spin7", None]
    X = M.random_element(rng)
    a, b = sp.sample_orbit(M, X, 10, seed=11), sp.sample_orbit(M, X, 10, seed=11)
    np.testing.assert_array_equal(a.points, b.points)
    c = sp.sample_orbit(M, X, 10, seed=12)
    assert np.max(np.abs(a.points - c.points)) > 1e-6


def test_sample_orbit_needs_points(models):
    with pytest.raises(ValueError):
        sp.sample_orbit(models["U", 1], models["U", 1].lie_basis[0], 0, seed=0)


def test_tangency_every_model(models, rng):
    for M in models.values():
        S = sp.sample_orbit(M, M.random_element(rng), 20, seed=int(rng.integers(1 << 30)))
        assert np.max(np.abs(S.points @ M.base_point)) < 1e-10


def test_adjoint_is_an_action(models, rng):
    for M in models.values():
        X = M.random_element(rng)
        g1, g2 = sp.random_group_element(M, rng), sp.random_group_element(M, rng)
        lhs = M.pr(sp.adjoint(g1 @ g2, X))
        rhs = M.pr(sp.adjoint(g1, sp.adjoint(g2, X)))
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_g2_in_spin7_isotropy(models):
    M = models["Spin7", None]
    for d in g2_subalgebra():
        assert np.max(np.abs(sp.killing_value(M, d.b, M.base_point))) < 1e-12


def test_orbit_sample_json(models, rng):
    M = models["U", 1]
    S = sp.sample_orbit(M, M.random_element(rng), 5, seed=9)
    d = json.loads(S.to_json())
    assert set(d) == {"kind", "X", "seed", "points"}
    back = sp.OrbitSample.from_json(S.to_json())
    assert back.kind == "U" and back.seed == 9
    np.testing.assert_array_equal(back.points, S.points)
    np.testing.assert_array_equal(back.X, S.X)


# -- find_conjugation ------------------------------------------------------------


def test_conjugation_trivial(models, rng):
    M = models["Spin9", None]
    X = M.random_element(rng)
    r = sp.find_conjugation(M, X, M.pr(X))
    assert r.success and r.distance == 0.0 and r.evaluations == 1
    np.testing.assert_array_equal(r.g, np.eye(16))


def test_conjugation_spin7_sign_change(models):
    M = models["Spin7", None]
    X = spin7_line_element(1.0, 0.5, 0.25).b
    target = (-1 + 0.5 + 0.25) * E(7)
    r = sp.find_conjugation(M, X, target, tol=1e-6, seed=1)
    assert r.success and r.distance < 1e-6
    np.testing.assert_allclose(M.pr(sp.adjoint(r.g, X)), target, atol=1e-6)
    assert np.max(np.abs(r.g.T @ r.g - np.eye(8))) < 1e-10


def test_conjugation_g2_zero(models, rng):
    M = models["G2", None]
    for _ in range(3):
        X = M.random_element(rng)
        r = sp.find_conjugation(M, X, np.zeros(7), tol=1e-6, seed=int(rng.integers(1 << 30)))
        assert r.success
        assert np.linalg.norm(X @ (r.g.T @ M.base_point)) < 1e-6


def test_conjugation_budget_exhausted(models, rng):
    M = models["Spin7", None]
    X = spin7_line_element(1.0, 0.5, 0.25).b
    r = sp.find_conjugation(M, X, 5 * E(7), budget=3)
    assert not r.success
    assert r.evaluations == 3
    assert np.isfinite(r.distance)


def test_conjugation_unreachable_target_reports_best(models):
    M = models["Spin7", None]
    X = spin7_line_element(1.0, 0.0, 0.0).b
    r = sp.find_conjugation(M, X, 2 * E(7), restarts=2, budget=5000)
    assert not r.success
    # the orbit is the unit sphere, so the best distance is 1
    assert abs(r.distance - 1.0) < 1e-6
