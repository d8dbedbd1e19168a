import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rarefaction_lab.discriminant import distance_to_discriminant, sphere_grid
from rarefaction_lab.poly import (
    DimensionError,
    HomogeneousPolynomial,
    from_monomials,
    make_basis,
    multiply,
    rng_stream,
    sample_gaussian,
)
from rarefaction_lab.projection import (
    approx_pipeline,
    build_sigma,
    c1_norm,
    check_sigma_power,
    isotopy_threshold,
    sigma_power,
    split,
    subspace_map,
)


def random_form(n, d, seed=0):
    return sample_gaussian(make_basis(n, d), rng_stream(seed, n, d))


def assert_split_invariants(s, parts, sigma, tol=1e-9):
    a = s.norm()
    assert np.linalg.norm(parts.s_zero.coeffs + parts.s_perp.coeffs - s.coeffs) <= tol * a
    assert abs(parts.s_zero.coeffs @ parts.s_perp.coeffs) <= tol * a * a
    rebuilt = check_sigma_power(sigma, parts.ell, parts.quotient)
    assert np.linalg.norm(rebuilt.coeffs - parts.s_zero.coeffs) <= tol * max(a, 1e-300)


@pytest.mark.parametrize("n", [1, 2])
def test_sigma_is_squared_norm(n):
    sigma = build_sigma(n)
    X = sphere_grid(n, 200)
    assert np.allclose(sigma.poly(X), 1.0, atol=1e-12)
    x = np.random.default_rng(0).normal(size=(10, n + 1))
    assert np.allclose(sigma.poly(x), (x * x).sum(axis=1))


def test_sigma_gradient_vanishes_only_at_origin():
    # the complex gradient is 2z, so on |z| = 1 its norm is exactly 2
    sigma = build_sigma(2)
    z = np.random.default_rng(1).normal(size=(20, 3)) + 1j * np.random.default_rng(2).normal(size=(20, 3))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    assert np.allclose(np.linalg.norm(2 * z, axis=1), 2.0)
    assert sigma.k == 2


def test_identity_when_ell_is_zero():
    T = subspace_map(make_basis(2, 5), build_sigma(2), 0)
    assert np.allclose(T.matrix, np.eye(T.target.N))


def test_dimension_error():
    with pytest.raises(DimensionError):
        subspace_map(make_basis(1, 3), build_sigma(1), 2)


@pytest.mark.parametrize("n,d,ell", [(1, 20, 3), (1, 7, 1), (2, 12, 3), (2, 9, 2), (2, 20, 1)])
def test_subspace_map_is_injective(n, d, ell):
    T = subspace_map(make_basis(n, d), build_sigma(n), ell)
    sv = np.linalg.svd(T.matrix, compute_uv=False)
    assert T.matrix.shape == (make_basis(n, d).N, make_basis(n, d - 2 * ell).N)
    assert sv.min() > 1e-10 * sv.max()


@pytest.mark.parametrize("n", [1, 2])
def test_columns_vanish_on_complex_quadric(n):
    d, ell = 8, 2
    T = subspace_map(make_basis(n, d), build_sigma(n), ell)
    rng = np.random.default_rng(3)
    # points with sum z_i^2 = 0: z = u + i v with |u| = |v|, u . v = 0
    pts = []
    for _ in range(50):
        u = rng.normal(size=n + 1)
        v = rng.normal(size=n + 1)
        v -= (v @ u) / (u @ u) * u
        v *= np.linalg.norm(u) / np.linalg.norm(v)
        pts.append(u + 1j * v)
    Z = np.array(pts)
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    b = T.target
    vals = np.prod(Z[:, None, :] ** b.alphas[None], axis=2) * b.weights  # (P, N)
    assert np.abs(vals @ T.matrix).max() < 1e-8 * np.abs(T.matrix).max() * b.weights.max()


def test_matrix_matches_direct_multiplication():
    sigma = build_sigma(2)
    q = random_form(2, 4, 5)
    T = subspace_map(make_basis(2, 8), sigma, 2)
    assert np.allclose(T(q).coeffs, check_sigma_power(sigma, 2, q).coeffs, atol=1e-10)


def test_nested_images():
    sigma = build_sigma(1)
    b = make_basis(1, 12)
    T1, T2 = subspace_map(b, sigma, 1), subspace_map(b, sigma, 2)
    resid = T2.matrix - T1.Q @ (T1.Q.T @ T2.matrix)
    assert np.abs(resid).max() <= 1e-9 * np.abs(T2.matrix).max()


@pytest.mark.parametrize("n,d,ell", [(1, 10, 1), (1, 20, 2), (2, 8, 1), (2, 12, 2)])
def test_split_invariants(n, d, ell):
    sigma = build_sigma(n)
    for i in range(5):
        s = random_form(n, d, i)
        assert_split_invariants(s, split(s, sigma, ell), sigma)


def test_divisible_form_has_no_perp_part():
    sigma = build_sigma(1)
    q = random_form(1, 8, 2)
    s = multiply(sigma_power(sigma, 1), q)
    parts = split(s, sigma, 1)
    assert parts.s_perp.norm() <= 1e-9 * s.norm()
    assert np.allclose(parts.quotient.coeffs, q.coeffs, atol=1e-9)
    assert parts.c1_perp < 1e-8


def test_orthogonal_form_has_no_zero_part():
    sigma = build_sigma(2)
    s = random_form(2, 6, 9)
    perp = split(s, sigma, 1).s_perp
    assert split(perp, sigma, 1).s_zero.norm() <= 1e-9 * perp.norm()


@given(st.integers(1, 2), st.integers(2, 10), st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_split_is_idempotent(n, d, seed):
    sigma = build_sigma(n)
    s = random_form(n, d, seed)
    zero = split(s, sigma, 1).s_zero
    assert split(zero, sigma, 1).s_perp.norm() <= 1e-9 * max(s.norm(), 1.0)


def test_c1_norm_of_pole_monomial():
    b = make_basis(1, 6)
    c = np.zeros(b.N)
    c[0] = 1.0
    assert c1_norm(HomogeneousPolynomial(b, c)) >= b.weights[0] * (1 - 1e-3)


@given(st.floats(-5, 5).filter(lambda v: abs(v) > 1e-3), st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_c1_norm_is_homogeneous(lam, seed):
    s = random_form(1, 7, seed)
    assert c1_norm(lam * s) == pytest.approx(abs(lam) * c1_norm(s), rel=1e-12)


def test_c1_norm_grid_convergence():
    for i in range(50):
        s = random_form(1, 4 + (i % 17), i)
        coarse = c1_norm(s)
        fine = c1_norm(s, 2 * 64 * s.d)
        assert abs(fine - coarse) <= 0.02 * fine


def test_pipeline_controls():
    sigma = build_sigma(1)
    q = from_monomials(1, 2, {(2, 0): 1.0, (0, 2): -2.0})
    s = multiply(sigma_power(sigma, 1), q)
    dist = distance_to_discriminant(s)
    res = approx_pipeline(s, sigma, 1, dist)
    assert dist.exact > 0 and res.criterion_holds
    assert res.margin == pytest.approx(isotopy_threshold(1, 4, dist.exact), rel=1e-6)

    # (x0 - x1)^2 (x0^2 + 2 x1^2) is singular, so the right-hand side is zero
    bad = from_monomials(1, 4, {(4, 0): 1, (3, 1): -2, (2, 2): 3, (1, 3): -4, (0, 4): 2})
    res = approx_pipeline(bad, sigma, 1, distance_to_discriminant(bad))
    assert res.split.c1_perp > 0 and not res.criterion_holds


def test_ell_zero_returns_the_form_itself():
    sigma = build_sigma(2)
    s = random_form(2, 4, 1)
    res = approx_pipeline(s, sigma, 0, distance_to_discriminant(s))
    assert np.allclose(res.s_prime.coeffs, s.coeffs)
    assert res.criterion_holds and res.margin > 0


def test_criterion_is_scale_invariant():
    sigma = build_sigma(1)
    s = random_form(1, 16, 4)
    a = approx_pipeline(s, sigma, 1, distance_to_discriminant(s))
    b = approx_pipeline(3 * s, sigma, 1, distance_to_discriminant(3 * s))
    assert a.criterion_holds == b.criterion_holds
    assert b.margin == pytest.approx(3 * a.margin, rel=1e-6, abs=1e-9)


def test_split_json():
    s = random_form(1, 6, 2)
    obj = split(s, build_sigma(1), 1).to_json()
    assert obj["ell"] == 1 and obj["quotient"]["d"] == 4 and obj["s_perp"]["d"] == 6
