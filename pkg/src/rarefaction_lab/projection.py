"""Orthogonal splitting of a form along the sigma-divisible subspace.

``sigma = x_0^2 + ... + x_n^2`` has no real zeros and a smooth complex zero set.
The forms divisible by ``sigma**ell`` form the image of ``q -> sigma**ell * q``;
projecting onto that image and its orthogonal complement gives ``s = s0 + s_perp``
with ``s0 = sigma**ell * quotient``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .discriminant import DistanceResult, default_grid_density, sphere_grid
from .poly import (
    DimensionError,
    HomogeneousPolynomial,
    KostlanBasis,
    _index_table,
    from_monomials,
    jets,
    make_basis,
    multiply,
    power,
)


@dataclass(frozen=True)
class SigmaSection:
    poly: HomogeneousPolynomial
    k: int = 2


def build_sigma(n: int) -> SigmaSection:
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    terms = {}
    for i in range(n + 1):
        alpha = [0] * (n + 1)
        alpha[i] = 2
        terms[tuple(alpha)] = 1.0
    sigma = from_monomials(n, 2, terms)
    pts = sphere_grid(n, 64)
    if not np.allclose(sigma(pts), 1.0, rtol=0, atol=1e-12):
        raise AssertionError("sigma must equal |x|^2 on the sphere")
    return SigmaSection(poly=sigma, k=2)


@dataclass(frozen=True, eq=False)
class SubspaceMap:
    """``T_ell``: Kostlan coordinates of degree d-2*ell mapped to those of sigma**ell * q."""

    matrix: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    source: KostlanBasis
    target: KostlanBasis
    ell: int

    def __call__(self, q: HomogeneousPolynomial) -> HomogeneousPolynomial:
        return HomogeneousPolynomial(self.target, self.matrix @ q.coeffs)


def subspace_map(basis_d: KostlanBasis, sigma: SigmaSection, ell: int) -> SubspaceMap:
    if ell < 0 or basis_d.d - sigma.k * ell < 0:
        raise DimensionError(f"need 0 <= {sigma.k}*ell <= d, got ell={ell}, d={basis_d.d}")
    return _subspace_map(basis_d.n, basis_d.d, ell)


@lru_cache(maxsize=64)
def _subspace_map(n: int, d: int, ell: int) -> SubspaceMap:
    target = make_basis(n, d)
    source = make_basis(n, d - 2 * ell)
    T = np.zeros((target.N, source.N))
    table = _index_table(n, d)
    sig = _sigma_power_terms(n, ell)
    for j, beta in enumerate(source.alphas):
        for gamma, c in sig:
            i = table[tuple(int(v) for v in beta + gamma)]
            T[i, j] += c * source.weights[j] / target.weights[i]
    Q, R = np.linalg.qr(T)
    for a in (T, Q, R):
        a.setflags(write=False)
    return SubspaceMap(matrix=T, Q=Q, R=R, source=source, target=target, ell=ell)


def _sigma_power_terms(n: int, ell: int):
    """Monomial expansion of (sum x_i^2)**ell as [(exponent array, coefficient)]."""
    out = []
    for k in _index_table(n, ell):
        coeff = factorial(ell)
        for ki in k:
            coeff //= factorial(ki)
        out.append((2 * np.array(k, dtype=np.int64), float(coeff)))
    return out


def sigma_power(sigma: SigmaSection, ell: int) -> HomogeneousPolynomial:
    return power(sigma.poly, ell)


def c1_norm(s: HomogeneousPolynomial, grid_density: int | None = None,
            grad_scale: float = 1.0) -> float:
    """Grid estimate of max |s| + max |grad s| over the real locus."""
    if grid_density is None:
        grid_density = default_grid_density(s.n, s.d)
    if grid_density < 8:
        raise ValueError("grid_density must be at least 8")
    vals, tang = jets(s, sphere_grid(s.n, grid_density), grad_scale=grad_scale)
    return float(np.abs(vals).max() + np.linalg.norm(tang, axis=1).max())


@dataclass(frozen=True)
class ProjectionSplit:
    s_zero: HomogeneousPolynomial
    s_perp: HomogeneousPolynomial
    quotient: HomogeneousPolynomial
    ell: int
    c1_perp: float
    grid_density: int

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "c1_perp": self.c1_perp,
            "grid_density": self.grid_density,
            "s_zero": self.s_zero.to_json(),
            "s_perp": self.s_perp.to_json(),
            "quotient": self.quotient.to_json(),
        }


def split(s: HomogeneousPolynomial, sigma: SigmaSection, ell: int,
          grid_density: int | None = None) -> ProjectionSplit:
    T = subspace_map(s.basis, sigma, ell)
    proj = T.Q.T @ s.coeffs
    zero = T.Q @ proj
    quotient = np.linalg.solve(T.R, proj)
    perp = HomogeneousPolynomial(s.basis, s.coeffs - zero)
    if grid_density is None:
        grid_density = default_grid_density(s.n, s.d)
    return ProjectionSplit(
        s_zero=HomogeneousPolynomial(s.basis, zero),
        s_perp=perp,
        quotient=HomogeneousPolynomial(T.source, quotient),
        ell=ell,
        c1_perp=c1_norm(perp, grid_density),
        grid_density=grid_density,
    )


@dataclass(frozen=True)
class Approximation:
    criterion_holds: bool
    s_prime: HomogeneousPolynomial
    margin: float
    threshold: float
    split: ProjectionSplit


def isotopy_threshold(n: int, d: int, dist_exact: float) -> float:
    return d ** (n / 2) / (4 * np.pi ** (n / 2)) * dist_exact


def approx_pipeline(s: HomogeneousPolynomial, sigma: SigmaSection, ell: int,
                    dist: DistanceResult, parts: ProjectionSplit | None = None) -> Approximation:
    """Low-degree replacement ``s'`` and the C1 isotopy test certifying it."""
    if parts is None:
        parts = split(s, sigma, ell)
    rhs = isotopy_threshold(s.n, s.d, dist.exact)
    return Approximation(
        criterion_holds=bool(parts.c1_perp < rhs),
        s_prime=parts.quotient,
        margin=float(rhs - parts.c1_perp),
        threshold=float(rhs),
        split=parts,
    )


def check_sigma_power(sigma: SigmaSection, ell: int, q: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """``sigma**ell * q`` by direct multiplication (independent of ``T_ell``)."""
    return multiply(sigma_power(sigma, ell), q)
