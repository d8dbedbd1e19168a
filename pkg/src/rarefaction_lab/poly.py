"""Real homogeneous polynomials in Kostlan-orthonormal coordinates.

A degree-``d`` form in ``n + 1`` variables is stored as its coordinate vector
``a`` over the weighted monomials ``w_alpha * x**alpha``, with

    w_alpha = sqrt((n + d)! / (n! * alpha_0! * ... * alpha_n!))

so that the L2 norm of the section equals ``|a|_2``. Exponents are laid out in
graded-lexicographic order, highest power of ``x_0`` first.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, lgamma

import numpy as np

MAX_DIMENSION = 5000
BASIS_TAG = "kostlan-orthonormal-paper"
ORDER_TAG = "grlex"


class DimensionError(ValueError):
    """Requested polynomial space is too large or ill-formed."""


def exponents(n: int, d: int) -> np.ndarray:
    """All exponent vectors of total degree ``d`` in ``n + 1`` variables, grlex order."""
    return _exponents(n, d).copy()


@lru_cache(maxsize=None)
def _exponents(n: int, d: int) -> np.ndarray:
    rows = []
    # lexicographically descending compositions of d into n + 1 parts
    for head in range(d, -1, -1):
        if n == 0:
            if head == d:
                rows.append((d,))
            continue
        for tail in _exponents(n - 1, d - head):
            rows.append((head, *tail))
    out = np.array(rows, dtype=np.int64).reshape(-1, n + 1)
    out.setflags(write=False)
    return out


def dimension(n: int, d: int) -> int:
    return comb(n + d, n)


@dataclass(frozen=True, eq=False)
class KostlanBasis:
    n: int
    d: int
    alphas: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.weights)

    def index(self, alpha) -> int:
        """Position of an exponent vector in the coefficient layout."""
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.n + 1 or sum(alpha) != self.d:
            raise KeyError(alpha)
        return _index_table(self.n, self.d)[alpha]

    def weight(self, alpha) -> float:
        return float(self.weights[self.index(alpha)])

    def __eq__(self, other):
        return isinstance(other, KostlanBasis) and (self.n, self.d) == (other.n, other.d)

    def __hash__(self):
        return hash((self.n, self.d))


@lru_cache(maxsize=None)
def _index_table(n: int, d: int) -> dict:
    return {tuple(int(v) for v in row): i for i, row in enumerate(_exponents(n, d))}


def log_weights(n: int, d: int) -> np.ndarray:
    alphas = _exponents(n, d)
    lg = lgamma(n + d + 1) - lgamma(n + 1)
    fact = np.array([sum(lgamma(a + 1) for a in row) for row in alphas])
    return 0.5 * (lg - fact)


def make_basis(n: int, d: int, max_dimension: int = MAX_DIMENSION) -> KostlanBasis:
    if n < 1 or d < 0:
        raise DimensionError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    if dimension(n, d) > max_dimension:
        raise DimensionError(
            f"dimension binomial({n + d}, {n}) = {dimension(n, d)} exceeds cap {max_dimension}"
        )
    return _make_basis(n, d)


@lru_cache(maxsize=None)
def _make_basis(n: int, d: int) -> KostlanBasis:
    w = np.exp(log_weights(n, d))
    w.setflags(write=False)
    return KostlanBasis(n=n, d=d, alphas=_exponents(n, d), weights=w)


@dataclass(frozen=True, eq=False)
class HomogeneousPolynomial:
    basis: KostlanBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (self.basis.N,):
            raise DimensionError(f"expected {self.basis.N} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def d(self) -> int:
        return self.basis.d

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            return multiply(self, other)
        return HomogeneousPolynomial(self.basis, self.coeffs * float(other))

    __rmul__ = __mul__

    def __add__(self, other: HomogeneousPolynomial) -> HomogeneousPolynomial:
        _check_same_space(self, other)
        return HomogeneousPolynomial(self.basis, self.coeffs + other.coeffs)

    def __sub__(self, other: HomogeneousPolynomial) -> HomogeneousPolynomial:
        _check_same_space(self, other)
        return HomogeneousPolynomial(self.basis, self.coeffs - other.coeffs)

    def monomial_coeffs(self) -> np.ndarray:
        """Coefficients in the plain monomial basis ``x**alpha`` (same layout)."""
        return self.coeffs * self.basis.weights

    def __call__(self, x) -> np.ndarray | float:
        return evaluate(self, x)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "basis": BASIS_TAG,
            "order": ORDER_TAG,
            "coeffs": [float(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj) -> HomogeneousPolynomial:
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("basis", BASIS_TAG) != BASIS_TAG or obj.get("order", ORDER_TAG) != ORDER_TAG:
            raise ValueError(f"unsupported basis/order {obj.get('basis')!r}/{obj.get('order')!r}")
        return cls(make_basis(int(obj["n"]), int(obj["d"])), np.array(obj["coeffs"], dtype=float))


def _check_same_space(p, q):
    if p.basis != q.basis:
        raise DimensionError(f"space mismatch: (n={p.n}, d={p.d}) vs (n={q.n}, d={q.d})")


def from_monomials(n: int, d: int, terms: dict) -> HomogeneousPolynomial:
    """Build a form from ``{alpha: monomial coefficient}``."""
    basis = make_basis(n, d)
    mono = np.zeros(basis.N)
    for alpha, c in terms.items():
        mono[basis.index(alpha)] += c
    return HomogeneousPolynomial(basis, mono / basis.weights)


def from_monomial_array(basis: KostlanBasis, mono: np.ndarray) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(basis, np.asarray(mono, dtype=float) / basis.weights)


# ---------------------------------------------------------------- randomness


def rng_stream(master_seed: int, *stream_id: int) -> np.random.Generator:
    """Independent generator for ``(master_seed, stream_id...)``.

    Streams are derived by SeedSequence spawn keys, so a stream's draws do not
    depend on which other streams exist or in what order they are consumed.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed) & (2**64 - 1),
                                spawn_key=tuple(int(s) for s in stream_id))
    return np.random.Generator(np.random.PCG64(ss))


def sample_gaussian(basis: KostlanBasis, rng: np.random.Generator) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(basis, rng.standard_normal(basis.N))


# ---------------------------------------------------------------- evaluation


def _monomials(alphas: np.ndarray, X: np.ndarray, d: int) -> np.ndarray:
    """``X**alpha`` for points X (P, n+1) and every alpha -> (P, N)."""
    P, m = X.shape
    powers = X[:, :, None] ** np.arange(d + 1)[None, None, :]  # (P, m, d+1)
    out = np.ones((P, len(alphas)))
    for k in range(m):
        out *= powers[:, k, alphas[:, k]]
    return out


def basis_values(basis: KostlanBasis, X: np.ndarray) -> np.ndarray:
    """Values of every orthonormal basis element at points X -> (P, N)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return _monomials(basis.alphas, X, basis.d) * basis.weights


def basis_gradients(basis: KostlanBasis, X: np.ndarray) -> np.ndarray:
    """Euclidean gradients of every basis element at X -> (P, n+1, N)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    P, m = X.shape
    alphas = basis.alphas
    out = np.empty((P, m, basis.N))
    if basis.d == 0:
        out[:] = 0.0
        return out
    for k in range(m):
        lowered = alphas.copy()
        lowered[:, k] = np.maximum(lowered[:, k] - 1, 0)
        out[:, k, :] = _monomials(lowered, X, basis.d) * (alphas[:, k] * basis.weights)
    return out


def evaluate(p: HomogeneousPolynomial, x) -> np.ndarray | float:
    X = np.asarray(x, dtype=float)
    vals = basis_values(p.basis, X.reshape(-1, p.n + 1)) @ p.coeffs
    return float(vals[0]) if X.ndim == 1 else vals


def tangent_frames(X: np.ndarray) -> np.ndarray:
    """Orthonormal frames of the tangent spaces x^perp, one per row of X -> (P, n, n+1)."""
    X = np.atleast_2d(X)
    P, m = X.shape
    if m == 2:
        return np.stack([-X[:, 1], X[:, 0]], axis=-1)[:, None, :]
    # Householder reflection sending e_0 to x; its remaining columns span x^perp
    frames = np.empty((P, m - 1, m))
    s = np.where(X[:, 0] >= 0, 1.0, -1.0)
    v = X.copy()
    v[:, 0] += s
    vv = np.einsum("pi,pi->p", v, v)
    for j in range(1, m):
        col = -2.0 * v * v[:, j:j + 1] / vv[:, None]
        col[:, j] += 1.0
        frames[:, j - 1, :] = col
    return frames


@dataclass(frozen=True)
class SphereEvalJet:
    point: np.ndarray
    value: float
    tangential_gradient: np.ndarray


def _check_unit(X: np.ndarray, tol: float = 1e-9):
    norms = np.linalg.norm(np.atleast_2d(X), axis=-1)
    if np.any(np.abs(norms - 1.0) > tol):
        raise ValueError(f"points must lie on the unit sphere (|x| = {norms.min():.3g}..{norms.max():.3g})")


def jets(p: HomogeneousPolynomial, X: np.ndarray, frames: np.ndarray | None = None,
         grad_scale: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Values (P,) and tangential gradients (P, n) at unit points X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    _check_unit(X)
    if frames is None:
        frames = tangent_frames(X)
    vals = basis_values(p.basis, X) @ p.coeffs
    grads = basis_gradients(p.basis, X) @ p.coeffs  # (P, n+1)
    tang = np.einsum("pjk,pk->pj", frames, grads) * grad_scale
    return vals, tang


def eval_jet(p: HomogeneousPolynomial, x, frame: np.ndarray | None = None,
             grad_scale: float = 1.0) -> SphereEvalJet:
    x = np.asarray(x, dtype=float)
    vals, tang = jets(p, x[None, :], None if frame is None else frame[None], grad_scale)
    return SphereEvalJet(point=x, value=float(vals[0]), tangential_gradient=tang[0])


# ---------------------------------------------------------------- arithmetic


def multiply(p: HomogeneousPolynomial, q: HomogeneousPolynomial) -> HomogeneousPolynomial:
    if p.n != q.n:
        raise DimensionError(f"cannot multiply forms in {p.n + 1} and {q.n + 1} variables")
    n, d = p.n, p.d + q.d
    target = make_basis(n, d)
    out = np.zeros(target.N)
    idx = _product_index(n, p.d, q.d)
    np.add.at(out, idx.ravel(), np.outer(p.monomial_coeffs(), q.monomial_coeffs()).ravel())
    return from_monomial_array(target, out)


@lru_cache(maxsize=None)
def _product_index(n: int, d1: int, d2: int) -> np.ndarray:
    table = _index_table(n, d1 + d2)
    a1, a2 = _exponents(n, d1), _exponents(n, d2)
    idx = np.empty((len(a1), len(a2)), dtype=np.int64)
    for i, j in itertools.product(range(len(a1)), range(len(a2))):
        idx[i, j] = table[tuple(int(v) for v in a1[i] + a2[j])]
    idx.setflags(write=False)
    return idx


def power(p: HomogeneousPolynomial, k: int) -> HomogeneousPolynomial:
    out = HomogeneousPolynomial(make_basis(p.n, 0), np.ones(1))
    for _ in range(k):
        out = multiply(out, p)
    return out
