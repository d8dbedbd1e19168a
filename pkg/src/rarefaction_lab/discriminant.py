"""Distance from a form to the real discriminant.

The distance to the linear space of forms singular at a fixed point ``x`` is
``sqrt(a^T M^T (M M^T)^{-1} M a)``, where the rows of ``M`` are the basis values
and tangential derivatives at ``x``. Minimizing over ``x`` in real projective
space gives the distance to the discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import HomogeneousPolynomial, KostlanBasis, basis_gradients, basis_values, tangent_frames

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
REFINE_ITERS = 40


class GramDegeneracyError(ArithmeticError):
    """Cholesky factorization of the jet Gram matrix failed."""


@dataclass(frozen=True)
class JetFrame:
    point: np.ndarray
    M: np.ndarray
    A: np.ndarray


def jet_matrices(basis: KostlanBasis, X: np.ndarray, grad_scale: float = 1.0) -> np.ndarray:
    """Stack of M matrices (P, n+1, N) at unit points X."""
    X = np.atleast_2d(X)
    vals = basis_values(basis, X)
    grads = basis_gradients(basis, X)
    tang = np.einsum("pjk,pkN->pjN", tangent_frames(X), grads) * grad_scale
    return np.concatenate([vals[:, None, :], tang], axis=1)


def jet_frame(basis: KostlanBasis, x, grad_scale: float = 1.0) -> JetFrame:
    x = np.asarray(x, dtype=float)
    M = jet_matrices(basis, x[None, :], grad_scale)[0]
    return JetFrame(point=x, M=M, A=M @ M.T)


def _point_distances(s: HomogeneousPolynomial, X: np.ndarray, grad_scale: float = 1.0):
    """Point distances at every row of X."""
    M = jet_matrices(s.basis, X, grad_scale)
    A = M @ np.swapaxes(M, 1, 2)
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise GramDegeneracyError(str(exc)) from exc
    y = np.linalg.solve(L, (M @ s.coeffs)[..., None])[..., 0]
    return np.sqrt(np.einsum("pj,pj->p", y, y))


def point_distance(s: HomogeneousPolynomial, x, grad_scale: float = 1.0) -> float:
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise ValueError("x must be a unit vector")
    return float(_point_distances(s, x[None, :], grad_scale)[0])


def _asymptotic_terms(s: HomogeneousPolynomial, X: np.ndarray, grad_scale: float) -> np.ndarray:
    n, d = s.n, s.d
    vals = basis_values(s.basis, X) @ s.coeffs
    grads = basis_gradients(s.basis, X) @ s.coeffs
    tang = np.einsum("pjk,pk->pj", tangent_frames(X), grads) * grad_scale
    g2 = np.einsum("pj,pj->p", tang, tang)
    return np.pi ** (n / 2) * np.sqrt(vals**2 / d**n + g2 / d ** (n + 1))


def default_grid_density(n: int, d: int) -> int:
    return 64 * d if n == 1 else 16 * d * d


def sphere_grid(n: int, density: int) -> np.ndarray:
    """Quasi-uniform points on the sphere, one per antipodal pair."""
    if n == 1:
        theta = np.pi * (np.arange(density) + 0.5) / density
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    if n == 2:
        total = 2 * density
        i = np.arange(total)
        z = 1.0 - (2 * i + 1) / total
        r = np.sqrt(1.0 - z * z)
        phi = i * np.pi * (3.0 - np.sqrt(5.0))
        pts = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
        return pts[z > 0]
    raise ValueError(f"sphere grids are implemented for n in (1, 2), got {n}")


def grid_spacing(n: int, density: int) -> float:
    return np.pi / density if n == 1 else np.sqrt(2 * np.pi / density)


@dataclass(frozen=True)
class DistanceResult:
    exact: float
    asymptotic: float
    argmin_point: np.ndarray
    grid_density: int
    refined: bool
    gram_condition: float

    def to_json(self) -> dict:
        return {
            "exact": float(self.exact),
            "asymptotic": float(self.asymptotic),
            "argmin_point": [float(v) for v in self.argmin_point],
            "grid_density": int(self.grid_density),
            "gram_condition": float(self.gram_condition),
            "refined": bool(self.refined),
        }


def _chart(center: np.ndarray, frame: np.ndarray, coords: np.ndarray) -> np.ndarray:
    y = center + coords @ frame
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


def _golden_min(f, lo: float, hi: float, iters: int):
    a, b = lo, hi
    c, e = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(iters):
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + GOLDEN * (b - a)
            fe = f(e)
    return (c, fc) if fc < fe else (e, fe)


def distance_to_discriminant(s: HomogeneousPolynomial, grid_density: int | None = None,
                             refine: bool = True, grad_scale: float = 1.0) -> DistanceResult:
    n = s.n
    if grid_density is None:
        grid_density = default_grid_density(n, s.d)
    if grid_density < 8:
        raise ValueError("grid_density must be at least 8")
    X = sphere_grid(n, grid_density)
    dist = _point_distances(s, X, grad_scale)
    best = int(np.argmin(dist))
    points, dists = [X], [dist]

    if refine:
        center = X[best]
        frame = tangent_frames(center[None, :])[0]
        h = grid_spacing(n, grid_density)
        coords = np.zeros(n)

        def f_at(j):
            def f(t):
                c = coords.copy()
                c[j] = t
                y = _chart(center, frame, c[None, :])
                return float(_point_distances(s, y, grad_scale)[0])
            return f

        for j in range(n):
            t, _ = _golden_min(f_at(j), coords[j] - h, coords[j] + h, REFINE_ITERS)
            coords[j] = t
        y = _chart(center, frame, coords[None, :])
        points.append(y)
        dists.append(_point_distances(s, y, grad_scale))

    X = np.concatenate(points)
    dist = np.concatenate(dists)
    asym = _asymptotic_terms(s, X, grad_scale)
    k = int(np.argmin(dist))
    A = jet_frame(s.basis, X[k], grad_scale).A
    return DistanceResult(
        exact=float(dist[k]),
        asymptotic=float(asym.min()),
        argmin_point=X[k],
        grid_density=int(grid_density),
        refined=bool(refine),
        gram_condition=float(np.linalg.cond(A)),
    )


def discriminant_degree(n: int, d: int) -> int:
    if n < 1 or d < 2:
        raise ValueError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    return (n + 1) * (d - 1) ** n


def tube_event(s: HomogeneousPolynomial, r: float, dist: DistanceResult) -> bool:
    return bool(dist.exact <= r * s.norm())
