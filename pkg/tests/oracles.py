"""Reference computations that share no code path with the package.

Each oracle works from plain monomial coefficients (``HomogeneousPolynomial.monomial_coeffs``
is the only package call used) or from the basis exponent table.
"""

from __future__ import annotations

from math import comb, factorial

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def monomial_eval(alphas, coeffs, X) -> np.ndarray:
    X = np.atleast_2d(X)
    alphas = np.asarray(alphas)
    d = int(alphas[0].sum())
    pows = np.ones((X.shape[1], d + 1, len(X)))  # (vars, d+1, P)
    for k in range(1, d + 1):
        pows[:, k] = pows[:, k - 1] * X.T
    out = np.zeros(len(X))
    for a, c in zip(alphas, coeffs):
        term = np.full(len(X), float(c))
        for i, e in enumerate(a):
            if e:
                term *= pows[i, e]
        out += term
    return out


def hermitian_gram(alphas, weights, n_phi: int | None = None) -> np.ndarray:
    """Gram matrix of ``w_a z^a`` under the uniform probability measure on S^3 in C^2.

    With ``u = |z_1|^2`` uniform on [0, 1] and independent phases, Gauss-Legendre in
    ``u`` and the trapezoid rule in both phases are exact for these integrands.
    """
    alphas = np.asarray(alphas)
    d = int(alphas[0].sum())
    u, wu = np.polynomial.legendre.leggauss(d + 1)
    u, wu = 0.5 * (u + 1), 0.5 * wu
    m = n_phi or 2 * d + 1
    phi = 2 * np.pi * np.arange(m) / m
    p0, p1, U = np.meshgrid(phi, phi, u, indexing="ij")
    W = np.broadcast_to(wu, U.shape) / m**2
    z0 = np.sqrt(1 - U) * np.exp(1j * p0)
    z1 = np.sqrt(U) * np.exp(1j * p1)
    F = np.stack([w * z0 ** a[0] * z1 ** a[1] for a, w in zip(alphas, weights)])
    F = F.reshape(len(alphas), -1)
    return (F * W.reshape(-1)) @ F.conj().T


def lsq_distance(alphas, coeffs, points: int = 10_000) -> float:
    """Distance of a binary form to the forms singular at some point of a dense grid.

    At each point the value and the derivative along (-x1, x0) are linear
    functionals; the distance is the norm of the least-squares projection of the
    Kostlan coordinate vector onto their span (via the pseudoinverse).
    """
    alphas = np.asarray(alphas)
    d = int(alphas[0].sum())
    w = np.array([np.sqrt(factorial(d + 1) / (factorial(a) * factorial(b) * 1.0))
                  for a, b in alphas])
    # Kostlan coordinates of the form: coefficient / weight
    a = coeffs / w
    theta = np.pi * (np.arange(points) + 0.5) / points
    x0, x1 = np.cos(theta), np.sin(theta)
    e0, e1 = alphas[:, 0][None], alphas[:, 1][None]
    val = x0[:, None] ** e0 * x1[:, None] ** e1
    with np.errstate(invalid="ignore", divide="ignore"):
        dx0 = np.where(e0 > 0, e0 * x0[:, None] ** (e0 - 1), 0.0) * x1[:, None] ** e1
        dx1 = np.where(e1 > 0, e1 * x1[:, None] ** (e1 - 1), 0.0) * x0[:, None] ** e0
    tang = -x1[:, None] * dx0 + x0[:, None] * dx1
    M = np.stack([val * w, tang * w], axis=1)  # (P, 2, N)
    proj = np.linalg.pinv(M) @ (M @ a)[..., None]
    return float(np.linalg.norm(proj[..., 0], axis=1).min())


def companion_real_roots(alphas, coeffs, tol: float = 1e-7) -> int:
    """Distinct real projective zeros of a binary form from companion-matrix eigenvalues."""
    d = int(np.asarray(alphas)[0].sum())
    p = np.zeros(d + 1)  # P(1, t), highest power first for np.roots
    for (a0, a1), c in zip(alphas, coeffs):
        p[d - a1] += c
    lead = np.flatnonzero(p)[0]
    roots = np.roots(p[lead:])
    real = np.sort(roots[np.abs(roots.imag) <= tol * (1 + np.abs(roots))].real)
    distinct = int(len(real) and 1 + np.sum(np.diff(real) > tol * (1 + np.abs(real[1:]))))
    return distinct + int(lead > 0)


def marching_sphere_regions(alphas, coeffs, N: int) -> tuple[int, int]:
    """(positive, negative) sign regions of a ternary form on a lat-long sphere grid.

    Positive cells connect through edges (4-adjacency), negative cells also through
    diagonals (8-adjacency), the dual pair under which digital curves separate.
    """
    theta = (np.arange(N) + 0.5) * np.pi / N
    phi = np.arange(2 * N) * np.pi / N
    T, P = np.meshgrid(theta, phi, indexing="ij")
    X = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
    pts = np.concatenate([X.reshape(-1, 3), [[0, 0, 1], [0, 0, -1]]])
    vals = monomial_eval(alphas, coeffs, pts)
    if np.any(vals == 0):
        raise ValueError("grid point on the curve")
    pos = vals > 0
    idx = np.arange(N * 2 * N).reshape(N, 2 * N)
    north, south = N * 2 * N, N * 2 * N + 1
    four = [
        (idx[:-1].ravel(), idx[1:].ravel()),
        (idx.ravel(), np.roll(idx, -1, axis=1).ravel()),
        (np.full(2 * N, north), idx[0]),
        (np.full(2 * N, south), idx[-1]),
    ]
    diag = [
        (idx[:-1].ravel(), np.roll(idx, -1, axis=1)[1:].ravel()),
        (idx[:-1].ravel(), np.roll(idx, 1, axis=1)[1:].ravel()),
    ]
    rows, cols = [], []
    for a, b in four:
        keep = pos[a] == pos[b]
        rows.append(a[keep])
        cols.append(b[keep])
    for a, b in diag:
        keep = ~pos[a] & ~pos[b]
        rows.append(a[keep])
        cols.append(b[keep])
    r, c = np.concatenate(rows), np.concatenate(cols)
    G = coo_matrix((np.ones(len(r)), (r, c)), shape=(len(pts), len(pts)))
    _, labels = connected_components(G, directed=False)
    n_pos = len(np.unique(labels[pos]))
    n_neg = len(np.unique(labels[~pos]))
    return n_pos, n_neg


def marching_b0(alphas, coeffs, N: int) -> int | None:
    """Components of the curve in the projective plane, or None if the grid is inconsistent."""
    d = int(np.asarray(alphas)[0].sum())
    n_pos, n_neg = marching_sphere_regions(alphas, coeffs, N)
    c = n_pos + n_neg - 1
    if (c - d) % 2:
        return None
    return (c + d % 2) // 2


def doubly_resolved_b0(alphas, coeffs, N: int = 96) -> int | None:
    """Marching count at N and 2N when both agree, else None."""
    a = marching_b0(alphas, coeffs, N)
    b = marching_b0(alphas, coeffs, 2 * N)
    return a if a is not None and a == b else None


def binomial_dimension(n: int, d: int) -> int:
    return comb(n + d, n)
