"""Certified topology of real zero sets on the projective line and plane."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from . import sturm
from .curves import MAX_DEPTH, CurveSolver, Uncertified, assemble, nest_structure
from .poly import HomogeneousPolynomial


class UncertifiedInputError(ValueError):
    """A verdict was requested for a result whose topology is unknown."""


@dataclass(frozen=True)
class RootCount:
    degree: int
    real_roots: int
    certified: bool

    def to_json(self) -> dict:
        return asdict(self)


def _chart_polys(s: HomogeneousPolynomial):
    mono = s.monomial_coeffs()
    d = s.d
    p = [0.0] * (d + 1)  # P(1, t) in powers of t
    q = [0.0] * (d + 1)  # P(u, 1) in powers of u
    for (a0, a1), c in zip(s.basis.alphas, mono):
        p[int(a1)] += c
        q[int(a0)] += c
    return sturm.from_floats(p), sturm.from_floats(q)


def count_real_roots(s: HomogeneousPolynomial) -> RootCount:
    """Distinct real zeros of a binary form on the projective line.

    Chart ``[1 : t]`` covers ``t`` in [-1, 1] and chart ``[u : 1]`` covers the
    open interval ``(-1, 1)``; together they cover the line exactly once. Counts
    are exact for the float coefficients; the result is uncertified only if the
    form has a repeated factor (or is zero), where the count is ill-posed.
    """
    if s.n != 1:
        raise ValueError(f"root counting needs a binary form, got n={s.n}")
    p, q = _chart_polys(s)
    chain_p, chain_q = sturm.sturm_chain(p), sturm.sturm_chain(q)
    if not p or not (sturm.is_squarefree(chain_p) and sturm.is_squarefree(chain_q)):
        return RootCount(degree=s.d, real_roots=0, certified=False)
    roots = sturm.count_in_half_open(chain_p, -1, 1) + int(sturm.value_sign(p, -1) == 0)
    roots += sturm.count_in_half_open(chain_q, -1, 1) - int(sturm.value_sign(q, 1) == 0)
    return RootCount(degree=s.d, real_roots=roots, certified=True)


def harnack_bound(d: int) -> int:
    return (d - 1) * (d - 2) // 2 + 1


def complex_total_betti(n: int, d: int) -> int:
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if n == 1:
        return d
    if n == 2:
        return d * d - 3 * d + 4
    raise ValueError(f"unsupported n={n}; only 1 and 2 are implemented")


@dataclass(frozen=True)
class CurveTopology:
    """Topology of a real plane curve; counts are None when not certified."""

    degree: int
    b0: int | None
    ovals: int | None
    pseudolines: int | None
    nest_parents: list = field(default_factory=list)
    oval_depths: list = field(default_factory=list)
    max_nest_depth: int | None = None
    certified: bool = False
    harnack_bound: int = 0
    maximal: bool | None = None
    sphere_components: int | None = None
    cells: int = 0
    depth_reached: int = 0
    reason: str = ""

    @property
    def betti_total(self) -> int | None:
        return None if self.b0 is None else 2 * self.b0

    def to_json(self) -> dict:
        return asdict(self)


def curve_topology(s: HomogeneousPolynomial, resolution: int = 4,
                   max_depth: int = MAX_DEPTH, keep_geometry: bool = False):
    """Certified components, ovals, pseudoline and nesting of a real plane curve.

    With ``keep_geometry`` the return value is ``(topology, assembly)`` so the
    crossing points and chords can be drawn.
    """
    if s.n != 2:
        raise ValueError(f"curve topology needs n=2, got n={s.n}")
    d = s.d
    hb = harnack_bound(d)
    solver = CurveSolver(s, resolution=resolution, max_depth=max_depth)
    asm = None
    try:
        leaves = solver.subdivide()
        asm = assemble(solver, leaves)
        ovals, fixed, parents, depths = nest_structure(asm)
    except Uncertified as exc:
        topo = CurveTopology(degree=d, b0=None, ovals=None, pseudolines=None,
                             certified=False, harnack_bound=hb, reason=str(exc))
        return (topo, asm) if keep_geometry else topo
    b0 = len(ovals) + len(fixed)
    topo = CurveTopology(
        degree=d,
        b0=b0,
        ovals=len(ovals),
        pseudolines=len(fixed),
        nest_parents=list(parents),
        oval_depths=list(depths),
        max_nest_depth=max(depths, default=0),
        certified=True,
        harnack_bound=hb,
        maximal=b0 == hb,
        sphere_components=asm.n_components,
        cells=asm.n_cells,
        depth_reached=asm.max_depth,
    )
    return (topo, asm) if keep_geometry else topo


def maximality_verdict(t: CurveTopology | RootCount) -> bool:
    if not t.certified:
        raise UncertifiedInputError("maximality is undefined for an uncertified result")
    if isinstance(t, RootCount):
        return t.real_roots == t.degree
    return t.b0 == harnack_bound(t.degree)


def curve_svg(s: HomogeneousPolynomial, resolution: int = 4, size: int = 240) -> str:
    """Orthographic drawing of the curve, one disk per hemisphere (z >= 0, z < 0)."""
    topo, asm = curve_topology(s, resolution, keep_geometry=True)
    pad = 10
    r = size / 2 - pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * size}" height="{size}" '
        f'viewBox="0 0 {2 * size} {size}">',
    ]
    for h in range(2):
        cx = size / 2 + h * size
        parts.append(f'<circle cx="{cx:.2f}" cy="{size / 2:.2f}" r="{r:.2f}" '
                     'fill="none" stroke="#999" stroke-width="1"/>')
    if asm is not None:
        pts = asm.geometry["crossing_points"]
        for a, b in asm.chords:
            pa, pb = pts[a], pts[b]
            mid = pa + pb
            h = 0 if mid[2] >= 0 else 1
            cx = size / 2 + h * size
            xs = [cx + r * p[0] for p in (pa, pb)]
            ys = [size / 2 - r * p[1] for p in (pa, pb)]
            parts.append(f'<line x1="{xs[0]:.2f}" y1="{ys[0]:.2f}" x2="{xs[1]:.2f}" '
                         f'y2="{ys[1]:.2f}" stroke="#c22" stroke-width="1.2"/>')
    label = f"d={topo.degree} b0={topo.b0} certified={str(topo.certified).lower()}"
    parts.append(f'<text x="{pad}" y="{size - 2}" font-size="10">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

