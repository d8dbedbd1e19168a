"""Certified topology of real plane curves on the sphere.

The sphere is replaced by the surface of the cube [-1, 1]^3 (radial projection is
a homeomorphism preserving the sign of a form). Each face is refined by a
quadtree until every cell is either

* sign-constant: a Taylor-form range bound for the face polynomial excludes 0, or
* a graph cell: one partial derivative keeps a fixed sign, so the curve inside the
  cell is a union of disjoint monotone arcs with no closed loops, and the arc
  endpoints on the boundary can be paired from their order alone.

Crossings on cell edges are counted exactly (monotonicity or an integer Sturm
chain), so the combinatorics of every cell is rigorous. The form is first
composed with a fixed rational rotation, computed exactly, so that symmetric
inputs do not meet the cube edges in special position. Arcs are glued across
cells by union-find on crossings; regions of the complement are glued the same
way on boundary pieces. Only the three positive faces are refined; the other
three are their antipodal mirror images, which makes the antipodal map act on
crossings and regions by index arithmetic.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import sturm
from .poly import HomogeneousPolynomial

MAX_DEPTH = 12
# quaternion of a fixed rational rotation; keeps symmetric inputs off cube edges
ROTATION_QUATERNION = (5, 2, 3, 1)
SPLIT = 0.5179
GRID_OFFSET = 0.0371
EPS_REL = 1e-12


class Uncertified(Exception):
    """The subdivision could not certify the curve's topology."""


@dataclass
class Cell:
    face: int
    u0: float
    u1: float
    v0: float
    v1: float
    depth: int
    kind: str = ""  # "const" | "both" | "graph_u" | "graph_v"
    sign: int = 0

    def mirrored(self) -> Cell:
        return Cell(self.face + 3, -self.u1, -self.u0, -self.v1, -self.v0,
                    self.depth, self.kind, self.sign)


# face id -> (normal axis, sign, u axis, v axis)
FACES = [(k, s, *[a for a in range(3) if a != k]) for s in (1, -1) for k in range(3)]


def rotation_matrix(q=ROTATION_QUATERNION) -> tuple[list[list[int]], int]:
    """Integer matrix M and denominator N with M / N orthogonal."""
    a, b, c, d = q
    N = a * a + b * b + c * c + d * d
    M = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    return M, N


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            k = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
            out[k] = out.get(k, 0) + x * y
    return out


@lru_cache(maxsize=32)
def _rotation_action(alphas: tuple, q: tuple) -> tuple:
    """Integer matrix G with P(M x) = sum_b (G @ p)_b x^b, M the integer rotation."""
    M, _ = rotation_matrix(q)
    d = sum(alphas[0])
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    lin = [{units[j]: M[i][j] for j in range(3)} for i in range(3)]
    pows = []
    for i in range(3):
        row = [{(0, 0, 0): 1}]
        for _ in range(d):
            row.append(_pmul(row[-1], lin[i]))
        pows.append(row)
    index = {a: j for j, a in enumerate(alphas)}
    G = [[0] * len(alphas) for _ in alphas]
    for j, alpha in enumerate(alphas):
        term = _pmul(_pmul(pows[0][alpha[0]], pows[1][alpha[1]]), pows[2][alpha[2]])
        for k, v in term.items():
            G[index[k]][j] += v
    return tuple(tuple(r) for r in G)


def rotated_form(alphas, coeffs, q=ROTATION_QUATERNION) -> list:
    """Exact monomial coefficients of x -> P(R x) for the rational rotation R."""
    alphas = tuple(tuple(a) for a in alphas)
    _, N = rotation_matrix(q)
    d = sum(alphas[0])
    coeffs = [Fraction(c) for c in coeffs]
    den = 1
    for c in coeffs:
        den = max(den, c.denominator)  # dyadic, so the largest is a common multiple
    ints = [int(c * den) for c in coeffs]
    scale = Fraction(1, den * N**d)
    return [sum(g * c for g, c in zip(row, ints)) * scale
            for row in _rotation_action(alphas, tuple(q))]


@lru_cache(maxsize=None)
def _binomials(D: int):
    i = np.arange(D)
    B = np.array([[comb(k, j) if k >= j else 0 for k in range(D)] for j in range(D)], dtype=float)
    e = np.clip(i[None, :] - i[:, None], 0, None)
    return B, e, i


def _shift_matrices(c: np.ndarray, h: np.ndarray, D: int) -> np.ndarray:
    """T[i, k] = binom(k, i) c^(k-i) h^i, batched over cells -> (K, D, D)."""
    B, e, i = _binomials(D)
    cp = c[:, None, None] ** e[None]
    hp = h[:, None, None] ** i[None, :, None]
    return B[None] * cp * hp


class CurveSolver:
    def __init__(self, p: HomogeneousPolynomial, resolution: int = 4, max_depth: int = MAX_DEPTH):
        if p.n != 2:
            raise ValueError("curve topology needs a form in three variables")
        self.d = p.d
        self.resolution = int(resolution)
        self.max_depth = max_depth
        alphas = [tuple(int(v) for v in a) for a in p.basis.alphas]
        self.alphas = alphas
        self.exact = rotated_form(alphas, [float(c) for c in p.monomial_coeffs()])
        mono = np.array([float(c) for c in self.exact])
        self.mono = mono
        self._alpha_arr = np.array(alphas, dtype=np.int64)
        self.scale = float(np.abs(mono).sum()) or 1.0
        self.margin = EPS_REL * self.scale * (self.d + 1) ** 2
        D = self.d + 1
        self.D = D
        self.face_coeffs = []
        for k, s, a, b in FACES:
            F = np.zeros((D, D))
            for alpha, c in zip(self.alphas, mono):
                F[alpha[a], alpha[b]] += c * s ** alpha[k]
            self.face_coeffs.append(F)
        self._vsign: dict = {}
        self._seg: dict = {}
        self._line_poly: dict = {}
        self.sturm_calls = 0

    # ------------------------------------------------------------ point signs

    def point3(self, face: int, u: float, v: float) -> tuple:
        k, s, a, b = FACES[face]
        x = [0.0, 0.0, 0.0]
        x[k], x[a], x[b] = float(s), u, v
        return tuple(x)

    def vertex_sign(self, x: tuple) -> int:
        key = x
        got = self._vsign.get(key)
        if got is not None:
            return got
        terms = self.mono * np.prod(np.array(x)[None, :] ** self._alpha_arr, axis=1)
        val = terms.sum()
        if abs(val) > 1e-13 * (self.d + 2) * np.abs(terms).sum():
            sg = 1 if val > 0 else -1
        else:
            fx = [Fraction(c) for c in x]
            ex = sum(c * fx[0] ** al[0] * fx[1] ** al[1] * fx[2] ** al[2]
                     for c, al in zip(self.exact, self.alphas))
            if ex == 0:
                raise Uncertified(f"form vanishes exactly at grid vertex {x}")
            sg = 1 if ex > 0 else -1
        self._vsign[key] = sg
        return sg

    # ------------------------------------------------------------ edges

    def line_poly(self, line: tuple) -> np.ndarray:
        """Float coefficients in t of the form restricted to a line."""
        got = self._line_poly.get(line)
        if got is None:
            axis, fixed = line[0], np.array(line[1:])
            other = [i for i in range(3) if i != axis]
            w = np.prod(fixed[other][None, :] ** self._alpha_arr[:, other], axis=1)
            got = np.bincount(self._alpha_arr[:, axis], weights=self.mono * w, minlength=self.D)
            self._line_poly[line] = got
        return got

    def exact_line_poly(self, line: tuple) -> list:
        axis, fixed = line[0], [Fraction(c) for c in line[1:]]
        ex = [Fraction(0)] * self.D
        for alpha, ce in zip(self.alphas, self.exact):
            w = Fraction(1)
            for i in range(3):
                if i != axis:
                    w *= fixed[i] ** alpha[i]
            ex[alpha[axis]] += ce * w
        return ex

    def segment_point(self, line: tuple, t: float) -> tuple:
        x = list(line[1:])
        x[line[0]] = t
        return tuple(x)

    def segment_crossings(self, line: tuple, t0: float, t1: float) -> int:
        key = (line, t0, t1)
        got = self._seg.get(key)
        if got is not None:
            return got
        sa = self.vertex_sign(self.segment_point(line, t0))
        sb = self.vertex_sign(self.segment_point(line, t1))
        fl = self.line_poly(line)
        c, h = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
        e = _shift_matrices(np.array([c]), np.array([h]), self.D)[0] @ fl
        spread = np.abs(e[1:]).sum()
        dspread = (np.arange(2, self.D) * np.abs(e[2:])).sum()
        if abs(e[0]) > spread + self.margin:
            m = 0
        elif self.D > 1 and abs(e[1]) > dspread + self.d * self.margin:
            m = int(sa != sb)
        else:
            self.sturm_calls += 1
            chain = sturm.sturm_chain(sturm.from_fractions(self.exact_line_poly(line)))
            if not sturm.is_squarefree(chain):
                raise Uncertified(f"edge polynomial on {line} has a repeated factor")
            m = sturm.count_in_half_open(chain, t0, t1)
        if (m % 2) != int(sa != sb):
            raise Uncertified(f"edge crossing parity mismatch on {line} [{t0}, {t1}]")
        self._seg[key] = m
        return m

    # ------------------------------------------------------------ cells

    def cell_edges(self, cell: Cell):
        """(line, t0, t1) for bottom, right, top, left."""
        k, s, a, b = FACES[cell.face]

        def line(axis, **fix):
            x = [0.0, 0.0, 0.0]
            x[k] = float(s)
            for ax, val in fix.items():
                x[{"a": a, "b": b}[ax]] = val
            x[axis] = 0.0
            return (axis, *x)

        return (
            (line(a, b=cell.v0), cell.u0, cell.u1),
            (line(b, a=cell.u1), cell.v0, cell.v1),
            (line(a, b=cell.v1), cell.u0, cell.u1),
            (line(b, a=cell.u0), cell.v0, cell.v1),
        )

    def initial_cells(self) -> list[Cell]:
        R = self.resolution
        cuts = [-1.0] + [-1.0 + (2.0 / R) * (j + GRID_OFFSET) for j in range(1, R)] + [1.0]
        return [Cell(f, cuts[i], cuts[i + 1], cuts[j], cuts[j + 1], 0)
                for f in range(3) for i in range(R) for j in range(R)]

    def _bounds(self, cells: list[Cell]):
        out = []
        for f in range(3):
            idx = [i for i, c in enumerate(cells) if c.face == f]
            if not idx:
                continue
            u0 = np.array([cells[i].u0 for i in idx])
            u1 = np.array([cells[i].u1 for i in idx])
            v0 = np.array([cells[i].v0 for i in idx])
            v1 = np.array([cells[i].v1 for i in idx])
            Tu = _shift_matrices(0.5 * (u0 + u1), 0.5 * (u1 - u0), self.D)
            Tv = _shift_matrices(0.5 * (v0 + v1), 0.5 * (v1 - v0), self.D)
            B = Tu @ self.face_coeffs[f] @ np.swapaxes(Tv, 1, 2)
            absB = np.abs(B)
            I = np.arange(self.D)
            b00 = B[:, 0, 0]
            f_spread = absB.sum(axis=(1, 2)) - np.abs(b00)
            du = B[:, 1, 0] if self.D > 1 else np.zeros(len(idx))
            dv = B[:, 0, 1] if self.D > 1 else np.zeros(len(idx))
            du_spread = (I[None, :, None] * absB).sum(axis=(1, 2)) - np.abs(du)
            dv_spread = (I[None, None, :] * absB).sum(axis=(1, 2)) - np.abs(dv)
            for j, i in enumerate(idx):
                out.append((i, b00[j], f_spread[j], du[j], du_spread[j], dv[j], dv_spread[j]))
        out.sort()
        return out

    def classify(self, cell: Cell, b00, fsp, du, dusp, dv, dvsp) -> bool:
        """Set cell.kind if resolved; return whether it is."""
        m = self.margin
        if abs(b00) > fsp + m:
            cell.kind, cell.sign = "const", (1 if b00 > 0 else -1)
            return True
        gu = abs(du) > dusp + self.d * m
        gv = abs(dv) > dvsp + self.d * m
        if not (gu or gv):
            return False
        if gu and gv:
            cell.kind = "both"
            return True
        bottom, right, top, left = (self.segment_crossings(*e) for e in self.cell_edges(cell))
        total = bottom + right + top + left
        if gv and (total <= 2 or bottom == 0 or top == 0):
            cell.kind = "graph_u"
            return True
        if gu and (total <= 2 or left == 0 or right == 0):
            cell.kind = "graph_v"
            return True
        return False

    def subdivide(self) -> list[Cell]:
        pending = self.initial_cells()
        leaves = []
        while pending:
            nxt = []
            for i, b00, fsp, du, dusp, dv, dvsp in self._bounds(pending):
                cell = pending[i]
                if self.classify(cell, b00, fsp, du, dusp, dv, dvsp):
                    leaves.append(cell)
                    continue
                if cell.depth >= self.max_depth:
                    raise Uncertified("subdivision depth cap reached (near-singular curve)")
                um = cell.u0 + SPLIT * (cell.u1 - cell.u0)
                vm = cell.v0 + SPLIT * (cell.v1 - cell.v0)
                for (a0, a1) in ((cell.u0, um), (um, cell.u1)):
                    for (c0, c1) in ((cell.v0, vm), (vm, cell.v1)):
                        nxt.append(Cell(cell.face, a0, a1, c0, c1, cell.depth + 1))
            pending = nxt
        return leaves + [c.mirrored() for c in leaves]


class _UF:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class Assembly:
    """Glued combinatorial structure on the sphere."""

    segments: list  # (line, t0, t1, m)
    chords: list  # (crossing id, crossing id)
    components: dict  # crossing root -> component index
    crossing_comp: list
    n_components: int
    n_regions: int
    comp_regions: list  # component -> (region, region)
    anti_comp: list
    anti_region: list
    n_cells: int
    max_depth: int
    geometry: dict = field(default_factory=dict)


def assemble(solver: CurveSolver, leaves: list[Cell]) -> Assembly:
    # vertices on every line
    line_pts: dict = {}
    cell_edges = []
    for cell in leaves:
        edges = solver.cell_edges(cell)
        cell_edges.append(edges)
        for line, t0, t1 in edges:
            pts = line_pts.setdefault(line, set())
            pts.add(t0)
            pts.add(t1)
    line_sorted = {ln: sorted(pts) for ln, pts in line_pts.items()}

    seg_index: dict = {}
    segments = []
    seg_const = []

    def elementary(line, t0, t1):
        pts = line_sorted[line]
        i0 = bisect.bisect_left(pts, t0)
        i1 = bisect.bisect_left(pts, t1)
        ids = []
        for i in range(i0, i1):
            key = (line, pts[i], pts[i + 1])
            sid = seg_index.get(key)
            if sid is None:
                sid = len(segments)
                seg_index[key] = sid
                segments.append(key)
                seg_const.append(False)
            ids.append(sid)
        return ids

    cell_segs = []
    for cell, edges in zip(leaves, cell_edges):
        sides = [elementary(*e) for e in edges]
        cell_segs.append(sides)
        if cell.kind == "const":
            for side in sides:
                for sid in side:
                    seg_const[sid] = True

    m_of = []
    for sid, (line, t0, t1) in enumerate(segments):
        m_of.append(0 if seg_const[sid] else solver.segment_crossings(line, t0, t1))
    cross_off = np.concatenate([[0], np.cumsum(m_of)]).astype(int).tolist()
    bit_off = np.concatenate([[0], np.cumsum(np.array(m_of) + 1)]).astype(int).tolist()
    n_cross, n_bits = cross_off[-1], bit_off[-1]

    bit_sign = [0] * n_bits
    for sid, (line, t0, t1) in enumerate(segments):
        s0 = solver.vertex_sign(solver.segment_point(line, t0))
        s1 = solver.vertex_sign(solver.segment_point(line, t1))
        m = m_of[sid]
        if s0 * (-1) ** m != s1:
            raise Uncertified("sign alternation broken along an edge")
        for j in range(m + 1):
            bit_sign[bit_off[sid] + j] = s0 * (-1) ** j

    curve_uf = _UF(n_cross)
    region_uf = _UF(n_bits)
    touched = [0] * n_cross
    chords = []

    for cell, sides in zip(leaves, cell_segs):
        # boundary walk: bottom, right forward; top, left backward
        events = []  # ("b", bit) / ("c", crossing)
        side_cross = []
        for si, side in enumerate(sides):
            forward = si < 2
            ordered = side if forward else side[::-1]
            crossings_here = []
            for sid in ordered:
                m = m_of[sid]
                bits = [bit_off[sid] + j for j in range(m + 1)]
                crs = [cross_off[sid] + j for j in range(m)]
                if not forward:
                    bits, crs = bits[::-1], crs[::-1]
                for j in range(m):
                    events.append(("b", bits[j]))
                    events.append(("c", crs[j]))
                events.append(("b", bits[m]))
                crossings_here.extend(crs)
            # store in increasing coordinate order
            side_cross.append(crossings_here if forward else crossings_here[::-1])
        all_cross = [e[1] for e in events if e[0] == "c"]
        if cell.kind == "const" or not all_cross:
            first = events[0][1]
            for kind, x in events:
                if bit_sign[x] != bit_sign[first]:
                    raise Uncertified("sign change on the boundary of a curve-free cell")
                region_uf.union(first, x)
            continue

        bottom, right, top, left = side_cross
        total = len(all_cross)
        if total % 2:
            raise Uncertified("odd number of crossings on a cell boundary")
        if total == 2:
            seq = all_cross
        elif cell.kind == "graph_u":
            if bottom and top:
                raise Uncertified("graph cell crossed on both horizontal sides")
            if len(left) > 1 or len(right) > 1:
                raise Uncertified("graph cell crossed twice on a vertical side")
            seq = left + (bottom or top) + right
        elif cell.kind == "graph_v":
            if left and right:
                raise Uncertified("graph cell crossed on both vertical sides")
            if len(bottom) > 1 or len(top) > 1:
                raise Uncertified("graph cell crossed twice on a horizontal side")
            seq = bottom + (left or right) + top
        else:
            raise Uncertified(f"{total} crossings in a monotone cell")
        partner = {}
        for i in range(0, len(seq), 2):
            a, b = seq[i], seq[i + 1]
            partner[a], partner[b] = b, a
            curve_uf.union(a, b)
            touched[a] += 1
            touched[b] += 1
            chords.append((a, b))

        # regions: bits between consecutive crossings form arcs of the boundary
        ncv = len(events)
        start = next(i for i, e in enumerate(events) if e[0] == "c")
        arc_after = {}
        arc_before = {}
        current = None
        cur_bits = []
        for step in range(1, ncv + 1):
            kind, x = events[(start + step) % ncv]
            if kind == "b":
                cur_bits.append(x)
            else:
                prev = events[start][1] if current is None else current
                arc_after[prev] = cur_bits[0]
                arc_before[x] = cur_bits[0]
                for bb in cur_bits[1:]:
                    if bit_sign[bb] != bit_sign[cur_bits[0]]:
                        raise Uncertified("sign change between crossings")
                    region_uf.union(cur_bits[0], bb)
                cur_bits = []
                current = x
        for c in all_cross:
            a, b = arc_before[c], arc_after[partner[c]]
            if bit_sign[a] != bit_sign[b]:
                raise Uncertified("arc pairing joins regions of opposite sign")
            region_uf.union(a, b)

    if any(t != 2 for t in touched):
        raise Uncertified("crossing not matched by exactly two cells")

    comp_ids: dict = {}
    crossing_comp = []
    for c in range(n_cross):
        r = curve_uf.find(c)
        crossing_comp.append(comp_ids.setdefault(r, len(comp_ids)))
    region_ids: dict = {}
    bit_region = []
    for bt in range(n_bits):
        r = region_uf.find(bt)
        bit_region.append(region_ids.setdefault(r, len(region_ids)))
    n_comp, n_reg = len(comp_ids), len(region_ids)
    if n_reg != n_comp + 1:
        raise Uncertified(f"{n_reg} regions for {n_comp} curves violates the Jordan count")

    comp_regions: list = [None] * n_comp
    for sid in range(len(segments)):
        for j in range(m_of[sid]):
            c = crossing_comp[cross_off[sid] + j]
            pair = tuple(sorted((bit_region[bit_off[sid] + j], bit_region[bit_off[sid] + j + 1])))
            if pair[0] == pair[1]:
                raise Uncertified("curve with the same region on both sides")
            if comp_regions[c] is None:
                comp_regions[c] = pair
            elif comp_regions[c] != pair:
                raise Uncertified("curve bounded by inconsistent regions")

    anti_comp = [None] * n_comp
    anti_region = [None] * n_reg
    for sid, (line, t0, t1) in enumerate(segments):
        axis, *fixed = line
        aline = (axis, *[-v for v in fixed])
        asid = seg_index.get((aline, -t1, -t0))
        if asid is None or m_of[asid] != m_of[sid]:
            raise Uncertified("tessellation is not antipodally symmetric")
        m = m_of[sid]
        for j in range(m):
            c, ac = crossing_comp[cross_off[sid] + j], crossing_comp[cross_off[asid] + m - 1 - j]
            if anti_comp[c] not in (None, ac):
                raise Uncertified("antipodal map inconsistent on curves")
            anti_comp[c] = ac
        for j in range(m + 1):
            r, ar = bit_region[bit_off[sid] + j], bit_region[bit_off[asid] + m - j]
            if anti_region[r] not in (None, ar):
                raise Uncertified("antipodal map inconsistent on regions")
            anti_region[r] = ar

    geometry = {"crossing_points": _crossing_points(solver, segments, m_of)}
    return Assembly(
        segments=segments, chords=chords, components=comp_ids, crossing_comp=crossing_comp,
        n_components=n_comp, n_regions=n_reg, comp_regions=comp_regions,
        anti_comp=anti_comp, anti_region=anti_region, n_cells=len(leaves),
        max_depth=max(c.depth for c in leaves), geometry=geometry,
    )


def _crossing_points(solver: CurveSolver, segments, m_of) -> np.ndarray:
    """Approximate positions on the sphere of every crossing, for drawing only."""
    pts = []
    for (line, t0, t1), m in zip(segments, m_of):
        if not m:
            continue
        fl = solver.line_poly(line)
        roots = np.roots(fl[::-1]) if np.any(fl[1:]) else np.array([])
        ts = np.sort([r.real for r in roots if abs(r.imag) < 1e-7 and t0 <= r.real <= t1])
        if len(ts) != m:
            ts = t0 + (t1 - t0) * (np.arange(m) + 1) / (m + 1)
        for t in ts:
            x = np.array(solver.segment_point(line, float(t)))
            pts.append(x / np.linalg.norm(x))
    return np.array(pts).reshape(-1, 3)


def nest_structure(asm: Assembly):
    """Ovals (antipodal pairs of sphere curves), pseudolines, nest parents and depths."""
    fixed_comps = [c for c in range(asm.n_components) if asm.anti_comp[c] == c]
    fixed_regions = [r for r in range(asm.n_regions) if asm.anti_region[r] == r]
    adj: dict = {r: [] for r in range(asm.n_regions)}
    for c, (r1, r2) in enumerate(asm.comp_regions):
        adj[r1].append((c, r2))
        adj[r2].append((c, r1))

    if len(fixed_regions) == 1 and not fixed_comps:
        roots = fixed_regions
    elif len(fixed_comps) == 1 and not fixed_regions:
        roots = list(asm.comp_regions[fixed_comps[0]])
    else:
        raise Uncertified(
            f"antipodal involution fixes {len(fixed_regions)} regions and {len(fixed_comps)} curves"
        )

    oval_of: dict = {}
    ovals = []
    for c in range(asm.n_components):
        if c in fixed_comps or c in oval_of:
            continue
        oval_of[c] = oval_of[asm.anti_comp[c]] = len(ovals)
        ovals.append(c)

    depth = {r: 0 for r in roots}
    parent_oval = [-1] * len(ovals)
    oval_depth = [0] * len(ovals)
    entered_by: dict = {r: None for r in roots}
    stack = list(roots)
    while stack:
        r = stack.pop()
        for c, other in adj[r]:
            if other in depth or c in fixed_comps:
                continue
            depth[other] = depth[r] + 1
            entered_by[other] = c
            o = oval_of[c]
            via = entered_by[r]
            # both lifts of an oval see the same ancestry; record once
            oval_depth[o] = depth[other]
            parent_oval[o] = -1 if via is None else oval_of[via]
            stack.append(other)
    return ovals, fixed_comps, parent_oval, oval_depth
