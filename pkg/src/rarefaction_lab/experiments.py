"""Seeded Monte Carlo campaigns over random Kostlan forms.

Every sample is drawn from its own stream keyed by ``(master_seed, degree, index)``,
so a record depends only on the configuration and never on how the work was
split across processes.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from scipy import stats

from .discriminant import distance_to_discriminant
from .poly import make_basis, rng_stream, sample_gaussian
from .projection import approx_pipeline, build_sigma, split
from .topology import count_real_roots, curve_topology

KINDS = ("rarefaction", "tube_volume", "c1_decay", "approximation", "distance_stats")
WILSON_Z = float(stats.norm.ppf(0.975))
FIT_MODEL = "log-frequency vs d linear"


class AcceptanceAssertionError(AssertionError):
    """A certified sample contradicted a property that must always hold."""


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int = 1
    degrees: tuple = (3, 5, 7)
    samples_per_degree: int = 100
    master_seed: int = 0
    thresholds: tuple = (1.0,)
    radii: tuple = (1e-4, 1e-3, 1e-2)
    ell: int = 1
    resolution: int = 4
    grid_density: int | None = None
    grad_scale: float = 1.0
    keep_samples: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.n not in (1, 2):
            raise ValueError(f"n must be 1 or 2, got {self.n}")
        degrees = tuple(int(d) for d in self.degrees)
        if not degrees or any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise ValueError(f"degrees must be non-empty and strictly increasing, got {degrees}")
        if self.samples_per_degree < 1:
            raise ValueError("samples_per_degree must be >= 1")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "thresholds", tuple(float(a) for a in self.thresholds))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))

    def to_json(self) -> dict:
        out = asdict(self)
        out["degrees"] = list(self.degrees)
        out["thresholds"] = list(self.thresholds)
        out["radii"] = list(self.radii)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> ExperimentConfig:
        names = {f.name for f in fields(cls)}
        unknown = set(obj) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @property
    def config_hash(self) -> str:
        """Hash of everything that determines the results (worker count excluded)."""
        obj = self.to_json()
        obj.pop("threads")
        blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class ExperimentRecord:
    config: ExperimentConfig
    config_hash: str
    rows: list
    fits: dict
    extras: dict = field(default_factory=dict)
    samples: list | None = None

    def to_json(self) -> dict:
        config = self.config.to_json()
        config.pop("threads")  # scheduling only; records are identical at any worker count
        out = {
            "config": config,
            "config_hash": self.config_hash,
            "rows": self.rows,
            "fits": self.fits,
            "extras": self.extras,
        }
        if self.samples is not None:
            out["samples"] = self.samples
        return out

    def non_null_rows(self) -> list:
        return [r for r in self.rows if r["frequency"] is not None or r["median"] is not None]


# ---------------------------------------------------------------- statistics


def wilson_interval(k: int, n: int, z: float = WILSON_Z) -> tuple[float, float]:
    if n <= 0:
        raise ValueError("Wilson interval needs n >= 1")
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    # keep the interval containing p despite rounding at k = 0 or k = n
    return float(min(p, max(0.0, centre - half))), float(max(p, min(1.0, centre + half)))


def fit_decay(degrees, freqs) -> dict:
    """Least-squares line through ``(d, log f)`` over degrees with ``f > 0``."""
    pts = [(float(d), float(f)) for d, f in zip(degrees, freqs) if f is not None and f > 0]
    null = {"model": FIT_MODEL, "slope": None, "intercept": None, "r_squared": None}
    if len(pts) < 3:
        return {**null, "reason": f"{len(pts)} degrees with nonzero frequency, need 3"}
    x, y = np.array(pts).T
    if np.ptp(y) == 0:
        return {"model": FIT_MODEL, "slope": 0.0, "intercept": float(y[0]), "r_squared": 1.0,
                "reason": ""}
    res = stats.linregress(x, np.log(y))
    return {"model": FIT_MODEL, "slope": float(res.slope), "intercept": float(res.intercept),
            "r_squared": float(res.rvalue**2), "reason": ""}


def _quartiles(values) -> tuple:
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None, None
    q1, med, q3 = np.percentile(vals, [25, 50, 75])
    return float(q1), float(med), float(q3)


def _row(degree, event, threshold, n_samples, n_certified, count, observable=()) -> dict:
    q1, med, q3 = _quartiles(observable)
    if count is not None and n_certified:
        freq = count / n_certified
        lo, hi = wilson_interval(count, n_certified)
    else:
        freq = lo = hi = None
    uncertified = n_samples - n_certified
    worst = (count + uncertified) / n_samples if n_samples and count is not None else None
    return {
        "degree": int(degree),
        "event": event,
        "threshold": threshold,
        "n_samples": int(n_samples),
        "n_certified": int(n_certified),
        "event_count": None if count is None else int(count),
        "frequency": freq,
        "wilson_low": lo,
        "wilson_high": hi,
        "worst_case_frequency": worst,
        "q1": q1,
        "median": med,
        "q3": q3,
    }


# ---------------------------------------------------------------- per-sample work


def _draw(cfg: ExperimentConfig, d: int, i: int):
    return sample_gaussian(make_basis(cfg.n, d), rng_stream(cfg.master_seed, d, i))


def _topology(s, cfg: ExperimentConfig) -> dict:
    if s.n == 1:
        rc = count_real_roots(s)
        return {"certified": rc.certified, "b0": rc.real_roots if rc.certified else None,
                "betti": rc.real_roots if rc.certified else None,
                "maximal": rc.real_roots == rc.degree if rc.certified else None,
                "nest": None}
    t = curve_topology(s, resolution=cfg.resolution)
    return {"certified": t.certified, "b0": t.b0, "betti": t.betti_total, "maximal": t.maximal,
            "nest": t.max_nest_depth}


def _sample(cfg: ExperimentConfig, d: int, i: int) -> dict:
    s = _draw(cfg, d, i)
    out = {"degree": d, "index": i, "norm": s.norm()}
    if cfg.kind == "rarefaction":
        out.update(_topology(s, cfg))
    elif cfg.kind in ("tube_volume", "distance_stats"):
        dist = distance_to_discriminant(s, cfg.grid_density, grad_scale=cfg.grad_scale)
        out.update(exact=dist.exact, asymptotic=dist.asymptotic,
                   ratio=dist.exact / dist.asymptotic, relative=dist.exact / out["norm"])
    elif cfg.kind == "c1_decay":
        parts = split(s, build_sigma(cfg.n), cfg.ell, cfg.grid_density)
        out.update(c1_perp=parts.c1_perp, relative=parts.c1_perp / out["norm"])
    elif cfg.kind == "approximation":
        dist = distance_to_discriminant(s, cfg.grid_density)
        approx = approx_pipeline(s, build_sigma(cfg.n), cfg.ell, dist)
        out.update(criterion_holds=approx.criterion_holds, margin=approx.margin,
                   threshold=approx.threshold, c1_perp=approx.split.c1_perp,
                   distance=dist.exact)
        if approx.criterion_holds:
            a, b = _topology(s, cfg), _topology(approx.s_prime, cfg)
            out.update(certified=a["certified"] and b["certified"], b0=a["b0"], b0_prime=b["b0"],
                       nest=a["nest"], nest_prime=b["nest"])
    return out


def _chunk(args) -> list:
    cfg, d, lo, hi = args
    return [_sample(cfg, d, i) for i in range(lo, hi)]


def collect_samples(cfg: ExperimentConfig, threads: int | None = None) -> dict:
    """Per-degree sample observables, in index order whatever the worker count."""
    threads = cfg.threads if threads is None else threads
    tasks = []
    step = max(1, min(250, cfg.samples_per_degree // max(1, 4 * threads) or 1))
    for d in cfg.degrees:
        for lo in range(0, cfg.samples_per_degree, step):
            tasks.append((cfg, d, lo, min(cfg.samples_per_degree, lo + step)))
    if threads <= 1:
        chunks = [_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_chunk, tasks))
    by_degree = {d: [] for d in cfg.degrees}
    for chunk in chunks:
        for rec in chunk:
            by_degree[rec["degree"]].append(rec)
    for recs in by_degree.values():
        recs.sort(key=lambda r: r["index"])
    return by_degree


def _record(cfg, rows, fits, by_degree, extras=None) -> ExperimentRecord:
    samples = None
    if cfg.keep_samples:
        samples = [r for d in cfg.degrees for r in by_degree[d]]
    return ExperimentRecord(config=cfg, config_hash=cfg.config_hash, rows=rows, fits=fits,
                            extras=extras or {}, samples=samples)


def _check_kind(cfg: ExperimentConfig, kind: str):
    if cfg.kind != kind:
        raise ValueError(f"config kind is {cfg.kind!r}, expected {kind!r}")


# ---------------------------------------------------------------- campaigns


def run_rarefaction(cfg: ExperimentConfig) -> ExperimentRecord:
    """Frequencies of maximality and of ``b_* >= a d^n`` for each threshold ``a``."""
    _check_kind(cfg, "rarefaction")
    by_degree = collect_samples(cfg)
    rows = []
    events = [("maximal", None)] + [("betti>=a*d^n", a) for a in cfg.thresholds]
    for d in cfg.degrees:
        recs = by_degree[d]
        cert = [r for r in recs if r["certified"]]
        betti = [r["betti"] for r in cert]
        for name, a in events:
            if a is None:
                count = sum(bool(r["maximal"]) for r in cert)
            else:
                count = sum(r["betti"] >= a * d**cfg.n for r in cert)
            rows.append(_row(d, name, a, len(recs), len(cert), count, betti))
        hard_asserts(cfg.n, d, cert)
    fits = {}
    for name, a in events:
        key = name if a is None else f"{name}:{a!r}"
        sel = [r for r in rows if r["event"] == name and r["threshold"] == a]
        fits[key] = fit_decay([r["degree"] for r in sel], [r["frequency"] for r in sel])
    return _record(cfg, rows, fits, by_degree)


def hard_asserts(n: int, d: int, certified: list):
    """Properties no certified plane curve may violate."""
    if n != 2:
        return
    for r in certified:
        if r["b0"] > (d - 1) * (d - 2) // 2 + 1:
            raise AcceptanceAssertionError(f"Harnack bound exceeded at d={d}: {r}")
        if r["nest"] > d // 2:
            raise AcceptanceAssertionError(f"nest deeper than d/2 at d={d}: {r}")


def run_tube_volume(cfg: ExperimentConfig) -> ExperimentRecord:
    """Frequency of ``dist(s, discriminant) <= r |s|`` over a radius sweep."""
    _check_kind(cfg, "tube_volume")
    by_degree = collect_samples(cfg)
    rows = []
    extras = {"ratio_bound": {}}
    for d in cfg.degrees:
        recs = by_degree[d]
        rel = [r["relative"] for r in recs]
        for r in cfg.radii:
            count = sum(v <= r for v in rel)
            row = _row(d, "tube", r, len(recs), len(recs), count, rel)
            row["frequency_over_r"] = row["frequency"] / r
            rows.append(row)
        ratios = [row["frequency_over_r"] for row in rows if row["degree"] == d]
        extras["ratio_bound"][str(d)] = max(ratios)
    return _record(cfg, rows, {}, by_degree, extras)


def run_c1_decay(cfg: ExperimentConfig) -> ExperimentRecord:
    """Quartiles of ``|s_perp|_C1 / |s|`` per degree and a fit of the log-median."""
    _check_kind(cfg, "c1_decay")
    by_degree = collect_samples(cfg)
    rows = []
    for d in cfg.degrees:
        recs = by_degree[d]
        rows.append(_row(d, "c1_perp_relative", float(cfg.ell), len(recs), len(recs), None,
                         [r["relative"] for r in recs]))
    fits = {"median": fit_decay([r["degree"] for r in rows], [r["median"] for r in rows])}
    return _record(cfg, rows, fits, by_degree)


def run_approximation(cfg: ExperimentConfig) -> ExperimentRecord:
    """Isotopy-criterion frequency and topology agreement of ``s`` with ``s'``.

    A certified sample that meets the criterion but changes topology raises
    ``AcceptanceAssertionError`` after the record is built (attached to the error).
    """
    _check_kind(cfg, "approximation")
    by_degree = collect_samples(cfg)
    rows = []
    mismatches = []
    for d in cfg.degrees:
        recs = by_degree[d]
        holds = [r for r in recs if r["criterion_holds"]]
        rows.append(_row(d, "criterion_holds", float(cfg.ell), len(recs), len(recs), len(holds),
                         [r["margin"] / r["norm"] for r in recs]))
        cert = [r for r in holds if r["certified"]]
        match = [r for r in cert if r["b0"] == r["b0_prime"]]
        mismatches += [r for r in cert if r["b0"] != r["b0_prime"]]
        rows.append(_row(d, "topology_match", float(cfg.ell), len(holds), len(cert), len(match)))
        if cfg.n == 2:
            hard_asserts(2, d, cert)
    rec = _record(cfg, rows, {}, by_degree, {"mismatches": mismatches})
    if mismatches:
        err = AcceptanceAssertionError(f"{len(mismatches)} certified topology mismatches")
        err.record = rec
        raise err
    return rec


def run_distance_stats(cfg: ExperimentConfig) -> ExperimentRecord:
    """Quartiles of exact / asymptotic distance and the constant that would centre them."""
    _check_kind(cfg, "distance_stats")
    by_degree = collect_samples(cfg)
    rows = []
    consts = {}
    for d in cfg.degrees:
        recs = by_degree[d]
        row = _row(d, "distance_ratio", None, len(recs), len(recs), None, [r["ratio"] for r in recs])
        row["iqr"] = row["q3"] - row["q1"]
        rows.append(row)
        consts[str(d)] = np.pi ** (cfg.n / 2) * row["median"]
    return _record(cfg, rows, {}, by_degree, {"effective_constant": consts})


def calibrate_grad_scale(cfg: ExperimentConfig, scales=(0.25, 0.5, 1.0, 2.0, 4.0),
                         target: float = 1.0) -> dict:
    """Median distance ratio at the largest degree for a sweep of gradient scalings.

    Reports the scale whose median is closest to ``target`` and the effective
    constant that would replace ``pi**(n/2)`` at that scale.
    """
    d = cfg.degrees[-1]
    sweep = {}
    for g in scales:
        sub = ExperimentConfig(**{**cfg.to_json(), "kind": "distance_stats", "degrees": (d,),
                                  "grad_scale": float(g), "keep_samples": False})
        sweep[g] = run_distance_stats(sub).rows[0]["median"]
    best = min(sweep, key=lambda g: abs(sweep[g] - target))
    return {
        "degree": d,
        "medians": {repr(g): m for g, m in sweep.items()},
        "best_scale": best,
        "best_median": sweep[best],
        "effective_constant": np.pi ** (cfg.n / 2) * sweep[best],
    }


RUNNERS = {
    "rarefaction": run_rarefaction,
    "tube_volume": run_tube_volume,
    "c1_decay": run_c1_decay,
    "approximation": run_approximation,
    "distance_stats": run_distance_stats,
}


def run(cfg: ExperimentConfig) -> ExperimentRecord:
    return RUNNERS[cfg.kind](cfg)
