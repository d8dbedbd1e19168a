"""Record persistence, run manifests and SVG charts."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from xml.sax.saxutils import escape

from . import __version__
from .experiments import ExperimentRecord

CSV_COLUMNS = (
    "config_hash", "kind", "n", "degree", "event", "threshold", "n_samples", "n_certified",
    "event_count", "frequency", "wilson_low", "wilson_high", "worst_case_frequency",
    "q1", "median", "q3",
)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def record_csv(record: ExperimentRecord) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    base = {"config_hash": record.config_hash, "kind": record.config.kind, "n": record.config.n}
    for row in record.rows:
        full = {**base, **row}
        w.writerow([_cell(full.get(c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def record_json(record: ExperimentRecord) -> str:
    return dumps(record.to_json())


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_once(path, text: str) -> Path:
    """Write a new output file; existing files are never overwritten."""
    path = Path(path)
    with path.open("x", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


@dataclass
class RunManifest:
    """Provenance of one CLI run. Timestamps are informational, not reproducible."""

    tool_version: str
    config: dict
    config_hash: str
    started: str
    finished: str = ""
    outputs: list = field(default_factory=list)

    def add(self, path):
        self.outputs.append({"path": Path(path).name, "sha256": sha256_file(path)})

    def to_json(self) -> dict:
        return asdict(self)


def new_manifest(config: dict, config_hash: str) -> RunManifest:
    return RunManifest(tool_version=__version__, config=config, config_hash=config_hash,
                       started=_now())


def finish_manifest(manifest: RunManifest, out_dir) -> Path:
    manifest.finished = _now()
    return write_once(Path(out_dir) / "manifest.json", dumps(manifest.to_json()))


def verify_manifest(path) -> list[str]:
    """Problems found in a manifest: missing files or digest mismatches."""
    path = Path(path)
    data = json.loads(path.read_text())
    problems = []
    for item in data["outputs"]:
        target = path.parent / item["path"]
        if not target.exists():
            problems.append(f"missing {item['path']}")
        elif sha256_file(target) != item["sha256"]:
            problems.append(f"digest mismatch {item['path']}")
    return problems


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ---------------------------------------------------------------- charts


class EmptyRecordError(ValueError):
    pass


def chart_series(record: dict) -> dict:
    """Series label -> [(degree, value, low, high)] from a record in JSON form.

    Rarefaction records chart one series per threshold ``a``; other kinds chart
    one series per (event, threshold), using the frequency when there is one and
    the median observable otherwise.
    """
    rows = record["rows"]
    if record["config"]["kind"] == "rarefaction":
        rows = [r for r in rows if r["threshold"] is not None]
    series: dict = {}
    for r in rows:
        if r["frequency"] is not None:
            pt = (r["degree"], r["frequency"], r["wilson_low"], r["wilson_high"])
        elif r["median"] is not None:
            pt = (r["degree"], r["median"], r["q1"], r["q3"])
        else:
            continue
        label = r["event"] if r["threshold"] is None else f"{r['event']} {r['threshold']!r}"
        series.setdefault(label, []).append(pt)
    return series


COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def chart_svg(record: dict, width: int = 480, height: int = 320) -> str:
    """Log10 of the charted value against degree, with interval whiskers."""
    series = chart_series(record)
    pts = [p for s in series.values() for p in s if p[1] > 0]
    if not pts:
        raise EmptyRecordError("record has no positive values to chart")
    ml, mr, mt, mb = 56, 16, 16, 40
    xs = [p[0] for p in pts]
    ys = [math.log10(v) for p in pts for v in (p[1], p[2], p[3]) if v is not None and v > 0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(x):
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def py(y):
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{ml}" y="{mt}" width="{width - ml - mr}" height="{height - mt - mb}" '
        'fill="none" stroke="#444"/>',
        f'<text x="{width / 2:.1f}" y="{height - 8}" font-size="11" text-anchor="middle">degree</text>',
        f'<text x="12" y="{height / 2:.1f}" font-size="11" transform="rotate(-90 12 {height / 2:.1f})" '
        'text-anchor="middle">log10 value</text>',
    ]
    for d in sorted(set(xs)):
        out.append(f'<text x="{px(d):.2f}" y="{height - mb + 14}" font-size="10" '
                   f'text-anchor="middle">{d}</text>')
    for tick in (y0, y1):
        out.append(f'<text x="{ml - 4}" y="{py(tick) + 3:.2f}" font-size="10" '
                   f'text-anchor="end">{tick:.2f}</text>')
    for k, (label, s) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        good = [p for p in s if p[1] > 0]
        if not good:
            continue
        coords = " ".join(f"{px(d):.2f},{py(math.log10(v)):.2f}" for d, v, _, _ in good)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for d, v, lo, hi in good:
            if lo is not None and hi is not None and lo > 0:
                out.append(f'<line x1="{px(d):.2f}" y1="{py(math.log10(lo)):.2f}" '
                           f'x2="{px(d):.2f}" y2="{py(math.log10(hi)):.2f}" stroke="{color}"/>')
        out.append(f'<text x="{ml + 6}" y="{mt + 14 + 13 * k}" font-size="10" '
                   f'fill="{color}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_chart(record: ExperimentRecord | dict, path) -> Path:
    data = record.to_json() if isinstance(record, ExperimentRecord) else record
    return write_once(path, chart_svg(data))
