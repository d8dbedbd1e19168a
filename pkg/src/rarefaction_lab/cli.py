"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 acceptance-assert failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .discriminant import distance_to_discriminant
from .experiments import KINDS, AcceptanceAssertionError, ExperimentConfig, run
from .io import (
    chart_svg,
    dumps,
    finish_manifest,
    new_manifest,
    record_csv,
    record_json,
    write_chart,
    write_once,
)
from .poly import make_basis, rng_stream, sample_gaussian
from .projection import approx_pipeline, build_sigma, split
from .topology import count_real_roots, curve_svg, curve_topology

THREADS_ENV = "RAREFACTION_LAB_THREADS"
EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_ASSERT = 0, 1, 2, 3

DEFAULTS = {
    "n": 1,
    "degree": "5",
    "samples": 1,
    "seed": 0,
    "ell": 1,
    "threshold": "1.0",
    "radii": "1e-4,1e-3,1e-2",
    "resolution": 4,
    "grid_density": None,
    "out": None,
    "format": "csv",
    "keep_samples": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    # every default is None so that config-file values are only overridden by explicit flags
    p.add_argument("--n", type=int)
    p.add_argument("--degree", help="degree, or comma-separated degrees for experiments")
    p.add_argument("--samples", type=int, help="samples (per degree for experiments)")
    p.add_argument("--seed", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--threshold", help="comma-separated thresholds a in b_* >= a d^n")
    p.add_argument("--radii", help="comma-separated tube radii")
    p.add_argument("--resolution", type=int)
    p.add_argument("--grid-density", type=int, dest="grid_density")
    p.add_argument("--out", help="output directory (stdout if omitted)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--config", help="flat JSON file of flag values")
    p.add_argument("--threads", type=int)
    p.add_argument("--keep-samples", action="store_true", default=None, dest="keep_samples")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = _Parser(prog="rarefaction-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("sample", parents=[common], help="draw Kostlan forms")
    sub.add_parser("topology", parents=[common], help="certified topology of sampled forms")
    sub.add_parser("distance", parents=[common], help="distance to the discriminant")
    sub.add_parser("project", parents=[common], help="sigma-divisible split and isotopy test")
    exp = sub.add_parser("experiment", parents=[common], help="run a Monte Carlo campaign")
    exp.add_argument("kind", choices=KINDS)
    chart = sub.add_parser("chart", parents=[common], help="SVG chart of a JSON record")
    chart.add_argument("record", help="experiment record in JSON form")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    opts = dict(DEFAULTS)
    if args.config:
        data = json.loads(Path(args.config).read_text())
        unknown = set(data) - set(DEFAULTS) - {"threads"}
        if unknown:
            raise UsageError(f"unknown keys in config file: {sorted(unknown)}")
        opts.update(data)
    for key, value in vars(args).items():
        if key in DEFAULTS or key == "threads":
            if value is not None:
                opts[key] = value
    if opts.get("threads") is None:
        opts["threads"] = int(os.environ.get(THREADS_ENV, "1"))
    try:
        opts["degrees"] = _ints(opts["degree"])
        opts["thresholds"] = _floats(opts["threshold"])
        opts["radii"] = _floats(opts["radii"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if opts["threads"] < 1 or opts["samples"] < 1:
        raise UsageError("--threads and --samples must be positive")
    return opts


def _ints(v) -> list[int]:
    return [int(x) for x in v] if isinstance(v, list) else [int(x) for x in str(v).split(",")]


def _floats(v) -> list[float]:
    return [float(x) for x in v] if isinstance(v, list) else [float(x) for x in str(v).split(",")]


def _forms(opts):
    basis = make_basis(opts["n"], opts["degrees"][0])
    return [sample_gaussian(basis, rng_stream(opts["seed"], basis.d, i))
            for i in range(opts["samples"])]


def _emit(opts, name: str, text: str, manifest=None):
    if opts["out"] is None:
        sys.stdout.write(text)
        return
    path = write_once(Path(opts["out"]) / name, text)
    if manifest is not None:
        manifest.add(path)


def _single(opts, payload: list, name: str, extra=()):
    manifest = None
    if opts["out"]:
        Path(opts["out"]).mkdir(parents=True, exist_ok=True)
        echo = {k: opts[k] for k in ("n", "degrees", "samples", "seed", "ell", "resolution",
                                      "grid_density")}
        manifest = new_manifest(echo, _hash(echo))
    _emit(opts, name, dumps(payload if len(payload) != 1 else payload[0]), manifest)
    for fname, text in extra:
        if opts["out"]:
            _emit(opts, fname, text, manifest)
    if manifest is not None:
        finish_manifest(manifest, opts["out"])


def _hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def cmd_sample(opts):
    _single(opts, [s.to_json() for s in _forms(opts)], "samples.json")


def cmd_topology(opts):
    out, svgs = [], []
    for i, s in enumerate(_forms(opts)):
        if s.n == 1:
            out.append(count_real_roots(s).to_json())
        else:
            out.append(curve_topology(s, resolution=opts["resolution"]).to_json())
            svgs.append((f"curve_{i:03d}.svg", curve_svg(s, resolution=opts["resolution"])))
    _single(opts, out, "topology.json", svgs)


def cmd_distance(opts):
    out = [distance_to_discriminant(s, opts["grid_density"]).to_json() for s in _forms(opts)]
    _single(opts, out, "distance.json")


def cmd_project(opts):
    sigma = build_sigma(opts["n"])
    out = []
    for s in _forms(opts):
        parts = split(s, sigma, opts["ell"], opts["grid_density"])
        dist = distance_to_discriminant(s, opts["grid_density"])
        approx = approx_pipeline(s, sigma, opts["ell"], dist, parts)
        out.append({**parts.to_json(), "criterion_holds": approx.criterion_holds,
                    "margin": approx.margin, "threshold": approx.threshold})
    _single(opts, out, "projection.json")


def experiment_config(opts, kind: str) -> ExperimentConfig:
    return ExperimentConfig(
        kind=kind, n=opts["n"], degrees=tuple(opts["degrees"]),
        samples_per_degree=opts["samples"], master_seed=opts["seed"],
        thresholds=tuple(opts["thresholds"]), radii=tuple(opts["radii"]), ell=opts["ell"],
        resolution=opts["resolution"], grid_density=opts["grid_density"],
        keep_samples=bool(opts["keep_samples"]), threads=opts["threads"],
    )


def cmd_experiment(opts, kind: str) -> int:
    try:
        cfg = experiment_config(opts, kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    status = EXIT_OK
    try:
        record = run(cfg)
    except AcceptanceAssertionError as exc:
        print(f"acceptance assert failed: {exc}", file=sys.stderr)
        record = getattr(exc, "record", None)
        status = EXIT_ASSERT
        if record is None:
            return status
    manifest = None
    if opts["out"]:
        Path(opts["out"]).mkdir(parents=True, exist_ok=True)
        manifest = new_manifest(cfg.to_json(), cfg.config_hash)
    if opts["format"] == "csv":
        _emit(opts, f"{kind}.csv", record_csv(record), manifest)
    else:
        _emit(opts, f"{kind}.json", record_json(record), manifest)
    if manifest is not None:
        finish_manifest(manifest, opts["out"])
    return status


def cmd_chart(opts, record_path: str):
    data = json.loads(Path(record_path).read_text())
    if opts["out"] is None:
        sys.stdout.write(chart_svg(data))
        return
    Path(opts["out"]).mkdir(parents=True, exist_ok=True)
    write_chart(data, Path(opts["out"]) / "chart.svg")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        opts = resolve(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.command == "experiment":
            return cmd_experiment(opts, args.kind)
        if args.command == "chart":
            cmd_chart(opts, args.record)
            return EXIT_OK
        {"sample": cmd_sample, "topology": cmd_topology, "distance": cmd_distance,
         "project": cmd_project}[args.command](opts)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
