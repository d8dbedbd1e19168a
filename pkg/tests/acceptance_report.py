"""Collects one PASS/FAIL line per acceptance criterion across the test session."""

_RESULTS: dict = {}


def record(k: int, ok: bool, detail: str) -> str:
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    _RESULTS[k] = line
    return line


def lines() -> list[str]:
    return [_RESULTS[k] for k in sorted(_RESULTS)]
