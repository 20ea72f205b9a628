"""JSON forms for results.  Fractions are always written as ``"p/q"`` strings."""

from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterator, Optional

from .crt import DeltaBounds, GoodCertificate, LonelyTime
from .gap import Classification, GapReport, Kind, Method

CACHE_DIR_ENV = "LONELY_RUNNER_CACHE_DIR"


def frac(x: Fraction) -> str:
    return str(x)


def opt_frac(x: Optional[Fraction]) -> Optional[str]:
    return None if x is None else str(x)


def parse_opt(s: Optional[str]) -> Optional[Fraction]:
    return None if s is None else Fraction(s)


def gap_report_to_dict(r: GapReport) -> dict:
    return {
        "value": frac(r.value),
        "witness": frac(r.witness_time),
        "horizon": opt_frac(r.horizon),
        "method": r.method.value,
    }


def gap_report_from_dict(d: dict) -> GapReport:
    return GapReport(
        Fraction(d["value"]), Fraction(d["witness"]), parse_opt(d["horizon"]), Method(d["method"])
    )


def classification_to_dict(c: Classification) -> dict:
    return {
        "kind": c.kind.value,
        "gap": frac(c.gap),
        "bound": frac(c.bound),
        "plateau_start": opt_frac(c.plateau_start),
        "plateau_length": opt_frac(c.plateau_length),
    }


def classification_from_dict(d: dict) -> Classification:
    return Classification(
        Kind(d["kind"]),
        Fraction(d["gap"]),
        Fraction(d["bound"]),
        parse_opt(d["plateau_start"]),
        parse_opt(d["plateau_length"]),
    )


def lonely_time_to_dict(lt: LonelyTime) -> dict:
    return {"T": lt.T, "residues": list(lt.residues), "positions": [frac(x) for x in lt.positions]}


def lonely_time_from_dict(d: dict) -> LonelyTime:
    return LonelyTime(int(d["T"]), tuple(d["residues"]), tuple(Fraction(x) for x in d["positions"]))


def certificate_to_dict(c: GoodCertificate) -> dict:
    """Canonical order: best_set, lonely_time, bounds, ratio_intervals, scale_witness."""
    return {
        "best_set": list(c.best_set),
        "lonely_time": lonely_time_to_dict(c.lonely_time),
        "bounds": {
            "delta": [frac(x) for x in c.bounds.delta],
            "slack": [frac(x) for x in c.bounds.slack],
            "feasible": c.bounds.feasible,
        },
        "ratio_intervals": [[frac(lo), frac(hi)] for lo, hi in c.ratio_intervals],
        "scale_witness": opt_frac(c.scale_witness),
    }


def certificate_from_dict(d: dict) -> GoodCertificate:
    b = d["bounds"]
    return GoodCertificate(
        tuple(d["best_set"]),
        lonely_time_from_dict(d["lonely_time"]),
        DeltaBounds(tuple(Fraction(x) for x in b["delta"]), tuple(Fraction(x) for x in b["slack"])),
        tuple((Fraction(lo), Fraction(hi)) for lo, hi in d["ratio_intervals"]),
        parse_opt(d["scale_witness"]),
    )


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def read_jsonl(path: os.PathLike) -> Iterator[dict]:
    """Records of a JSON-lines file; a torn final line (interrupted write) is skipped."""
    p = Path(path)
    if not p.exists():
        return
    with p.open() as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError:
                continue


class JsonlWriter:
    """Append-only JSON-lines writer, flushed per record."""

    def __init__(self, path: os.PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        torn = self.path.exists() and self.path.stat().st_size > 0 and not self.path.read_bytes().endswith(b"\n")
        self._fh = self.path.open("a")
        if torn:
            self._fh.write("\n")

    def write(self, record: dict) -> None:
        self._fh.write(json.dumps(record) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def default_cache_dir() -> Optional[Path]:
    d = os.environ.get(CACHE_DIR_ENV)
    return Path(d) if d else None
