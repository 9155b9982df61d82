"""Row records and deterministic CSV / JSON-lines serialization.

Output files are meant to be byte-reproducible for a fixed configuration:
rows are emitted in a sorted or otherwise fixed order by the callers and
floats are printed with 17 significant digits (exact double round-trip).
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class VerificationRow:
    """One brute-vs-closed comparison."""

    instance: str
    brute: complex
    closed: complex
    abs_err: float
    rel_err: float
    micros: float


def verification_row(
    instance: str, brute: complex, closed: complex, start: float
) -> VerificationRow:
    """Build a row, measuring elapsed time from `start` (perf_counter)."""
    abs_err = abs(brute - closed)
    scale = max(abs(brute), abs(closed))
    rel_err = abs_err / scale if scale > 0 else abs_err
    micros = (time.perf_counter() - start) * 1e6
    return VerificationRow(instance, brute, closed, abs_err, rel_err, micros)


@dataclass
class VerificationReport:
    """A batch of comparison rows under one name."""

    name: str
    rows: list

    @property
    def max_abs_err(self) -> float:
        return max((r.abs_err for r in self.rows), default=0.0)

    @property
    def max_rel_err(self) -> float:
        return max((r.rel_err for r in self.rows), default=0.0)

    def within(self, rel: float | None = None, abs_: float | None = None) -> bool:
        ok = True
        if rel is not None:
            ok &= self.max_rel_err <= rel
        if abs_ is not None:
            ok &= self.max_abs_err <= abs_
        return ok

    def to_dicts(self, timing: bool = True) -> list[dict]:
        out = []
        for r in self.rows:
            d = {
                "instance": r.instance,
                "brute": [r.brute.real, r.brute.imag],
                "closed": [r.closed.real, r.closed.imag],
                "abs_err": r.abs_err,
                "rel_err": r.rel_err,
            }
            if timing:
                d["micros"] = r.micros
            out.append(d)
        return out


def _json_value(v) -> str:
    if isinstance(v, str):
        # instance labels are plain ASCII; escape conservatively anyway
        escaped = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(u) for u in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def dumps_jsonl_row(d: dict) -> str:
    """One JSON object per line, insertion-ordered keys, 17-digit floats."""
    body = ", ".join(f'"{k}": {_json_value(v)}' for k, v in d.items())
    return "{" + body + "}"


def _flatten_csv(d: dict) -> dict:
    flat = {}
    for k, v in d.items():
        if isinstance(v, (list, tuple)):
            if len(v) == 2:
                flat[f"{k}_re"], flat[f"{k}_im"] = v
            else:
                flat[k] = " ".join(str(u) for u in v)
        else:
            flat[k] = v
    return flat


def render_rows(dicts: list[dict], fmt: str) -> str:
    """Serialize dict rows as 'csv' or 'jsonl' text (UTF-8, LF endings)."""
    if fmt == "jsonl":
        return "".join(dumps_jsonl_row(d) + "\n" for d in dicts)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    if not dicts:
        return ""
    flat = [_flatten_csv(d) for d in dicts]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    writer.writeheader()
    for row in flat:
        writer.writerow(
            {
                k: fmt_float(v) if isinstance(v, float) else v
                for k, v in row.items()
            }
        )
    return buf.getvalue()
