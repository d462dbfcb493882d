"""Pass/fail check records shared by every verification routine."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


@dataclass
class Check:
    id: str
    passed: bool
    witness: object = None
    ref: str = ""
    mode: str = "exact"
    elapsed_ms: float = 0.0
    skipped: bool = False

    @property
    def status(self) -> str:
        if self.skipped:
            return "skip"
        return "pass" if self.passed else "fail"

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "id": self.id,
            "paper_ref": self.ref,
            "mode": self.mode,
            "status": self.status,
            "elapsed_ms": round(self.elapsed_ms, 3) if timing else 0,
        }
        if self.witness is not None:
            d["witness"] = _jsonable(self.witness)
        return d


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks)

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)

    def __getitem__(self, key: str) -> Check:
        for c in self.checks:
            if c.id == key:
                return c
        raise KeyError(key)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.checks:
            if prefix:
                c = Check(prefix + c.id, c.passed, c.witness, c.ref, c.mode, c.elapsed_ms, c.skipped)
            self.checks.append(c)
        return self

    def first_failure(self) -> Check | None:
        for c in self.checks:
            if not (c.passed or c.skipped):
                return c
        return None

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not (c.passed or c.skipped)]

    def run(self, cid: str, fn, ref: str = "", mode: str = "exact") -> Check:
        """Time ``fn() -> (passed, witness)`` and record it."""
        t0 = time.perf_counter()
        passed, witness = fn()
        dt = (time.perf_counter() - t0) * 1000
        return self.add(Check(cid, bool(passed), None if passed else witness, ref, mode, dt))

    def to_dict(self, timing: bool = True) -> dict:
        checks = sorted((c.to_dict(timing) for c in self.checks), key=lambda d: d["id"])
        return {"meta": _jsonable(self.meta), "checks": checks}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        rows = [(c.id, c.status, c.mode, f"{c.elapsed_ms:.1f}", c.ref) for c in sorted(self.checks, key=lambda c: c.id)]
        head = ("check", "status", "mode", "ms", "claim")
        widths = [max(len(r[k]) for r in rows + [head]) for k in range(4)]
        out = ["  ".join(h.ljust(w) for h, w in zip(head[:4], widths)) + "  " + head[4]]
        for r in rows:
            out.append("  ".join(v.ljust(w) for v, w in zip(r[:4], widths)) + "  " + r[4])
        for c in self.checks:
            if c.witness is not None:
                out.append(f"witness {c.id}: {c.witness}")
        return "\n".join(out) + "\n"

    def __str__(self):
        return self.to_text()


def _jsonable(x):
    from .scalars import Scalar, format_scalar
    from fractions import Fraction

    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Scalar, Fraction)):
        return format_scalar(x)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)
