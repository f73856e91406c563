from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ConstructionReport:
    """What a builder found: ranks, invariant factors, verdicts, checks.

    Timings are collected but only serialized on request, so the default
    JSON is byte-identical across runs and thread counts.
    """

    construction: str
    parameters: dict[str, Any] = field(default_factory=dict)
    ranks: dict[str, int] = field(default_factory=dict)
    invariant_factors: dict[str, list[int]] = field(default_factory=dict)
    verdicts: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    @contextmanager
    def timed(self, stage: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[stage] = round(time.perf_counter() - start, 6)

    def to_dict(self, include_timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "construction": self.construction,
            "parameters": self.parameters,
            "ranks": self.ranks,
            "invariant_factors": self.invariant_factors,
            "verdicts": self.verdicts,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }
        if self.data:
            out["data"] = self.data
        if include_timings:
            out["timings"] = self.timings
        return out


__all__ = ["Check", "ConstructionReport"]
