"""Machine-readable outcome of an exhaustive identity sweep."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerificationReport:
    check: str
    params: dict[str, Any]
    status: str = "pass"
    witness: dict[str, str] | None = None
    triples_checked: int = 0
    duration_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, **witness: Any) -> None:
        self.status = "fail"
        self.witness = {k: str(v) for k, v in witness.items()}

    def to_json(self) -> dict[str, Any]:
        # key order is part of the output contract
        return {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "witness": self.witness,
            "counts": {"triples_checked": self.triples_checked},
            "duration_ms": self.duration_ms,
        }

    def summary(self) -> str:
        line = f"{self.check}: {self.status} ({self.triples_checked} checked)"
        if self.witness:
            parts = ", ".join(f"{k}={v}" for k, v in self.witness.items())
            line += f"\n  witness: {parts}"
        return line


@dataclass
class Stopwatch:
    start: float = field(default_factory=time.perf_counter)

    def ms(self) -> int:
        return int((time.perf_counter() - self.start) * 1000)


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "VerificationReport",
    "type": "object",
    "required": ["check", "params", "status", "witness", "counts", "duration_ms"],
    "additionalProperties": False,
    "properties": {
        "check": {"type": "string"},
        "params": {"type": "object"},
        "status": {"enum": ["pass", "fail"]},
        "witness": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["residual"],
                    "additionalProperties": {"type": "string"},
                },
            ]
        },
        "counts": {
            "type": "object",
            "required": ["triples_checked"],
            "properties": {"triples_checked": {"type": "integer", "minimum": 0}},
        },
        "duration_ms": {"type": "integer", "minimum": 0},
    },
    "if": {"properties": {"status": {"const": "fail"}}},
    "then": {"properties": {"witness": {"type": "object"}}},
}
