"""Verification reports: named checks with pass/fail status and exact witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def to_jsonable(obj: Any):
    """Render witnesses and exact values into plain JSON data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "witness": to_jsonable(self.witness),
            "detail": self.detail,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]
    header: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}
        if self.header:
            out["header"] = self.header
        return out

    def __str__(self) -> str:
        lines = [self.header] if self.header else []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = f"  ({c.detail})" if c.detail and not c.passed else ""
            lines.append(f"{status} {c.name}{extra}")
        return "\n".join(lines)


def merge_reports(named: list[tuple[str, VerificationReport]]) -> VerificationReport:
    """Flatten sub-reports into one, prefixing check names."""
    checks = []
    for prefix, rep in named:
        for c in rep.checks:
            checks.append(Check(f"{prefix}:{c.name}", c.passed, c.witness, c.detail))
    return VerificationReport(tuple(checks))
