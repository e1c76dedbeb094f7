"""Check-level reporting shared by the verifiers.

A check is pass/fail/inconclusive; inconclusive marks statements a
truncated computation could neither confirm nor refute, and never fails
a verification run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckResult:
    name: str
    outcome: str
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "outcome": self.outcome, "detail": self.detail}


@dataclass
class VerificationReport:
    title: str
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.checks.append(CheckResult(name, PASS if ok else FAIL, detail))

    def add_inconclusive(self, name: str, detail: str = ""):
        self.checks.append(CheckResult(name, INCONCLUSIVE, detail))

    @property
    def passed(self) -> bool:
        return all(c.outcome != FAIL for c in self.checks)

    @property
    def failures(self) -> Tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if c.outcome == FAIL)

    @property
    def inconclusive(self) -> Tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if c.outcome == INCONCLUSIVE)

    def to_dict(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def __repr__(self):
        status = "ok" if self.passed else "FAILED"
        return f"VerificationReport({self.title}: {status}, {len(self.checks)} checks)"
