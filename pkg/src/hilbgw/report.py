"""Check reports shared by the verification routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    checked: int = 0
    failure: str | None = None
    notes: list[str] = field(default_factory=list)

    def record(self, ok: bool, label: str) -> bool:
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.failure = label
        return ok

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked}
        if self.failure is not None:
            out["first_failure"] = self.failure
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f" (first failure: {self.failure})" if self.failure else ""
        return f"{status} {self.name}: {self.checked} comparisons{tail}"
