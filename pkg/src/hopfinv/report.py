"""Validation reports: a list of failed checks, each naming its subject."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Failure:
    check: str
    subject: str
    detail: str = ""

    def __str__(self):
        s = f"{self.check} fails on {self.subject}"
        return f"{s}: {self.detail}" if self.detail else s


@dataclass
class Report:
    kind: str
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def ran(self, check: str):
        if check not in self.checks:
            self.checks.append(check)

    def fail(self, check: str, subject, detail: str = ""):
        self.ran(check)
        self.failures.append(Failure(check, str(subject), detail))

    def failed_checks(self) -> set:
        return {f.check for f in self.failures}

    def lines(self) -> list[str]:
        head = f"{self.kind}: {'OK' if self.ok else 'FAILED'} ({len(self.checks)} checks)"
        return [head] + [f"  {f}" for f in self.failures]

    def __str__(self):
        return "\n".join(self.lines())
