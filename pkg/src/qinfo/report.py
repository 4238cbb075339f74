"""Report record shared by the inequality suites."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class MetricReport:
    """One evaluated bound: lhs <= rhs with slack = rhs - lhs as computed."""

    name: str
    lhs: float
    rhs: float

    @property
    def slack(self):
        return self.rhs - self.lhs

    def holds(self, tol=1e-9):
        return self.slack >= -tol

    def __str__(self):
        mark = "ok " if self.holds() else "VIOLATED"
        return f"{self.name}: lhs={self.lhs:.9g} rhs={self.rhs:.9g} slack={self.slack:.3g} [{mark}]"
