"""Verification verdicts and the report containers every verifier returns."""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .kernel import ToleranceBudget, fmt, max_abs

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    identity: str
    max_residual: mpq
    budget: ToleranceBudget
    verdict: str
    failures: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self):
        return self.verdict != FAIL

    def as_dict(self):
        d = {
            "identity": self.identity,
            "max_residual": fmt(self.max_residual),
            "budget": fmt(self.budget.limit),
            "verdict": self.verdict,
        }
        if self.note:
            d["note"] = self.note
        if self.failures:
            d["failures"] = [str(f) for f in self.failures[:20]]
        return d


def judge(identity, residuals, budget: ToleranceBudget, locations=None, note=""):
    """Build a :class:`Check` from residual values (optionally with locations).

    ``residuals`` may be a flat iterable of scalars; ``locations`` then gives a
    parallel label for each, used to localize failures.
    """
    residuals = list(residuals)
    failures = []
    if locations is not None:
        for loc, r in zip(locations, residuals):
            if not budget.accepts(abs(r)):
                failures.append(loc)
    worst = max_abs(residuals) if residuals else mpq(0)
    verdict = PASS if budget.accepts(worst) else FAIL
    return Check(identity, worst, budget, verdict, failures, note)


def skipped(identity, reason):
    return Check(identity, mpq(0), ToleranceBudget.exact(), SKIPPED, [], reason)


class Report:
    """Ordered collection of checks."""

    def __init__(self, title, checks=None):
        self.title = title
        self.checks = list(checks or [])

    def add(self, check):
        if isinstance(check, Report):
            self.checks.extend(check.checks)
        else:
            self.checks.append(check)
        return check

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.identity == name:
                return c
        raise KeyError(name)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)

    def names(self):
        return [c.identity for c in self.checks]

    def failed(self):
        return [c for c in self.checks if not c.ok]

    def summary(self):
        lines = [f"[{self.title}]"]
        for c in self.checks:
            lines.append(f"  {c.verdict:7s} {c.identity}  residual={float(c.max_residual):.3e}"
                         f"  budget={float(c.budget.limit):.3e}")
        return "\n".join(lines)

    def __repr__(self):
        return f"Report({self.title!r}, {len(self.checks)} checks, passed={self.passed})"
