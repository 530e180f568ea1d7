"""Clause-separated verdict reports.

Every verifier returns a Report. The verdict is verified exactly when all
clauses pass. A failing clause marked as a truncation limit makes the verdict
undecided-at-truncation; any other failing clause makes it refuted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Verdict(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNDECIDED = "undecided-at-truncation"


@dataclass(frozen=True)
class Clause:
    name: str
    ok: bool
    detail: str = ""
    truncation: bool = False


@dataclass(frozen=True)
class Report:
    verdict: Verdict
    clauses: tuple[Clause, ...] = ()

    def __bool__(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> tuple[Clause, ...]:
        return tuple(c for c in self.clauses if not c.ok)


def from_clauses(clauses) -> Report:
    clauses = tuple(clauses)
    bad = [c for c in clauses if not c.ok]
    if not bad:
        return Report(Verdict.VERIFIED, clauses)
    if all(c.truncation for c in bad):
        return Report(Verdict.UNDECIDED, clauses)
    return Report(Verdict.REFUTED, clauses)
