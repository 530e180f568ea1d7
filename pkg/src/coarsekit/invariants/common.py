"""Shared plumbing for invariant verifiers.

A verifier target is either a single scaled space or a filtered system, and a
boundedness claim is a level index, a piece certificate, or None to request a
search. Absence under search is reported as a truncation failure; an explicit
claim that fails to check is a hard failure.
"""

from __future__ import annotations

from typing import Optional, Union

from ..colimit import ColimitBoundedness, FilteredSystem, check_boundedness, colimit_bounded
from ..errors import DomainError
from ..families import Family, PointSet, essentially_refines
from ..reports import Clause
from ..spaces import ScaledSpace, is_bounded

Target = Union[ScaledSpace, FilteredSystem]
Bound = Union[int, ColimitBoundedness, None]


def target_points(target: Target) -> PointSet:
    if isinstance(target, ScaledSpace):
        return target.points
    return target.ambient


def ensure_over_target(target: Target, fam: Family, what: str) -> None:
    if fam.space != target_points(target):
        raise DomainError(f"{what} is not over the target's point set")


def find_bound(target: Target, fam: Family) -> Bound:
    if isinstance(target, ScaledSpace):
        return is_bounded(target, fam)
    return colimit_bounded(target, fam)


def bound_holds(target: Target, fam: Family, bound: Union[int, ColimitBoundedness]) -> bool:
    if isinstance(target, ScaledSpace):
        if not isinstance(bound, int):
            raise DomainError("a single space takes a level index as its bound")
        if not 1 <= bound <= target.depth:
            return False
        return essentially_refines(fam, target.level(bound))
    if not isinstance(bound, ColimitBoundedness):
        raise DomainError("a system takes a piece certificate as its bound")
    return check_boundedness(target, fam, bound)


def describe_bound(bound: Union[int, ColimitBoundedness]) -> str:
    if isinstance(bound, int):
        return f"bounded at level {bound}"
    return f"bounded in piece {bound.piece} at level {bound.level}"


def bound_clause(name: str, target: Target, fam: Family, bound: Bound) -> Clause:
    if bound is None:
        found = find_bound(target, fam)
        if found is None:
            return Clause(
                name,
                False,
                "no bounding level within this truncation",
                truncation=True,
            )
        return Clause(name, True, describe_bound(found))
    if bound_holds(target, fam, bound):
        return Clause(name, True, describe_bound(bound))
    return Clause(name, False, "claimed boundedness certificate does not check")


def resolve_bound(target: Target, fam: Family, bound: Bound) -> Bound:
    """An explicit bound passed through, or the first found by search."""
    if bound is not None:
        return bound
    return find_bound(target, fam)
