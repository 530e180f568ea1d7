"""Pinch witnesses: coordinate embeddings with small member images and
uniform separation off a bounded family.

The separation and diameter comparisons run on exact squared distances; the
stated tolerance is subtracted from the thresholds before squaring, so no
floating point enters any verdict.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..colimit import ColimitBoundedness, FilteredSystem, extend_to_ambient
from ..errors import DomainError
from ..families import Family, Point, PointSet, reroot
from ..reports import Clause, Report, from_clauses
from .common import Bound, Target, bound_clause, ensure_over_target, resolve_bound

DEFAULT_TOL = Fraction(1, 10**9)
TOL_ENV_VAR = "COARSEKIT_PINCH_TOL"


def comparison_tolerance(tol: Optional[Fraction] = None) -> Fraction:
    if tol is not None:
        value = Fraction(tol)
    else:
        raw = os.environ.get(TOL_ENV_VAR)
        value = Fraction(raw) if raw else DEFAULT_TOL
    if value < 0:
        raise DomainError("comparison tolerance must be nonnegative")
    return value


def sq_dist(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class PinchWitness:
    space: PointSet
    dim: int
    coords: tuple[tuple[Fraction, ...], ...]
    scale: Family
    sep: Family
    c: Fraction
    eps: Fraction
    sep_bound: Bound = None

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("embedding dimension must be at least 1")
        if len(self.coords) != len(self.space):
            raise DomainError("one coordinate row per point is required")
        for row in self.coords:
            if len(row) != self.dim:
                raise DomainError("coordinate row length must match the dimension")
        if self.c <= 0 or self.eps <= 0:
            raise DomainError("separation and diameter thresholds must be positive")

    def vec(self, p: Point) -> tuple[Fraction, ...]:
        return self.coords[self.space.index(p)]


def pinch_witness(space, dim, coords, scale, sep, c, eps, sep_bound=None) -> PinchWitness:
    rows = tuple(tuple(Fraction(v) for v in row) for row in coords)
    return PinchWitness(
        space, dim, rows, scale, sep, Fraction(c), Fraction(eps), sep_bound
    )


def pinch_verify(
    target: Target, w: PinchWitness, tol: Optional[Fraction] = None
) -> Report:
    tol = comparison_tolerance(tol)
    ensure_over_target(target, w.scale, "input scale")
    ensure_over_target(target, w.sep, "separation family")
    if w.space != w.scale.space:
        raise DomainError("embedding is not over the target's point set")
    clauses = [bound_clause("separation family bounded", target, w.sep, w.sep_bound)]

    diam_threshold = w.eps - tol
    worst_pair = None
    worst = Fraction(-1)
    for m in w.scale.members:
        inside = w.space.sort(m)
        for a in range(len(inside)):
            for b in range(a + 1, len(inside)):
                d = sq_dist(w.vec(inside[a]), w.vec(inside[b]))
                if d > worst:
                    worst = d
                    worst_pair = (inside[a], inside[b])
    diam_ok = worst_pair is None or (
        diam_threshold > 0 and worst < diam_threshold**2
    )
    clauses.append(
        Clause(
            "image diameters stay below the pinch threshold",
            diam_ok,
            ""
            if worst_pair is None
            else f"extremal pair {worst_pair!r} at squared distance {worst}",
        )
    )

    sep_threshold = max(w.c - tol, Fraction(0))
    nearest_pair = None
    nearest = None
    ids = w.space.ids
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            pair = frozenset((ids[a], ids[b]))
            if any(pair <= m for m in w.sep.members):
                continue
            d = sq_dist(w.vec(ids[a]), w.vec(ids[b]))
            if nearest is None or d < nearest:
                nearest = d
                nearest_pair = (ids[a], ids[b])
    sep_ok = nearest is None or nearest >= sep_threshold**2
    clauses.append(
        Clause(
            "separated off the separation family",
            sep_ok,
            ""
            if nearest_pair is None
            else f"extremal pair {nearest_pair!r} at squared distance {nearest}",
        )
    )
    return from_clauses(clauses)


def pinch_lift(
    system: FilteredSystem,
    piece: int,
    w: PinchWitness,
    tol: Optional[Fraction] = None,
) -> PinchWitness:
    """Pad the piece embedding with one fresh coordinate per outside point.

    Outside points map to unit vectors on their own axes, so outside pairs
    sit at squared distance exactly 2 and mixed pairs at 1 plus the inside
    point's squared norm. Calibrated for unit separation only.
    """
    if w.c != 1:
        raise DomainError("lift is calibrated for unit separation")
    pc = system.pieces[piece]
    if not pinch_verify(pc.space, w, tol):
        raise DomainError("piece witness does not verify")
    outside = tuple(p for p in system.ambient.ids if p not in pc.carrier)
    dim = w.dim + len(outside)
    zero_pad = (Fraction(0),) * len(outside)
    zero_row = (Fraction(0),) * w.dim
    rows = []
    for p in system.ambient.ids:
        if p in pc.carrier:
            rows.append(w.vec(p) + zero_pad)
        else:
            k = outside.index(p)
            rows.append(
                zero_row
                + tuple(
                    Fraction(1) if j == k else Fraction(0)
                    for j in range(len(outside))
                )
            )
    singletons = tuple(frozenset({p}) for p in system.ambient.ids)
    sep = Family(
        system.ambient, reroot(w.sep, system.ambient).members + singletons
    )
    lvl = resolve_bound(pc.space, w.sep, w.sep_bound)
    return PinchWitness(
        system.ambient,
        dim,
        tuple(rows),
        extend_to_ambient(system, w.scale),
        sep,
        Fraction(1),
        w.eps,
        ColimitBoundedness(piece, lvl),
    )
