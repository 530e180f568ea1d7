"""Property A: per-point tag sets with small symmetric-difference ratios.

Tag sets live in the product of the point set with a finite index range; the
range cap stands in for the naturals and is reported alongside the bounded
geometry cap. An empty intersection between neighbouring tag sets is a hard
failure: the ratio is undefined there, not infinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..colimit import ColimitBoundedness, FilteredSystem, extend_to_ambient
from ..errors import DomainError
from ..families import Family, Point, PointSet, reroot, star_set
from ..reports import Clause, Report, from_clauses
from ..spaces import ScaledSpace
from .common import Bound, Target, bound_clause, ensure_over_target, resolve_bound

Tag = tuple[Point, int]


@dataclass(frozen=True)
class PropertyAFamily:
    space: PointSet
    n_cap: int
    sets: tuple[frozenset, ...]
    scale: Family
    support: Family
    eps: Fraction
    support_bound: Bound = None

    def __post_init__(self):
        if self.n_cap < 1:
            raise DomainError("index cap must be at least 1")
        if len(self.sets) != len(self.space):
            raise DomainError("one tag set per point is required")
        for a in self.sets:
            for entry in a:
                if (
                    not isinstance(entry, tuple)
                    or len(entry) != 2
                    or not isinstance(entry[1], int)
                ):
                    raise DomainError("tags must be (point, index) pairs")
                if entry[0] not in self.space:
                    raise DomainError(f"tag point {entry[0]!r} is not in the space")
                if entry[1] < 1:
                    raise DomainError("tag indices start at 1")
        if self.eps <= 0:
            raise DomainError("ratio threshold must be positive")

    def tags(self, p: Point) -> frozenset:
        return self.sets[self.space.index(p)]


def geometry_cap(target: Target) -> int:
    """Largest member size over every level in sight."""
    if isinstance(target, ScaledSpace):
        levels = target.levels
    else:
        levels = tuple(
            lv for piece in target.pieces for lv in piece.space.levels
        )
    return max(len(m) for lv in levels for m in lv.members)


def pair_ratio(w: PropertyAFamily, x: Point, y: Point) -> Optional[Fraction]:
    ax, ay = w.tags(x), w.tags(y)
    denom = len(ax & ay)
    if denom == 0:
        return None
    return Fraction(len(ax ^ ay), denom)


def property_a_verify(target: Target, w: PropertyAFamily) -> Report:
    ensure_over_target(target, w.scale, "input scale")
    ensure_over_target(target, w.support, "support family")
    if w.space != w.scale.space:
        raise DomainError("tag sets are not over the target's point set")
    clauses = [
        Clause(
            "bounded geometry cap",
            True,
            f"largest member size {geometry_cap(target)}, index cap {w.n_cap}",
        ),
        bound_clause("support family bounded", target, w.support, w.support_bound),
    ]
    base = next((p for p in w.space.ids if (p, 1) not in w.tags(p)), None)
    clauses.append(
        Clause(
            "base tag present at every point",
            base is None,
            "" if base is None else f"point {base!r} lacks its base tag",
        )
    )
    confined = None
    for p in w.space.ids:
        star = star_set(frozenset({p}), w.support)
        for q, k in sorted(w.tags(p)):
            if k > w.n_cap or q not in star:
                confined = f"tag ({q!r}, {k}) at point {p!r} escapes the support star"
                break
        if confined:
            break
    clauses.append(
        Clause("tags confined to support stars", confined is None, confined or "")
    )
    offense = None
    for x in w.space.ids:
        for y in w.space.sort(star_set(frozenset({x}), w.scale)):
            r = pair_ratio(w, x, y)
            if r is None:
                offense = f"empty tag intersection for pair ({x!r}, {y!r})"
                break
            if not r < w.eps:
                offense = f"ratio {r} for pair ({x!r}, {y!r}) reaches the threshold"
                break
        if offense:
            break
    clauses.append(
        Clause(
            "symmetric difference ratios below threshold",
            offense is None,
            offense or "",
        )
    )
    return from_clauses(clauses)


def property_a_lift(
    system: FilteredSystem, piece: int, w: PropertyAFamily
) -> PropertyAFamily:
    """Keep piece tag sets; every outside point tags only itself."""
    pc = system.pieces[piece]
    if not property_a_verify(pc.space, w):
        raise DomainError("piece witness does not verify")
    sets = tuple(
        w.tags(p) if p in pc.carrier else frozenset({(p, 1)})
        for p in system.ambient.ids
    )
    outside = tuple(
        frozenset({p}) for p in system.ambient.ids if p not in pc.carrier
    )
    support = Family(
        system.ambient, reroot(w.support, system.ambient).members + outside
    )
    lvl = resolve_bound(pc.space, w.support, w.support_bound)
    return PropertyAFamily(
        system.ambient,
        w.n_cap,
        sets,
        extend_to_ambient(system, w.scale),
        support,
        w.eps,
        ColimitBoundedness(piece, lvl),
    )
