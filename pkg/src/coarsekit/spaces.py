"""Scaled spaces: finite monotone chains of covers standing in for an
infinite large scale structure.

A ScaledSpace carries its certified star depth: the largest d such that for
all levels i, j <= d the member-wise star of level i against level j
essentially refines some level of the chain. Operations that would need stars
past that depth raise TruncationError instead of silently extending the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DomainError, ValidationError
from .families import (
    Family,
    Point,
    PointSet,
    Subset,
    covers,
    essentially_refines,
    refines,
    star_family,
    uncovered_point,
)


@dataclass(frozen=True)
class ScaledSpace:
    points: PointSet
    levels: tuple[Family, ...]
    star_depth: int

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, i: int) -> Family:
        """1-based chain level."""
        if not 1 <= i <= len(self.levels):
            raise DomainError(f"level {i} out of range 1..{len(self.levels)}")
        return self.levels[i - 1]


def _compute_star_depth(levels: tuple[Family, ...]) -> int:
    depth = 0
    for cand in range(1, len(levels) + 1):
        new_pairs = [(cand - 1, j) for j in range(cand)] + [
            (i, cand - 1) for i in range(cand - 1)
        ]
        ok = True
        for i, j in new_pairs:
            st = star_family(levels[i], levels[j])
            if not any(essentially_refines(st, lv) for lv in levels):
                ok = False
                break
        if not ok:
            break
        depth = cand
    return depth


def validate_space(pts: PointSet, levels: Iterable[Family]) -> ScaledSpace:
    """Check covering and monotonicity, certify star depth, build the space."""
    levels = tuple(levels)
    if not levels:
        raise ValidationError("a scaled space needs at least one level")
    for i, lv in enumerate(levels, 1):
        if lv.space != pts:
            raise DomainError(f"level {i} is not over the space's point set")
        missing = uncovered_point(lv)
        if missing is not None:
            raise ValidationError(f"level {i} does not cover: point {missing!r} is in no member")
    for i in range(len(levels) - 1):
        if not refines(levels[i], levels[i + 1]):
            raise ValidationError(
                f"chain not monotone: level {i + 1} does not refine level {i + 2}"
            )
    return ScaledSpace(pts, levels, _compute_star_depth(levels))


def is_bounded(space: ScaledSpace, f: Family) -> Optional[int]:
    """Least level that the family essentially refines, if any.

    Singleton and empty members never matter, so the all-singleton family is
    bounded at level 1.
    """
    if f.space != space.points:
        raise DomainError("family is not over the space's point set")
    for i, lv in enumerate(space.levels, 1):
        if essentially_refines(f, lv):
            return i
    return None


def restrict(space: ScaledSpace, carrier: Subset) -> ScaledSpace:
    """Subspace on a non-empty carrier: intersect members, drop empties, revalidate."""
    carrier = space.points.subset(carrier)
    if not carrier:
        raise DomainError("restriction carrier must be non-empty")
    pts = PointSet(tuple(p for p in space.points.ids if p in carrier))
    new_levels = []
    for lv in space.levels:
        members = tuple(m & carrier for m in lv.members if m & carrier)
        new_levels.append(Family(pts, members))
    return validate_space(pts, new_levels)


def chains_coincide(a: ScaledSpace, b: ScaledSpace) -> bool:
    """Mutual essential cofinality of the two chains over the same points."""
    if a.points != b.points:
        raise DomainError("spaces live over different point sets")
    for la in a.levels:
        if not any(essentially_refines(la, lb) for lb in b.levels):
            return False
    for lb in b.levels:
        if not any(essentially_refines(lb, la) for la in a.levels):
            return False
    return True


def coincidence_failure(a: ScaledSpace, b: ScaledSpace) -> Optional[tuple[str, int]]:
    """Which side and 1-based level breaks coincidence, for error reporting."""
    for i, la in enumerate(a.levels, 1):
        if not any(essentially_refines(la, lb) for lb in b.levels):
            return ("first", i)
    for i, lb in enumerate(b.levels, 1):
        if not any(essentially_refines(lb, la) for la in a.levels):
            return ("second", i)
    return None


def coarse_components(space: ScaledSpace) -> tuple[Subset, ...]:
    """Partition of the points by overlap-connectivity through any chain level.

    The chain is monotone, so this equals the top level's block partition and
    also the union over levels of per-level blocks.
    """
    idx = space.points.index
    parent = list(range(len(space.points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for lv in space.levels:
        for m in lv.members:
            it = iter(m)
            first = next(it, None)
            if first is None:
                continue
            ra = find(idx(first))
            for p in it:
                rb = find(idx(p))
                if ra != rb:
                    parent[rb] = ra
    blocks: dict[int, set] = {}
    for i, p in enumerate(space.points.ids):
        blocks.setdefault(find(i), set()).add(p)
    ordered = sorted(blocks.values(), key=lambda b: min(idx(p) for p in b))
    return tuple(frozenset(b) for b in ordered)


def coarse_chain_component(space: ScaledSpace, p: Point) -> Subset:
    if p not in space.points:
        raise DomainError(f"point {p!r} not in this space")
    for block in coarse_components(space):
        if p in block:
            return block
    raise AssertionError("components must cover the point set")


def weakly_bounded(space: ScaledSpace, b: Subset) -> bool:
    """b meets every coarse component inside a single member of some level."""
    b = space.points.subset(b)
    for block in coarse_components(space):
        inter = b & block
        if not any(inter <= m for lv in space.levels for m in lv.members):
            return False
    return True
