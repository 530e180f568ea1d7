"""Checks on functions between spaces.

Covers image boundedness level by level, closeness of map pairs, coarse
equivalence round trips, and slowly oscillating behaviour against a metric
target. All distance arithmetic is exact: rationals plus an infinity marker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .colimit import FilteredSystem, extend_to_ambient, system_weakly_bounded
from .errors import DomainError
from .families import Family, Point, PointSet, Subset, star_set
from .reports import Clause, Report, Verdict, from_clauses
from .spaces import ScaledSpace, is_bounded, weakly_bounded

INF = math.inf

Distance = Union[Fraction, float]


@dataclass(frozen=True)
class GroundedMap:
    """Total function between finite point sets, images aligned with domain order."""

    domain: PointSet
    codomain: PointSet
    images: tuple[Point, ...]

    def __post_init__(self):
        if len(self.images) != len(self.domain):
            raise DomainError("one image per domain point is required")
        for q in self.images:
            if q not in self.codomain:
                raise DomainError(f"image {q!r} is not in the codomain")

    def __call__(self, p: Point) -> Point:
        return self.images[self.domain.index(p)]


def grounded_map(
    domain: PointSet,
    codomain: PointSet,
    rule: Union[Mapping[Point, Point], Callable[[Point], Point]],
) -> GroundedMap:
    get = rule.__getitem__ if isinstance(rule, Mapping) else rule
    try:
        images = tuple(get(p) for p in domain.ids)
    except KeyError as exc:
        raise DomainError(f"no image given for point {exc.args[0]!r}") from None
    return GroundedMap(domain, codomain, images)


def identity_map(pts: PointSet) -> GroundedMap:
    return GroundedMap(pts, pts, pts.ids)


def compose(outer: GroundedMap, inner: GroundedMap) -> GroundedMap:
    if inner.codomain != outer.domain:
        raise DomainError("maps do not compose: codomain/domain mismatch")
    return GroundedMap(
        inner.domain, outer.codomain, tuple(outer(q) for q in inner.images)
    )


def restrict_map(f: GroundedMap, carrier: Subset) -> GroundedMap:
    sub = PointSet(tuple(p for p in f.domain.ids if p in carrier))
    return GroundedMap(sub, f.codomain, tuple(f(p) for p in sub.ids))


def image_family(f: GroundedMap, u: Family) -> Family:
    if u.space != f.domain:
        raise DomainError("family is not over the map's domain")
    return Family(f.codomain, tuple(frozenset(f(p) for p in m) for m in u.members))


@dataclass(frozen=True)
class MetricTarget:
    """Finite metric target with rational distances; math.inf marks unreachable pairs."""

    points: PointSet
    rows: tuple[tuple[Distance, ...], ...]

    def dist(self, x: Point, y: Point) -> Distance:
        return self.rows[self.points.index(x)][self.points.index(y)]


def metric_target(pts: PointSet, rows) -> MetricTarget:
    n = len(pts)
    rows = tuple(
        tuple(d if d == INF else Fraction(d) for d in row) for row in rows
    )
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DomainError("distance matrix shape does not match the point set")
    for i in range(n):
        if rows[i][i] != 0:
            raise DomainError(f"nonzero self-distance at {pts.ids[i]!r}")
        for j in range(n):
            if rows[i][j] != rows[j][i]:
                raise DomainError("distance matrix is not symmetric")
            if rows[i][j] < 0:
                raise DomainError("negative distance")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a, b, c = rows[i][j], rows[i][k], rows[k][j]
                if a != INF and b != INF and c != INF and a > b + c:
                    raise DomainError(
                        f"triangle inequality fails on "
                        f"({pts.ids[i]!r}, {pts.ids[j]!r}, {pts.ids[k]!r})"
                    )
    return MetricTarget(pts, rows)


def path_metric(pts: PointSet) -> MetricTarget:
    """Integer-line distances taken in the given point order."""
    n = len(pts)
    rows = tuple(
        tuple(Fraction(abs(i - j)) for j in range(n)) for i in range(n)
    )
    return MetricTarget(pts, rows)


def image_diameter(f: GroundedMap, target: MetricTarget, member: Subset) -> Distance:
    pts = [f(p) for p in f.domain.sort(member)]
    best: Distance = Fraction(0)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = target.dist(pts[i], pts[j])
            if d == INF:
                return INF
            if d > best:
                best = d
    return best


def bornologous_levels(
    f: GroundedMap, src: ScaledSpace, dst: ScaledSpace
) -> tuple[Optional[int], ...]:
    """Least dst level bounding each src level's image family, None when absent."""
    if f.domain != src.points or f.codomain != dst.points:
        raise DomainError("map endpoints do not match the given spaces")
    return tuple(
        is_bounded(dst, image_family(f, src.level(i))) for i in range(1, src.depth + 1)
    )


def bornologous_check(f: GroundedMap, src: ScaledSpace, dst: ScaledSpace) -> Report:
    clauses = []
    for i, j in enumerate(bornologous_levels(f, src, dst), start=1):
        if j is None:
            clauses.append(
                Clause(
                    f"image of level {i}",
                    False,
                    "no level of the target chain bounds the image family",
                    truncation=True,
                )
            )
        else:
            clauses.append(Clause(f"image of level {i}", True, f"bounded at level {j}"))
    return from_clauses(clauses)


def system_bornologous_check(
    f: GroundedMap, src: FilteredSystem, dst: ScaledSpace
) -> Report:
    """Image boundedness of every extended piece level of the system."""
    if f.domain != src.ambient:
        raise DomainError("map domain is not the system's ambient point set")
    clauses = []
    for s, piece in enumerate(src.pieces):
        for i in range(1, piece.space.depth + 1):
            u = extend_to_ambient(src, piece.space.level(i))
            j = is_bounded(dst, image_family(f, u))
            name = f"image of piece {piece.name} level {i}"
            if j is None:
                clauses.append(
                    Clause(
                        name,
                        False,
                        "no level of the target chain bounds the image family",
                        truncation=True,
                    )
                )
            else:
                clauses.append(Clause(name, True, f"bounded at level {j}"))
    return from_clauses(clauses)


def close_violation(
    f: GroundedMap, g: GroundedMap, scale: Family
) -> Optional[Point]:
    """First domain point whose image pair fits in no member of the scale.

    Equal images never violate: the scale is read as trivially extended, so
    singleton witnesses always exist.
    """
    for x in f.domain.ids:
        a, b = f(x), g(x)
        if a == b:
            continue
        pair = frozenset((a, b))
        if not any(pair <= m for m in scale.members):
            return x
    return None


def close_check(f: GroundedMap, g: GroundedMap, dst: ScaledSpace) -> Optional[int]:
    """Least dst level whose trivially extended scale witnesses closeness."""
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DomainError("close maps need a shared domain and codomain")
    if f.codomain != dst.points:
        raise DomainError("codomain does not match the target space")
    for j in range(1, dst.depth + 1):
        if close_violation(f, g, dst.level(j)) is None:
            return j
    return None


def close_report(f: GroundedMap, g: GroundedMap, dst: ScaledSpace) -> Report:
    """Per-level closeness account; absence at every level refutes.

    Every available level is refuted by an explicit violating point, so the
    verdict speaks for this truncation's scales.
    """
    clauses = []
    found = None
    for j in range(1, dst.depth + 1):
        x = close_violation(f, g, dst.level(j))
        if x is None:
            if found is None:
                found = j
            clauses.append(Clause(f"level {j}", True, "all image pairs co-contained"))
        else:
            clauses.append(
                Clause(f"level {j}", False, f"violated at point {x!r}")
            )
    if found is not None:
        return Report(Verdict.VERIFIED, tuple(clauses))
    return Report(Verdict.REFUTED, tuple(clauses))


def coarse_equivalence_check(
    f: GroundedMap, g: GroundedMap, a: ScaledSpace, b: ScaledSpace
) -> Report:
    if f.domain != a.points or f.codomain != b.points:
        raise DomainError("forward map endpoints do not match the spaces")
    if g.domain != b.points or g.codomain != a.points:
        raise DomainError("backward map endpoints do not match the spaces")
    clauses = []
    fwd = bornologous_check(f, a, b)
    clauses.append(
        Clause(
            "forward map bornologous",
            bool(fwd),
            "; ".join(c.detail for c in fwd.failures()) or "all levels map",
            truncation=not fwd and fwd.verdict is Verdict.UNDECIDED,
        )
    )
    bwd = bornologous_check(g, b, a)
    clauses.append(
        Clause(
            "backward map bornologous",
            bool(bwd),
            "; ".join(c.detail for c in bwd.failures()) or "all levels map",
            truncation=not bwd and bwd.verdict is Verdict.UNDECIDED,
        )
    )
    j = close_check(compose(g, f), identity_map(a.points), a)
    clauses.append(
        Clause(
            "round trip on domain close to identity",
            j is not None,
            f"close at level {j}" if j is not None else "no level witnesses closeness",
        )
    )
    k = close_check(compose(f, g), identity_map(b.points), b)
    clauses.append(
        Clause(
            "round trip on codomain close to identity",
            k is not None,
            f"close at level {k}" if k is not None else "no level witnesses closeness",
        )
    )
    return from_clauses(clauses)


def _oscillation_clauses(
    f: GroundedMap,
    target: MetricTarget,
    scale: Family,
    eps: Fraction,
    b: Subset,
    weak_ok: bool,
) -> Report:
    clauses = [
        Clause(
            "witness set weakly bounded",
            weak_ok,
            "" if weak_ok else "some coarse component meets it beyond every member",
        )
    ]
    offender = None
    for m in scale.members:
        if m <= b:
            continue
        if not image_diameter(f, target, m) < eps:
            offender = m
            break
    clauses.append(
        Clause(
            "image diameters below threshold off the witness set",
            offender is None,
            ""
            if offender is None
            else "member {"
            + ", ".join(f.domain.sort(offender))
            + "} has image diameter >= threshold",
        )
    )
    return from_clauses(clauses)


def slowly_oscillating_verify(
    f: GroundedMap,
    target: MetricTarget,
    src: ScaledSpace,
    level: int,
    eps: Fraction,
    b: Subset,
) -> Report:
    if f.domain != src.points:
        raise DomainError("map domain does not match the space")
    if f.codomain != target.points:
        raise DomainError("map codomain does not match the metric target")
    if eps <= 0:
        raise DomainError("threshold must be positive")
    b = src.points.subset(b)
    return _oscillation_clauses(
        f, target, src.level(level), eps, b, weakly_bounded(src, b)
    )


def system_slowly_oscillating_verify(
    f: GroundedMap,
    target: MetricTarget,
    system: FilteredSystem,
    scale: Family,
    eps: Fraction,
    b: Subset,
) -> Report:
    if f.domain != system.ambient or scale.space != system.ambient:
        raise DomainError("map and scale must live over the system's ambient set")
    if f.codomain != target.points:
        raise DomainError("map codomain does not match the metric target")
    if eps <= 0:
        raise DomainError("threshold must be positive")
    b = system.ambient.subset(b)
    return _oscillation_clauses(
        f, target, scale, eps, b, system_weakly_bounded(system, b)
    )


def slowly_oscillating_search(
    f: GroundedMap,
    target: MetricTarget,
    src: ScaledSpace,
    level: int,
    eps: Fraction,
) -> Optional[Subset]:
    """A weakly bounded witness set, or None within the bounded search space.

    Any valid witness must contain every member whose image diameter reaches
    the threshold, so the union of those members is tried first and their
    star-thickened union second. Absence here never refutes.
    """
    scale = src.level(level)
    bad = [m for m in scale.members if not image_diameter(f, target, m) < eps]
    if not bad:
        return frozenset()
    candidates = [frozenset().union(*bad)]
    candidates.append(frozenset().union(*(star_set(m, scale) for m in bad)))
    seen = set()
    for b in candidates:
        if b in seen:
            continue
        seen.add(b)
        if slowly_oscillating_verify(f, target, src, level, eps, b):
            return b
    return None
