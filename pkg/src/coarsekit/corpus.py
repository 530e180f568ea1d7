"""Reference instance generators.

Each generator returns a fully validated system (or a bundle around one) and
records its truncation parameters in the system's meta strings. Sizes are
capped so every instance stays enumerable; exceeding a cap is a hard error,
not a silent clamp.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .colimit import FilteredSystem, Piece, validate_system
from .errors import DomainError, ValidationError
from .families import Family, PointSet
from .maps import GroundedMap, INF, MetricTarget, metric_target
from .spaces import ScaledSpace, restrict, validate_space

MAX_GRID_POINTS = 512
MAX_ISLANDS = 4
MAX_ISLAND_POINTS = 64
MAX_HARMONIC_DEPTH = 64
MAX_RANDOM_POINTS = 12
MAX_RANDOM_PIECES = 4
MAX_RANDOM_DEPTH = 3


def _check_radii(radii) -> tuple:
    out = tuple(Fraction(r) for r in radii)
    if not out:
        raise DomainError("at least one radius is required")
    if any(r <= 0 for r in out):
        raise DomainError("radii must be positive")
    if any(a > b for a, b in zip(out, out[1:])):
        raise DomainError("radii must be non-decreasing")
    return out


def _ball_levels(pts: PointSet, dist, radii) -> tuple[Family, ...]:
    levels = []
    for r in radii:
        members = tuple(
            frozenset(q for q in pts.ids if dist(p, q) <= r) for p in pts.ids
        )
        levels.append(Family(pts, members))
    return tuple(levels)


def _doubling_radii(diameter: Fraction) -> tuple[Fraction, ...]:
    radii = [Fraction(1)]
    while radii[-1] < diameter:
        radii.append(radii[-1] * 2)
    return tuple(radii)


# integer grids with vanishing tails


def gen_c0(s_max: int, box: int, radii: Optional[Sequence] = None) -> FilteredSystem:
    """Nested grid system: piece s holds the tuples supported on the first
    s coordinates, each carrying its l1-ball chain.

    Default radii double from 1 up to the grid diameter, which keeps every
    pair of piece chains compatible on overlaps; custom radii are validated
    the hard way and may be rejected.
    """
    if s_max < 1:
        raise DomainError("at least one coordinate is required")
    if box < 0:
        raise DomainError("the box radius must be non-negative")
    total = (2 * box + 1) ** s_max
    if total > MAX_GRID_POINTS:
        raise DomainError(
            f"cap exceeded: {total} grid points, at most {MAX_GRID_POINTS} allowed"
        )
    coords = list(itertools.product(range(-box, box + 1), repeat=s_max))
    ident = {c: ",".join(str(v) for v in c) for c in coords}
    ambient = PointSet(tuple(ident[c] for c in coords))

    def l1(a, b):
        return sum(abs(x - y) for x, y in zip(a, b))

    diameter = Fraction(2 * box * s_max)
    rs = _check_radii(radii) if radii is not None else _doubling_radii(diameter)
    pieces = []
    for s in range(1, s_max + 1):
        sub = [c for c in coords if all(v == 0 for v in c[s:])]
        pts = PointSet(tuple(ident[c] for c in sub))
        by_id = {ident[c]: c for c in sub}
        levels = _ball_levels(pts, lambda p, q: l1(by_id[p], by_id[q]), rs)
        space = validate_space(pts, levels)
        pieces.append(Piece(f"grid{s}", frozenset(pts.ids), space))
    meta = (
        f"truncation: integer tuples of length {s_max} within [-{box}, {box}]",
        "radii: " + ", ".join(str(r) for r in rs),
    )
    return validate_system(ambient, tuple(pieces), None, meta)


# finite disjoint unions of metric islands


def gen_disjoint_union(
    islands: Sequence[MetricTarget], radii: Optional[Sequence] = None
) -> FilteredSystem:
    """Union-of-islands system: pieces are single islands, island pairs, and
    the full union; balls never cross islands, so piece chains agree on
    every overlap by construction.
    """
    if not islands:
        raise DomainError("at least one island is required")
    if len(islands) > MAX_ISLANDS:
        raise DomainError(
            f"cap exceeded: {len(islands)} islands, at most {MAX_ISLANDS} allowed"
        )
    total = sum(len(isl.points) for isl in islands)
    if total > MAX_ISLAND_POINTS:
        raise DomainError(
            f"cap exceeded: {total} points, at most {MAX_ISLAND_POINTS} allowed"
        )
    tagged = [
        (k, p, f"{k}:{p}") for k, isl in enumerate(islands) for p in isl.points.ids
    ]
    ambient = PointSet(tuple(full_id for _, _, full_id in tagged))
    finite = [
        d
        for isl in islands
        for row in isl.rows
        for d in row
        if d != INF
    ]
    diameter = max(finite) if finite else Fraction(0)
    rs = _check_radii(radii) if radii is not None else _doubling_radii(diameter)

    groups: list[tuple[int, ...]] = [(k,) for k in range(len(islands))]
    groups += list(itertools.combinations(range(len(islands)), 2))
    full = tuple(range(len(islands)))
    if full not in groups:
        groups.append(full)

    pieces = []
    for group in groups:
        pts = PointSet(tuple(full_id for k, _, full_id in tagged if k in group))
        levels = []
        for r in rs:
            members = tuple(
                frozenset(
                    f"{k}:{q}"
                    for q in islands[k].points.ids
                    if islands[k].dist(p, q) <= r
                )
                for k in group
                for p in islands[k].points.ids
            )
            levels.append(Family(pts, members))
        space = validate_space(pts, tuple(levels))
        name = "+".join(f"M{k}" for k in group)
        pieces.append(Piece(name, frozenset(pts.ids), space))
    meta = (
        f"truncation: {len(islands)} islands, pieces up to pairs plus the union",
        "radii: " + ", ".join(str(r) for r in rs),
    )
    return validate_system(ambient, tuple(pieces), None, meta)


# the harmonic-point interval with its reciprocal map


@dataclass(frozen=True)
class UnitIntervalInstance:
    """Harmonic-point system with the reciprocal and constant maps.

    ``piece_chains[n]`` is a target chain deep enough for the two maps to be
    close over piece ``n`` alone; ``colimit_chain`` stays shallow enough that
    every one of its levels is violated over the whole system, and the first
    violating point at a level whose widest member has diameter M is the
    domain point 1/(M+2).
    """

    system: FilteredSystem
    f: GroundedMap
    g: GroundedMap
    target: MetricTarget
    piece_chains: tuple[ScaledSpace, ...]
    colimit_chain: ScaledSpace


def _integer_chain(pts: PointSet, radii: Sequence[int]) -> ScaledSpace:
    value = {p: int(p) for p in pts.ids}

    def dist(a, b):
        return abs(value[a] - value[b])

    return validate_space(pts, _ball_levels(pts, dist, radii))


def gen_unit_interval(n_max: int) -> UnitIntervalInstance:
    if n_max < 2:
        raise DomainError("at least two pieces are required")
    if n_max > MAX_HARMONIC_DEPTH:
        raise DomainError(
            f"cap exceeded: n_max={n_max}, at most {MAX_HARMONIC_DEPTH} allowed"
        )
    values = [Fraction(1, m) for m in range(1, n_max + 2)]
    ident = {v: str(v) for v in values}
    ambient = PointSet(tuple(ident[v] for v in values))
    ladder = tuple(Fraction(2**j, 2**3) for j in range(4))

    pieces = []
    for n in range(1, n_max + 1):
        sub = values[: n + 1]
        pts = PointSet(tuple(ident[v] for v in sub))
        by_id = {ident[v]: v for v in sub}
        levels = _ball_levels(pts, lambda p, q: abs(by_id[p] - by_id[q]), ladder)
        space = validate_space(pts, levels)
        pieces.append(Piece(f"X{n}", frozenset(pts.ids), space))
    meta = (
        f"truncation: harmonic points 1/m for m up to {n_max + 1}",
        "radii: " + ", ".join(str(r) for r in ladder),
    )
    system = validate_system(ambient, tuple(pieces), None, meta)

    target_pts = PointSet(tuple(str(i) for i in range(n_max + 2)))
    rows = tuple(
        tuple(Fraction(abs(i - j)) for j in range(n_max + 2))
        for i in range(n_max + 2)
    )
    target = metric_target(target_pts, rows)

    f = GroundedMap(
        ambient, target_pts, tuple(str(m) for m in range(1, n_max + 2))
    )
    g = GroundedMap(ambient, target_pts, tuple("1" for _ in ambient.ids))

    piece_chains = []
    for n in range(1, n_max + 1):
        radii = [1]
        while 2 * radii[-1] < n:
            radii.append(2 * radii[-1])
        piece_chains.append(_integer_chain(target_pts, radii))
    radii, r = [], 1
    while 2 * r <= n_max - 1:
        radii.append(r)
        r *= 2
    colimit_chain = _integer_chain(target_pts, radii or [1])
    return UnitIntervalInstance(
        system, f, g, target, tuple(piece_chains), colimit_chain
    )


# seeded random systems


@dataclass(frozen=True)
class RandomCaps:
    points: int = MAX_RANDOM_POINTS
    pieces: int = MAX_RANDOM_PIECES
    depth: int = MAX_RANDOM_DEPTH

    def __post_init__(self):
        if not 2 <= self.points <= MAX_RANDOM_POINTS:
            raise DomainError(f"points cap must lie in 2..{MAX_RANDOM_POINTS}")
        if not 1 <= self.pieces <= MAX_RANDOM_PIECES:
            raise DomainError(f"pieces cap must lie in 1..{MAX_RANDOM_PIECES}")
        if not 1 <= self.depth <= MAX_RANDOM_DEPTH:
            raise DomainError(f"depth cap must lie in 1..{MAX_RANDOM_DEPTH}")


def _coarsen(rng: random.Random, members: tuple, width: int) -> tuple:
    """Group the members randomly and take unions, one group per new member."""
    order = list(range(len(members)))
    rng.shuffle(order)
    out = []
    while order:
        take = min(len(order), rng.randint(1, width))
        chunk, order = order[:take], order[take:]
        out.append(frozenset().union(*(members[i] for i in chunk)))
    return tuple(out)


def _random_base_cover(rng: random.Random, ids: list) -> tuple:
    members = []
    for p in ids:
        others = [q for q in ids if q != p]
        extra = rng.sample(others, k=rng.randint(0, min(2, len(others))))
        members.append(frozenset([p, *extra]))
    return tuple(members)


def _random_partition(rng: random.Random, ids: list) -> tuple:
    order = ids[:]
    rng.shuffle(order)
    members = []
    while order:
        take = min(len(order), rng.randint(1, 3))
        members.append(frozenset(order[:take]))
        order = order[take:]
    return tuple(members)


def _line_levels(pts: PointSet, depth: int) -> tuple[Family, ...]:
    n = len(pts)
    radii = [Fraction(n)]
    while len(radii) < depth:
        radii.append(max(Fraction(1), radii[-1] / 2))
    radii.reverse()

    def dist(a, b):
        return abs(pts.index(a) - pts.index(b))

    return _ball_levels(pts, dist, radii)


def _island_levels(rng: random.Random, pts: PointSet, depth: int):
    ids = list(pts.ids)
    k = rng.randint(2, min(3, len(ids)))
    order = ids[:]
    rng.shuffle(order)
    cuts = sorted(rng.sample(range(1, len(ids)), k - 1))
    blocks = []
    prev = 0
    for c in [*cuts, len(ids)]:
        blocks.append(order[prev:c])
        prev = c
    home = {p: b for b, block in enumerate(blocks) for p in block}
    spot = {p: i for block in blocks for i, p in enumerate(block)}

    def dist(a, b):
        if home[a] != home[b]:
            return INF
        return abs(spot[a] - spot[b])

    radii = [Fraction(2 ** (depth - 1 - j)) for j in range(depth)]
    radii.reverse()
    top = max(len(b) for b in blocks)
    radii[-1] = max(radii[-1], Fraction(top))
    return _ball_levels(pts, dist, radii), blocks, home


def gen_random_system(seed: int, caps: RandomCaps = RandomCaps()) -> FilteredSystem:
    """Deterministic random system: a full-carrier piece with a randomly
    grown chain plus a few sub-pieces carrying the restricted chain, so the
    result validates by construction. The rejection count is recorded in the
    meta strings either way.
    """
    rng = random.Random(seed)
    last: Optional[Exception] = None
    for attempt in range(1, 51):
        n = rng.randint(2, caps.points)
        depth = rng.randint(1, caps.depth)
        ids = [f"p{i}" for i in range(n)]
        ambient = PointSet(tuple(ids))
        variant = rng.choice(("blocks", "overlap", "line", "islands"))
        blocks = None
        if variant == "line":
            levels = _line_levels(ambient, depth)
        elif variant == "islands":
            levels, blocks, _ = _island_levels(rng, ambient, depth)
        else:
            base = (
                _random_partition(rng, ids)
                if variant == "blocks"
                else _random_base_cover(rng, ids)
            )
            grown = [base]
            while len(grown) < depth:
                grown.append(_coarsen(rng, grown[-1], 3))
            levels = tuple(Family(ambient, lv) for lv in grown)
        try:
            full_space = validate_space(ambient, levels)
            sub_count = rng.randint(0, caps.pieces - 1)
            pieces = []
            for j in range(sub_count):
                if blocks is not None:
                    chosen = rng.sample(range(len(blocks)), rng.randint(1, len(blocks) - 1))
                    carrier = frozenset(p for b in sorted(chosen) for p in blocks[b])
                else:
                    carrier = frozenset(rng.sample(ids, rng.randint(1, n - 1)))
                pieces.append(
                    Piece(f"sub{j}", carrier, restrict(full_space, carrier))
                )
            pieces.append(Piece("all", frozenset(ids), full_space))
            meta = (
                f"seed: {seed}",
                f"variant: {variant}",
                f"attempts: {attempt}",
            )
            return validate_system(ambient, tuple(pieces), None, meta)
        except (ValidationError, DomainError) as exc:
            last = exc
    raise ValidationError(
        f"no valid random system within 50 attempts for seed {seed}: {last}"
    )
