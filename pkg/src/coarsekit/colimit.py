"""Finite presentations of asymptotic filtered colimits.

A FilteredSystem is a list of pieces (carrier + scaled space over it) covering
an ambient point set, with an upper-bound map on piece pairs and pairwise
coincidence of restricted chains. A family over the ambient set is
colimit-bounded when, for some piece, every member with more than one point
sits inside the carrier and the family stripped of outside singletons is
bounded in that piece's chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError, TruncationError, ValidationError
from .families import (
    Family,
    Point,
    PointSet,
    Subset,
    essentially_refines,
    reroot,
    star_family,
    trivial_extension,
)
from .spaces import (
    ScaledSpace,
    coarse_components,
    coincidence_failure,
    is_bounded,
    restrict,
)


@dataclass(frozen=True)
class Piece:
    name: str
    carrier: Subset
    space: ScaledSpace


@dataclass(frozen=True)
class ColimitBoundedness:
    """Certificate: strip the family to the piece's carrier and it essentially
    refines that piece's chain at the stated 1-based level. Only existence is
    contractual; a different valid piece is an equally good certificate."""

    piece: int
    level: int


@dataclass(frozen=True)
class FilteredSystem:
    ambient: PointSet
    pieces: tuple[Piece, ...]
    upper: tuple[tuple[int, int, int], ...]
    meta: tuple[str, ...] = field(default=(), compare=False)
    _upper_map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        m = {}
        for r, s, t in self.upper:
            m[(min(r, s), max(r, s))] = t
        object.__setattr__(self, "_upper_map", m)

    def piece_index(self, name: str) -> int:
        for i, p in enumerate(self.pieces):
            if p.name == name:
                return i
        raise DomainError(f"no piece named {name!r}")

    def upper_piece(self, r: int, s: int) -> int:
        key = (min(r, s), max(r, s))
        try:
            return self._upper_map[key]
        except KeyError:
            raise DomainError(f"no upper bound recorded for pieces {r}, {s}") from None


def _carrier_points(ambient: PointSet, carrier: Subset) -> PointSet:
    return PointSet(tuple(p for p in ambient.ids if p in carrier))


def validate_system(
    ambient: PointSet,
    pieces: Sequence[Piece],
    upper: Optional[Mapping[tuple[int, int], int]] = None,
    meta: Iterable[str] = (),
) -> FilteredSystem:
    """Check coverage, directedness, and pairwise coincidence of restrictions.

    When upper is None or partial, missing pairs are filled by scanning for
    the least piece whose carrier contains the union; an unfillable pair is a
    directedness failure.
    """
    pieces = tuple(pieces)
    if not pieces:
        raise ValidationError("a system needs at least one piece")
    names = [p.name for p in pieces]
    if len(set(names)) != len(names):
        raise ValidationError("piece names must be distinct")
    for p in pieces:
        for q in p.carrier:
            if q not in ambient:
                raise DomainError(f"piece {p.name!r} carrier leaves the ambient set")
        if p.space.points != _carrier_points(ambient, p.carrier):
            raise DomainError(f"piece {p.name!r} space is not over its carrier")
    covered = set()
    for p in pieces:
        covered |= p.carrier
    for q in ambient.ids:
        if q not in covered:
            raise ValidationError(f"carriers do not cover: point {q!r} is in no piece")

    table: dict[tuple[int, int], int] = {}
    n = len(pieces)
    for r in range(n):
        for s in range(r, n):
            t = None if upper is None else upper.get((r, s), upper.get((s, r)))
            union = pieces[r].carrier | pieces[s].carrier
            if t is not None:
                if not union <= pieces[t].carrier:
                    raise ValidationError(
                        f"directedness failure: upper({names[r]}, {names[s]}) = "
                        f"{names[t]} does not contain the union"
                    )
            else:
                for cand in range(n):
                    if union <= pieces[cand].carrier:
                        t = cand
                        break
                if t is None:
                    raise ValidationError(
                        f"directedness failure: no piece contains "
                        f"{names[r]} union {names[s]}"
                    )
            table[(r, s)] = t

    for r in range(n):
        for s in range(r + 1, n):
            inter = pieces[r].carrier & pieces[s].carrier
            if not inter:
                continue
            ra = restrict(pieces[r].space, inter)
            rb = restrict(pieces[s].space, inter)
            failure = coincidence_failure(ra, rb)
            if failure is not None:
                side, lvl = failure
                owner = names[r] if side == "first" else names[s]
                raise ValidationError(
                    f"restrictions of pieces {names[r]} and {names[s]} do not "
                    f"coincide: level {lvl} of {owner} restricted to the "
                    f"intersection essentially refines no level of the other"
                )

    triples = tuple(sorted((r, s, t) for (r, s), t in table.items()))
    return FilteredSystem(ambient, pieces, triples, tuple(meta))


def strip(f: Family, carrier: Subset) -> Family:
    """Drop singleton members lying outside the carrier; keep everything else."""
    return Family(
        f.space,
        tuple(m for m in f.members if len(m) != 1 or m <= carrier),
    )


def _check_ambient(system: FilteredSystem, f: Family) -> None:
    if f.space != system.ambient:
        raise DomainError("family is not over the system's ambient point set")


def colimit_bounded(system: FilteredSystem, f: Family) -> Optional[ColimitBoundedness]:
    """First piece (ascending index) admitting the family, with least level.

    Absence means not bounded within this truncation; it never proves
    unboundedness of a deeper presentation.
    """
    _check_ambient(system, f)
    for s, piece in enumerate(system.pieces):
        if not all(len(m) <= 1 or m <= piece.carrier for m in f.members):
            continue
        inner = reroot(strip(f, piece.carrier), piece.space.points)
        lvl = is_bounded(piece.space, inner)
        if lvl is not None:
            return ColimitBoundedness(s, lvl)
    return None


def check_boundedness(system: FilteredSystem, f: Family, cert: ColimitBoundedness) -> bool:
    """Does the certificate actually certify the family?"""
    _check_ambient(system, f)
    if not 0 <= cert.piece < len(system.pieces):
        return False
    piece = system.pieces[cert.piece]
    if not 1 <= cert.level <= piece.space.depth:
        return False
    if not all(len(m) <= 1 or m <= piece.carrier for m in f.members):
        return False
    inner = reroot(strip(f, piece.carrier), piece.space.points)
    return essentially_refines(inner, piece.space.level(cert.level))


def colimit_star(
    system: FilteredSystem, f: Family, g: Family
) -> tuple[Family, ColimitBoundedness]:
    """Member-wise star of f against g, with a boundedness certificate.

    Both inputs are stripped to their certifying pieces, pushed into the upper
    piece t, starred there against the stripped g, and the bounding level of
    that pushed star certifies the ambient star family. Raises
    TruncationError when piece t's chain lacks the star depth to certify.
    """
    cf = colimit_bounded(system, f)
    cg = colimit_bounded(system, g)
    if cf is None:
        raise TruncationError(
            "first family has no boundedness certificate within this truncation"
        )
    if cg is None:
        raise TruncationError(
            "second family has no boundedness certificate within this truncation"
        )
    t = system.upper_piece(cf.piece, cg.piece)
    pt = system.pieces[t]
    fs = reroot(strip(f, system.pieces[cf.piece].carrier), pt.space.points)
    gs = reroot(strip(g, system.pieces[cg.piece].carrier), pt.space.points)
    i = is_bounded(pt.space, fs)
    j = is_bounded(pt.space, gs)
    if i is None or j is None:
        raise TruncationError(
            f"piece {pt.name!r} chain is too shallow to absorb the stripped inputs"
        )
    if max(i, j) > pt.space.star_depth:
        raise TruncationError(
            f"star budget exhausted in piece {pt.name!r}: inputs bounded at levels "
            f"{i} and {j} but star depth is {pt.space.star_depth}"
        )
    pushed = Family(pt.space.points, fs.members + gs.members)
    bounding = is_bounded(pt.space, star_family(pushed, gs))
    if bounding is None:
        raise TruncationError(
            f"piece {pt.name!r} chain does not bound the pushed star"
        )
    return star_family(f, g), ColimitBoundedness(t, bounding)


def extend_to_ambient(system: FilteredSystem, fam: Family) -> Family:
    """View a piece family over the ambient set and adjoin all singletons."""
    return trivial_extension(reroot(fam, system.ambient))


def extended_level(system: FilteredSystem, piece: int, level: int) -> Family:
    return extend_to_ambient(system, system.pieces[piece].space.level(level))


def system_coarse_components(system: FilteredSystem) -> tuple[Subset, ...]:
    """Transitive closure of per-piece coarse components over the ambient set."""
    idx = system.ambient.index
    parent = list(range(len(system.ambient)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for piece in system.pieces:
        for block in coarse_components(piece.space):
            it = iter(block)
            first = next(it)
            ra = find(idx(first))
            for p in it:
                rb = find(idx(p))
                if ra != rb:
                    parent[rb] = ra
    blocks: dict[int, set] = {}
    for i, p in enumerate(system.ambient.ids):
        blocks.setdefault(find(i), set()).add(p)
    ordered = sorted(blocks.values(), key=lambda b: min(idx(p) for p in b))
    return tuple(frozenset(b) for b in ordered)


def system_weakly_bounded(system: FilteredSystem, b: Subset) -> bool:
    b = system.ambient.subset(b)
    member_pools = [
        m for piece in system.pieces for lv in piece.space.levels for m in lv.members
    ]
    for block in system_coarse_components(system):
        inter = b & block
        if not any(inter <= m for m in member_pools):
            return False
    return True
