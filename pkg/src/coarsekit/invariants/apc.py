"""Asymptotic property C: witness verification and a probe harness.

A witness against a monotone chain prefix picks one bounded selection family
per chain entry so that the selections jointly cover and each selection is
star-disjoint at its own scale. The probe searches pieces and colimit alike
and reports found/undecided only; absence of a witness in the greedy search
space never claims a refutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..colimit import FilteredSystem, extend_to_ambient
from ..errors import DomainError
from ..families import Family, refines, star_set
from ..reports import Clause, Report, from_clauses
from ..spaces import ScaledSpace
from .common import Bound, Target, bound_clause, find_bound, target_points


@dataclass(frozen=True)
class ApcWitness:
    selections: tuple[Family, ...]
    bounds: tuple[Bound, ...]


def _default_chain(target: Target, n: int) -> tuple[Family, ...]:
    if isinstance(target, ScaledSpace):
        if n > target.depth:
            raise DomainError("witness prefix exceeds the chain depth")
        return target.levels[:n]
    raise DomainError("a system target needs an explicit chain")


def apc_verify(
    target: Target, w: ApcWitness, chain: Optional[Sequence[Family]] = None
) -> Report:
    n = len(w.selections)
    if n == 0:
        raise DomainError("a witness needs at least one selection")
    if len(w.bounds) != n:
        raise DomainError("one boundedness claim per selection is required")
    chain = tuple(chain) if chain is not None else _default_chain(target, n)
    if len(chain) < n:
        raise DomainError("chain is shorter than the witness prefix")
    chain = chain[:n]
    pts = target_points(target)
    for fam in chain:
        if fam.space != pts:
            raise DomainError("chain entry is not over the target's point set")
    for fam in w.selections:
        if fam.space != pts:
            raise DomainError("selection is not over the target's point set")

    clauses = []
    mono = next(
        (i for i in range(n - 1) if not refines(chain[i], chain[i + 1])), None
    )
    clauses.append(
        Clause(
            "chain monotone",
            mono is None,
            "" if mono is None else f"entry {mono + 1} does not refine entry {mono + 2}",
        )
    )
    for j, (sel, b) in enumerate(zip(w.selections, w.bounds), start=1):
        clauses.append(bound_clause(f"selection {j} bounded", target, sel, b))
    covered = frozenset().union(
        *(m for sel in w.selections for m in sel.members), frozenset()
    )
    missing = next((p for p in pts.ids if p not in covered), None)
    clauses.append(
        Clause(
            "selections jointly cover",
            missing is None,
            "" if missing is None else f"point {missing!r} is uncovered",
        )
    )
    for j, sel in enumerate(w.selections, start=1):
        u = chain[j - 1]
        offense = None
        ms = sel.members
        for a in range(len(ms)):
            for b in range(len(ms)):
                if a == b or ms[a] == ms[b]:
                    continue
                if star_set(ms[a], u) & ms[b]:
                    offense = (ms[a], ms[b])
                    break
            if offense:
                break
        clauses.append(
            Clause(
                f"selection {j} star-disjoint at its scale",
                offense is None,
                ""
                if offense is None
                else "members {"
                + ", ".join(pts.sort(offense[0]))
                + "} and {"
                + ", ".join(pts.sort(offense[1]))
                + "} meet through a star",
            )
        )
    return from_clauses(clauses)


def apc_search(
    target: Target, chain: Sequence[Family]
) -> Optional[ApcWitness]:
    """Greedy witness against the chain, or None within the search space.

    Candidates for selection j are the j-th chain entry's members followed by
    the point singletons not already among them; a candidate is kept when it
    covers a new point and stays star-disjoint from the kept ones. Incomplete
    by design: None decides nothing.
    """
    pts = target_points(target)
    covered: set = set()
    selections: list[Family] = []
    bounds: list[Bound] = []
    for u in chain:
        if u.space != pts:
            raise DomainError("chain entry is not over the target's point set")
        pool = list(u.members)
        present = set(u.members)
        pool.extend(
            frozenset({p}) for p in pts.ids if frozenset({p}) not in present
        )
        kept: list[frozenset] = []
        for m in pool:
            if not (set(m) - covered):
                continue
            if any(
                star_set(m, u) & other or star_set(other, u) & m
                for other in kept
                if other != m
            ):
                continue
            kept.append(m)
            covered |= m
        sel = Family(pts, tuple(kept))
        b = find_bound(target, sel)
        if b is None:
            return None
        selections.append(sel)
        bounds.append(b)
        if len(covered) == len(pts):
            return ApcWitness(tuple(selections), tuple(bounds))
    return None


@dataclass(frozen=True)
class ApcProbeOutcome:
    report: Report
    piece_witnesses: tuple[Optional[ApcWitness], ...]
    colimit_witness: Optional[ApcWitness]
    colimit_chain: tuple[Family, ...]


def colimit_probe_chain(
    system: FilteredSystem, prefix_len: Optional[int] = None
) -> tuple[Family, ...]:
    """Extended levels of a piece sitting above every other piece."""
    top = 0
    for s in range(1, len(system.pieces)):
        top = system.upper_piece(top, s)
    depth = system.pieces[top].space.depth
    n = depth if prefix_len is None else min(prefix_len, depth)
    return tuple(
        extend_to_ambient(system, system.pieces[top].space.level(i))
        for i in range(1, n + 1)
    )


def apc_probe(
    system: FilteredSystem, prefix_len: Optional[int] = None, budget: int = 16
) -> ApcProbeOutcome:
    """Per-piece and colimit witness searches, reported without negatives."""
    clauses = []
    piece_witnesses: list[Optional[ApcWitness]] = []
    for piece in system.pieces:
        name = f"piece {piece.name}"
        if budget <= 0:
            piece_witnesses.append(None)
            clauses.append(
                Clause(name, False, "search budget exhausted", truncation=True)
            )
            continue
        budget -= 1
        depth = piece.space.depth
        n = depth if prefix_len is None else min(prefix_len, depth)
        w = apc_search(piece.space, piece.space.levels[:n])
        piece_witnesses.append(w)
        if w is None:
            clauses.append(
                Clause(
                    name,
                    False,
                    "no witness within the greedy search space",
                    truncation=True,
                )
            )
        else:
            clauses.append(
                Clause(name, True, f"witness with {len(w.selections)} selections")
            )
    chain = colimit_probe_chain(system, prefix_len)
    if budget <= 0:
        colimit_witness = None
        clauses.append(
            Clause("colimit", False, "search budget exhausted", truncation=True)
        )
    else:
        colimit_witness = apc_search(system, chain)
        if colimit_witness is None:
            clauses.append(
                Clause(
                    "colimit",
                    False,
                    "no witness within the greedy search space",
                    truncation=True,
                )
            )
        else:
            clauses.append(
                Clause(
                    "colimit",
                    True,
                    f"witness with {len(colimit_witness.selections)} selections",
                )
            )
    return ApcProbeOutcome(
        from_clauses(clauses), tuple(piece_witnesses), colimit_witness, chain
    )
