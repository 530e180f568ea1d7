"""Command line front end.

Exit codes follow the verdict: 0 verified, 1 refuted, 2 undecided at this
truncation, 64 for usage mistakes, 65 for unreadable or invalid input
documents. Reports print as text by default; --format structured emits a
single report document whose provenance (input digests, tool version) is
stable across reruns on identical inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import documents as docs
from .colimit import FilteredSystem, colimit_bounded, colimit_star
from .corpus import (
    RandomCaps,
    gen_c0,
    gen_disjoint_union,
    gen_random_system,
    gen_unit_interval,
)
from .errors import CoarseError, DomainError, ParseError, TruncationError, ValidationError
from .families import Family, PointSet, reroot
from .invariants import (
    amenability_lift,
    amenability_verify,
    apc_probe,
    apc_verify,
    asdim_lift,
    asdim_restrict,
    asdim_search,
    asdim_verify,
    exactness_lift,
    exactness_verify,
    metrizability_generator_check,
    metrizability_merge,
    pinch_lift,
    pinch_verify,
    property_a_lift,
    property_a_verify,
)
from .maps import (
    bornologous_check,
    close_report,
    path_metric,
    slowly_oscillating_search,
    slowly_oscillating_verify,
    system_bornologous_check,
    system_slowly_oscillating_verify,
)
from .reports import Clause, Report, Verdict
from .spaces import ScaledSpace

EX_VERIFIED = 0
EX_REFUTED = 1
EX_UNDECIDED = 2
EX_USAGE = 64
EX_DATA = 65

_EXIT = {
    Verdict.VERIFIED: EX_VERIFIED,
    Verdict.REFUTED: EX_REFUTED,
    Verdict.UNDECIDED: EX_UNDECIDED,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str, kinds: Sequence[str]) -> docs.Document:
    doc = docs.parse_document(_read(path), validate_body=False)
    if doc.kind not in kinds:
        raise ParseError(
            f"{path}: expected a {' or '.join(kinds)} document, got {doc.kind!r}"
        )
    return doc


def _load_target(path: str):
    doc = _load(path, ("space", "system"))
    if doc.kind == "space":
        return docs.doc_to_space(doc.body)
    return docs.doc_to_system(doc.body)


def _load_family(path: str, pts: PointSet) -> Family:
    doc = _load(path, ("family",))
    return reroot(docs.doc_to_family(doc.body), pts)


def _load_map(path: str):
    doc = _load(path, ("map",))
    return docs.doc_to_map(doc.body)


def _piece_index(system: FilteredSystem, token: str) -> int:
    for i, p in enumerate(system.pieces):
        if p.name == token:
            return i
    try:
        i = int(token)
    except ValueError:
        raise DomainError(f"no piece named {token!r}") from None
    if not 0 <= i < len(system.pieces):
        raise DomainError(f"piece index {i} out of range")
    return i


def _digest(path: str) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _render(args, report: Report, inputs: Sequence[str], artifact=None) -> int:
    """Print the report, persist the artifact if -o was given, return the exit code."""
    out = getattr(args, "output", None)
    if artifact is not None and out:
        Path(out).write_text(docs.emit_document(artifact[1]), encoding="utf-8")
    provenance = {
        "inputs": {p: _digest(p) for p in inputs},
        "tool": f"coarsekit {__version__}",
        "seed": None,
    }
    if getattr(args, "format", "text") == "structured":
        body = dict(docs.report_to_doc(report, provenance).body)
        if artifact is not None:
            name, adoc = artifact
            body["artifacts"] = {
                name: {"kind": adoc.kind, "version": adoc.version, "body": adoc.body}
            }
        sys.stdout.write(docs.emit_document(docs.Document("report", docs.VERSION, body)))
    else:
        print(f"verdict: {report.verdict.value}")
        for c in report.clauses:
            mark = "ok" if c.ok else ("??" if c.truncation else "FAIL")
            line = f"  [{mark}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            print(line)
        if artifact is not None and out:
            print(f"wrote {out}")
    return _EXIT[report.verdict]


def _truncation_report(name: str, exc: TruncationError) -> Report:
    clause = Clause(name, False, str(exc), truncation=True)
    return Report(Verdict.UNDECIDED, (clause,))


# commands


def cmd_validate(args) -> int:
    doc = _load(args.document, ("space", "system"))
    clauses = []
    try:
        if doc.kind == "space":
            docs.doc_to_space(doc.body)
            clauses.append(Clause("space validates", True, "chain is monotone and covering"))
        else:
            system = docs.doc_to_system(doc.body)
            detail = (
                "upper bounds given in the document"
                if isinstance(doc.body, dict) and "upper" in doc.body
                else "upper bounds synthesized by containment search"
            )
            clauses.append(Clause("system validates", True, detail))
            clauses.append(
                Clause("pieces", True, ", ".join(p.name for p in system.pieces))
            )
        report = Report(Verdict.VERIFIED, tuple(clauses))
    except (ValidationError, DomainError) as exc:
        report = Report(
            Verdict.REFUTED, (Clause("document validates", False, str(exc)),)
        )
    return _render(args, report, [args.document])


def cmd_bounded(args) -> int:
    system = docs.doc_to_system(_load(args.system, ("system",)).body)
    fam = _load_family(args.family, system.ambient)
    cert = colimit_bounded(system, fam)
    if cert is None:
        report = Report(
            Verdict.UNDECIDED,
            (
                Clause(
                    "bounded in some piece",
                    False,
                    "no piece bounds the family within this truncation",
                    truncation=True,
                ),
            ),
        )
    else:
        name = system.pieces[cert.piece].name
        report = Report(
            Verdict.VERIFIED,
            (
                Clause(
                    "bounded in some piece",
                    True,
                    f"piece {name!r} at level {cert.level}",
                ),
            ),
        )
    return _render(args, report, [args.system, args.family])


def cmd_star(args) -> int:
    system = docs.doc_to_system(_load(args.system, ("system",)).body)
    f = _load_family(args.first, system.ambient)
    g = _load_family(args.second, system.ambient)
    inputs = [args.system, args.first, args.second]
    try:
        star, cert = colimit_star(system, f, g)
    except TruncationError as exc:
        return _render(args, _truncation_report("star stays bounded", exc), inputs)
    name = system.pieces[cert.piece].name
    report = Report(
        Verdict.VERIFIED,
        (
            Clause("star assembled", True, f"{len(star.members)} members"),
            Clause(
                "star stays bounded",
                True,
                f"piece {name!r} at level {cert.level}",
            ),
        ),
    )
    return _render(args, report, inputs, artifact=("star", docs.family_to_doc(star)))


def _require(args, parser, names) -> None:
    for name in names:
        if getattr(args, name.replace("-", "_"), None) is None:
            parser.error(f"--{name} is required here")


def cmd_check(args) -> int:
    inv = args.invariant
    if inv == "generators":
        gens = docs.doc_to_generators(_load(args.target, ("witness:generators",)).body)
        report = metrizability_generator_check(gens)
        return _render(args, report, [args.target])
    target = _load_target(args.target)
    inputs = [args.target]
    artifact = None
    if inv == "asdim":
        _require(args, args.parser, ["n"])
        if args.search:
            if not isinstance(target, ScaledSpace):
                raise DomainError("witness search needs a single-space target")
            _require(args, args.parser, ["level"])
            result = asdim_search(target, args.n, args.level, mode=args.mode)
            if result.witness is None:
                if result.exhaustive:
                    report = Report(
                        Verdict.REFUTED,
                        (
                            Clause(
                                "witness search",
                                False,
                                "no coarsening of the scale verifies at this dimension",
                            ),
                        ),
                    )
                else:
                    report = Report(
                        Verdict.UNDECIDED,
                        (
                            Clause(
                                "witness search",
                                False,
                                "greedy search found nothing; absence decides nothing",
                                truncation=True,
                            ),
                        ),
                    )
                return _render(args, report, inputs)
            report = asdim_verify(target, args.n, result.witness)
            artifact = ("witness", docs.asdim_witness_to_doc(result.witness))
        else:
            _require(args, args.parser, ["witness"])
            wdoc = _load(args.witness, ("witness:asdim",))
            w = docs.doc_to_asdim_witness(wdoc.body, target)
            report = asdim_verify(target, args.n, w)
            inputs.append(args.witness)
    elif inv == "apc":
        _require(args, args.parser, ["witness"])
        wdoc = _load(args.witness, ("witness:apc",))
        w, chain = docs.doc_to_apc_witness(wdoc.body, target)
        report = apc_verify(target, w, chain)
        inputs.append(args.witness)
    elif inv == "exactness":
        _require(args, args.parser, ["witness"])
        wdoc = _load(args.witness, ("witness:exactness",))
        report = exactness_verify(target, docs.doc_to_exactness_witness(wdoc.body, target))
        inputs.append(args.witness)
    elif inv == "pinch":
        _require(args, args.parser, ["witness"])
        wdoc = _load(args.witness, ("witness:pinch",))
        report = pinch_verify(target, docs.doc_to_pinch_witness(wdoc.body, target))
        inputs.append(args.witness)
    elif inv == "amenability":
        _require(args, args.parser, ["witness"])
        wdoc = _load(args.witness, ("witness:amenability",))
        report = amenability_verify(
            target, docs.doc_to_amenability_witness(wdoc.body, target)
        )
        inputs.append(args.witness)
    else:
        _require(args, args.parser, ["witness"])
        wdoc = _load(args.witness, ("witness:property_a",))
        report = property_a_verify(
            target, docs.doc_to_property_a_witness(wdoc.body, target)
        )
        inputs.append(args.witness)
    return _render(args, report, inputs, artifact=artifact)


def cmd_lift(args) -> int:
    system = docs.doc_to_system(_load(args.system, ("system",)).body)
    inputs = [args.system]
    inv = args.invariant
    if inv == "generators":
        _require(args, args.parser, ["sets"])
        if len(args.sets) != len(system.pieces):
            raise DomainError(
                f"{len(system.pieces)} generator sets are required, one per piece"
            )
        piece_sets = []
        for path, pc in zip(args.sets, system.pieces):
            gdoc = _load(path, ("witness:generators",))
            piece_sets.append(docs.doc_to_generators(gdoc.body))
            inputs.append(path)
        try:
            merged, report = metrizability_merge(system, piece_sets)
        except TruncationError as exc:
            return _render(
                args, _truncation_report("pairs coarsened after routing", exc), inputs
            )
        return _render(
            args, report, inputs, artifact=("generators", docs.generators_to_doc(merged))
        )
    _require(args, args.parser, ["piece", "witness"])
    idx = _piece_index(system, args.piece)
    pc = system.pieces[idx]
    wdoc = _load(args.witness, ("witness:" + inv.replace("-", "_"),))
    inputs.append(args.witness)
    if inv == "asdim":
        _require(args, args.parser, ["n"])
        w = docs.doc_to_asdim_witness(wdoc.body, pc.space)
        lifted = asdim_lift(system, idx, args.n, w)
        report = asdim_verify(system, args.n, lifted)
        artifact = ("witness", docs.asdim_witness_to_doc(lifted))
    elif inv == "exactness":
        w = docs.doc_to_exactness_witness(wdoc.body, pc.space)
        lifted = exactness_lift(system, idx, w)
        report = exactness_verify(system, lifted)
        artifact = ("witness", docs.exactness_witness_to_doc(lifted))
    elif inv == "pinch":
        w = docs.doc_to_pinch_witness(wdoc.body, pc.space)
        lifted = pinch_lift(system, idx, w)
        report = pinch_verify(system, lifted)
        artifact = ("witness", docs.pinch_witness_to_doc(lifted))
    elif inv == "amenability":
        _require(args, args.parser, ["input"])
        w = docs.doc_to_amenability_witness(wdoc.body, pc.space)
        u = _load_family(args.input, system.ambient)
        inputs.append(args.input)
        lifted = amenability_lift(system, idx, w, u)
        report = amenability_verify(system, lifted)
        artifact = ("witness", docs.amenability_witness_to_doc(lifted))
    else:
        w = docs.doc_to_property_a_witness(wdoc.body, pc.space)
        lifted = property_a_lift(system, idx, w)
        report = property_a_verify(system, lifted)
        artifact = ("witness", docs.property_a_witness_to_doc(lifted))
    return _render(args, report, inputs, artifact=artifact)


def cmd_restrict(args) -> int:
    system = docs.doc_to_system(_load(args.system, ("system",)).body)
    idx = _piece_index(system, args.piece)
    wdoc = _load(args.witness, ("witness:asdim",))
    w = docs.doc_to_asdim_witness(wdoc.body, system)
    cut = asdim_restrict(system, idx, args.n, w)
    report = asdim_verify(system.pieces[idx].space, args.n, cut)
    return _render(
        args,
        report,
        [args.system, args.witness],
        artifact=("witness", docs.asdim_witness_to_doc(cut)),
    )


def cmd_map_check(args) -> int:
    mode = args.mode
    paths = args.documents
    parser = args.parser
    if mode == "bornologous":
        if len(paths) != 3:
            parser.error("bornologous needs SRC DST MAP")
        src = _load_target(paths[0])
        dst = docs.doc_to_space(_load(paths[1], ("space",)).body)
        f = _load_map(paths[2])
        if isinstance(src, ScaledSpace):
            report = bornologous_check(f, src, dst)
        else:
            report = system_bornologous_check(f, src, dst)
        return _render(args, report, paths)
    if mode == "close":
        if len(paths) != 3:
            parser.error("close needs DST MAP MAP")
        dst = docs.doc_to_space(_load(paths[0], ("space",)).body)
        f = _load_map(paths[1])
        g = _load_map(paths[2])
        return _render(args, close_report(f, g, dst), paths)
    if len(paths) != 3:
        parser.error("so needs SRC METRIC MAP")
    src = _load_target(paths[0])
    target = docs.doc_to_metric(_load(paths[1], ("metric",)).body)
    f = _load_map(paths[2])
    if args.eps is None:
        parser.error("--eps is required here")
    inputs = list(paths)
    if isinstance(src, ScaledSpace):
        _require(args, parser, ["level"])
        if args.search:
            b = slowly_oscillating_search(f, target, src, args.level, args.eps)
            if b is None:
                report = Report(
                    Verdict.UNDECIDED,
                    (
                        Clause(
                            "witness set search",
                            False,
                            "no weakly bounded witness set in the search space",
                            truncation=True,
                        ),
                    ),
                )
                return _render(args, report, inputs)
            report = slowly_oscillating_verify(f, target, src, args.level, args.eps, b)
            artifact = (
                "witness-set",
                docs.family_to_doc(Family(src.points, (b,))),
            )
            return _render(args, report, inputs, artifact=artifact)
        _require(args, parser, ["witness_set"])
        bfam = _load_family(args.witness_set, src.points)
        b = frozenset().union(*bfam.members) if bfam.members else frozenset()
        report = slowly_oscillating_verify(f, target, src, args.level, args.eps, b)
        inputs.append(args.witness_set)
        return _render(args, report, inputs)
    if args.search:
        raise DomainError("witness search needs a single-space source")
    _require(args, parser, ["scale", "witness_set"])
    scale = _load_family(args.scale, src.ambient)
    bfam = _load_family(args.witness_set, src.ambient)
    b = frozenset().union(*bfam.members) if bfam.members else frozenset()
    report = system_slowly_oscillating_verify(f, target, src, scale, args.eps, b)
    inputs += [args.scale, args.witness_set]
    return _render(args, report, inputs)


def _parse_radii(text: Optional[str]):
    if text is None:
        return None
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"malformed radii list {text!r}") from None


def cmd_corpus(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def save(name: str, doc: docs.Document):
        path = out / name
        path.write_text(docs.emit_document(doc), encoding="utf-8")
        written.append(path)

    kind = args.generator
    if kind == "c0":
        if args.s_max is None or args.box is None:
            args.parser.error("c0 needs --s-max and --box")
        system = gen_c0(args.s_max, args.box, _parse_radii(args.radii))
        save("system.json", docs.system_to_doc(system))
    elif kind == "disjoint-union":
        if not args.islands:
            args.parser.error("disjoint-union needs --islands")
        try:
            sizes = [int(part) for part in args.islands.split(",")]
        except ValueError:
            args.parser.error(f"malformed island sizes {args.islands!r}")
        islands = [
            path_metric(PointSet(tuple(f"q{i}" for i in range(size))))
            for size in sizes
        ]
        system = gen_disjoint_union(islands, _parse_radii(args.radii))
        save("system.json", docs.system_to_doc(system))
    elif kind == "unit-interval":
        if args.n_max is None:
            args.parser.error("unit-interval needs --n-max")
        inst = gen_unit_interval(args.n_max)
        save("system.json", docs.system_to_doc(inst.system))
        save("reciprocal-map.json", docs.map_to_doc(inst.f))
        save("constant-map.json", docs.map_to_doc(inst.g))
        save("target-metric.json", docs.metric_to_doc(inst.target))
        for i, chain in enumerate(inst.piece_chains, start=1):
            save(f"piece-chain-{i}.json", docs.space_to_doc(chain))
        save("colimit-chain.json", docs.space_to_doc(inst.colimit_chain))
    else:
        if args.seed is None:
            args.parser.error("random needs --seed")
        caps = RandomCaps(points=args.points, pieces=args.pieces, depth=args.depth)
        system = gen_random_system(args.seed, caps)
        save("system.json", docs.system_to_doc(system))
    for path in written:
        print(f"wrote {path}")
    return EX_VERIFIED


def cmd_probe(args) -> int:
    system = docs.doc_to_system(_load(args.system, ("system",)).body)
    outcome = apc_probe(system, prefix_len=args.prefix, budget=args.budget)
    artifact = None
    if outcome.colimit_witness is not None:
        artifact = (
            "witness",
            docs.apc_witness_to_doc(outcome.colimit_witness, outcome.colimit_chain),
        )
    return _render(args, outcome.report, [args.system], artifact=artifact)


# parser assembly


def build_parser() -> _Parser:
    parser = _Parser(prog="coarsekit", description=__doc__)
    parser.add_argument(
        "--version", action="version", version=f"coarsekit {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report rendering (default: text)",
    )
    common.add_argument(
        "-o",
        "--output",
        metavar="PATH",
        help="write the produced document (witness, family, ...) here",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("validate", parents=[common], help="validate a space or system document")
    sp.add_argument("document")
    sp.set_defaults(func=cmd_validate, parser=sp)

    sp = sub.add_parser("bounded", parents=[common], help="find a boundedness certificate")
    sp.add_argument("system")
    sp.add_argument("family")
    sp.set_defaults(func=cmd_bounded, parser=sp)

    sp = sub.add_parser("star", parents=[common], help="assemble a star with its certificate")
    sp.add_argument("system")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(func=cmd_star, parser=sp)

    invariants = ("asdim", "apc", "exactness", "pinch", "amenability", "property-a", "generators")
    sp = sub.add_parser("check", parents=[common], help="verify an invariant witness")
    sp.add_argument("invariant", choices=invariants)
    sp.add_argument("target", help="space, system, or generator document")
    sp.add_argument("--witness", metavar="FILE")
    sp.add_argument("--n", type=int, help="dimension bound (asdim)")
    sp.add_argument("--search", action="store_true", help="search instead of verifying (asdim)")
    sp.add_argument("--level", type=int, help="input scale level for the search")
    sp.add_argument("--mode", choices=("auto", "exhaustive", "greedy"), default="auto")
    sp.set_defaults(func=cmd_check, parser=sp)

    liftable = ("asdim", "exactness", "pinch", "amenability", "property-a", "generators")
    sp = sub.add_parser("lift", parents=[common], help="push a piece witness to the colimit")
    sp.add_argument("invariant", choices=liftable)
    sp.add_argument("system")
    sp.add_argument("--piece", metavar="NAME")
    sp.add_argument("--witness", metavar="FILE")
    sp.add_argument("--n", type=int, help="dimension bound (asdim)")
    sp.add_argument("--input", metavar="FILE", help="ambient input family (amenability)")
    sp.add_argument("--sets", nargs="+", metavar="FILE", help="per-piece generator sets")
    sp.set_defaults(func=cmd_lift, parser=sp)

    sp = sub.add_parser("restrict", parents=[common], help="cut a colimit witness down to a piece")
    sp.add_argument("system")
    sp.add_argument("--piece", required=True, metavar="NAME")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--witness", required=True, metavar="FILE")
    sp.set_defaults(func=cmd_restrict, parser=sp)

    sp = sub.add_parser("map-check", parents=[common], help="check a map property")
    sp.add_argument("mode", choices=("bornologous", "close", "so"))
    sp.add_argument("documents", nargs="+", help="input documents, order depends on the mode")
    sp.add_argument("--eps", type=Fraction, help="oscillation threshold (so)")
    sp.add_argument("--level", type=int, help="source scale level (so, single space)")
    sp.add_argument("--scale", metavar="FILE", help="ambient scale family (so, system)")
    sp.add_argument("--witness-set", metavar="FILE", help="family whose union is the witness set")
    sp.add_argument("--search", action="store_true", help="search for a witness set (so)")
    sp.set_defaults(func=cmd_map_check, parser=sp)

    sp = sub.add_parser("corpus", help="generate reference instances")
    sp.add_argument("generator", choices=("c0", "disjoint-union", "unit-interval", "random"))
    sp.add_argument("--out-dir", default=".", metavar="DIR")
    sp.add_argument("--s-max", type=int)
    sp.add_argument("--box", type=int)
    sp.add_argument("--radii", metavar="R1,R2,...")
    sp.add_argument("--islands", metavar="N1,N2,...", help="path island sizes")
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--points", type=int, default=12)
    sp.add_argument("--pieces", type=int, default=4)
    sp.add_argument("--depth", type=int, default=3)
    sp.set_defaults(func=cmd_corpus, parser=sp)

    sp = sub.add_parser("probe", parents=[common], help="run a two-sided witness probe")
    sp.add_argument("what", choices=("apc",))
    sp.add_argument("system")
    sp.add_argument("--prefix", type=int, help="chain prefix length")
    sp.add_argument("--budget", type=int, default=16, help="search budget")
    sp.set_defaults(func=cmd_probe, parser=sp)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"coarsekit: input error: {exc}", file=sys.stderr)
        return EX_DATA
    except TruncationError as exc:
        print(f"coarsekit: undecided at truncation: {exc}", file=sys.stderr)
        return EX_UNDECIDED
    except CoarseError as exc:
        print(f"coarsekit: input error: {exc}", file=sys.stderr)
        return EX_DATA
    except OSError as exc:
        print(f"coarsekit: cannot read input: {exc}", file=sys.stderr)
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())
