"""Command-line interface.

Model arguments accept either a path to a dimer file or ``catalog:NAME``
for a shipped model.  Reports are JSON with a fixed key order and exact
rationals printed as ``p/q``, so byte-identical output across runs is a
contract; rendering (``render``) is the one exception, geometric layout
is best-effort only.

Exit codes: 0 success, 1 a checked property fails (inconsistency, failed
duality, invalid sequence), 2 malformed input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog
from .core import DimerError, DimerModel, is_isomorphic, validate, with_offsets
from .dimerfile import DimerFileError, parse, serialize
from .fano import (
    FanoError,
    a_from_zigzags,
    b_sequence,
    exceptional_sequence,
    is_weak_fano,
    lambda_weights,
    matching_polygon,
    vertex_order,
    verify_duality,
    zigzag_grade_sums,
)
from .matching import (
    StableComplexError,
    boundary_arc_check,
    boundary_halfcircle_check,
    halfspace_disc_check,
    matching_lattice,
    sample_weak_walks,
)
from .mirror import mirror
from .synth import SynthesisError, census, dimer_from_sequence
from .toric import (
    PolygonError,
    a_sequence,
    enumerate_reflexive,
    reflexive_polygon,
    surface_of,
    unimodular_equal,
)
from .zigzag import is_consistent, zigzag_cycles, zigzag_probe

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_USAGE = 2


class CliInputError(Exception):
    """Bad input (file, grammar, model): exit code 2."""


def _fmt_q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _status_line(ok: bool, text: str) -> None:
    """One colored verdict line on stderr; NO_COLOR or a pipe disables color."""
    use_color = sys.stderr.isatty() and not os.environ.get("NO_COLOR")
    if use_color:
        code = "32" if ok else "31"
        text = f"\x1b[{code}m{text}\x1b[0m"
    print(text, file=sys.stderr)


def _read_source(spec: str) -> str:
    if spec.startswith("catalog:"):
        name = spec.split(":", 1)[1]
        try:
            return catalog.source(name)
        except KeyError as exc:
            raise CliInputError(str(exc.args[0])) from exc
        except FileNotFoundError as exc:
            raise CliInputError(f"catalog dimer {name!r} has no data file") from exc
    try:
        with open(spec, encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise CliInputError(f"cannot read {spec}: {exc}") from exc


def _load(spec: str) -> DimerModel:
    try:
        return validate(parse(_read_source(spec)))
    except DimerFileError as exc:
        raise CliInputError(f"{spec}: {exc}") from exc
    except DimerError as exc:
        msgs = exc.args[0] if exc.args and isinstance(exc.args[0], list) else [str(exc)]
        raise CliInputError(f"{spec}: " + "; ".join(msgs)) from exc


def _root_index(D: DimerModel, label: str | None) -> int:
    if label is None:
        return 0
    if label in D.vertex_names:
        return D.vertex_names.index(label)
    raise CliInputError(f"unknown vertex {label!r}; have {', '.join(D.vertex_names)}")


def _write_out(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as exc:
        raise CliInputError(f"cannot write {path}: {exc}") from exc


def _polygon_by_label(label: str):
    polys = enumerate_reflexive()
    if label not in polys:
        raise CliInputError(
            f"unknown polygon label {label!r}; have {', '.join(polys)}"
        )
    return polys[label]


# --- subcommands ---------------------------------------------------------------


def _cmd_validate(args) -> int:
    try:
        raw = parse(_read_source(args.model))
    except (CliInputError, DimerFileError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    from .core import violations_of

    problems = violations_of(raw)
    doc = {
        "name": raw.name,
        "valid": not problems,
        "violations": problems,
    }
    _emit(doc)
    _status_line(not problems, "valid" if not problems else "invalid")
    return EXIT_OK if not problems else EXIT_USAGE


def _cmd_info(args) -> int:
    D = _load(args.model)
    doc = {
        "name": D.name,
        "vertices": D.num_vertices,
        "arrows": D.num_arrows,
        "faces": len(D.faces),
        "genus": D.genus,
        "zigzag_cycles": len(zigzag_cycles(D)),
    }
    _emit(doc)
    return EXIT_OK


def _cmd_consistent(args) -> int:
    D = _load(args.model)
    verdict = is_consistent(D)
    doc = {
        "name": D.name,
        "status": verdict.status,
        "margin": _fmt_q(verdict.margin) if verdict.margin is not None else None,
        "r_charge": [_fmt_q(r) for r in verdict.r_charge]
        if verdict.r_charge is not None
        else None,
        "certificate": [_fmt_q(c) for c in verdict.certificate]
        if verdict.certificate is not None
        else None,
    }
    if D.genus == 1:
        violations = zigzag_probe(D, args.probe_depth)
        doc["probe_violations"] = [
            {
                "arrow": D.arrows[v.arrow],
                "zig_index": v.zig_index,
                "zag_index": v.zag_index,
            }
            for v in violations
        ]
    _emit(doc)
    ok = verdict.status != "inconsistent"
    _status_line(ok, verdict.status)
    return EXIT_OK if ok else EXIT_PROPERTY


def _cmd_matchings(args) -> int:
    D = _load(args.model)
    o = _root_index(D, args.root)
    try:
        lattice = matching_lattice(D, o)
    except (DimerError, StableComplexError) as exc:
        print(f"matching lattice failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    rows = []
    for i, m in enumerate(lattice.matchings):
        if args.stable and not lattice.stable_flags[i]:
            continue
        rows.append(
            {
                "index": i,
                "arrows": sorted(D.arrows[a] for a in m),
                "coords": list(lattice.coords[i]),
                "stable": lattice.stable_flags[i],
            }
        )
    doc = {
        "name": D.name,
        "root": D.vertex_names[o],
        "count": len(lattice.matchings),
        "hull": [list(p) for p in lattice.hull],
        "boundary_points": [list(p) for p in lattice.boundary_points],
        "interior_points": [list(p) for p in lattice.interior_points],
        "matchings": rows,
    }
    _emit(doc)
    return EXIT_OK


def _cmd_polygon(args) -> int:
    D = _load(args.model)
    lattice = matching_lattice(D, 0)
    label = None
    reflexive = len(lattice.interior_points) == 1
    if reflexive:
        try:
            P = reflexive_polygon(lattice.boundary_points)
        except PolygonError:
            reflexive = False
        else:
            for name, Q in enumerate_reflexive().items():
                if unimodular_equal(P, Q) is not None:
                    label = name
                    break
    doc = {
        "name": D.name,
        "hull": [list(p) for p in lattice.hull],
        "boundary_points": [list(p) for p in lattice.boundary_points],
        "interior_count": len(lattice.interior_points),
        "reflexive": reflexive,
        "type": label,
    }
    _emit(doc)
    return EXIT_OK


def _cmd_dual(args) -> int:
    D = _load(args.model)
    try:
        M = mirror(D)
    except DimerError as exc:
        print(f"mirror failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    _write_out(args.output, serialize(M))
    return EXIT_OK


def _cmd_sequences(args) -> int:
    D = _load(args.model)
    o = _root_index(D, args.root)
    try:
        weights = lambda_weights(D, o)
        order = vertex_order(D, o, weights)
        a = a_from_zigzags(D, o)
        b = b_sequence(D, o, weights)
        classes = exceptional_sequence(D, o, weights)
    except (FanoError, StableComplexError) as exc:
        print(f"sequence pipeline failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    doc = {
        "name": D.name,
        "root": D.vertex_names[o],
        "a": list(a),
        "b": list(b),
        "lambda": {
            "points": [list(p) for p in weights.points],
            "values": [_fmt_q(v) for v in weights.values],
        },
        "vertex_order": {
            "vertices": [D.vertex_names[v] for v in order.vertices],
            "values": [_fmt_q(v) for v in order.values],
        },
        "classes": [list(c) for c in classes],
    }
    _emit(doc)
    return EXIT_OK


def _cmd_verify_duality(args) -> int:
    D = _load(args.model)
    try:
        report = verify_duality(D)
    except (FanoError, StableComplexError, DimerError) as exc:
        print(f"duality pipeline failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    doc = {
        "name": D.name,
        "a": list(report.a),
        "b": list(report.b),
        "classes": [list(c) for c in report.classes],
        "mirror_a": list(report.mirror_a) if report.mirror_a is not None else None,
        "mirror_b": list(report.mirror_b) if report.mirror_b is not None else None,
        "failures": list(report.failures),
        "ok": bool(report),
    }
    _emit(doc)
    _status_line(bool(report), "duality verified" if report else "duality FAILED")
    return EXIT_OK if report else EXIT_PROPERTY


def _parse_sequence_file(text: str, k: int):
    classes = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = tuple(int(tok) for tok in line.split())
        except ValueError as exc:
            raise CliInputError(f"sequence line {lineno}: {exc}") from exc
        if len(row) != k:
            raise CliInputError(
                f"sequence line {lineno}: expected {k} integers, got {len(row)}"
            )
        classes.append(row)
    if not classes:
        raise CliInputError("sequence file holds no classes")
    return classes


def _cmd_synth(args) -> int:
    P = _polygon_by_label(args.polygon)
    X = surface_of(P)
    try:
        with open(args.sequence, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise CliInputError(f"cannot read {args.sequence}: {exc}") from exc
    classes = _parse_sequence_file(text, X.k)
    try:
        D = dimer_from_sequence(X, classes, name=args.name)
    except SynthesisError as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    _write_out(args.output, serialize(D))
    return EXIT_OK


def _cmd_census(args) -> int:
    P = _polygon_by_label(args.polygon)
    X = surface_of(P)
    res = census(X, args.bound, name_prefix=f"census_{args.polygon}")
    rows = []
    for D, s in zip(res.dimers, res.sequences):
        row = {
            "name": D.name,
            "vertices": D.num_vertices,
            "arrows": D.num_arrows,
            "faces": len(D.faces),
            "sequence": [list(c) for c in s],
        }
        rows.append(row)
        if args.out_dir is not None:
            os.makedirs(args.out_dir, exist_ok=True)
            _write_out(
                os.path.join(args.out_dir, f"{D.name}.dimer"), serialize(D)
            )
    doc = {
        "polygon": args.polygon,
        "bound": res.bound,
        "bound_touched": res.bound_touched,
        "sequence_count": res.sequence_count,
        "class_set_count": res.class_set_count,
        "dimer_count": len(res.dimers),
        "dimers": rows,
    }
    _emit(doc)
    return EXIT_OK


def _cmd_render(args) -> int:
    D = _load(args.model)
    from .render import render_svg

    try:
        svg = render_svg(D, args.matching)
    except IndexError as exc:
        raise CliInputError(str(exc)) from None
    _write_out(args.svg, svg)
    return EXIT_OK


def _cmd_catalog(args) -> int:
    if args.action == "list":
        have = set(catalog.available())
        for name, entry in catalog.ENTRIES.items():
            flag = "available" if name in have else "missing"
            print(f"{name:14} {flag:9} {entry.summary}")
        for label, P in enumerate_reflexive().items():
            summary = f"reflexive polygon, size {P.size}, a = {list(a_sequence(P))}"
            print(f"{label:14} {'polygon':9} {summary}")
        return EXIT_OK
    # get NAME
    if args.name is None:
        raise CliInputError("catalog get needs a NAME")
    polys = enumerate_reflexive()
    if args.name in polys:
        P = polys[args.name]
        _emit(
            {
                "polygon": args.name,
                "points": [list(p) for p in P.points],
                "a_sequence": list(a_sequence(P)),
            }
        )
        return EXIT_OK
    try:
        sys.stdout.write(catalog.source(args.name))
    except KeyError as exc:
        raise CliInputError(str(exc.args[0])) from exc
    except FileNotFoundError:
        raise CliInputError(f"catalog dimer {args.name!r} has no data file") from None
    return EXIT_OK


def _cmd_lemmas(args) -> int:
    D = _load(args.model)
    o = _root_index(D, args.root)
    failures: list[str] = []
    arc = boundary_arc_check(D, o)
    failures += arc
    walks = sample_weak_walks(D, args.walks, args.seed)
    disc, disc_stats = halfspace_disc_check(D, o, walks)
    failures += disc
    half = boundary_halfcircle_check(D, o, walks)
    failures += half
    grade_ok = None
    if is_weak_fano(D):
        sums = zigzag_grade_sums(D, lambda_weights(D, o))
        grade_ok = all(s == 2 for s in sums)
        if not grade_ok:
            failures.append(f"zigzag grade sums {tuple(map(str, sums))} != 2")
    doc = {
        "name": D.name,
        "root": D.vertex_names[o],
        "walks": args.walks,
        "seed": args.seed,
        "arc_failures": arc,
        "halfspace_failures": disc,
        "halfspace_vacuous_sides": disc_stats["vacuous_sides"],
        "halfcircle_failures": half,
        "grade_sums_ok": grade_ok,
        "ok": not failures,
    }
    _emit(doc)
    _status_line(not failures, "lemmas hold" if not failures else "lemmas FAILED")
    return EXIT_OK if not failures else EXIT_PROPERTY


# --- dispatch ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dimerdual",
        description="Dimer models, consistency, matching polygons, mirror "
        "duality, and exceptional sequences on toric weak Fano surfaces. "
        "MODEL arguments take a dimer file path or catalog:NAME.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dimer file; exit 2 when invalid")
    p.add_argument("model")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("info", help="vertex/arrow/face counts, genus, zigzags")
    p.add_argument("model")
    p.set_defaults(fn=_cmd_info)

    p = sub.add_parser("consistent", help="zigzag consistency verdict (exit 1 if not)")
    p.add_argument("model")
    p.add_argument("--probe-depth", type=int, default=None, metavar="N")
    p.set_defaults(fn=_cmd_consistent)

    p = sub.add_parser("matchings", help="perfect matchings with coordinates")
    p.add_argument("model")
    p.add_argument("--stable", action="store_true", help="only stable matchings")
    p.add_argument("--root", default=None, metavar="V")
    p.set_defaults(fn=_cmd_matchings)

    p = sub.add_parser("polygon", help="matching polygon and reflexive type")
    p.add_argument("model")
    p.set_defaults(fn=_cmd_polygon)

    p = sub.add_parser("dual", help="write the mirror dimer")
    p.add_argument("model")
    p.add_argument("-o", "--output", required=True, metavar="OUT")
    p.set_defaults(fn=_cmd_dual)

    p = sub.add_parser("sequences", help="a/b sequences, weights, vertex order")
    p.add_argument("model")
    p.add_argument("--root", default=None, metavar="V")
    p.set_defaults(fn=_cmd_sequences)

    p = sub.add_parser("verify-duality", help="full duality report (exit 1 on failure)")
    p.add_argument("model")
    p.set_defaults(fn=_cmd_verify_duality)

    p = sub.add_parser("synth", help="dimer from a sequence on a reflexive polygon")
    p.add_argument("--polygon", required=True, metavar="LABEL")
    p.add_argument("--sequence", required=True, metavar="SEQFILE")
    p.add_argument("-o", "--output", required=True, metavar="OUT")
    p.add_argument("--name", default="synthesized")
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("census", help="all bounded sequences and their dimers")
    p.add_argument("--polygon", required=True, metavar="LABEL")
    p.add_argument("--bound", type=int, default=3, metavar="B")
    p.add_argument("--out-dir", default=None, metavar="DIR")
    p.set_defaults(fn=_cmd_census)

    p = sub.add_parser("render", help="SVG picture (layout is best-effort)")
    p.add_argument("model")
    p.add_argument("--svg", required=True, metavar="OUT")
    p.add_argument("--matching", type=int, default=None, metavar="INDEX")
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("catalog", help="shipped dimers: list or get NAME")
    p.add_argument("action", choices=("list", "get"))
    p.add_argument("name", nargs="?", default=None)
    p.set_defaults(fn=_cmd_catalog)

    p = sub.add_parser("lemmas", help="seeded structural checks on sampled walks")
    p.add_argument("model")
    p.add_argument("--walks", type=int, default=200, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--root", default=None, metavar="V")
    p.set_defaults(fn=_cmd_lemmas)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimerError, PolygonError, FanoError, SynthesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
