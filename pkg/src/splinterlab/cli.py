"""Command-line front door.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 size-cap
refusal.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources

from . import documents as docs
from .census import (
    STRATEGIES, HalfSpaceStream, conjecture_probe, random_stream, restricted_solution_sets,
    splinter_census,
)
from .classify import classify_algebraic, classify_geometric, validate_classification
from .encodings import (
    check_enumerable, difference_query, get_problem, prop2_face_witness, prop2_interior_witness,
    random_instance,
)
from .errors import SizeCapError, SplinterLabError, VerificationError
from .exact import sub, unit
from .polyhedra import solution_set
from .trees import ExplicitTree, build_tournament_tree, face_scrape_coverage, verify_solves

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SIZE = 0, 1, 2, 3

BUNDLED_TREES = {("tsp", 3): "tsp3_tournament.json"}


class UsageError(SplinterLabError):
    pass


def _emit(args, doc, rows=None, columns=None) -> None:
    if args.format == "csv":
        if rows is None:
            raise UsageError(f"{args.command} has no tabular output; use --format json")
        docs.write_text(docs.csv_text(rows, columns), args.out)
    else:
        docs.write_text(docs.dumps(doc), args.out)


def _stream(args, d: int) -> HalfSpaceStream:
    if not getattr(args, "stream", None):
        return HalfSpaceStream()
    stream = HalfSpaceStream.from_document(docs.load_json(args.stream))
    if stream.queries and len(stream.queries[0]) != d:
        raise UsageError(f"stream dimension {len(stream.queries[0])} does not match {d}")
    return stream


def _query(args, d: int) -> tuple:
    if args.vector:
        q = docs.parse_rational_list(args.vector)
    elif args.query:
        q = docs.query_from_document(docs.load_json(args.query))
    else:
        raise UsageError("a query is required (--query FILE or --vector LIST)")
    if len(q) != d:
        raise UsageError(f"query has dimension {len(q)}, problem needs {d}")
    return q


def _config(args) -> dict:
    return {"problem": args.problem, "n": args.n, "seed": args.seed}


def _load_tree(args, spec):
    if args.tree:
        return ExplicitTree.from_document(docs.load_json(args.tree))
    name = BUNDLED_TREES.get((spec.name, args.n))
    if name is None:
        return build_tournament_tree(spec, args.n)
    text = resources.files("splinterlab.data").joinpath(name).read_text(encoding="utf-8")
    return ExplicitTree.from_document(json.loads(text))


# -- commands --------------------------------------------------------------------

def cmd_gen(args, spec) -> int:
    n, d = args.n, spec.dimension(args.n)
    kind = args.kind
    if kind == "random":
        inst = random_instance(spec, n, random.Random(args.seed), args.low, args.high, args.max_den)
        doc = docs.instance_to_document(inst)
    elif kind == "interior-witness":
        doc = docs.instance_to_document(prop2_interior_witness(n))
    elif kind == "face-witness":
        doc = docs.instance_to_document(prop2_face_witness(n, args.index))
    elif kind == "solution-set":
        doc = solution_set(spec, n, args.index).to_document()
    elif kind == "tree":
        tree = build_tournament_tree(spec, n, lazy=False)
        doc = tree.to_document()
    elif kind == "difference-query":
        doc = {"vector": docs.rational_list(difference_query(spec, n, args.index, args.other))}
    elif kind == "coordinate-query":
        if args.other is None:
            doc = {"vector": docs.rational_list(unit(d, args.index))}
        else:
            doc = {"vector": docs.rational_list(sub(unit(d, args.index), unit(d, args.other)))}
    elif kind == "stream":
        doc = random_stream(d, args.p, random.Random(args.seed)).to_document()
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    _emit(args, doc)
    return EXIT_OK


def _compute_faces(args, spec) -> str:
    stream = _stream(args, spec.dimension(args.n))
    sets = restricted_solution_sets(spec, args.n, stream, args.jobs, with_faces=True)
    entries = []
    for rs in sets:
        entry = {"set": rs.s, "full": rs.full}
        if rs.full:
            entry.update(docs.faces_to_document(rs.faces))
            entry["facet_count"] = len(rs.faces.facet_indices)
        else:
            entry["polyhedron"] = rs.polyhedron.to_document()
        entries.append(entry)
    doc = {
        "problem": spec.name, "n": args.n, "stream": stream.to_document(),
        "summary": {"sets": len(sets), "full": sum(1 for rs in sets if rs.full),
                    "facet_counts": [e.get("facet_count") for e in entries],
                    "normal_counts": [len(rs.polyhedron.normals) for rs in sets]},
        "sets": entries,
    }
    return docs.dumps(doc)


def cmd_faces(args, spec) -> int:
    check_enumerable(spec, args.n)
    stream = _stream(args, spec.dimension(args.n))
    key = docs.cache_key("faces", spec.name, args.n, stream.to_document())
    directory = docs.cache_dir(args.cache_dir)
    text = None
    if not args.no_cache:
        text = docs.cache_read(directory, key)
    if text is None:
        text = _compute_faces(args, spec)
        if not args.no_cache:
            docs.cache_write(directory, key, text)
    status = EXIT_OK
    if args.audit_cache:
        fresh = _compute_faces(args, spec)
        if fresh != text:
            print("cache audit: cached faces differ from fresh recomputation", file=sys.stderr)
            status = EXIT_VERIFY
    doc = json.loads(text)
    rows = []
    for entry in doc["sets"]:
        if not entry["full"]:
            continue
        labels = entry["polyhedron"]["labels"]
        for i, flag in enumerate(entry["facet_flags"]):
            rows.append({"set": entry["set"], "normal": ":".join(map(str, labels[i])), "facet": flag,
                         "witness": f"sets[{entry['set']}].witnesses.{i}" if flag else ""})
    if args.format == "csv":
        docs.write_text(docs.csv_text(rows, ["set", "normal", "facet", "witness"]), args.out)
    else:
        docs.write_text(text, args.out)
    return status


def cmd_classify(args, spec) -> int:
    d = spec.dimension(args.n)
    q = _query(args, d)
    stream = _stream(args, d)
    sets = restricted_solution_sets(spec, args.n, stream, 1, with_faces=True)
    targets = [args.set] if args.set is not None else range(len(sets))
    rows, ok = [], True
    for s in targets:
        rs = sets[s]
        row = {"query": args.query_id, "set": s, "full": rs.full}
        if rs.full:
            alg = classify_algebraic(q, rs.faces)
            row.update(alg.to_document())
            if args.method == "both":
                geo = classify_geometric(q, rs.polyhedron, rs.faces)
                row["geometric"] = geo.to_document()
                ok &= geo.verdict == alg.verdict and validate_classification(q, rs.faces, geo)
            ok &= validate_classification(q, rs.faces, alg)
        rows.append(row)
    doc = {"problem": spec.name, "n": args.n, "query": docs.rational_list(q), "results": rows,
           "consistent": ok}
    _emit(args, doc, rows, ["query", "set", "full", "verdict", "orientation", "certificate"])
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify_tree(args, spec) -> int:
    tree = _load_tree(args, spec)
    if tree.problem != spec.name or tree.n != args.n:
        raise UsageError(f"tree is for {tree.problem} n={tree.n}")
    report = verify_solves(tree, spec, args.n)
    rows = ([{"leaf": c["leaf"], "sign": c["sign"], "solution": c["solution"], "status": "certified"}
             for c in report["certified"]]
            + [{"leaf": f.get("leaf"), "sign": f.get("sign"), "solution": f.get("solution"),
                "status": f["reason"]} for f in report["failures"]])
    _emit(args, report, rows, ["leaf", "sign", "solution", "status"])
    return EXIT_OK if report["solved"] else EXIT_VERIFY


def cmd_census(args, spec) -> int:
    d = spec.dimension(args.n)
    q = _query(args, d)
    stream = _stream(args, d)
    report = splinter_census(spec, args.n, stream, q, side=args.side, method=args.method,
                             jobs=args.jobs, unsafe_large=args.unsafe_large, config=_config(args))
    _emit(args, report, report.get("sets"), ["set", "full", "verdict", "orientation", "certificate"])
    return EXIT_VERIFY if report["prop1_violations"] else EXIT_OK


def cmd_probe(args, spec) -> int:
    report = conjecture_probe(spec, args.n, args.p, args.strategy, args.trials, args.seed,
                              jobs=args.jobs, unsafe_large=args.unsafe_large)
    rows = [dict(e, **(e.get("counts") or {})) for e in report["summary"]]
    _emit(args, report, rows, ["trial", "query", "spL", "sCp", "Rsp", "e_before", "e_after"])
    violations = report["best"]["prop1_violations"] if report["best"] else []
    return EXIT_VERIFY if violations else EXIT_OK


def cmd_coverage(args, spec) -> int:
    check_enumerable(spec, args.n)
    tree = _load_tree(args, spec)
    report = face_scrape_coverage(tree, spec, args.n, args.samples, args.seed)
    _emit(args, report, report["facets"], ["set", "facet", "samples", "covered", "fraction"])
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen, "faces": cmd_faces, "classify": cmd_classify, "verify-tree": cmd_verify_tree,
    "census": cmd_census, "probe": cmd_probe, "coverage": cmd_coverage,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", choices=["tsp", "ap"], default="tsp")
    common.add_argument("--n", type=int, default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--cache-dir", default=None, help=f"overridden by ${docs.CACHE_ENV}")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--unsafe-large", action="store_true", help="lift the desk-scale size caps")

    parser = argparse.ArgumentParser(prog="splinterlab", description=__doc__.splitlines()[0])
    sub_ = parser.add_subparsers(dest="command", required=True)

    p = sub_.add_parser("gen", parents=[common], help="emit instance, query, set, stream or tree files")
    p.add_argument("--kind", required=True, choices=[
        "random", "interior-witness", "face-witness", "solution-set", "tree",
        "difference-query", "coordinate-query", "stream"])
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--other", type=int, default=None)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--low", type=int, default=-10)
    p.add_argument("--high", type=int, default=10)
    p.add_argument("--max-den", type=int, default=5)

    p = sub_.add_parser("faces", parents=[common], help="facet structure of every solution set")
    p.add_argument("--stream", default=None)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--audit-cache", action="store_true", help="compare cached result with a fresh one")

    for name, helptext in (("classify", "classify a query against solution sets"),
                           ("census", "splinter census of a fresh query")):
        p = sub_.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--query", default=None, help="query file")
        p.add_argument("--vector", default=None, help="comma-separated rationals")
        p.add_argument("--stream", default=None)
        if name == "classify":
            p.add_argument("--set", type=int, default=None)
            p.add_argument("--method", choices=["algebraic", "both"], default="both")
            p.add_argument("--query-id", default=None)
        else:
            p.add_argument("--side", choices=["max", "plus", "minus"], default="max")
            p.add_argument("--method", choices=["algebraic", "geometric"], default="algebraic")

    p = sub_.add_parser("verify-tree", parents=[common], help="certify a query tree")
    p.add_argument("--tree", default=None, help="tree file (bundled tournament tree when omitted)")

    p = sub_.add_parser("probe", parents=[common], help="conjecture probe over seeded trials")
    p.add_argument("--p", type=int, default=0, help="stream length")
    p.add_argument("--strategy", choices=STRATEGIES, default="random-balanced")
    p.add_argument("--trials", type=int, default=10)

    p = sub_.add_parser("coverage", parents=[common], help="sampled face-scrape coverage")
    p.add_argument("--tree", default=None)
    p.add_argument("--samples", type=int, default=100)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        spec = get_problem(args.problem)
        if args.n < 1 or args.jobs < 1:
            raise UsageError("--n and --jobs must be positive")
        return COMMANDS[args.command](args, spec)
    except SizeCapError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, ValueError, IndexError, KeyError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
