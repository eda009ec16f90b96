"""snarkforge command-line interface.

Exit codes: 0 success, 1 property not satisfied, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .families import (
    Certificate,
    CertificateMismatch,
    FRAGMENT_ALIASES,
    FragmentCountMismatch,
    InvalidParts,
    InvalidTreeSpec,
    NotADecollineator,
    RelationOutsideB,
    UnsupportedOrder,
    build_halin,
    composite_family,
    decollineator_of,
    even_order_family,
    first_edge,
    first_path,
    fragment_by_alias,
    halin_dipole,
    halin_snark,
    treelike,
    verify_certificate,
    w34,
    windmill,
)
from .flows import (
    DEFAULT_NODE_BUDGET,
    LOWER_BOUND_5,
    NotBridgeless,
    SearchBudgetExceeded,
    circular_flow_lower_bound,
    cover_with_k_matchings,
    dump_witness,
    perfect_matching_index,
)
from .multipole import (
    NAMED_GRAPHS,
    Multipole,
    MultipoleError,
    bipartition,
    cyclic_edge_connectivity_at_least,
    emit_dot,
    emit_graph6,
    girth,
    named_graph,
    parse_graph6,
    parse_json,
    remove_path,
)
from .transitions import (
    A,
    B,
    C,
    D,
    DB,
    M,
    M_PRIME,
    NotBipartite,
    WeightArityMismatch,
    classify_dipole,
    transition_relation,
    weighted_transition_relation,
)

SCHEMA = 1
NAMED_RELATIONS = {"A": A, "B": B, "C": C, "D": D, "DB": DB, "M": M, "M'": M_PRIME}


class UsageError(ValueError):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SNARKFORGE_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"SNARKFORGE_THREADS must be an integer, got {env!r}") from None


def load_graph(spec: str) -> Multipole:
    """A graph6 or JSON file, or the name of a built-in graph."""
    if spec in NAMED_GRAPHS:
        return named_graph(spec)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"{spec}: no such file or built-in graph ({', '.join(NAMED_GRAPHS)})")
    text = path.read_text()
    if path.suffix == ".json":
        return parse_json(text)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise UsageError(f"{spec}: empty file")
    return parse_graph6(lines[0])


def _metadata(g: Multipole) -> dict:
    cubic = g.is_cubic
    return {
        "order": g.n,
        "size": len(g.edges),
        "girth": girth(g),
        "bipartite": bipartition(g) is not None,
        "cyclic_4": cubic and cyclic_edge_connectivity_at_least(g, 4),
    }


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# -- generate --------------------------------------------------------------


def _parse_tree(text: str):
    try:
        return json.loads(text)
    except ValueError as exc:
        raise InvalidTreeSpec(f"tree must be a JSON nested list: {exc}") from None


def _fragments(text: str | None, count: int):
    names = [s for s in (text or "").split(",") if s] or ["petersen"] * count
    return [fragment_by_alias(s) for s in names]


def _build(args):
    fam = args.family
    if fam == "windmill":
        frags = _fragments(args.fragments, 3)
        if len(frags) != 3:
            raise FragmentCountMismatch("a windmill needs exactly three fragments")
        s = windmill(*frags)
        return s.graph, s.certificate
    if fam == "treelike":
        s = treelike(_parse_tree(args.tree or "[[],[[],[]],[]]"))
        return s.graph, s.certificate
    if fam == "halin":
        h = build_halin(_parse_tree(args.tree or "[[],[],[]]"))
        frags = _fragments(args.fragments, len(h.leaves))
        s = halin_snark(h, frags, orientation=args.orientation)
        return s.graph, s.certificate
    if fam == "even-order":
        if args.n is None:
            raise UsageError("even-order needs --n")
        s = even_order_family(args.n)
        return s.graph, s.certificate
    if fam == "composite":
        base = w34()
        if args.variant == "G+1":
            parts = [decollineator_of("Petersen")] + [halin_dipole(base, 0, "22")] * args.k
        else:
            parts = [halin_dipole(base, 0, "ext")] * args.k
        c = composite_family(parts, args.variant)
        return c.graph, c.certificate
    raise UsageError(f"unknown family {fam!r}")


def cmd_generate(args) -> int:
    t0 = time.time()
    g, cert = _build(args)
    meta = {"schema": SCHEMA, "family": args.family, "graph6": emit_graph6(g), **_metadata(g)}
    meta["certificate_conclusion"] = cert.conclusion if cert else None
    if args.out:
        out = Path(args.out)
        out.write_text(emit_graph6(g) + "\n")
        meta["graph_file"] = str(out)
        if cert is not None:
            cpath = out.with_name(out.name + ".cert.json")
            cpath.write_text(cert.dumps() + "\n")
            meta["certificate_file"] = str(cpath)
        if args.dot:
            Path(args.dot).write_text(emit_dot(g))
    meta["seconds"] = round(time.time() - t0, 3)
    _emit(meta, args.out + ".json" if args.out else None)
    if args.out:
        print(f"{args.out}: order {g.n}")
    return 0


# -- pmi -------------------------------------------------------------------


def cmd_pmi(args) -> int:
    t0 = time.time()
    g = load_graph(args.input)
    g.check_cubic()
    report = {"schema": SCHEMA, "input": args.input, **_metadata(g)}
    witness_obj = None
    if args.certificate:
        cert = Certificate.from_json(json.loads(Path(args.certificate).read_text()))
        try:
            ok = verify_certificate(cert, g, threads=_threads(args))
        except CertificateMismatch as exc:
            print(f"certificate rejected: {exc}", file=sys.stderr)
            return 1
        report["certificate"] = {"file": args.certificate, "verified": ok, "conclusion": cert.conclusion}
        if not ok:
            value = None
        else:
            value = LOWER_BOUND_5
            if g.n <= args.direct_cap:
                cover = cover_with_k_matchings(g, 5)
                if cover is not None:
                    value, witness_obj = 5, cover
    elif g.n > args.direct_cap:
        raise UsageError(f"order {g.n} exceeds --direct-cap {args.direct_cap}; "
                         "pass --certificate or raise the cap")
    else:
        res = perfect_matching_index(g, budget=args.budget)
        value, witness_obj = res.value, res.witness
    report["pmi"] = value
    if witness_obj is not None and args.witness:
        Path(args.witness).write_text(dump_witness(witness_obj) + "\n")
        report["witness_file"] = args.witness
    report["seconds"] = round(time.time() - t0, 3)
    if args.json:
        _emit(report, None)
    else:
        line = str(value) if value is not None else "unknown"
        if args.witness and witness_obj is not None:
            line += f" (witness: {args.witness})"
        print(line)
    if args.assert_ge5 and value not in (5, LOWER_BOUND_5):
        return 1
    return 0 if value is not None else 1


# -- transitions -----------------------------------------------------------


def _path(text: str | None, g: Multipole, weighted: bool) -> list[int]:
    if text:
        try:
            return [int(x) for x in text.replace("-", ",").split(",")]
        except ValueError:
            raise UsageError(f"bad path {text!r}; use e.g. 0,1 or 0,1,2") from None
    return list(first_path(g) if weighted else first_edge(g))


def cmd_transitions(args) -> int:
    g = load_graph(args.input)
    path = _path(args.path, g, args.weighted)
    pole = remove_path(g, path)
    level = "pairs" if args.pairs else "shapes"
    if pole.kind == (2, 2, 1):
        rel = weighted_transition_relation(pole, level=level, split=args.split_degenerate)
    elif pole.kind == (2, 2, 0):
        rel = transition_relation(pole, level=level, split=args.split_degenerate)
    else:
        raise UsageError(f"path {path} gives a pole of kind {pole.kind}, not a dipole")
    if args.dot:
        print(rel.to_dot())
        return 0
    merged = rel.merged() if args.split_degenerate else rel
    report = {
        "schema": SCHEMA,
        "input": args.input,
        "path": path,
        "kind": list(pole.kind),
        "relation": rel.to_json(),
        "table": [str(t) for t in sorted(rel)],
        "tags": sorted(classify_dipole(merged)),
        "equals": sorted(k for k, v in NAMED_RELATIONS.items() if merged == v),
        "contained_in": sorted(k for k, v in NAMED_RELATIONS.items() if merged <= v),
    }
    _emit(report, args.out)
    return 0


# -- cfn -------------------------------------------------------------------


def cmd_cfn(args) -> int:
    g = load_graph(args.input)
    ladder = circular_flow_lower_bound(g, args.qmax)
    if args.json:
        _emit({"schema": SCHEMA, "input": args.input,
               "ladder": [{"p": p, "q": q, "exists": ok} for p, q, ok in ladder.entries],
               "statement": ladder.statement()}, None)
    else:
        for p, q, ok in ladder.entries:
            print(f"{p}/{q}: {'yes' if ok else 'no'}")
        print(ladder.statement())
    return 0


# -- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    g = load_graph(args.input)
    cert = Certificate.from_json(json.loads(Path(args.certificate).read_text()))
    try:
        ok = verify_certificate(cert, g, threads=_threads(args))
    except CertificateMismatch as exc:
        print(f"certificate rejected: {exc}")
        return 1
    print(cert.conclusion)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="snarkforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for certificate checks (default: $SNARKFORGE_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a snark family member")
    g.add_argument("family", choices=["windmill", "treelike", "halin", "even-order", "composite"])
    g.add_argument("--n", type=int, help="order for even-order")
    g.add_argument("--fragments", help=f"comma list of {sorted(FRAGMENT_ALIASES)} or DECOL:BLOCK")
    g.add_argument("--tree", help="plane tree as a JSON nested list, e.g. [[],[],[]]")
    g.add_argument("--orientation", type=int, choices=[1, -1], default=1)
    g.add_argument("--variant", choices=["G+1", "G+2"], default="G+1")
    g.add_argument("--k", type=int, default=1, help="number of Halin parts for composite")
    g.add_argument("--out", help="graph6 output file (metadata goes to OUT.json)")
    g.add_argument("--dot", help="also write DOT to this file")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("pmi", help="perfect matching index")
    m.add_argument("input", help="graph6/JSON file or built-in graph name")
    m.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    m.add_argument("--direct-cap", type=int, default=60)
    m.add_argument("--certificate", help="certificate JSON to use instead of direct search")
    m.add_argument("--witness", help="write the witness cover or flow here")
    m.add_argument("--assert-ge5", action="store_true", help="exit 1 unless the index is at least 5")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_pmi)

    t = sub.add_parser("transitions", help="transition relation of G_uv or G_uwv")
    t.add_argument("input")
    t.add_argument("--path", help="vertices to remove, e.g. 0,1 (default: first edge, or first 2-path with --weighted)")
    t.add_argument("--weighted", action="store_true")
    t.add_argument("--split-degenerate", action="store_true")
    t.add_argument("--pairs", action="store_true", help="keep value pairs, not only shapes")
    t.add_argument("--dot", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=cmd_transitions)

    c = sub.add_parser("cfn", help="circular flow number evidence ladder")
    c.add_argument("input")
    c.add_argument("--qmax", type=int, default=2)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_cfn)

    v = sub.add_parser("verify", help="check a certificate against a graph")
    v.add_argument("input")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_verify)
    return p


INPUT_ERRORS = (
    UsageError, MultipoleError, UnsupportedOrder, InvalidTreeSpec, FragmentCountMismatch,
    InvalidParts, NotBridgeless, NotBipartite, NotADecollineator, RelationOutsideB,
    WeightArityMismatch, OSError, ValueError,
)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SearchBudgetExceeded as exc:
        print(f"error: SearchBudgetExceeded: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
