"""Command-line front door: ``upoly <command> ...``.

One subcommand per deliverable: compute (any invariant of a tree or graph
file), construct (emit the tree families), verify-pair, verify-identities,
reconstruct, scan and phi.  Outputs are byte-identical across runs for the
same flags; exit status is 0 on success, 1 on verification failure or a
computation error, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions, invariants, reconstruction, search
from .errors import UPolyError
from .graphmodel import (
    Graph,
    RootedTree,
    WeightedGraph,
    tree_from_json_dict,
    tree_from_text,
    tree_to_json_dict,
    tree_to_text,
)
from .polycore import (
    UPolynomial,
    poly_from_json_dict,
    poly_from_text,
    poly_to_json_dict,
    poly_to_text,
    restrict_part_size,
    star_specialize,
    truncate_length,
)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_tree_file(path: str) -> tuple[dict | None, RootedTree]:
    """Returns (raw json dict or None, tree).  JSON may carry extra fields."""
    text = _read_input(path).strip()
    if text.startswith("{"):
        data = json.loads(text)
        return data, tree_from_json_dict(data)
    return None, tree_from_text(text)


def _load_poly_file(path: str) -> UPolynomial:
    text = _read_input(path).strip()
    if text.startswith("{"):
        return poly_from_json_dict(json.loads(text))
    return poly_from_text(text)


def _emit_poly(p: UPolynomial, args, xname: str = "x") -> None:
    if args.format == "text":
        _write_output(poly_to_text(p, xname=xname) + "\n", args.out)
    else:
        _write_output(json.dumps(poly_to_json_dict(p)) + "\n", args.out)


def _emit_tree(t: RootedTree, args) -> None:
    if args.format == "text":
        _write_output(tree_to_text(t) + "\n", args.out)
    else:
        _write_output(json.dumps(tree_to_json_dict(t)) + "\n", args.out)


def _cmd_compute(args) -> int:
    data, tree = _load_tree_file(args.tree)
    graph = tree.to_graph()
    root = args.root if args.root is not None else tree.root
    strategy = args.strategy
    if strategy == "auto":
        strategy = "fast"
    if args.invariant == "u":
        if strategy == "fast":
            p = star_specialize(invariants.u_rooted(tree, "fast"))
        else:
            p = invariants.u_polynomial(graph, cap=args.cap_edges)
    elif args.invariant == "w":
        weights = (data or {}).get("weights")
        gw = WeightedGraph(graph, weights) if weights else WeightedGraph.with_unit_weights(graph)
        p = invariants.w_polynomial(gw, cap=args.cap_edges)
    elif args.invariant == "u-rooted":
        if strategy == "fast":
            rooted = tree if root == tree.root else RootedTree.from_edges(tree.n, tree.edge_list(), root)
            p = invariants.u_rooted(rooted, "fast")
        else:
            p = invariants.u_rooted(graph, "subset", root=root, cap=args.cap_edges)
    elif args.invariant == "csf":
        p = invariants.chromatic_symmetric(graph, cap=args.cap_edges)
        if args.truncate_length is not None:
            p = truncate_length(p, args.truncate_length)
        if args.restrict_part_size is not None:
            p = restrict_part_size(p, args.restrict_part_size)
        _emit_poly(p, args, xname="p")
        return 0
    elif args.invariant == "csf-rooted":
        p = invariants.chromatic_symmetric(tree, root=None if root == tree.root else root, cap=args.cap_edges)
        _emit_poly(p, args, xname="p")
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.invariant)
    if args.truncate_length is not None:
        p = truncate_length(p, args.truncate_length)
    if args.restrict_part_size is not None:
        p = restrict_part_size(p, args.restrict_part_size)
    _emit_poly(p, args)
    return 0


def _cmd_construct(args) -> int:
    if args.family in ("a", "b"):
        a, b = constructions.build_ab(args.k, cap=args.cap)
        tree = a if args.family == "a" else b
    else:
        if args.l is None:
            raise UPolyError("--l is required for the y/z families")
        y, z = constructions.build_yz(args.k, args.l, cap=args.cap)
        tree = y if args.family == "y" else z
    _emit_tree(tree, args)
    return 0


def _cmd_verify_pair(args) -> int:
    report = constructions.verify_pair(args.k, args.l, cap=args.cap)
    _write_output(json.dumps(report.to_json_dict()) + "\n", args.out)
    return 0 if report.ok else 1


def _cmd_verify_identities(args) -> int:
    result = constructions.verify_identities(
        args.k, args.l, trials=args.trials, seed=args.seed, cap=args.cap
    )
    _write_output(json.dumps(result) + "\n", args.out)
    return 0 if result["all_ok"] else 1


def _cmd_reconstruct(args) -> int:
    p = _load_poly_file(args.poly)
    tree = reconstruction.reconstruct(p, cap=args.cap)
    _emit_tree(tree, args)
    return 0


def _cmd_scan(args) -> int:
    m = None if args.m == "full" else int(args.m)
    records = search.collision_scan(args.n_max, m, threads=args.threads)
    lines = "".join(json.dumps(r.to_json_dict()) + "\n" for r in records)
    _write_output(lines, args.out)
    return 0


def _cmd_phi(args) -> int:
    restricted = search.phi_restricted(args.m, args.n_max, threads=args.threads)
    payload = {
        "m": args.m,
        "n_max": args.n_max,
        "restricted": restricted,
        "upper_bound": constructions.phi_upper_bound(args.m),
    }
    _write_output(json.dumps(payload) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="upoly",
        description="Exact U-, W- and rooted U-polynomials of graphs and trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("compute", help="compute an invariant of a tree/graph file")
    p.add_argument("--tree", required=True, help="tree file (JSON or level-sequence text), '-' for stdin")
    p.add_argument(
        "--invariant",
        choices=("u", "w", "u-rooted", "csf", "csf-rooted"),
        default="u",
    )
    p.add_argument("--strategy", choices=("auto", "fast", "subset"), default="auto")
    p.add_argument("--root", type=int, default=None, help="override the root vertex")
    p.add_argument("--truncate-length", type=int, default=None, metavar="M",
                   help="keep terms of partition length <= M+1")
    p.add_argument("--restrict-part-size", type=int, default=None, metavar="K",
                   help="keep terms whose parts are <= K")
    p.add_argument("--cap-edges", type=int, default=None, help="subset-expansion edge cap")
    common(p)
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("construct", help="emit one of the explicit tree families")
    p.add_argument("--family", choices=("a", "b", "y", "z"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--cap", type=int, default=constructions.DEFAULT_FAMILY_CAP)
    common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify-pair", help="exact collision report for the (k, l) pair")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--cap", type=int, default=constructions.DEFAULT_PAIR_CAP)
    common(p)
    p.set_defaults(func=_cmd_verify_pair)

    p = sub.add_parser("verify-identities", help="check the product/difference identities")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=constructions.DEFAULT_PAIR_CAP)
    common(p)
    p.set_defaults(func=_cmd_verify_identities)

    p = sub.add_parser("reconstruct", help="rebuild a rooted tree from its polynomial")
    p.add_argument("--poly", required=True, help="polynomial file (JSON or text), '-' for stdin")
    p.add_argument("--cap", type=int, default=reconstruction.DEFAULT_SIZE_CAP)
    common(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("scan", help="exhaustive collision scan over free trees")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--m", default="full", help="truncation level, or 'full'")
    p.add_argument("--threads", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("phi", help="restricted collision minimum next to the constructed bound")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_phi)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UPolyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
