"""Command-line interface: ``genusiso <command> ...``.

Exit codes: 0 success or isomorphic, 1 negative answer, 2 error or
exhausted budget. Output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import fixtures
from .decomposition import biconnected_tree, canonical_tree_code, triconnected_tree
from .embedding import min_euler_genus
from .engine import Canonizer, isomorphic
from .errors import BudgetExceeded, GenusBoundExceeded, ParseError
from .facewidth import face_width
from .graph import Graph, connectivity, parse_graph
from .mapcanon import FREE, ORIENTED, canonical_code
from .oracle import OracleBudget, brute_iso
from .surface import CombinatorialMap, parse_map


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _graph(path: str) -> Graph:
    try:
        return parse_graph(_read(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _map(path: str) -> CombinatorialMap:
    try:
        return parse_map(_read(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _witness_lines(phi: dict[int, int]) -> list[str]:
    return [f"{v} -> {phi[v]}" for v in sorted(phi)]


def cmd_iso(args) -> int:
    g1, g2 = _graph(args.a), _graph(args.b)
    verdict = isomorphic(g1, g2, args.max_genus, args.budget)
    if args.trace:
        for line in verdict.trace:
            print(f"trace: {line}")
    print("isomorphic" if verdict.isomorphic else "not isomorphic")
    if verdict.isomorphic and args.witness:
        print("\n".join(_witness_lines(verdict.witness)))
    return 0 if verdict.isomorphic else 1


def cmd_genus(args) -> int:
    g = _graph(args.file)
    if not g.is_connected():
        raise CliError("genus needs a connected graph")
    found = min_euler_genus(g, args.max_genus, args.budget)
    if found is None:
        print(f"euler-genus > {args.max_genus}")
        return 1
    print(f"euler-genus {found[0]}")
    return 0


def cmd_facewidth(args) -> int:
    fw = face_width(_map(args.file))
    print("inf" if fw == float("inf") else int(fw))
    return 0


def cmd_canon(args) -> int:
    text = _read(args.file)
    if text.lstrip().startswith("map"):
        try:
            m = parse_map(text)
        except ParseError as exc:
            raise CliError(f"{args.file}: {exc}") from None
        print(canonical_code(m, args.mode).hex())
        return 0
    g = _graph(args.file)
    cz = Canonizer(args.max_genus, args.budget)
    code, _ = cz.graph_form(g)
    if args.trace:
        for line in cz.trace:
            print(f"trace: {line}")
    print(code.hex())
    return 0


def cmd_decompose(args) -> int:
    g = _graph(args.file)
    if args.kind == "block":
        if not g.is_connected():
            raise CliError("block tree needs a connected graph")
        t = biconnected_tree(g)
    else:
        if not connectivity(g, 2):
            raise CliError("triconnected tree needs a 2-connected graph")
        t = triconnected_tree(g)
    sys.stdout.write(t.dump())
    if args.code:
        rc = Canonizer(args.max_genus, args.budget).rcanon
        print(f"code {canonical_tree_code(t, rc).hex()}")
    return 0


def cmd_embed(args) -> int:
    g = _graph(args.file)
    if not g.is_connected():
        raise CliError("embed needs a connected graph")
    found = min_euler_genus(g, args.max_genus, args.budget)
    if found is None:
        print(f"euler-genus > {args.max_genus}", file=sys.stderr)
        return 1
    sys.stdout.write(found[1].to_text())
    return 0


def cmd_oracle(args) -> int:
    g1, g2 = _graph(args.a), _graph(args.b)
    phi = brute_iso(g1, g2, OracleBudget(maxNodes=args.budget or OracleBudget.maxNodes))
    print("isomorphic" if phi is not None else "not isomorphic")
    if phi is not None and args.witness:
        print("\n".join(_witness_lines(phi)))
    return 0 if phi is not None else 1


def cmd_gen(args) -> int:
    build, names, seeded = fixtures.FAMILIES[args.family]
    kw = {}
    for name in names:
        val = getattr(args, name.lower(), None)
        if val is not None:
            kw[name] = val
    if seeded:
        kw["seed"] = args.seed
    try:
        g = build(**kw)
    except (TypeError, ValueError) as exc:
        raise CliError(f"gen {args.family}: {exc}") from None
    sys.stdout.write(g.to_text())
    return 0


def _budget(text: str) -> int:
    val = int(text)
    if val <= 0:
        raise argparse.ArgumentTypeError("budget must be positive")
    return val


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genusiso", description="Isomorphism of graphs of bounded Euler genus.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, genus=True):
        if genus:
            sp.add_argument("--max-genus", type=int, default=2, help="largest Euler genus searched (default 2)")
        sp.add_argument("--budget", type=_budget, default=None, help="search-node budget")

    sp = sub.add_parser("iso", help="decide isomorphism of two edge-list files")
    sp.add_argument("a")
    sp.add_argument("b")
    common(sp)
    sp.add_argument("--witness", action="store_true", help="print the vertex bijection")
    sp.add_argument("--trace", action="store_true", help="print per-piece case tags")
    sp.set_defaults(run=cmd_iso)

    sp = sub.add_parser("genus", help="minimum Euler genus")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(run=cmd_genus)

    sp = sub.add_parser("facewidth", help="face-width of a map file")
    sp.add_argument("file")
    sp.set_defaults(run=cmd_facewidth)

    sp = sub.add_parser("canon", help="canonical code (hex) of a map or graph file")
    sp.add_argument("file")
    common(sp)
    sp.add_argument("--mode", choices=(FREE, ORIENTED), default=FREE, help="map isomorphism mode")
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(run=cmd_canon)

    sp = sub.add_parser("decompose", help="block or triconnected tree dump")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=("block", "tri"), default="tri")
    sp.add_argument("--code", action="store_true", help="also print the canonical tree code")
    common(sp)
    sp.set_defaults(run=cmd_decompose)

    sp = sub.add_parser("embed", help="a minimum-genus embedding in map format")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(run=cmd_embed)

    sp = sub.add_parser("oracle", help="brute-force isomorphism")
    sp.add_argument("a")
    sp.add_argument("b")
    common(sp, genus=False)
    sp.add_argument("--witness", action="store_true")
    sp.set_defaults(run=cmd_oracle)

    sp = sub.add_parser("gen", help="emit a fixture graph")
    sp.add_argument("family", choices=sorted(fixtures.FAMILIES))
    for flag in ("k", "L", "layers", "n", "extra", "diagonals"):
        sp.add_argument(f"--{flag}", dest=flag.lower(), type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(run=cmd_gen)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.run(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
    except GenusBoundExceeded as exc:
        print(f"genus bound exceeded: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
