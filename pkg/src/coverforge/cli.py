"""Command-line front end: ``coverforge <command> [options]``.

Every command writes its artifact to ``--out`` (stdout by default) and exits 0
when all checked invariants hold, 1 when one fails and 2 on malformed input.
Errors are reported as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from pathlib import Path

from .braid import BraidWord, closure_components
from .graph import (
    EdgeColoredGraph,
    build_Gm,
    check_color_symmetry,
    is_consecutive_colored,
    is_tree,
    random_consecutive_tree,
    to_dot,
    validate,
)
from .lifting import K_CAP, ArcSpec, criterion_tau2, criterion_tau3, lifts_rel_boundary, min_lifting_exponent
from .monodromy import rep_from_graph
from .universal import build_covering_datum, iterate_to_knot, lift_tables

log = logging.getLogger("coverforge")


class InvariantFailure(Exception):
    def __init__(self, failed: list[str], artifact: str):
        super().__init__("violated: " + "; ".join(failed))
        self.failed = failed
        self.artifact = artifact


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"{args.command} needs {', '.join(missing)}")


def _read_braid(args) -> BraidWord:
    _need(args, "braid")
    text = args.braid
    path = Path(text)
    if path.is_file():
        text = path.read_text()
    return BraidWord.parse(text, args.strands)


def cmd_gm_build(args) -> str:
    _need(args, "m")
    gm = build_Gm(args.m)
    if args.format == "dot":
        labels = {v: f"v^{n.copy}_{n.index}" for v, n in enumerate(gm.names)}
        return to_dot(gm.graph, labels, name=f"G{args.m}")
    data = gm.graph.to_json()
    data["m"] = args.m
    data["names"] = [[n.copy, n.index] for n in gm.names]
    if args.format == "text":
        return f"G_{args.m}: {len(gm.graph.vertices)} vertices, {len(gm.graph.edges)} edges, colors 1..{2 * args.m}\n"
    return _dump(data)


def cmd_gm_verify(args) -> str:
    _need(args, "m")
    gm = build_Gm(args.m)
    report = {
        "tree": is_tree(gm.graph),
        "coloring": not validate(gm.graph),
        "symmetry": check_color_symmetry(gm.graph, gm.reflection(), gm.color_reflection()),
        "consecutive": is_consecutive_colored(gm.graph),
    }
    if args.format == "text":
        out = "".join(f"{k:12s} {'pass' if v else 'FAIL'}\n" for k, v in report.items())
    else:
        out = _dump({"m": args.m, "properties": report})
    failed = [k for k, v in report.items() if not v]
    if failed:
        raise InvariantFailure(failed, out)
    return out


def cmd_tables(args) -> str:
    _need(args, "m")
    rows = lift_tables(build_covering_datum(args.m))
    diffs = [r for r in rows if not r.ok]
    if args.format == "text":
        lines = [f"{r.table} {r.case:40s} k={r.k:3d} i={r.i:3d} {r.start}->{r.expected} got {r.computed}" for r in rows]
        lines += [f"DIFF {r.table} {r.case} k={r.k} i={r.i}: expected {r.expected}, computed {r.computed}" for r in diffs]
        out = "\n".join(lines) + "\n"
    else:
        out = _dump({"m": args.m, "rows": [r.to_json() for r in rows], "diff": [r.to_json() for r in diffs]})
    if diffs:
        raise InvariantFailure(sorted({f"{r.table}: {r.case}" for r in diffs}), out)
    return out


def _read_arc(args) -> ArcSpec:
    text = args.arc
    if text is None:
        raise ValueError("lift-check needs --arc")
    path = Path(text)
    if path.is_file():
        return ArcSpec.from_json(json.loads(path.read_text()))
    return ArcSpec.standard(int(text))


def _check_one(graph: EdgeColoredGraph, arc: ArcSpec, k: int | None, k_cap: int) -> dict:
    rep = rep_from_graph(graph)
    report = min_lifting_exponent(rep, arc, k_cap)
    out = {"arc": arc.to_json(), "min_lifting_exponent": report.min_exponent}
    if k is not None:
        out["k"] = k
        out["oracle"] = lifts_rel_boundary(rep, arc, k, k_cap)
    standard = arc.p + 1 == arc.q and not arc.left_conj.letters and not arc.right_conj.letters
    if standard:
        crit = {2: criterion_tau2(graph, arc.p), 3: criterion_tau3(graph, arc.p)}
        oracle = {j: lifts_rel_boundary(rep, arc, j) for j in crit}
        out["criteria"] = {f"tau{j}": {"criterion": crit[j], "oracle": oracle[j]} for j in crit}
        out["agree"] = crit == oracle
    return out


def cmd_lift_check(args) -> str:
    if args.random:
        rng = random.Random(args.seed)
        results = []
        for t in range(args.random):
            g = random_consecutive_tree(rng)
            for i in range(1, g.num_colors()):
                r = _check_one(g, ArcSpec.standard(i), args.k, args.k_cap)
                r["tree"] = t
                results.append(r)
        disagree = [r for r in results if not r["agree"]]
        summary = {"seed": args.seed, "trees": args.random, "checks": len(results), "disagreements": disagree}
    else:
        if args.graph is not None:
            graph = EdgeColoredGraph.from_json(Path(args.graph).read_text())
        elif args.m is not None:
            graph = build_Gm(args.m).graph
        else:
            raise ValueError("lift-check needs --graph, --m or --random")
        r = _check_one(graph, _read_arc(args), args.k, args.k_cap)
        disagree = [r] if r.get("agree") is False else []
        summary = r
    if args.format == "text":
        out = f"disagreements: {len(disagree)}\n" if args.random else "".join(f"{k}: {v}\n" for k, v in summary.items())
    else:
        out = _dump(summary)
    if disagree:
        raise InvariantFailure(["criterion agrees with oracle"], out)
    return out


def cmd_construct(args) -> str:
    braid = _read_braid(args)
    tower = iterate_to_knot(braid, args.max_stages)
    if args.format == "text":
        lines = [f"input: {closure_components(braid)} components on {braid.strands} strands"]
        for j, st in enumerate(tower.stages, 1):
            bad = [k for k, v in st.checks.items() if not v]
            lines.append(
                f"stage {j}: m={st.m} components {st.components_before}->{st.components_after} "
                f"branch braid {len(st.branch_braid)} letters, checks {'pass' if not bad else 'FAIL ' + ','.join(bad)}"
            )
        lines.append(f"final: {tower.final_components} component(s)")
        out = "\n".join(lines) + "\n"
    else:
        out = _dump(tower.to_json())
    if not tower.ok:
        failed = [f"stage {j}: {k}" for j, st in enumerate(tower.stages, 1) for k, v in st.checks.items() if not v]
        if tower.final_components != 1:
            failed.append("final branch braid is a knot")
        raise InvariantFailure(failed, out)
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(json.dumps({"error": message, "type": "UsageError"}) + "\n")
        self.exit(2)


COMMANDS = {
    "gm-build": cmd_gm_build,
    "gm-verify": cmd_gm_verify,
    "tables": cmd_tables,
    "lift-check": cmd_lift_check,
    "construct": cmd_construct,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coverforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--m", type=int)
        p.add_argument("--braid", help="inline word such as '1 -2 1' or a file path")
        p.add_argument("--strands", type=int)
        p.add_argument("--k-cap", type=int, default=K_CAP)
        p.add_argument("--format", choices=("json", "text", "dot"), default="json")
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        if name == "lift-check":
            p.add_argument("--graph", help="graph JSON file")
            p.add_argument("--arc", help="index i of the standard arc, or an arc JSON file")
            p.add_argument("--k", type=int)
            p.add_argument("--random", type=int, default=0, help="sweep this many random consecutive trees")
        if name == "construct":
            p.add_argument("--max-stages", type=int)
    return parser


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("COVERFORGE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.format == "dot" and args.command != "gm-build":
            raise ValueError("--format dot is only available for gm-build")
        _write(COMMANDS[args.command](args), args.out)
        return 0
    except InvariantFailure as exc:
        _write(exc.artifact, args.out)
        sys.stderr.write(json.dumps({"error": str(exc), "type": "InvariantFailure", "failed": exc.failed}) + "\n")
        return 1
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
