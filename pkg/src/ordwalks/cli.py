"""Command line front end.

Every subcommand writes line-delimited text to stdout: bare values for scalar
queries (rho, rhobar, sigma), `key=value` lines for everything structured.
Identical invocations produce byte-identical output; nothing here prints
timestamps or machine-local paths into data lines.

Exit codes: 0 success, 1 a checked property failed, 2 usage or input error,
3 search exhausted.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import List, Optional

from .ordinal import OrdinalSyntaxError, parse, render, universe
from .qspace import RationalSpace, ball_members, crowding_check
from .qspace import kernel as space_kernel
from .refine import (
    InvalidLabeling,
    Labeling,
    SearchExhausted,
    refine,
    sigma,
    verify_result,
)
from .walks import CofinalityError, CSequence, check_universe, fiber, rho, rhobar, walk_trace

_UNIVERSE_SPEC = re.compile(r"w(\d+):(\d+)")


def _provider(args) -> CSequence:
    if getattr(args, "cseq", None):
        return CSequence.from_file(args.cseq)
    return CSequence()


def _emit(lines: List[str], human: bool = False) -> None:
    if human:
        width = max((len(l.split("=", 1)[0]) for l in lines if "=" in l), default=0)
        aligned = []
        for line in lines:
            if "=" in line:
                key, value = line.split("=", 1)
                aligned.append(f"{key.ljust(width)}  {value}")
            else:
                aligned.append(line)
        lines = aligned
    for line in lines:
        print(line)


def _universe_from_spec(spec: str):
    m = _UNIVERSE_SPEC.fullmatch(spec)
    if not m:
        raise ValueError(f"bad universe spec {spec!r}, expected w<k>:<c>")
    return universe(int(m.group(1)), int(m.group(2)))


def _space_from_spec(spec: str) -> RationalSpace:
    if spec == "canonical":
        return RationalSpace.canonical()
    if spec.startswith("canonical:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ValueError(f"bad space spec {spec!r}") from exc
        if n <= 0:
            raise ValueError("canonical:<N> needs N >= 1")
        base = RationalSpace.canonical()
        return RationalSpace.from_points([base.point(i) for i in range(n)], name=spec)
    return RationalSpace.from_file(spec)


def _finite_space(spec: str) -> RationalSpace:
    space = _space_from_spec(spec)
    if space.size is None:
        raise ValueError(
            "this subcommand needs a finite space: use canonical:<N> or a file"
        )
    return space


def _cmd_rho(args) -> int:
    provider = _provider(args)
    print(rho(parse(args.a), parse(args.b), provider))
    return 0


def _cmd_rhobar(args) -> int:
    provider = _provider(args)
    print(rhobar(parse(args.a), parse(args.b), provider))
    return 0


def _cmd_walk(args) -> int:
    provider = _provider(args)
    steps = walk_trace(parse(args.a), parse(args.b), provider)
    _emit(["steps=" + ",".join(render(s) for s in steps)], args.human)
    return 0


def _cmd_fiber(args) -> int:
    provider = _provider(args)
    f = fiber(parse(args.a), args.n, provider)
    lines = [
        "members=" + ",".join(render(x) for x in f.members),
        f"size={len(f.members)}",
    ]
    _emit(lines, args.human)
    return 0


def _cmd_cseq(args) -> int:
    provider = _provider(args)
    elements = provider.first(parse(args.a), args.count)
    _emit(["elements=" + ",".join(render(x) for x in elements)], args.human)
    return 0


def _cmd_check_universe(args) -> int:
    provider = _provider(args)
    ordinals = _universe_from_spec(args.spec)
    summary = check_universe(ordinals, provider)
    lines = [f"triples={summary.triples} failures={summary.failures}"]
    if summary.failures:
        lines.append("first=" + summary.first_failure.to_line())
    _emit(lines, args.human)
    return 1 if summary.failures else 0


def _cmd_ball(args) -> int:
    space = RationalSpace.canonical()
    members = ball_members(args.i, args.j, args.window, space)
    _emit(["members=" + ",".join(str(n) for n in members)], args.human)
    return 0


def _cmd_kernel(args) -> int:
    space = _finite_space(args.space)
    result = space_kernel(range(space.size), args.depth, space)
    lines = [
        "members=" + ",".join(str(n) for n in result),
        f"size={len(result)}",
    ]
    _emit(lines, args.human)
    return 0


def _cmd_crowd(args) -> int:
    space = _finite_space(args.space)
    result = crowding_check(range(space.size), args.depth, space)
    if result.ok:
        _emit([f"status=certified size={space.size} depth={args.depth}"], args.human)
        return 0
    _emit([f"status=failure i={result.i} j={result.j}"], args.human)
    return 1


def _cmd_sigma(args) -> int:
    seq = sigma(args.code)
    print("[" + ",".join(str(j) for j in seq) + "]")
    return 0


def _cmd_refine(args) -> int:
    space = _space_from_spec(args.space)
    result = refine(
        space,
        args.labeling,
        target=args.target,
        window=args.window,
        depth=args.depth,
        lookahead=args.lookahead,
        budget=args.budget,
        seed=args.seed,
    )
    lines = result.to_lines()
    _emit(lines, args.human)
    if args.out:
        # record files always keep the machine format so verify can read them
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0 if result.report.ok else 1


def _cmd_verify(args) -> int:
    fields = {}
    with open(args.file, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if "=" in line:
                key, value = line.split("=", 1)
                if key not in fields:
                    fields[key] = value
    for key in ("chosen", "points", "labels"):
        if key not in fields:
            raise ValueError(f"{args.file}: missing {key}= line")
    chosen = [int(x) for x in fields["chosen"].split(",")] if fields["chosen"] else []
    points = fields["points"].split(",") if fields["points"] else []
    labels = fields["labels"].split(",") if fields["labels"] else []
    if not (len(chosen) == len(points) == len(labels)):
        raise ValueError(f"{args.file}: chosen/points/labels lengths differ")
    depth = int(fields.get("depth", "1"))
    space = RationalSpace.from_mapping(
        {k: points[i] for i, k in enumerate(chosen)}, name=args.file
    )
    labeling = Labeling.from_mapping(
        {k: parse(labels[i]) for i, k in enumerate(chosen)}, name=args.file
    )
    report = verify_result(chosen, space, labeling, depth)
    _emit(report.to_lines(), args.human)
    return 0 if report.ok else 1


def _add_cseq_option(sub) -> None:
    sub.add_argument("--cseq", metavar="FILE", help="C-sequence override file")


def _add_human_option(sub) -> None:
    sub.add_argument("--human", action="store_true", help="align key=value output")


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ordwalks",
        description="Walks on ordinals, rational crowding kernels, and shift-increasing refinement.",
    )
    subs = top.add_subparsers(dest="command", required=True)

    p = subs.add_parser("rho", help="walk distance rho(A, B)")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    _add_cseq_option(p)
    p.set_defaults(func=_cmd_rho)

    p = subs.add_parser("rhobar", help="derived distance rhobar(A, B)")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    _add_cseq_option(p)
    p.set_defaults(func=_cmd_rhobar)

    p = subs.add_parser("walk", help="minimal walk steps from B down to A")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    _add_cseq_option(p)
    _add_human_option(p)
    p.set_defaults(func=_cmd_walk)

    p = subs.add_parser("fiber", help="all xi <= A with rho(xi, A) <= N")
    p.add_argument("a", metavar="A")
    p.add_argument("n", metavar="N", type=int)
    _add_cseq_option(p)
    _add_human_option(p)
    p.set_defaults(func=_cmd_fiber)

    p = subs.add_parser("cseq", help="first COUNT elements of the ladder at A")
    p.add_argument("a", metavar="A")
    p.add_argument("count", metavar="COUNT", type=int)
    _add_cseq_option(p)
    _add_human_option(p)
    p.set_defaults(func=_cmd_cseq)

    p = subs.add_parser(
        "check-universe", help="verify distance properties on all triples of w<k>:<c>"
    )
    p.add_argument("spec", metavar="SPEC")
    _add_cseq_option(p)
    _add_human_option(p)
    p.set_defaults(func=_cmd_check_universe)

    p = subs.add_parser("ball", help="canonical-space indices within 1/(J+1) of point I")
    p.add_argument("i", metavar="I", type=int)
    p.add_argument("j", metavar="J", type=int)
    p.add_argument("window", metavar="N", type=int)
    _add_human_option(p)
    p.set_defaults(func=_cmd_ball)

    p = subs.add_parser("kernel", help="greatest crowded subset of a finite space")
    p.add_argument("space", metavar="SPACE", help="canonical:<N> or a points file")
    p.add_argument("depth", metavar="J", type=int)
    _add_human_option(p)
    p.set_defaults(func=_cmd_kernel)

    p = subs.add_parser("crowd", help="crowding certificate for a finite space")
    p.add_argument("space", metavar="SPACE", help="canonical:<N> or a points file")
    p.add_argument("depth", metavar="J", type=int)
    _add_human_option(p)
    p.set_defaults(func=_cmd_crowd)

    p = subs.add_parser("sigma", help="finite sequence with tree code S")
    p.add_argument("code", metavar="S", type=int)
    p.set_defaults(func=_cmd_sigma)

    p = subs.add_parser("refine", help="search for a shift-increasing crowded prefix")
    p.add_argument("--labeling", required=True, metavar="L")
    p.add_argument("--target", required=True, type=int, metavar="S")
    p.add_argument("--window", required=True, type=int, metavar="N")
    p.add_argument("--depth", type=int, default=1, metavar="J")
    p.add_argument("--budget", type=int, default=10**6, metavar="B")
    p.add_argument("--seed", type=int, default=0, metavar="K")
    p.add_argument("--lookahead", type=int, default=None, metavar="D")
    p.add_argument("--space", default="canonical", metavar="SPACE")
    p.add_argument("--out", metavar="FILE", help="also write the record to FILE")
    _add_human_option(p)
    p.set_defaults(func=_cmd_refine)

    p = subs.add_parser("verify", help="re-check a refine record file")
    p.add_argument("file", metavar="FILE")
    _add_human_option(p)
    p.set_defaults(func=_cmd_verify)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SearchExhausted as exc:
        print(f"status=exhausted deepest={exc.deepest}")
        print(exc.stats.to_line())
        return 3
    except (OrdinalSyntaxError, InvalidLabeling, CofinalityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
