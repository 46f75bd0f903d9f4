"""Command-line front end.

Subcommands: `check` validates every derivation in a session file,
`eliminate` runs one admissible transformation and re-checks before writing,
`search` runs bounded backward proof search on a named goal, `selftest` runs
the oracle verification suites, and `fmt` re-prints a file canonically.

Exit codes: 0 success, 1 logical rejection or verification failure, 2 usage
or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checker import Derivation, FilterRestriction, LogicMode, check, height
from .deep import run_deep
from .errors import KernelError, SurfaceError
from .roles import complement
from .search import (
    SearchConfig,
    VERIFIABLE_RULES,
    completeness_depth,
    default_space,
    prove,
    verify_admissible,
    verify_construct,
)
from .surface import (
    SessionDoc,
    fmt_derivation,
    fmt_object,
    fmt_sequent,
    fmt_session,
    parse_formula,
    parse_iformula,
    parse_roleset,
    parse_session,
)
from .syntax import Sequent
from . import transform


def _load(path: str) -> SessionDoc:
    with open(path, encoding="utf-8") as fh:
        return parse_session(fh.read())


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_check(args) -> int:
    doc = _load(args.file)
    results = []
    worst = 0
    for name, obj in doc.objects:
        if not isinstance(obj, Derivation):
            continue
        report = check(obj, doc.mode, doc.restriction)
        results.append((name, report))
        if not report.accepted:
            worst = 1
    if args.json:
        print(json.dumps({"derivations": [{"name": n, **r.to_json()} for n, r in results]}, indent=2))
    else:
        for name, report in results:
            if report.accepted:
                print(f"{name}: accepted")
            else:
                path = ".".join(map(str, report.node_path)) or "root"
                print(f"{name}: rejected at {path}: {report.reason.value} ({report.detail})")
        if not results:
            print("no derivations in file")
    return worst


def _pick_derivations(doc: SessionDoc, args, count: int | None) -> list[tuple[str, Derivation]]:
    derivs = [(n, o) for n, o in doc.objects if isinstance(o, Derivation)]
    if args.derivations:
        names = args.derivations.split(",")
        derivs = [(n, doc.lookup(n)) for n in names]
        for n, d in derivs:
            if not isinstance(d, Derivation):
                raise KernelError(f"object {n} is not a derivation")
    if count is not None:
        if len(derivs) < count:
            raise KernelError(f"operation needs {count} derivations, file has {len(derivs)}")
        if count != len(derivs) and not args.derivations:
            derivs = derivs[:count]
    if not derivs:
        raise KernelError("no derivation to transform")
    return derivs


def cmd_eliminate(args) -> int:
    doc = _load(args.file)
    mode = doc.mode
    positions = [int(p) for p in args.at.split(",")] if args.at else []
    tracer = transform.Tracer() if args.trace else None

    if args.op == "mp_cut":
        derivs = _pick_derivations(doc, args, None)
        if len(positions) != len(derivs):
            raise KernelError("mp_cut needs one --at position per derivation")
        out = transform.mp_cut([d for _, d in derivs], positions, mode, trace=tracer)
    elif args.op == "two_cut_spill":
        derivs = _pick_derivations(doc, args, 2)[:2]
        if len(positions) != 2:
            raise KernelError("two_cut_spill needs --at <pos1>,<pos2>")
        out = transform.two_cut_spill(derivs[0][1], positions[0], derivs[1][1], positions[1], mode, trace=tracer)
    elif args.op == "one_cut":
        (name, d), = _pick_derivations(doc, args, 1)[:1]
        if len(positions) != 1:
            raise KernelError("one_cut needs --at <pos>")
        out = transform.one_cut(d, positions[0], mode, trace=tracer)
    elif args.op == "role_split":
        (name, d), = _pick_derivations(doc, args, 1)[:1]
        if len(positions) != 1 or not args.part1 or not args.part2:
            raise KernelError("role_split needs --at <pos> --part1 [..] --part2 [..]")
        r1 = parse_roleset(args.part1, doc.universe)
        r2 = parse_roleset(args.part2, doc.universe)
        out = transform.role_split(d, positions[0], r1, r2, mode, trace=tracer)
    elif args.op == "weaken":
        (name, d), = _pick_derivations(doc, args, 1)[:1]
        if not args.extra:
            raise KernelError("weaken needs --extra '(ifm [..] ..)'")
        extra = parse_iformula(args.extra, doc.universe, mode)
        out = transform.admit_weakening(d, extra, mode, trace=tracer)
    elif args.op == "derive_full":
        if not args.formula:
            raise KernelError("derive_full needs --formula '(..)'")
        f = parse_formula(args.formula, doc.universe, mode)
        ctx = doc.lookup(args.context) if args.context else Sequent()
        out = transform.derive_full(f, ctx, mode, doc.universe, trace=tracer)
    elif args.op == "identity_expand":
        if not args.formula or not args.roles:
            raise KernelError("identity_expand needs --formula '(..)' --roles [..]")
        f = parse_formula(args.formula, doc.universe, mode)
        r = parse_roleset(args.roles, doc.universe)
        ctx = doc.lookup(args.context) if args.context else Sequent()
        out = transform.identity_expand(r, f, ctx, mode, trace=tracer)
    else:
        raise KernelError(f"unknown operation {args.op}")

    if tracer is not None:
        for line in tracer.lines():
            print(line, file=sys.stderr)

    report = check(out, mode, doc.restriction)
    if not report.accepted:
        _emit(args, {"status": "rejected", **report.to_json()},
              f"internal error: output failed to re-check: {report.reason.value}")
        return 1
    text = fmt_derivation(out)
    if args.output:
        header = f"(session {doc.universe.n} {mode.value})"
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(header + "\n\n" + text + "\n")
    _emit(args, {"status": "ok", "conclusion": fmt_sequent(out.conclusion), "height": height(out)},
          text if not args.output else f"ok: {fmt_sequent(out.conclusion)} -> {args.output}")
    return 0


def cmd_search(args) -> int:
    doc = _load(args.file)
    goal = doc.lookup(args.goal)
    if not isinstance(goal, Sequent):
        raise KernelError(f"object {args.goal} is not a sequent")
    cfg = SearchConfig(
        max_depth=args.depth,
        mode=doc.mode,
        restriction=doc.restriction,
        contraction_budget=args.budget,
    )
    d = prove(goal, cfg)
    if d is None:
        _emit(args, {"goal": args.goal, "found": False}, f"{args.goal}: no proof within depth {args.depth}")
        return 1
    _emit(args, {"goal": args.goal, "found": True, "derivation": fmt_derivation(d)},
          fmt_derivation(d))
    return 0


def cmd_selftest(args) -> int:
    space = default_space(args.universe, max_measure=args.measure, max_items=args.max_items)
    filt = None
    if args.filter_core is not None:
        filt = space.universe.filter(parse_roleset(args.filter_core, space.universe).members())
    restriction = FilterRestriction(filt) if filt else FilterRestriction(None)
    modes = [LogicMode.MRL, LogicMode.LMRL] if args.mode == "both" else [LogicMode(args.mode)]
    rules = args.rules.split(",") if args.rules else list(VERIFIABLE_RULES)
    reports = []
    failures = 0
    for mode in modes:
        cfg = SearchConfig(
            max_depth=8 + 2 * args.universe,
            mode=mode,
            restriction=restriction,
            contraction_budget=args.budget,
        )
        for rule in rules:
            rep = verify_admissible(rule, space, cfg, cap=args.cap)
            reports.append(rep)
            failures += len(rep.failures)
            if not args.json:
                print(rep.summary())
                for inst, stage in rep.failures[: args.show_failures]:
                    print(f"  FAIL[{stage}] {inst}")
    if filt is not None:
        rep = verify_construct(space, filt, cap=args.cap)
        reports.append(rep)
        failures += len(rep.failures)
        if not args.json:
            print(rep.summary())
            for inst, stage in rep.failures[: args.show_failures]:
                print(f"  FAIL[{stage}] {inst}")
    if args.json:
        print(json.dumps({"reports": [r.to_json() for r in reports], "failures": failures}, indent=2))
    elif failures == 0:
        print("selftest: all suites passed")
    else:
        print(f"selftest: {failures} failures")
    return 0 if failures == 0 else 1


def cmd_fmt(args) -> int:
    doc = _load(args.file)
    text = fmt_session(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multirole", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate every derivation in a session file")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_check)

    e = sub.add_parser("eliminate", help="run an admissible transformation")
    e.add_argument("--op", required=True,
                   choices=["one_cut", "two_cut_spill", "role_split", "mp_cut",
                            "weaken", "derive_full", "identity_expand"])
    e.add_argument("--at", default="", help="designated positions, comma separated")
    e.add_argument("--derivations", default="", help="derivation names, comma separated")
    e.add_argument("--part1", default="", help="role_split: first part, e.g. [0]")
    e.add_argument("--part2", default="", help="role_split: second part, e.g. [1]")
    e.add_argument("--extra", default="", help="weaken: i-formula to add")
    e.add_argument("--formula", default="", help="derive_full/identity_expand: formula")
    e.add_argument("--roles", default="", help="identity_expand: role subset")
    e.add_argument("--context", default="", help="derive_full/identity_expand: named context sequent")
    e.add_argument("-o", "--output", default="")
    e.add_argument("--trace", action="store_true", help="log one line per induction step to stderr")
    e.add_argument("--json", action="store_true")
    e.add_argument("file")
    e.set_defaults(fn=cmd_eliminate)

    s = sub.add_parser("search", help="bounded backward proof search")
    s.add_argument("--goal", required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--budget", type=int, default=2, help="contraction budget per branch")
    s.add_argument("--json", action="store_true")
    s.add_argument("file")
    s.set_defaults(fn=cmd_search)

    t = sub.add_parser("selftest", help="verify the admissible rules against the search oracle")
    t.add_argument("--universe", type=int, required=True)
    t.add_argument("--measure", type=int, default=1)
    t.add_argument("--max-items", type=int, default=2)
    t.add_argument("--budget", type=int, default=2)
    t.add_argument("--mode", choices=["mrl", "lmrl", "both"], default="both")
    t.add_argument("--rules", default="", help=f"comma separated, from {','.join(VERIFIABLE_RULES)}")
    t.add_argument("--filter-core", default=None, help="run under the intuitionistic restriction, e.g. [0]")
    t.add_argument("--cap", type=int, default=500_000)
    t.add_argument("--show-failures", type=int, default=5)
    t.add_argument("--json", action="store_true")
    t.set_defaults(fn=cmd_selftest)

    f = sub.add_parser("fmt", help="canonical re-print of a session file")
    f.add_argument("file")
    f.add_argument("-o", "--output", default="")
    f.set_defaults(fn=cmd_fmt)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return run_deep(args.fn, args)
    except SurfaceError as e:
        print(f"parse error [{e.code}] at {e.line}:{e.col}: {e.message}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except KernelError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
