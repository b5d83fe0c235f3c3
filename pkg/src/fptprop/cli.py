"""Command-line front end.

Exit codes: 0 pruned/unchanged (or all-match for ``compare``), 1 wipeout
(or a mismatch), 2 usage, parse or parameter errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from pathlib import Path

from .bench import BENCH_KINDS, run_bench
from .core import FPTError, ProblemState, Status, fixpoint
from .generators import FAMILIES, hitting_set_instance, random_instance
from .instance import dump_instance, load_instance
from .oracle import DEFAULT_ORACLE_CAP, brute_force_dc, checker_for
from .propagators import Settings, filter_constraint, parameter_k, propagators_for

__all__ = ["main", "propagate_report", "compare_report", "random_compare_report", "render"]

LOG = logging.getLogger("fptprop")

EXIT_OK, EXIT_WIPEOUT, EXIT_USAGE = 0, 1, 2


def _dom(d):
    return None if d is None else list(d)


def _fmt_dom(d) -> str:
    return "wipeout" if d is None else "{" + ", ".join(str(v) for v in d) + "}"


def propagate_report(st: ProblemState, settings: Settings, source: str = "") -> dict:
    props = propagators_for(st.constraints, settings)
    params = [parameter_k(c, st) for c in st.constraints]
    t0 = time.perf_counter()
    out = fixpoint(st, props)
    elapsed = time.perf_counter() - t0
    after = out.state.domains if not out.wipeout else [None] * len(st.domains)
    return {
        "command": "propagate",
        "instance": source,
        "status": out.status.value,
        "culprit": out.culprit,
        "settings": {"k_max": settings.k_max, "max_bits": settings.max_bits, "run_cap": settings.run_cap},
        "constraints": [
            {"name": p.name, "kind": c.kind, "k": k, "calls": p.calls}
            for p, c, k in zip(props, st.constraints, params)
        ],
        "variables": [
            {"name": name, "before": list(b), "after": _dom(a)} for name, b, a in zip(st.names, st.domains, after)
        ],
        "wall_time_s": elapsed,
    }


def _outcome_domains(out, scope):
    return [None if out.wipeout else list(out.state.domains[v]) for v in scope]


def compare_report(st: ProblemState, settings: Settings, oracle_cap: int = DEFAULT_ORACLE_CAP,
                   filter_fn=filter_constraint, source: str = "") -> dict:
    """Run each constraint's propagator and the oracle on the original state and diff them."""
    t0 = time.perf_counter()
    rows = []
    for c in st.constraints:
        fast = filter_fn(c, st, settings)
        slow = brute_force_dc(checker_for(c), st, c.scope, oracle_cap)
        variables = []
        for var, a, b in zip(c.scope, _outcome_domains(fast, c.scope), _outcome_domains(slow, c.scope)):
            variables.append({"name": st.names[var], "match": a == b, "fpt": a, "oracle": b})
        rows.append({
            "name": c.label,
            "kind": c.kind,
            "k": parameter_k(c, st),
            "match": all(v["match"] for v in variables),
            "fpt_status": fast.status.value,
            "oracle_status": slow.status.value,
            "variables": variables,
        })
    return {
        "command": "compare",
        "instance": source,
        "match": all(r["match"] for r in rows),
        "constraints": rows,
        "wall_time_s": time.perf_counter() - t0,
    }


def random_compare_report(seed: int, n: int, d: int, k: int, count: int, kinds, settings: Settings,
                          oracle_cap: int = DEFAULT_ORACLE_CAP, filter_fn=filter_constraint) -> dict:
    t0 = time.perf_counter()
    summary = []
    for kind in kinds:
        rng = random.Random(f"{seed}:{kind}")
        matched = wipeouts = 0
        first_bad = None
        for idx in range(count):
            st = random_instance(kind, rng, n, d, k)
            rep = compare_report(st, settings, oracle_cap, filter_fn)
            c = rep["constraints"][0]
            matched += rep["match"]
            wipeouts += c["oracle_status"] == Status.WIPEOUT.value
            if not rep["match"] and first_bad is None:
                first_bad = idx
        summary.append({"kind": kind, "instances": count, "match": matched, "mismatch": count - matched,
                        "wipeouts": wipeouts, "first_mismatch": first_bad})
    return {
        "command": "compare",
        "random": {"seed": seed, "n": n, "d": d, "k": k, "count": count},
        "match": all(r["mismatch"] == 0 for r in summary),
        "summary": summary,
        "wall_time_s": time.perf_counter() - t0,
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "machine":
        return json.dumps(report, indent=2)
    lines = []
    cmd = report["command"]
    if cmd == "propagate":
        lines.append(f"status: {report['status']}" + (f" ({report['culprit']})" if report["culprit"] else ""))
        for c in report["constraints"]:
            lines.append(f"  constraint {c['name']} [{c['kind']}] k={c['k']} calls={c['calls']}")
        for v in report["variables"]:
            lines.append(f"  {v['name']}: {_fmt_dom(v['before'])} -> {_fmt_dom(v['after'])}")
    elif cmd == "compare" and "summary" in report:
        lines.append(f"{'kind':<12} {'instances':>9} {'match':>6} {'mismatch':>8} {'wipeouts':>8}")
        for r in report["summary"]:
            lines.append(f"{r['kind']:<12} {r['instances']:>9} {r['match']:>6} {r['mismatch']:>8} {r['wipeouts']:>8}")
        lines.append("ALL MATCH" if report["match"] else "MISMATCH")
    elif cmd == "compare":
        for c in report["constraints"]:
            lines.append(f"constraint {c['name']} [{c['kind']}] k={c['k']}: {'MATCH' if c['match'] else 'MISMATCH'}")
            for v in c["variables"]:
                if v["match"]:
                    lines.append(f"  {v['name']}: MATCH {_fmt_dom(v['fpt'])}")
                else:
                    lines.append(f"  {v['name']}: MISMATCH fpt={_fmt_dom(v['fpt'])} oracle={_fmt_dom(v['oracle'])}")
    elif cmd == "bench":
        lines.append(f"{'kind':<12} {'n':>6} {'k':>4} {'d':>4} {'param':>6} {'status':>10} {'seconds':>10}")
        for r in report["rows"]:
            lines.append(f"{r['kind']:<12} {r['n']:>6} {r['k']:>4} {r['d']:>4} {str(r['param']):>6} "
                         f"{r['status']:>10} {r['seconds']:>10.4f}")
    if "wall_time_s" in report:
        lines.append(f"wall time: {report['wall_time_s']:.4f}s")
    return "\n".join(lines)


def _settings(args) -> Settings:
    return Settings(k_max=args.k_max, max_bits=args.max_bits, run_cap=args.run_cap)


def _parse_set(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k-max", type=int, default=20, help="cap on backdoor size (default 20)")
    common.add_argument("--max-bits", type=int, default=32, help="cap on automaton bitmask width (default 32)")
    common.add_argument("--run-cap", type=int, default=4096, help="cap on the interval-run product (default 4096)")
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP, help="cap on oracle enumeration size")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="fptprop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", parents=[common], help="run every constraint to a fixpoint")
    p.add_argument("instance", type=Path)

    p = sub.add_parser("compare", parents=[common], help="diff propagators against the brute-force oracle")
    p.add_argument("instance", type=Path, nargs="?")
    p.add_argument("--random", nargs=4, type=int, metavar=("SEED", "N", "D", "K"))
    p.add_argument("--count", type=int, default=200, help="instances per kind in --random mode")
    p.add_argument("--kinds", nargs="+", choices=sorted(FAMILIES), default=list(FAMILIES))

    p = sub.add_parser("gen-hitting-set", parents=[common], help="NValue instance from a hitting-set problem")
    p.add_argument("-k", type=int, required=True, help="hitting set size bound")
    p.add_argument("sets", nargs="+", type=_parse_set, help="comma-separated values, one argument per set")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("bench", parents=[common], help="time a propagator family")
    p.add_argument("--kind", required=True, choices=sorted(BENCH_KINDS))
    p.add_argument("--n", type=int, nargs="+", default=[100, 200, 400, 800])
    p.add_argument("--k", type=int, nargs="+", default=[4])
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    return parser


def _run(args) -> int:
    settings = _settings(args)
    if args.command == "propagate":
        st = load_instance(args.instance)
        report = propagate_report(st, settings, str(args.instance))
        print(render(report, args.format))
        return EXIT_WIPEOUT if report["status"] == Status.WIPEOUT.value else EXIT_OK

    if args.command == "compare":
        if args.random:
            seed, n, d, k = args.random
            report = random_compare_report(seed, n, d, k, args.count, args.kinds, settings, args.oracle_cap)
        elif args.instance:
            st = load_instance(args.instance)
            report = compare_report(st, settings, args.oracle_cap, source=str(args.instance))
        else:
            print("fptprop compare: give an instance path or --random SEED N D K", file=sys.stderr)
            return EXIT_USAGE
        print(render(report, args.format))
        return EXIT_OK if report["match"] else EXIT_WIPEOUT

    if args.command == "gen-hitting-set":
        st = hitting_set_instance(args.sets, args.k)
        header = f"NValue instance for hitting sets of size <= {args.k} over {len(args.sets)} sets"
        text = dump_instance(st, header)
        if args.output:
            args.output.write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    if args.command == "bench":
        rows = run_bench(args.kind, args.n, args.k, args.d, args.seed, args.repeats, settings)
        report = {"command": "bench", "rows": [r.as_dict() for r in rows]}
        print(render(report, args.format))
        return EXIT_OK
    raise AssertionError(args.command)  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return _run(args)
    except (FPTError, ValueError, OSError) as exc:
        print(f"fptprop {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
