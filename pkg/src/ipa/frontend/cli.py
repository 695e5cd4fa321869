"""``ipa verify``: run reachability on a model file and report property verdicts."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from ..abstraction import Scope, generate_instantiations
from ..engine import FAILURE_REASONS, HOLDS, UNKNOWN, Engine, PropertyVerdict, check_property
from ..errors import IpaError, OutOfScope, ScopeTooLarge, StateBudgetExceeded
from ..logic import BOOL, parse_expr
from ..oracle import soundness_check
from ..sat import make_backend
from .modelfile import ModelFile, load_model, parse_substitutions

EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ipa", description="Indexed predicate abstraction for infinite-state systems.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="compute the abstract reachable set and check the model's properties")
    v.add_argument("model", help="model file")
    v.add_argument("--max-iters", type=int, default=64, metavar="N", help="step budget (default 64)")
    v.add_argument("--subs", default="auto", metavar="FILE|auto",
                   help="substitution set: a file with one substitution per line, or 'auto' (default)")
    v.add_argument("--cross-product", action="store_true",
                   help="with --subs auto, vary all index symbols jointly")
    v.add_argument("--sat", default="internal", metavar="internal|dimacs:CMD", help="SAT backend")
    v.add_argument("--dump-reach", metavar="PATH", help="write the reachable cube set")
    v.add_argument("--check-inductive", metavar="FORMULA", action="append", default=[],
                   help="check whether a formula over the predicates is inductive (repeatable)")
    v.add_argument("--oracle-scope", metavar="LO..HI", help="cross-check against explicit-state search")
    v.add_argument("--oracle-range", metavar="NAME=LO..HI", action="append", default=[],
                   help="narrow the oracle range of one symbol (repeatable)")
    v.add_argument("--oracle-domain", metavar="LO..HI", help="argument domain of function tables in the oracle")
    v.add_argument("--oracle-max-states", type=int, default=100_000, metavar="N")
    v.add_argument("--json", metavar="PATH", help="write a machine-readable report")
    v.add_argument("--seed", type=int, default=0, help="solver seed")
    v.add_argument("--bound", choices=("conservative", "gap"), default="conservative",
                   help="small-domain bound used by the encoder")
    v.add_argument("-q", "--quiet", action="store_true", help="omit per-iteration lines")
    return ap


def _interval(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m:
        raise ValueError(f"bad range {text!r}; expected LO..HI")
    return int(m.group(1)), int(m.group(2))


def _scope(args) -> Scope:
    lo, hi = _interval(args.oracle_scope)
    ranges = {}
    for item in args.oracle_range:
        name, sep, rng = item.partition("=")
        if not sep:
            raise ValueError(f"bad --oracle-range {item!r}; expected NAME=LO..HI")
        ranges[name.strip()] = _interval(rng)
    domain = _interval(args.oracle_domain) if args.oracle_domain else None
    return Scope(lo, hi, ranges, domain=domain)


def dump_reach(path: str, rho) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# " + " ".join(rho.names) + "\n")
        for bits in rho.to_strings():
            fh.write(bits + "\n")


def verify(args, out=None) -> int:
    out = out or sys.stdout

    def say(line: str = ""):
        print(line, file=out, flush=True)

    t_start = time.perf_counter()
    mf: ModelFile = load_model(args.model)
    if args.subs == "auto":
        subs = generate_instantiations(mf.model, mf.bank, cross_product=args.cross_product)
    else:
        with open(args.subs, encoding="utf-8") as fh:
            subs = parse_substitutions(fh.read(), mf)
    mf.subs = subs
    backend = make_backend(args.sat, args.seed)
    t_parse = time.perf_counter() - t_start

    say(f"model: {args.model}")
    say(f"predicates ({mf.bank.k}): {' '.join(mf.bank.names)}")
    if mf.bank.axioms:
        say(f"axioms: {' '.join(mf.bank.axioms)}")
    say(f"substitutions ({len(subs)}): " + " | ".join(subs.render()))

    def progress(st):
        if not args.quiet:
            say(f"  iter {st.iteration:3d}: +{st.new_cubes} cubes, {st.size} total, "
                f"{st.solver_calls} solver calls, {st.seconds:.3f} s")

    engine = Engine(mf.model, mf.bank, subs, backend, bound_mode=args.bound)
    result = engine.reach(args.max_iters, progress)
    if result.converged:
        say(f"reach: converged after {result.iterations} iterations, {len(result.rho)} cubes")
    else:
        say(f"reach: NOT converged within {args.max_iters} iterations, {len(result.rho)} cubes so far")

    verdicts: dict[str, PropertyVerdict] = {}
    for name, psi in mf.properties.items():
        v = check_property(result.rho, psi)
        if v.holds and not result.converged:
            v = PropertyVerdict(UNKNOWN)
        verdicts[name] = v
        line = f"{name}: {v.status}"
        if v.witnesses:
            line += f" (violating cubes: {', '.join(v.witnesses)})"
        elif v.status == UNKNOWN:
            line += " (reachability did not converge)"
        say(line)
    if any(v.status == UNKNOWN for v in verdicts.values()):
        say("an UNKNOWN verdict means one of:")
        for k, reason in enumerate(FAILURE_REASONS, 1):
            say(f"  {k}) {reason}")

    inductive = []
    for text in args.check_inductive:
        chi = parse_expr(text, {p: BOOL for p in mf.bank.names})
        r = engine.check_inductive(chi)
        inductive.append({"formula": text, "inductive": r.inductive,
                          "base_failures": list(r.base_failures), "step_failures": list(r.step_failures)})
        say(f"{text}: {r.describe()}")
    if result.converged:
        fix = engine.check_inductive(result.rho)
        say(f"fixpoint: {fix.describe()}")

    oracle = None
    if args.oracle_scope:
        sc = _scope(args)
        try:
            rep = soundness_check(mf.model, mf.bank, subs, sc, rho=result.rho, max_states=args.oracle_max_states)
        except (OutOfScope, StateBudgetExceeded, ScopeTooLarge) as exc:
            oracle = {"scope": args.oracle_scope, "skipped": str(exc)}
            say(f"oracle: skipped at scope {args.oracle_scope}: {exc}")
        else:
            oracle = {"scope": args.oracle_scope, "states": rep.states, "violations": len(rep.violations)}
            say(f"oracle: {rep.states} concrete states at scope {args.oracle_scope}, "
                f"{len(rep.violations)} cubes outside the reachable set")
            for s, cube in rep.violations[:5]:
                say(f"  violation {cube} at {s}")

    if args.dump_reach:
        dump_reach(args.dump_reach, result.rho)
    elapsed = time.perf_counter() - t_start
    if args.json:
        report = {
            "model": args.model,
            "predicates": mf.bank.names,
            "iterations": result.iterations,
            "converged": result.converged,
            "reach_size": len(result.rho),
            "properties": [{"name": n, "status": v.status, "witnesses": list(v.witnesses)}
                           for n, v in verdicts.items()],
            "timings": {
                "parse": t_parse,
                "reach": result.seconds,
                "total": elapsed,
                "per_iteration": [{"iteration": s.iteration, "new_cubes": s.new_cubes,
                                   "solver_calls": s.solver_calls, "seconds": s.seconds}
                                  for s in result.per_iteration],
            },
        }
        if inductive:
            report["inductive"] = inductive
        if oracle:
            report["oracle"] = oracle
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    say(f"time: {elapsed:.2f} s")
    if oracle and oracle.get("violations"):
        return EXIT_UNKNOWN
    return EXIT_OK if all(v.status == HOLDS for v in verdicts.values()) else EXIT_UNKNOWN


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.max_iters < 1:
            raise ValueError("--max-iters must be at least 1")
        return verify(args)
    except (IpaError, ValueError, KeyError, OSError) as exc:
        print(f"ipa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RecursionError:
        print("ipa: error: expression nesting too deep", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
