"""Command-line entry point: ``fqt <subcommand> [options]``.

JSON commands print a report with the effective configuration echoed under
``config``; text commands (translate, emit-phi) print the formula itself and
write the report only when ``--out`` is given.

Exit codes: 0 success, 1 invariant violation in a suite, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from sympy import isprime

from . import __version__
from .behaved import is_l_behaved
from .experiments import COUNTEREXAMPLE_CLAIMS, ExperimentReport, search_d, verify_counterexample
from .funcfield import parse_rf
from .galois import field, parse_field_spec, parse_poly
from .logic.arith import eval_arith, parse_arith
from .logic.evaluate import EvalBudget, eval_ring
from .logic.sexpr import parse_sexpr, to_sexpr
from .logic.translate import MODES, POLICIES, translate
from .norms import artin_schreier, behaved_norm_check, kummer, norm_decision, norm_witness_search, psi_c, two_squares
from .power import build_phi, choose_params, den_p, pasten_criterion
from .suites import SUITES, run_suite


class UsageError(Exception):
    pass


def _global_flags():
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--p", default="3", help="field characteristic, or p^n for commands over F_{p^n}")
    g.add_argument("--l", type=int, default=2, help="prime l")
    g.add_argument("--seed", type=int, default=0, help="seed for any internal randomization")
    g.add_argument("--out", help="write the JSON report to this path")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return g


def build_parser():
    parser = argparse.ArgumentParser(prog="fqt", description="Exact computations in F_q(t).")
    parser.add_argument("--version", action="version", version=f"fqt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_flags()]

    s = sub.add_parser("behaved", parents=common, help="l-behavedness report for u")
    s.add_argument("--u", required=True)

    s = sub.add_parser("pasten", parents=common, help="square criterion for p-powers vs ground truth")
    s.add_argument("--g", type=int, default=0)
    s.add_argument("--f", required=True)
    s.add_argument("--h", required=True)

    s = sub.add_parser("emit-phi", parents=common, help="print the p-power formula as an S-expression")
    s.add_argument("--g", type=int, default=0)

    s = sub.add_parser("norm-check", parents=common, help="norm decision, witness search and behavedness check")
    s.add_argument("--u", required=True)
    s.add_argument("--kind", choices=("kummer", "artin-schreier"), default=None)
    s.add_argument("--a", type=int, default=None, help="extension constant (encoded as an int)")
    s.add_argument("--witness-bound", type=int, default=None)

    s = sub.add_parser("two-squares", parents=common, help="decide f = a^2 + b^2 with a witness")
    s.add_argument("--f", required=True)

    s = sub.add_parser("psi-c", parents=common, help="the norm predicate a^2 - alpha b^2 = u (c^2 - alpha d^2)")
    s.add_argument("--u", required=True)
    s.add_argument("--witness-bound", type=int, default=None)

    s = sub.add_parser("translate", parents=common, help="compile an arithmetic sentence to a ring formula")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--sentence")
    src.add_argument("--sentence-file")
    s.add_argument("--mode", choices=MODES, default="abstract")
    s.add_argument("--policy", choices=POLICIES, default="fixed-t")
    s.add_argument("--g", type=int, default=0)

    s = sub.add_parser("eval", parents=common, help="bounded evaluation of a ring formula or arithmetic sentence")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula-file")
    src.add_argument("--sentence", help="arithmetic sentence: evaluated in N and, translated, in F_q(t)")
    s.add_argument("--u", default="t", help="value bound to the free variable u")
    s.add_argument("--bound", type=int, default=4, help="degree bound for ring witnesses")
    s.add_argument("--nat-bound", type=int, default=10)
    s.add_argument("--max-steps", type=int, default=None)

    s = sub.add_parser("counterexamples", parents=common, help="Mobius-orbit behavedness sweep")
    s.add_argument("--u", default=None, help="defaults to the listed example for --p; all five with --all")
    s.add_argument("--all", action="store_true")
    s.add_argument("--max-frob-power", type=int, default=1)

    s = sub.add_parser("search-d", parents=common, help="search D(X) with D(u) behaved for all small u")
    s.add_argument("--num-deg", type=int, default=1)
    s.add_argument("--den-deg", type=int, default=0)
    s.add_argument("--u-height", type=int, default=2)
    s.add_argument("--checkpoint", default=None, help="resume from / save to this JSON file")
    s.add_argument("--stop-after", type=int, default=None, help=argparse.SUPPRESS)

    s = sub.add_parser("run-suite", parents=common, help="run a named check suite")
    s.add_argument("name", choices=sorted(SUITES))
    return parser


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _field(args, prime_only=False):
    try:
        F = parse_field_spec(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if prime_only and F.n != 1:
        raise UsageError("this command needs a prime field")
    return F


def _prime_p(args):
    return _field(args, prime_only=True).p


def _check_l(args):
    if not isprime(args.l):
        raise UsageError("--l must be prime")


def _rf(text, F):
    return parse_rf(text, F)


def _config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _emit(args, payload, start):
    report = payload if isinstance(payload, ExperimentReport) else ExperimentReport(
        args.command, _config(args), payload.pop("rows", []), payload)
    report.config = _config(args)
    report.wall_clock = time.perf_counter() - start
    data = report.to_dict()
    if args.out:
        report.write_json(args.out)
    print(json.dumps(data, indent=2, sort_keys=True))
    return report


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_behaved(args):
    F = _field(args)
    return {"report": is_l_behaved(_rf(args.u, F), args.l).to_dict()}


def cmd_pasten(args):
    F = _field(args)
    params = choose_params(args.g, F.p)
    f, h = _rf(args.f, F), _rf(args.h, F)
    if f.is_constant() or h.is_constant():
        raise UsageError("f and h must be nonconstant")
    ok, failing = pasten_criterion(f, h, params, detail=True)
    return {"criterion": ok, "failing_indices": failing, "ground_truth_s": den_p(f, h), "params": params.to_dict()}


def cmd_norm_check(args):
    F = _field(args)
    u = _rf(args.u, F)
    if u.is_zero():
        raise UsageError("u must be nonzero")
    kind = args.kind or ("artin-schreier" if args.l == F.p else "kummer")
    spec = artin_schreier(F, args.a) if kind == "artin-schreier" else kummer(F, args.l, args.a)
    out = {"extension": spec.describe(), **norm_decision(u, spec).to_dict()}
    if args.witness_bound is not None:
        w = norm_witness_search(u, spec, args.witness_bound)
        out["witness"] = None if w is None else [str(x) for x in w]
    if u.is_polynomial() and spec.degree == args.l:
        out["behaved_comparison"] = behaved_norm_check(u, args.l, spec)
    return out


def cmd_two_squares(args):
    F = _field(args)
    return two_squares(parse_poly(args.f, F)).to_dict()


def cmd_psi_c(args):
    F = _field(args)
    return psi_c(_rf(args.u, F), args.witness_bound).to_dict()


def _read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read().strip()


def cmd_translate(args):
    text = args.sentence if args.sentence is not None else _read_text(args.sentence_file)
    phi = translate(parse_arith(text), mode=args.mode, g=args.g, policy=args.policy, l=args.l)
    return to_sexpr(phi)


def cmd_emit_phi(args):
    p = args.p if args.p == "uniform" else _prime_p(args)
    return to_sexpr(build_phi(args.g, p))


def cmd_eval(args):
    F = _field(args)
    budget = EvalBudget(args.bound, F, args.max_steps)
    u = _rf(args.u, F)
    out = {}
    if args.sentence is not None:
        s = parse_arith(args.sentence)
        out["nat"] = eval_arith(s, args.nat_bound, F.p).to_dict()
        phi = translate(s, l=args.l, policy="free-u")
    else:
        phi = parse_sexpr(_read_text(args.formula_file))
    res = eval_ring(phi, u, args.l, budget)
    out.update(res.to_dict())
    return out


def cmd_counterexamples(args):
    if args.all:
        reports = [verify_counterexample(p, s, args.l, args.max_frob_power, args.jobs)
                   for p, s in sorted(COUNTEREXAMPLE_CLAIMS.items())]
        rows = [{"p": r.config["p"], "u": r.config["u"], **r.summary, "transforms": r.rows} for r in reports]
        return {"rows": rows, "disagreements": [r["p"] for r in rows if not r["agrees_with_claim"]]}
    p = _prime_p(args)
    if args.u is None:
        if p not in COUNTEREXAMPLE_CLAIMS:
            raise UsageError(f"no listed example for p={p}; pass --u")
        u, claim = COUNTEREXAMPLE_CLAIMS[p], True
    else:
        u, claim = args.u, False
    u = _rf(u, field(p))
    if u.is_constant():
        raise UsageError("u must be nonconstant")
    return verify_counterexample(p, u, args.l, args.max_frob_power, args.jobs, claim_no_behaved=claim)


def cmd_search_d(args):
    p = _prime_p(args)
    if min(args.num_deg, args.den_deg) < 0 or args.u_height < 1:
        raise UsageError("degree bounds must be >= 0 and --u-height >= 1")
    return search_d(p, args.l, args.num_deg, args.den_deg, args.u_height, jobs=args.jobs,
                    checkpoint=args.checkpoint, stop_after=args.stop_after)


def cmd_run_suite(args):
    kwargs = {}
    if args.name in ("factor-oracle", "pasten-f13", "behaved-laws", "hw-identities"):
        kwargs["seed"] = args.seed
    if args.name == "counterexamples":
        kwargs["jobs"] = args.jobs
    return run_suite(args.name, **kwargs)


COMMANDS = {
    "behaved": cmd_behaved,
    "pasten": cmd_pasten,
    "emit-phi": cmd_emit_phi,
    "norm-check": cmd_norm_check,
    "two-squares": cmd_two_squares,
    "psi-c": cmd_psi_c,
    "translate": cmd_translate,
    "eval": cmd_eval,
    "counterexamples": cmd_counterexamples,
    "search-d": cmd_search_d,
    "run-suite": cmd_run_suite,
}

TEXT_COMMANDS = {"translate", "emit-phi"}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    random.seed(args.seed)
    try:
        _check_l(args)
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        result = COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"fqt {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.command in TEXT_COMMANDS:
        print(result)
        if args.out:
            ExperimentReport(args.command, _config(args), [], {"output": result},
                             wall_clock=time.perf_counter() - start).write_json(args.out)
        return 0
    report = _emit(args, result, start)
    if args.command == "run-suite" and not report.summary.get("ok", False):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
