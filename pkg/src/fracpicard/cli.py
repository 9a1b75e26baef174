"""Command-line front end.

Exit codes: 0 success, 2 hypothesis violation, 1 anything else.
"""
import argparse
import sys
import warnings

import numpy as np

from . import conditions as cond
from .corpus import UnknownEntry, corpus_list, corpus_run, corpus_run_all
from .fracops import (
    DEFAULT_NODES,
    frac_derivative_series,
    frac_integral_quad,
    frac_integral_series,
    gauss_jacobi_rule,
)
from .realline import RealCompatViolated, check_real_compat, solve_real
from .schema import SchemaError, dumps, load_problem, load_series
from .series import FracPowerSeries, eval_series
from .solver import (
    HypothesisViolation,
    Kind,
    NoContractionWarning,
    SolverError,
    estimate_lipschitz,
    estimate_radius,
    shift_to_homogeneous,
    solve_picard,
)

EXIT_OK, EXIT_ERROR, EXIT_HYPOTHESIS = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with the hypothesis-violation code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _write(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _violation_payload(exc):
    return {"error": type(exc).__name__, "message": str(exc), "gap": exc.gap, "check": exc.check.to_json()}


def cmd_solve(args):
    p = load_problem(args.problem)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        rep = solve_picard(p)
    _write(dumps(rep.to_json()), args.out)
    if args.out:
        print(dumps({"status": rep.status, "iterations": rep.iterations, "residualSeries": rep.residual_series}))
    if args.csv:
        _write(rep.convergence_csv(), args.csv)
    return EXIT_OK


def cmd_check(args):
    p = load_problem(args.problem)
    F, a, b = p.rhs, p.a, p.b
    kind = p.kind.complex_kind
    out = {"conditionI": cond.check_finite(F).to_json()}
    ok = out["conditionI"]["passed"]
    if kind is Kind.RL:
        c2 = cond.check_condition_II(F, b, a)
        out["conditionII"] = c2.to_json()
        ok &= c2.passed
        work, gb, mode = shift_to_homogeneous(F, b, a), 0j, "abs"
    else:
        cr = cond.check_regularized_compat(F, b)
        out["regularizedCompat"] = cr.to_json()
        ok &= cr.passed
        work, gb, mode = F, b, "centered"
    if p.kind in (Kind.REAL_RL, Kind.REAL_CAPUTO):
        rc = check_real_compat(F, b)
        out["realCompat"] = rc.to_json()
        ok &= rc.passed
    lip = estimate_lipschitz(work, a, t_radius=max(1.0, p.ball_radius))
    out["lipschitz"] = {**lip.to_json(), "contracts": lip.contracts}
    if p.envelope is not None:
        g = cond.check_growth(work if mode == "abs" else F, p.envelope, gb, mode)
        out["growth"] = g.to_json()
        ok &= g.passed
        out["radius"] = estimate_radius(p.envelope, p.ball_radius, a)
    out["passed"] = bool(ok)
    print(dumps(out))
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def cmd_apply(args):
    s = load_series(args.series)
    a = args.order
    if args.op == "integral":
        res = frac_integral_series(s, a)
    else:
        res = frac_derivative_series(s, a)
    out = {"op": args.op, "order": a, "result": res.to_json()}
    if args.quad_oracle:
        rng = np.random.default_rng(args.seed)
        z = rng.uniform(0.1, 1.0, 20) * np.exp(1j * rng.uniform(-np.pi, np.pi, 20))
        if args.op == "integral":
            # I^a s = I^a [zeta^mu * poly]: fold zeta^mu into the weight
            target, operand = res, s
        else:
            # certify D^a through I^a D^a s = s
            target, operand = s, res
        rule = gauss_jacobi_rule(DEFAULT_NODES, a, left=operand.mu)
        poly = FracPowerSeries(operand.coeffs)
        err = max(abs(frac_integral_quad(poly, a, zi, rule) - eval_series(target, zi)) for zi in z)
        out["quadOracle"] = {"nodes": DEFAULT_NODES, "points": 20, "maxError": err, "passed": err <= 1e-10}
    print(dumps(out))
    if args.quad_oracle and not out["quadOracle"]["passed"]:
        return EXIT_ERROR
    return EXIT_OK


def cmd_corpus(args):
    if args.action == "list":
        print(dumps([{"name": e.name, "expected": e.outcome.value, "description": e.description} for e in corpus_list()]))
        return EXIT_OK
    if args.all:
        results = corpus_run_all(args.order, args.n)
    elif args.name:
        results = [corpus_run(args.name, args.order, args.n)[1]]
    else:
        raise SchemaError("corpus run needs --all or an entry name")
    passed = sum(r["passed"] for r in results)
    print(dumps({"order": args.order, "passed": passed, "total": len(results), "results": results}))
    return EXIT_OK if passed == len(results) else EXIT_ERROR


def cmd_real(args):
    p = load_problem(args.problem)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoContractionWarning)
        sol = solve_real(p, grid_n=args.grid)
    if args.csv:
        _write(sol.to_csv(), args.csv)
    print(
        dumps(
            {
                "status": sol.report.status,
                "radius": sol.report.radius,
                "residual": sol.residual,
                "residualGrid": [float(sol.residual_grid[0]), float(sol.residual_grid[-1]), int(sol.residual_grid.size)],
                "imagMax": sol.imag_max,
                "solution": sol.report.solution.to_json(),
            }
        )
    )
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="fracpicard", description="Complex fractional IVPs by Picard iteration.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="solve a problem file and report diagnostics")
    sp.add_argument("problem")
    sp.add_argument("--out", help="write the report JSON here instead of stdout")
    sp.add_argument("--csv", help="write the convergence table (n, distance, ratio)")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("check", help="check hypotheses without solving")
    sp.add_argument("problem")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("apply", help="apply I^a or D^a to a series")
    sp.add_argument("--op", choices=["integral", "derivative"], required=True)
    sp.add_argument("--order", type=float, required=True)
    sp.add_argument("--series", required=True)
    sp.add_argument("--quad-oracle", action="store_true", help="cross-check against Gauss-Jacobi quadrature")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("corpus", help="built-in examples")
    sp.add_argument("action", choices=["run", "list"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--order", type=float, default=0.5)
    sp.add_argument("--n", type=int, default=2, help="power for the non-univalent family")
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("real", help="real-line solve with residual check")
    sp.add_argument("problem")
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_real)
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HypothesisViolation, RealCompatViolated) as exc:
        print(dumps(_violation_payload(exc)))
        return EXIT_HYPOTHESIS
    except (SchemaError, UnknownEntry, SolverError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run())
