"""Command-line front end.

Exit status: 0 on success, 1 on malformed input (bad flags, schema
violations), 2 on domain errors (infeasible moments, branch cuts, states
violating the uncertainty relation). A report is written whenever the
problem could be parsed.
"""

import argparse
import sys
import warnings
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .ccr import validate
from .errors import DomainError, InputError
from .io import REPORT_SCHEMA, digest, dumps, load_problem
from .lie import factorize_2x2, product_chain, quad_commutator, symmetric_sandwich
from .moments import product_moment_EY, product_moment_EYY
from .oracles import FockOscillator, fock_expectation, mc_product_moment, mc_qef
from .qef import QefProblem, compute_qef, risk_sweep
from .recursion import run as run_recursion
from .state import admissible

__all__ = ["main", "run"]

COMMANDS = ("qef", "product-moment", "factorize2", "commutator", "product", "recursion", "oracle-check")
_U64 = 1 << 64


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _seed(text):
    value = int(text)
    if not 0 <= value < _U64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser():
    parser = _Parser(prog="gaussqef", description="Moments and quadratic-exponential functionals of Gaussian quantum states.")
    parser.add_argument("--version", action="version", version=f"gaussqef {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "factorize2":
            p.add_argument("--a", type=float, required=True)
            p.add_argument("--b", type=float, required=True)
            p.add_argument("--theta", type=float, default=0.5)
        else:
            p.add_argument("--problem", required=True, metavar="PATH")
        if name == "product":
            p.add_argument("--sandwich", action="store_true", help="treat factors as C0, C1, ..., CN of a symmetric sandwich")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--samples", type=_positive_int, default=100_000)
        p.add_argument("--truncation", type=_positive_int)
        p.add_argument("--tol", type=float, default=1e-6)
        p.add_argument("--force", action="store_true", help="evaluate even where the moment is infeasible")
    return parser


def _state(problem):
    problem.require("P")
    return admissible(problem.P, validate(problem.theta))


def _qef_outputs(report):
    return {
        "xi": report.xi,
        "feasible": report.feasible,
        "trusted": report.trusted,
        "sufficient_condition": report.sufficient_condition,
        "sufficient_margin": report.sufficient_margin,
        "spectral_radius": report.spectral_radius,
        "spectral_radius_abs": report.spectral_radius_abs,
        "classical_limit": report.classical_limit,
        "symplectic_eigenvalues": report.lambdas,
        "branch_ok": report.branch_ok,
    }


def _sweep_table(reports, grid):
    rows = [[r, rep.xi.real, rep.xi.imag, rep.feasible, rep.sufficient_condition, rep.spectral_radius, rep.classical_limit] for r, rep in zip(grid, reports)]
    flips = [[grid[k], grid[k + 1]] for k in range(len(grid) - 1) if reports[k].feasible != reports[k + 1].feasible]
    return {
        "columns": ["risk", "xi_re", "xi_im", "feasible", "sufficient_condition", "spectral_radius", "classical_limit"],
        "rows": rows,
        "feasibility_boundary": flips,
    }


def cmd_qef(problem, args):
    problem.require("P", "Pi")
    qp = QefProblem(_state(problem), problem.Pi)
    report = compute_qef(qp)
    result = {"outputs": _qef_outputs(report), "residuals": {"xi_imag_relative": report.imag_residual}}
    if problem.sweep is not None:
        grid = problem.sweep["grid"]
        result["outputs"]["sweep"] = _sweep_table(risk_sweep(qp, grid), grid)
    elif not report.trusted and not args.force:
        reason = "infeasible: spectral radius of Mho Re L is at least 1" if not report.feasible else "determinant on the branch cut"
        result["error"] = {"type": "InfeasibleError", "message": reason}
    return result


def cmd_product_moment(problem, args):
    state = _state(problem)
    ey = product_moment_EY(state)
    eyy = product_moment_EYY(state)
    return {
        "outputs": {"EY": ey, "EYY": eyy.value, "EYY_upper_bound": eyy.upper_bound, "factor_order": "rightward, index 1..n"},
        "residuals": {"EYY_imag": eyy.imag_residual},
    }


def cmd_factorize2(_, args):
    f = factorize_2x2(args.a, args.b, args.theta)
    return {"outputs": {"alpha": f.alpha, "beta": f.beta}, "residuals": {"matrix_identity": f.residual}}


def cmd_commutator(problem, args):
    problem.require("A", "B")
    C = quad_commutator(problem.A, problem.B, validate(problem.theta))
    return {"outputs": {"C": C}, "residuals": {}}


def cmd_product(problem, args):
    problem.require("factors")
    ccr = validate(problem.theta)
    if args.sandwich:
        res = symmetric_sandwich(problem.factors[0], problem.factors[1:], ccr)
    else:
        res = product_chain(problem.factors, ccr)
    return {
        "outputs": {"E": res.E, "branch_risk": res.branch_risk, "mode": "sandwich" if args.sandwich else "chain"},
        "residuals": {"asymmetry": res.asymmetry, "exp_check": res.exp_residual, "imag": res.imag_residual},
    }


def cmd_recursion(problem, args):
    problem.require("weights")
    weights = [{("theta" if k == "theta_block" else k): v for k, v in w.items()} for w in problem.weights]
    states = run_recursion(problem.theta, weights, tol=args.tol)
    trace = [
        {
            "N": s.N,
            "Pi": s.Pi,
            "imag_residual": s.imag_residual,
            "asymmetry": s.asymmetry,
            "guard": s.guard,
            "branch_risk": s.branch_risk,
            "symplectic_residual": s.symplectic_residual(),
        }
        for s in states
    ]
    worst = max(t["symplectic_residual"] for t in trace)
    return {"outputs": {"trace": trace}, "residuals": {"max_symplectic": worst}}


def _compare(name, closed, fock=None, mc=None, tol=1e-6):
    row = {"quantity": name, "closed_form": closed}
    agree = True
    if fock is not None:
        row["fock"] = fock.value
        row["fock_truncation"] = fock.truncation
        row["fock_truncation_error"] = fock.truncation_error
        agree &= abs(fock.value - closed) <= tol * max(1.0, abs(closed))
    if mc is not None:
        row["mc_mean"] = mc.mean
        row["mc_std_error"] = mc.std_error
        row["mc_samples"] = mc.samples
        row["mc_rejected"] = mc.rejected
        agree &= mc.covers(closed)
    row["agree"] = bool(agree)
    return row


def cmd_oracle_check(problem, args):
    state = _state(problem)
    n = state.n
    osc = FockOscillator.for_state(state, args.truncation) if n in (2, 4) else None
    units = [np.diag(np.eye(n)[k]) for k in range(n)]
    ey_factors = [-0.5 * E for E in units]
    rows = []
    fock = fock_expectation(osc, ey_factors, tol=args.tol) if osc else None
    rows.append(_compare("EY", product_moment_EY(state), fock, mc_product_moment(state, args.samples, args.seed), args.tol))
    fock = fock_expectation(osc, ey_factors + ey_factors[::-1], tol=args.tol) if osc else None
    rows.append(_compare("EYY", product_moment_EYY(state).value, fock, None, args.tol))
    if problem.Pi is not None:
        qp = QefProblem(state, problem.Pi)
        report = compute_qef(qp)
        fock = fock_expectation(osc, [qp.weight], tol=args.tol) if osc and report.feasible else None
        mc = mc_qef(qp, args.samples, args.seed, force=args.force)
        rows.append(_compare("xi", report.xi, fock, mc, args.tol))
    return {
        "outputs": {"comparisons": rows, "all_agree": all(r["agree"] for r in rows), "fock_modes": 0 if osc is None else osc.modes},
        "residuals": {},
    }


_HANDLERS = {
    "qef": cmd_qef,
    "product-moment": cmd_product_moment,
    "factorize2": cmd_factorize2,
    "commutator": cmd_commutator,
    "product": cmd_product,
    "recursion": cmd_recursion,
    "oracle-check": cmd_oracle_check,
}


def _flags(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "problem", "out")}


def run(argv):
    """Execute one command; returns ``(exit_code, report)``.

    On usage errors the report holds only the status and the error.
    """
    code, report, _ = _execute(argv)
    return code, report


def _execute(argv):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return 1, {"status": "input_error", "error": {"type": "UsageError", "message": str(exc)}}, None

    report = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": args.command,
        "argv": list(argv),
        "flags": _flags(args),
        "seed": args.seed,
    }
    problem = None
    try:
        if args.command != "factorize2":
            problem = load_problem(args.problem)
            inputs = problem.echo()
        else:
            inputs = {"a": args.a, "b": args.b, "theta": args.theta}
        report["inputs"] = inputs
        report["inputs_digest"] = digest(inputs)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = _HANDLERS[args.command](problem, args)
        report["warnings"] = sorted({f"{w.category.__name__}: {w.message}" for w in caught})
    except InputError as exc:
        report.update(status="input_error", error={"type": type(exc).__name__, "message": str(exc), "path": getattr(exc, "path", None)})
        return 1, report, args.out
    except DomainError as exc:
        report.update(status="domain_error", error={"type": type(exc).__name__, "message": str(exc)})
        return 2, report, args.out
    report.update(result)
    report["status"] = "domain_error" if "error" in result else "ok"
    return (2 if "error" in result else 0), report, args.out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, report, out = _execute(argv)
    if report.get("error"):
        err = report["error"]
        print(f"gaussqef: {err['type']}: {err['message']}", file=sys.stderr)
    if "command" not in report:
        return code
    report["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = dumps(report) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
