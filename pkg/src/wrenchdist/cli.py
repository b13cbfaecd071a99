"""
Command line front end.

    wrenchdist synth <file>
    wrenchdist decompose <file> [--oracle]
    wrenchdist verify <file> [--legacy-pinv]
    wrenchdist repro <case>

Results go to stdout as JSON, messages to stderr. Exit codes: 0 ok,
1 malformed input, 2 infeasible, 3 failed check.
"""

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import reproduce
from .decomposition import (
    constraint_matrices,
    decompose,
    desired_accelerations,
    uk_constraint_wrenches,
)
from .equivalence import check_equivalence
from .errors import (
    Inconsistent,
    InfeasibleMasses,
    SingularInertia,
    SingularMass,
    TooFewContacts,
)
from .model import grasp_matrix
from .nullspaces import build_model, compose
from .numerics import DEFAULT_TOL, Tolerance
from .problem import ProblemError, load_problem
from .synthesis import (
    closed_form_applicable,
    legacy_parametrized_pinv,
    parametrized_pinv,
    synthesize,
    torque_alignment,
)

EXIT_OK, EXIT_MALFORMED, EXIT_INFEASIBLE, EXIT_FAILED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


class Infeasible(Exception):
    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


def fmt(x):
    """Round every number to 9 significant digits; -0 becomes 0."""
    if isinstance(x, dict):
        return {k: fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    if isinstance(x, np.ndarray):
        return fmt(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(f"{float(x):.9g}")
        return 0.0 if v == 0 else v
    return x


def _norm(v):
    return float(np.linalg.norm(np.asarray(v, dtype=float)))


def _per_contact(cs, h):
    # rows of the stack grouped by contact
    return [np.asarray(h)[[i for s in (sl.force, sl.torque) if s is not None
                           for i in range(s.start, s.stop)]] for sl in cs.slots]


def _params(problem):
    try:
        sysm, ve, sol = problem.equivalence_params()
    except Inconsistent as e:
        raise Infeasible(str(e), {"diagnostics": {"feasible": False, "reason": str(e)}})
    if not sol.feasible:
        raise Infeasible("virtual masses are negative",
                         {"m_star": sol.m_star,
                          "diagnostics": {"feasible": False, **sol.diagnostics}})
    return sysm, ve, sol


def _model(problem, sysm, h_o):
    try:
        return build_model(h_o, problem.cs, sysm, tol=problem.tol)
    except InfeasibleMasses as e:
        raise Infeasible(str(e), {"diagnostics": {"feasible": False, "reason": str(e)}})


def _common(problem, ve, sol, model):
    return {
        "m_star": sol.m_star,
        "J_star_o": None if ve.J_star_o is None else ve.J_star_o,
        "d": model.d,
    }


def _residuals(cs, h_o, h_m, h_c):
    # computed from the rounded numbers that are reported
    G = grasp_matrix(cs)
    h_o, h_m, h_c = (np.asarray(fmt(np.asarray(v)), dtype=float) for v in (h_o, h_m, h_c))
    return {
        "closure": _norm(G @ h_m - h_o),
        "constraint_resultant": _norm(G @ h_c),
    }


def cmd_synth(problem):
    cs, tol = problem.cs, problem.tol
    if problem.h_o is None:
        raise ProblemError("synth needs a synthesis-mode problem")
    sysm, ve, sol = _params(problem)
    h_o = problem.h_o
    model = _model(problem, sysm, h_o)
    base = replace(model, h_mp=synthesize(h_o, cs, ve))
    lm, lc = problem.lambda_m, problem.lambda_c
    applied = compose(base, lm, lc)
    h_m = compose(base, lm, None)
    h_c = h_m - applied
    eq = check_equivalence(ve, cs, tol)
    out = {
        "h_o": h_o,
        "h_m": _per_contact(cs, h_m),
        "h_c": _per_contact(cs, h_c),
        "applied": _per_contact(cs, applied),
        **_common(problem, ve, sol, model),
        "lambda_m": np.zeros(model.d) if lm is None else lm,
        "lambda_c": np.zeros(model.Z.shape[1]) if lc is None else lc,
        "diagnostics": {
            "feasible": True,
            "residuals": {**_residuals(cs, h_o, h_m, h_c), **eq.residuals},
            "closed_form_applicable": closed_form_applicable(cs, tol),
            "basis": _basis_diag(model),
        },
    }
    return out, EXIT_OK


def _basis_diag(model):
    d = model.diagnostics
    return {k: d[k] for k in ("degenerate", "not_in_null_G", "dimension_audit", "rank_G")
            if k in d}


def cmd_decompose(problem, oracle=False):
    cs, tol = problem.cs, problem.tol
    if problem.applied is None:
        raise ProblemError("decompose needs a decomposition-mode problem")
    sysm, ve, sol = _params(problem)
    h = problem.applied
    h_o = grasp_matrix(cs) @ h
    model = _model(problem, sysm, h_o)
    dec = decompose(h, cs, sysm, problem.share, ve=ve, Z=model.Z, K=model.K, tol=tol)
    out = {
        "h_o": dec.h_o.vector,
        "h_m": _per_contact(cs, dec.h_m),
        "h_c": _per_contact(cs, dec.h_c),
        **_common(problem, ve, sol, model),
        "lambda_c": dec.lambda_c.lambda_c,
        "diagnostics": {
            "feasible": True,
            "residuals": {**_residuals(cs, dec.h_o.vector, dec.h_m, dec.h_c),
                          **check_equivalence(ve, cs, tol).residuals},
            "closed_form_applicable": closed_form_applicable(cs, tol),
            "basis": _basis_diag(model),
        },
    }
    if oracle:
        try:
            sc = constraint_matrices(cs, None, ve, tol=tol)
            xdd = desired_accelerations(h, cs, ve, tol)
            h_c_uk = uk_constraint_wrenches(sc, xdd, tol)
            out["oracle"] = {"available": True,
                             "max_discrepancy": float(np.abs(h_c_uk - dec.h_c).max())}
        except (SingularMass, TooFewContacts) as e:
            out["oracle"] = {"available": False, "reason": str(e)}
    return out, EXIT_OK


def cmd_verify(problem, legacy_pinv=False):
    cs, tol = problem.cs, problem.tol
    sysm, ve, sol = _params(problem)
    G = grasp_matrix(cs)
    h_o = problem.h_o if problem.h_o is not None else G @ problem.applied
    model = _model(problem, sysm, h_o)
    eq = check_equivalence(ve, cs, tol)
    checks = []
    for k, v in eq.residuals.items():
        checks.append({"check": f"equivalence.{k}", "residual": v, "pass": eq.passed[k]})

    P = (legacy_parametrized_pinv if legacy_pinv else parametrized_pinv)(cs, ve)
    ri = _norm(G @ P - np.eye(G.shape[0]))
    checks.append({"check": "right_inverse", "residual": ri, "pass": ri <= tol.residual_eps})
    h_m = P @ h_o
    res = G @ h_m
    cl = _norm(res - h_o)
    checks.append({"check": "closure", "residual": cl, "pass": cl <= tol.residual_eps,
                   "resultant": res})
    if not legacy_pinv:
        direct = synthesize(h_o, cs, ve)
        agree = _norm(direct - h_m)
        checks.append({"check": "synthesis_agreement", "residual": agree,
                       "pass": agree <= tol.residual_eps * max(1.0, _norm(h_m))})
    ang = torque_alignment(h_m, cs, h_o)
    checks.append({"check": "torque_parallel", "residual": ang, "pass": ang <= tol.residual_eps})
    audit = bool(model.diagnostics.get("dimension_audit"))
    checks.append({"check": "dimension_audit", "residual": 0.0 if audit else 1.0, "pass": audit})
    ok = all(c["pass"] for c in checks)
    return {"checks": checks, "pass": ok}, EXIT_OK if ok else EXIT_FAILED


def cmd_repro(case, tol=DEFAULT_TOL):
    checks = reproduce.run_case(case, tol)
    ok = all(c.passed for c in checks)
    return ({"case": case, "checks": [c.as_dict() for c in checks], "pass": ok},
            EXIT_OK if ok else EXIT_FAILED)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="residual tolerance (default 1e-9)")
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="indent the JSON output")
    p = _Parser(prog="wrenchdist", parents=[common],
                description="Manipulating/constraint wrench distributions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("synth", parents=[common], help="synthesize a distribution")
    s.add_argument("file")
    s = sub.add_parser("decompose", parents=[common], help="split applied wrenches")
    s.add_argument("file")
    s.add_argument("--oracle", action="store_true",
                   help="cross-check h_c with the explicit constraint-wrench formula")
    s = sub.add_parser("verify", parents=[common], help="run consistency checks")
    s.add_argument("file")
    s.add_argument("--legacy-pinv", action="store_true",
                   help="check the legacy parametrized inverse instead")
    s = sub.add_parser("repro", parents=[common], help="recompute a reference case")
    s.add_argument("case", choices=reproduce.CASES)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    pretty = getattr(args, "pretty", False)
    tol = None
    if hasattr(args, "tol"):
        try:
            tol = Tolerance(DEFAULT_TOL.rank_eps, args.tol)
        except ValueError as e:
            print(f"wrenchdist: {e}", file=sys.stderr)
            return EXIT_MALFORMED

    try:
        if args.command == "repro":
            out, code = cmd_repro(args.case, tol or DEFAULT_TOL)
        else:
            problem = load_problem(args.file, tol)
            if args.command == "synth":
                out, code = cmd_synth(problem)
            elif args.command == "decompose":
                out, code = cmd_decompose(problem, args.oracle)
            else:
                out, code = cmd_verify(problem, args.legacy_pinv)
    except Infeasible as e:
        print(f"wrenchdist: infeasible: {e}", file=sys.stderr)
        out, code = e.payload, EXIT_INFEASIBLE
    except SingularInertia as e:
        print(f"wrenchdist: infeasible: {e}", file=sys.stderr)
        out, code = {"diagnostics": {"feasible": False, "reason": str(e)}}, EXIT_INFEASIBLE
    except ValueError as e:
        # ProblemError, EquivalenceConflict and dimension errors all land here
        print(f"wrenchdist: {e}", file=sys.stderr)
        return EXIT_MALFORMED

    print(json.dumps(fmt(out), indent=2 if pretty else None))
    if code == EXIT_FAILED:
        print("wrenchdist: one or more checks failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
