"""Recompute the reference cases and compare against the stored tables."""

from dataclasses import dataclass

import numpy as np

from . import cases
from .decomposition import constraint_space, decompose
from .equivalence import TorqueShare, build_system, virtual_equivalence
from .model import grasp_matrix
from .nullspaces import build_model, particular_solution
from .numerics import DEFAULT_TOL, subspace_gap
from .synthesis import (
    body_acceleration,
    closed_form_applicable,
    field_split,
    legacy_parametrized_pinv,
    point_accelerations,
    synthesize,
    unweighted_pinv,
)

CASES = ("pointmass", "triangle", "sphere")


@dataclass
class Check:
    quantity: str
    error: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.error <= self.tolerance)

    def as_dict(self):
        return {"quantity": self.quantity, "error": self.error,
                "tolerance": self.tolerance, "pass": self.passed}


def _err(computed, expected):
    return float(np.max(np.abs(np.asarray(computed, float) - np.asarray(expected, float))))


def sphere_checks(tol=DEFAULT_TOL):
    ref = cases.SPHERE
    rt = cases.REFERENCE_TOL
    cs = cases.sphere_contacts()
    h = cases.sphere_applied()
    sys = build_system(cs, cases.SPHERE_MASS_TOTAL)
    G = grasp_matrix(cs)
    h_o = G @ h
    ve0, sol = virtual_equivalence(cs, sys, TorqueShare(0.0), tol)
    ve1, _ = virtual_equivalence(cs, sys, TorqueShare(1.0), tol)
    K, Z = constraint_space(h_o, cs, sys, tol)
    d0 = decompose(h, cs, sys, ve=ve0, Z=Z, K=K, tol=tol)
    d1 = decompose(h, cs, sys, ve=ve1, Z=Z, K=K, tol=tol)
    legacy = legacy_parametrized_pinv(cs, ve0) @ h_o

    fcs = cs.with_models(["force"] * cs.n)
    f_e = unweighted_pinv(fcs, tol) @ h_o
    out = [
        Check("resultant", _err(h_o, ref["resultant"]), rt),
        Check("m_star", _err(sol.m_star, ref["m_star"]), rt),
        Check("J_star_o", _err(ve0.J_star_o, ref["J_star_o"]), rt),
        Check("acceleration", _err(body_acceleration(h_o, ve0).vector, ref["acceleration"]), rt),
        Check("forces_only_h_m", _err(d0.h_m, np.ravel(ref["forces_only_h_m"])), rt),
        Check("forces_only_h_c", _err(d0.h_c, np.ravel(ref["forces_only_h_c"])), rt),
        Check("equal_torque_h_m", _err(d1.h_m, np.ravel(ref["equal_torque_h_m"])), rt),
        Check("equal_torque_h_c", _err(d1.h_c, np.ravel(ref["equal_torque_h_c"])), rt),
        Check("legacy_h_m", _err(legacy, np.ravel(ref["legacy_h_m"])), rt),
        Check("legacy_resultant", _err(G @ legacy, ref["legacy_resultant"]), rt),
        Check("equilibrating_forces", _err(f_e, np.ravel(ref["equilibrating_forces"])), rt),
        Check("lambda_c_invariance", _err(d0.lambda_c.lambda_c, d1.lambda_c.lambda_c),
              tol.residual_eps),
        # the closed form must not apply: the contact points are off-centre
        Check("closed_form_not_applicable", float(closed_form_applicable(cs, tol)), 0.0),
    ]
    return out


def triangle_checks(tol=DEFAULT_TOL):
    ref = cases.TRIANGLE
    cs = cases.triangle_contacts()
    h_o = cases.TRIANGLE_RESULTANT
    sys = build_system(cs, cases.TRIANGLE_MASS_TOTAL)
    G = grasp_matrix(cs)
    out = []
    for beta, exp in ref["cases"].items():
        tag = f"beta={beta:g}"
        ve, sol = virtual_equivalence(cs, sys, TorqueShare(beta), tol)
        h_m = synthesize(h_o, cs, ve)
        split = field_split(h_m, cs, ve)
        out.append(Check(f"{tag} m_star", _err(sol.m_star, ref["m_star"]), tol.residual_eps))
        out.append(Check(f"{tag} closure", _err(G @ h_m, h_o), tol.residual_eps))
        out.append(Check(f"{tag} tau_m", _err(h_m[cs.slots[3].torque], [exp["tau_m"]]),
                         tol.residual_eps))
        out.append(Check(f"{tag} x_f angular", _err(split.x_f.angular, [exp["x_f_angular"]]),
                         tol.residual_eps))
        out.append(Check(f"{tag} x_t angular", _err(split.x_t.angular, [exp["x_t_angular"]]),
                         tol.residual_eps))
        if exp["J_star_o"] is not None:
            out.append(Check(f"{tag} J_star_o", _err(ve.J_star_o, [[exp["J_star_o"]]]),
                             tol.residual_eps))
            out.append(Check(f"{tag} J_star_4", _err(ve.J_star[3], [[exp["J_star_4"]]]),
                             tol.residual_eps))
        else:
            # force field of the manipulating forces is uniform
            lin = [p.linear for p in point_accelerations(split.x_f, cs)[:3]]
            spread = max(_err(a, lin[0]) for a in lin)
            out.append(Check(f"{tag} parallel field", spread, 1e-12))
    return out


def point_mass_checks(tol=DEFAULT_TOL):
    ref = cases.POINT_MASS
    rt = cases.REFERENCE_TOL
    cs = cases.point_mass_contacts()
    f_o = cases.POINT_MASS_RESULTANT
    sys = build_system(cs, cases.POINT_MASS_TOTAL)
    model = build_model(f_o, cs, sys, tol=tol)
    G = grasp_matrix(cs)
    Zp = np.column_stack([ref["z1"], ref["z2"]])
    u = f_o / np.linalg.norm(f_o)
    k1 = np.concatenate([u, 0 * u, -u])
    k2 = np.concatenate([0 * u, u, -u])
    ve, sol = virtual_equivalence(cs, sys, TorqueShare(0.0), tol)
    return [
        Check("d", abs(model.d - ref["d"]), 0.0),
        Check("m_star", _err(sol.m_star, ref["m_star_min_norm"]), tol.residual_eps),
        Check("particular solution", _err(particular_solution(f_o, cs, sys, tol),
                                          np.tile(f_o / 3, 3)), tol.residual_eps),
        Check("K spans k1, k2", subspace_gap(model.K, np.column_stack([k1, k2])),
              tol.residual_eps),
        Check("G z", float(np.abs(G @ Zp).max()), rt),
        Check("z orthonormality", _err(Zp.T @ Zp, np.eye(2)), rt),
        Check("Z plane", subspace_gap(model.Z, Zp), rt),
    ]


def run_case(name, tol=DEFAULT_TOL):
    if name == "sphere":
        return sphere_checks(tol)
    if name == "triangle":
        return triangle_checks(tol)
    if name == "pointmass":
        return point_mass_checks(tol)
    raise ValueError(f"unknown case {name!r}; choose from {', '.join(CASES)}")
