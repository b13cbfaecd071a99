"""
Particular solution and the two sub-spaces of the grasp-matrix null space.

K spans the directions that move between manipulating distributions
(load rebalancing); Z spans the remaining null-space directions, which
carry pure internal loading. Applied stacks are written
``h = h_mp + K lambda_m - Z lambda_c``.
"""

from dataclasses import dataclass, field

import numpy as np

from .equivalence import TorqueShare, assign_torque_share, solve_masses
from .errors import DimensionMismatch, InfeasibleMasses
from .model import as_wrench_vector, grasp_matrix
from .numerics import DEFAULT_TOL, null_space_basis, orthonormal_basis, pseudo_inverse, rank
from .synthesis import parametrized_pinv, synthesize

FD_STEP = 1e-4
DEGENERATE_NORM = 1e-12


@dataclass(frozen=True)
class NullSpaceModel:
    h_o: np.ndarray
    h_mp: np.ndarray
    K: np.ndarray
    Z: np.ndarray
    d: int
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class InternalState:
    lambda_c: np.ndarray


def _forces_only(cs, m_star, m_star_o):
    return assign_torque_share(cs, m_star, TorqueShare(0.0), m_star_o=m_star_o)


def particular_solution(h_o, cs, sys, tol=DEFAULT_TOL):
    """Forces-only distribution for the minimum-norm virtual masses."""
    sol = solve_masses(sys, tol)
    if not sol.feasible:
        raise InfeasibleMasses(
            f"minimum-norm virtual masses are negative at contacts "
            f"{sol.diagnostics.get('negative_contacts')}")
    ve = _forces_only(cs, sol.m_star, float(sys.c[0]))
    return synthesize(h_o, cs, ve)


def manipulating_basis(h_o, cs, sys, share_slots=None, tol=DEFAULT_TOL, step=FD_STEP):
    """
    Orthonormal basis K of the directions between manipulating distributions.

    Two kinds of direction are collected around the forces-only particular
    solution: central differences of ``synthesize`` along each null
    direction of R (virtual-mass rebalancing), and one exact direction per
    torque-capable contact that moves torque duty along the resultant
    torque from the force-induced part onto that contact.

    Returns ``(K, diagnostics)``. Directions shorter than 1e-12 are
    dropped and listed under ``"degenerate"``.
    """
    h = as_wrench_vector(cs.space, h_o)
    sp = cs.space
    fd = sp.force_dim
    G = grasp_matrix(cs)
    m0 = solve_masses(sys, tol).m_star
    m_o = float(sys.c[0])
    diag = {"degenerate": [], "curvature": [], "not_in_null_G": []}
    dirs, labels = [], []

    nullR = null_space_basis(sys.R, tol)
    cols = list(sys.columns)
    h0 = synthesize(h, cs, _forces_only(cs, m0, m_o)) if nullR.shape[1] else None
    for k in range(nullR.shape[1]):
        nv = np.zeros(cs.n)
        nv[cols] = nullR[:, k]
        dm = step * m_o
        hp = synthesize(h, cs, _forces_only(cs, m0 + dm * nv, m_o))
        hm = synthesize(h, cs, _forces_only(cs, m0 - dm * nv, m_o))
        dirs.append((hp - hm) / (2 * dm))
        labels.append(f"mass:{k}")
        diag["curvature"].append(float(np.linalg.norm(hp + hm - 2 * h0) / dm ** 2))

    if share_slots is None:
        share_slots = cs.torque_contacts
    if share_slots:
        t_o = h[fd:]
        nt = np.linalg.norm(t_o)
        if nt == 0:
            diag["degenerate"].extend(f"torque:{i}" for i in share_slots)
        else:
            u = t_o / nt
            P = parametrized_pinv(cs, _forces_only(cs, m0, m_o))
            base = -P[:, fd:] @ u
            for i in share_slots:
                s = cs.slots[i]
                if s.torque is None:
                    raise ValueError(f"contact {i} cannot carry torque")
                d = base.copy()
                d[s.torque] += u
                dirs.append(d)
                labels.append(f"torque:{i}")

    kept = []
    for d, lab in zip(dirs, labels):
        nrm = np.linalg.norm(d)
        if nrm < DEGENERATE_NORM:
            diag["degenerate"].append(lab)
            continue
        if np.linalg.norm(G @ d) > tol.residual_eps * max(1.0, nrm):
            diag["not_in_null_G"].append(lab)
        kept.append(d / nrm)
    D = np.array(kept).T if kept else np.zeros((cs.stack_dim, 0))
    K = orthonormal_basis(D, tol)
    diag["sampled"] = len(kept)
    diag["rank"] = K.shape[1]
    if K.shape[1] < len(kept):
        diag["dependent_directions"] = len(kept) - K.shape[1]
    return K, diag


def constraint_basis(G, K, tol=DEFAULT_TOL):
    """Orthonormal basis Z of null([G; K^T])."""
    G = np.asarray(G, dtype=float)
    K = np.asarray(K, dtype=float).reshape(G.shape[1], -1)
    return null_space_basis(np.vstack([G, K.T]), tol)


def internal_state(h_c, Z, K=None, tol=DEFAULT_TOL):
    """
    Coordinates of h_c in the constraint sub-space, ``pinv(Z) @ h_c``.

    With ``K`` given, the Z-block of ``pinv([Z, K]) @ h_c`` is returned
    instead: components along K are then discarded exactly even when Z is
    not orthogonal to K (e.g. a rounded, stored basis). Both agree for an
    orthonormal Z with Z^T K = 0.
    """
    h_c = np.asarray(h_c, dtype=float).reshape(-1)
    Z = np.asarray(Z, dtype=float)
    if Z.shape[0] != h_c.shape[0]:
        raise DimensionMismatch("basis and stacked vector sizes differ")
    nz = Z.shape[1]
    if nz == 0:
        return InternalState(np.zeros(0))
    if K is not None and np.asarray(K).size:
        Z = np.hstack([Z, np.asarray(K, dtype=float)])
    return InternalState((pseudo_inverse(Z, tol) @ h_c)[:nz])


def build_model(h_o, cs, sys, share_slots=None, tol=DEFAULT_TOL):
    """Particular solution together with the K and Z bases for one problem."""
    h = as_wrench_vector(cs.space, h_o)
    h_mp = particular_solution(h, cs, sys, tol)
    K, diag = manipulating_basis(h, cs, sys, share_slots, tol)
    G = grasp_matrix(cs)
    Z = constraint_basis(G, K, tol)
    rG = rank(G, tol)
    diag["rank_G"] = rG
    diag["dimension_audit"] = K.shape[1] + Z.shape[1] + rG == cs.stack_dim
    return NullSpaceModel(h, h_mp, K, Z, K.shape[1], diag)


def compose(model, lambda_m=None, lambda_c=None):
    """Applied stack ``h_mp + K lambda_m - Z lambda_c``."""
    lm = np.zeros(model.K.shape[1]) if lambda_m is None else np.asarray(lambda_m, dtype=float)
    lc = np.zeros(model.Z.shape[1]) if lambda_c is None else np.asarray(lambda_c, dtype=float)
    if lm.shape != (model.K.shape[1],):
        raise DimensionMismatch(f"lambda_m needs {model.K.shape[1]} entries")
    if lc.shape != (model.Z.shape[1],):
        raise DimensionMismatch(f"lambda_c needs {model.Z.shape[1]} entries")
    return model.h_mp + model.K @ lm - model.Z @ lc
