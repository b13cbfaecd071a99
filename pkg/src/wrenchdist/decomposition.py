"""
Split applied wrenches into manipulating and constraint parts, plus the
explicit Udwadia-Kalaba constraint-wrench formula used as an independent
check and for spinning bodies.

Constraint wrenches are added to the applied ones: ``h_m = h + h_c``.
"""

from dataclasses import dataclass

import numpy as np

from .equivalence import TorqueShare, virtual_equivalence
from .errors import DimensionMismatch, SingularMass, TooFewContacts
from .model import ContactModel, Wrench, grasp_matrix, moment_arm, resultant
from .nullspaces import InternalState, constraint_basis, internal_state, manipulating_basis
from .numerics import DEFAULT_TOL, null_space_basis, pseudo_inverse, skew, sqrt_spd
from .synthesis import synthesize


@dataclass(frozen=True)
class ConstraintSystem:
    """
    ``A xdd = b`` over the state slots in ``index``.

    ``index`` maps UK state entries to entries of the full wrench stack;
    slots with zero virtual inertia are left out of the state.
    """

    A: np.ndarray
    b: np.ndarray
    M: np.ndarray | None
    index: np.ndarray
    stack_dim: int


@dataclass(frozen=True)
class Decomposition:
    h_o: Wrench
    h_m: np.ndarray
    h_c: np.ndarray
    lambda_c: InternalState


def _omegas(space, omega, n):
    td = space.torque_dim
    if omega is None:
        return [np.zeros(td)] * n
    w = np.asarray(omega, dtype=float)
    if w.ndim == 0 or w.shape == (td,):
        return [w.reshape(td)] * n
    if w.shape == (n,) and td == 1:
        return [np.array([x]) for x in w]
    if w.shape == (n, td):
        return list(w)
    raise DimensionMismatch(f"angular velocity must be one {td}-vector or one per contact")


def centripetal(space, omega, r):
    """Point acceleration omega x (omega x r) of a body spinning at rest."""
    r = np.asarray(r, dtype=float)
    if space.torque_dim == 3:
        S = skew(omega)
        return S @ S @ r
    if space.torque_dim == 1:
        return -float(omega[0]) ** 2 * r
    return np.zeros(space.force_dim)


def _state_index(cs, ve, tol):
    """Stack entries with positive virtual inertia; raises on a massless force slot."""
    if ve is None:
        return np.arange(cs.stack_dim)
    keep = []
    for i, s in enumerate(cs.slots):
        if s.force is not None:
            if ve.m_star[i] <= tol.rank_eps:
                raise SingularMass(f"contact {i} carries force but has no virtual mass")
            keep.extend(range(s.force.start, s.force.stop))
        if s.torque is not None:
            J = ve.J_star[i]
            if J is not None and np.linalg.norm(J) > tol.rank_eps:
                keep.extend(range(s.torque.start, s.torque.stop))
    return np.array(keep, dtype=int)


def _mass_matrix(cs, ve, index):
    M = np.zeros((cs.stack_dim, cs.stack_dim))
    for i, s in enumerate(cs.slots):
        sl = [x for x in (s.force, s.torque) if x is not None]
        lo, hi = sl[0].start, sl[-1].stop
        M[lo:hi, lo:hi] = ve.mass_matrix(i, cs)
    return M[np.ix_(index, index)]


def _reference_pattern(cs, omegas, reference):
    # per j != ref: translational row [-I, -C(r_j,ref)^T, I] on
    # (p_ref, w_ref, p_j), rotational row [-I, I] on (w_ref, w_j)
    sp = cs.space
    fd, td = sp.force_dim, sp.torque_dim
    slots = cs.slots
    ref = slots[reference]
    rows, rhs = [], []
    for j, s in enumerate(slots):
        if j == reference:
            continue
        r_j = cs.contacts[j].r - cs.contacts[reference].r
        T = np.zeros((fd, cs.stack_dim))
        T[:, ref.force] = -np.eye(fd)
        T[:, ref.torque] = -moment_arm(sp, r_j).T
        T[:, s.force] = np.eye(fd)
        R = np.zeros((td, cs.stack_dim))
        R[:, ref.torque] = -np.eye(td)
        R[:, s.torque] = np.eye(td)
        rows.extend([T, R])
        rhs.extend([centripetal(sp, omegas[j], r_j), np.zeros(td)])
    return np.vstack(rows), np.concatenate(rhs)


def constraint_matrices(cs, omega=None, ve=None, reference=0, tol=DEFAULT_TOL):
    """
    Kinematic constraints tying the lumped elements to one rigid body.

    With every contact carrying a full wrench and no slot left out, A has
    the per-contact pattern referenced to contact ``reference``. Otherwise
    A spans the complement of the rigid acceleration fields over the kept
    slots (rows of null(G_kept)^T) and b = A c with c the centripetal stack.
    ``omega`` is a single angular velocity or one per contact.
    """
    if cs.n < 2:
        raise TooFewContacts("kinematic constraints need at least two contacts")
    if not 0 <= reference < cs.n:
        raise ValueError("reference contact out of range")
    sp = cs.space
    omegas = _omegas(sp, omega, cs.n)
    index = _state_index(cs, ve, tol)
    all_wrench = all(c.model is ContactModel.FORCE_AND_TORQUE for c in cs.contacts)
    if sp.torque_dim and all_wrench and len(index) == cs.stack_dim:
        A, b = _reference_pattern(cs, omegas, reference)
    else:
        c = cs.stack([centripetal(sp, w, ct.r) for w, ct in zip(omegas, cs.contacts)], None)
        G = grasp_matrix(cs)[:, index]
        A = null_space_basis(G, tol).T
        b = A @ c[index]
    M = None if ve is None else _mass_matrix(cs, ve, index)
    return ConstraintSystem(A, b, M, index, cs.stack_dim)


def desired_accelerations(h, cs, ve, tol=DEFAULT_TOL):
    """
    Unconstrained element accelerations M_i^-1 h_i over all stack entries.

    Slots left out of the UK state get zero; an applied load on such a slot
    raises SingularMass.
    """
    h = cs.check_stack(h)
    index = _state_index(cs, ve, tol)
    out = np.zeros(cs.stack_dim)
    dropped = np.setdiff1d(np.arange(cs.stack_dim), index)
    if np.any(np.abs(h[dropped]) > tol.residual_eps):
        raise SingularMass("load applied to a slot with zero virtual inertia")
    M = _mass_matrix(cs, ve, index)
    out[index] = np.linalg.solve(M, h[index])
    return out


def uk_constraint_wrenches(sysC, x_dd_desired, tol=DEFAULT_TOL):
    """
    Explicit constraint wrenches ``M^1/2 pinv(A M^-1/2) (b - A xdd)``.

    ``x_dd_desired`` may be the full stack or just the state entries;
    the result is a full stack with zeros in the dropped slots.
    """
    if sysC.M is None:
        raise ValueError("constraint system was built without virtual inertias")
    x = np.asarray(x_dd_desired, dtype=float).reshape(-1)
    if x.shape[0] == sysC.stack_dim:
        x = x[sysC.index]
    elif x.shape[0] != len(sysC.index):
        raise DimensionMismatch("desired accelerations do not match the constraint system")
    Mh, Mih = sqrt_spd(sysC.M)
    B = sysC.A @ Mih
    hc = Mh @ pseudo_inverse(B, tol) @ (sysC.b - sysC.A @ x)
    out = np.zeros(sysC.stack_dim)
    out[sysC.index] = hc
    return out


def constraint_space(h_o, cs, sys, tol=DEFAULT_TOL):
    """(K, Z) bases for the problem with resultant h_o."""
    K, _ = manipulating_basis(h_o, cs, sys, tol=tol)
    return K, constraint_basis(grasp_matrix(cs), K, tol)


def decompose(h, cs, sys, share=TorqueShare(), ve=None, Z=None, K=None, tol=DEFAULT_TOL):
    """
    Manipulating and constraint parts of an applied stack h.

    The resultant is taken from h, the manipulating part is synthesized
    for it and ``h_c = h_m - h``. ``ve`` overrides the virtual parameters.
    ``Z`` (and optionally ``K``) override the bases used for lambda_c;
    by default both are built for the problem.
    """
    h = cs.check_stack(h)
    h_o = resultant(cs, h)
    if ve is None:
        ve, _ = virtual_equivalence(cs, sys, share, tol)
    h_m = synthesize(h_o, cs, ve)
    h_c = h_m - h
    if Z is None:
        K, Z = constraint_space(h_o, cs, sys, tol)
    return Decomposition(h_o, h_m, h_c, internal_state(h_c, Z, K, tol))
