"""
Closed-form wrench synthesis.

Two routes produce the same manipulating distribution and are kept
separate on purpose: ``synthesize`` walks through body acceleration, point
accelerations and per-element dynamics, while ``parametrized_pinv`` builds
the right inverse of the grasp matrix directly.
"""

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient, SingularInertia
from .model import as_wrench_vector, grasp_matrix, moment_arm
from .numerics import DEFAULT_TOL, pseudo_inverse, rank


@dataclass(frozen=True)
class BodyAcceleration:
    linear: np.ndarray
    angular: np.ndarray

    @property
    def vector(self):
        return np.concatenate([self.linear, self.angular])

    def __add__(self, other):
        return BodyAcceleration(self.linear + other.linear, self.angular + other.angular)


@dataclass(frozen=True)
class FieldSplit:
    """Acceleration generated by the manipulating forces (x_f) and torques (x_t)."""

    x_f: BodyAcceleration
    x_t: BodyAcceleration


def _inv_inertia(ve):
    if ve.J_star_o is None:
        return None
    J = ve.J_star_o
    if J.size == 0:
        return J
    try:
        cond = np.linalg.cond(J)
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularInertia("virtual body inertia is singular")
    return np.linalg.inv(J)


def body_acceleration(h_o, ve):
    """
    Acceleration of the virtual body at rest: f_o / m*_o and J*_o^-1 t_o.

    In the pure-torque limit the angular part is the limit value, zero.
    """
    sp = ve.space
    h = as_wrench_vector(sp, h_o)
    f_o, t_o = h[:sp.force_dim], h[sp.force_dim:]
    if ve.m_star_o <= 0:
        raise SingularInertia("total virtual mass must be positive")
    Jinv = _inv_inertia(ve)
    ang = np.zeros(sp.torque_dim) if Jinv is None else Jinv @ t_o
    return BodyAcceleration(f_o / ve.m_star_o, ang)


def point_accelerations(a, cs):
    """Rigid at-rest acceleration field sampled at each contact point."""
    sp = cs.space
    return [BodyAcceleration(a.linear + moment_arm(sp, c.r).T @ a.angular, a.angular.copy())
            for c in cs.contacts]


def synthesize(h_o, cs, ve):
    """
    Manipulating wrench distribution for resultant h_o, element by element:
    h_m,i = [m*_i * point linear acceleration; J*_i * angular acceleration].
    """
    sp = cs.space
    h = as_wrench_vector(sp, h_o)
    f_o, t_o = h[:sp.force_dim], h[sp.force_dim:]
    forces, torques = [], []
    if ve.pure_torque_limit:
        for i in range(cs.n):
            forces.append(ve.m_star[i] / ve.m_star_o * f_o)
            torques.append(ve.weights[i] * t_o)
    else:
        a = body_acceleration(h, ve)
        for i, p in enumerate(point_accelerations(a, cs)):
            forces.append(ve.m_star[i] * p.linear)
            J = ve.J_star[i]
            torques.append(np.zeros(sp.torque_dim) if J is None else J @ p.angular)
    return cs.stack(forces, torques)


def _pinv_blocks(cs, ve, force_block):
    sp = cs.space
    fd, td = sp.force_dim, sp.torque_dim
    P = np.zeros((cs.stack_dim, sp.wrench_dim))
    if ve.pure_torque_limit:
        Jinv = None
    else:
        Jinv = _inv_inertia(ve)
    for i, (c, s) in enumerate(zip(cs.contacts, cs.slots)):
        if s.force is not None:
            P[s.force, :fd] = ve.m_star[i] / ve.m_star_o * np.eye(fd)
            if Jinv is not None:
                P[s.force, fd:] = force_block(ve.m_star[i], moment_arm(sp, c.r), Jinv)
        if s.torque is not None:
            if Jinv is None:
                P[s.torque, fd:] = ve.weights[i] * np.eye(td)
            else:
                P[s.torque, fd:] = ve.J_star[i] @ Jinv
    return P


def parametrized_pinv(cs, ve):
    """
    Weighted right inverse of the grasp matrix built from the virtual
    parameters. Per contact: force rows [m_i/m_o I, m_i C(r_i)^T J_o^-1],
    torque rows [0, J_i J_o^-1]. The pure-torque limit drops the
    force-torque coupling and uses the torque weights.
    """
    return _pinv_blocks(cs, ve, lambda m, C, Jinv: m * C.T @ Jinv)


def legacy_parametrized_pinv(cs, ve):
    """
    A legacy form with the inverse inertia on the wrong side:
    force rows [m_i/m_o I, m_i J_o^-1 C(r_i)^T]. Not a right inverse of G
    once J_o is anisotropic; kept as a comparison baseline.
    """
    sp = cs.space

    def block(m, C, Jinv):
        if sp.torque_dim == 3:
            return m * Jinv @ C.T
        # a scalar inertia commutes, so the planar case coincides
        return m * C.T @ Jinv

    return _pinv_blocks(cs, ve, block)


def unweighted_pinv(cs, tol=DEFAULT_TOL):
    """G^T (G G^T)^-1, computed through the SVD."""
    G = grasp_matrix(cs)
    if rank(G, tol) < G.shape[0]:
        raise RankDeficient("grasp matrix does not have full row rank")
    return pseudo_inverse(G, tol)


def closed_form_applicable(cs, tol=DEFAULT_TOL):
    """
    True when unit masses and unit inertias satisfy the CoM condition, i.e.
    the force-carrying points are centred on the CoM.
    """
    fc = cs.force_contacts
    if not fc:
        return False
    if cs.space.torque_dim == 0:
        return True
    s = cs.points[fc].sum(axis=0)
    scale = max(1.0, float(np.abs(cs.points).max()))
    return bool(np.linalg.norm(s) <= tol.residual_eps * scale * len(fc))


def closed_form_pinv(cs):
    """
    Block closed form of G^T (G G^T)^-1 that holds when the force points
    are centred on the CoM. With n_f force contacts, n_t torque contacts
    and Jbar = n_t I + sum C C^T:
    force rows [I / n_f, C^T Jbar^-1], torque rows [0, Jbar^-1].

    For an all-wrench set this is (1/n) [I, C^T Jb^-1; 0, Jb^-1] with
    Jb = I + (1/n) sum C C^T. Callers check ``closed_form_applicable``;
    outside that case the result is generally not the pseudo-inverse.
    """
    sp = cs.space
    fd, td = sp.force_dim, sp.torque_dim
    fc, tc = cs.force_contacts, cs.torque_contacts
    Jbar = len(tc) * np.eye(td)
    for i in fc:
        C = moment_arm(sp, cs.contacts[i].r)
        Jbar = Jbar + C @ C.T
    Jinv = np.linalg.inv(Jbar) if td else np.zeros((0, 0))
    P = np.zeros((cs.stack_dim, sp.wrench_dim))
    for c, s in zip(cs.contacts, cs.slots):
        if s.force is not None:
            P[s.force, :fd] = np.eye(fd) / len(fc)
            P[s.force, fd:] = moment_arm(sp, c.r).T @ Jinv
        if s.torque is not None:
            P[s.torque, fd:] = Jinv
    return P


def field_split(h_m, cs, ve):
    """
    Split the body acceleration into the part produced by the manipulating
    forces and the part produced by the manipulating torques.
    """
    sp = cs.space
    parts = cs.split(h_m)
    f_o = sum((f for f, _ in parts), np.zeros(sp.force_dim))
    t_f = np.zeros(sp.torque_dim)
    t_t = np.zeros(sp.torque_dim)
    for (f, t), c in zip(parts, cs.contacts):
        t_f += moment_arm(sp, c.r) @ f
        t_t += t
    if ve.pure_torque_limit:
        # J*_o -> infinity: both angular contributions vanish
        Jinv = np.zeros((sp.torque_dim, sp.torque_dim))
    else:
        Jinv = _inv_inertia(ve)
    x_f = BodyAcceleration(f_o / ve.m_star_o, Jinv @ t_f)
    x_t = BodyAcceleration(np.zeros(sp.force_dim), Jinv @ t_t)
    return FieldSplit(x_f, x_t)


def torque_alignment(h_m, cs, h_o):
    """
    Largest angle (radians) between any manipulating torque and the
    resultant torque. Zero torques are skipped.
    """
    sp = cs.space
    if sp.torque_dim == 0:
        return 0.0
    t_o = as_wrench_vector(sp, h_o)[sp.force_dim:]
    nt = np.linalg.norm(t_o)
    worst = 0.0
    for _, t in cs.split(h_m):
        n = np.linalg.norm(t)
        if n == 0 or nt == 0:
            if n > 0:
                worst = np.pi
            continue
        if sp.torque_dim == 1:
            ang = 0.0 if t[0] * t_o[0] > 0 else np.pi
        else:
            # atan2 of sine and cosine keeps precision near zero
            ang = np.arctan2(np.linalg.norm(np.cross(t, t_o)), np.dot(t, t_o))
        worst = max(worst, float(ang))
    return worst
