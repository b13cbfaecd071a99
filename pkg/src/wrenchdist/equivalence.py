"""
Virtual mass/inertia assignment for the dynamically equivalent system.

Each force-carrying contact receives a virtual mass m*_i. Torque-carrying
contacts may also receive a virtual inertia J*_i. Inertias are stored as
``torque_dim x torque_dim`` arrays, so planar inertia is a 1x1 matrix and
translational spaces carry empty 0x0 inertias.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .errors import (
    EquivalenceConflict,
    Inconsistent,
    MissingInertiaTarget,
    NoTorqueContacts,
)
from .model import moment_arm
from .numerics import DEFAULT_TOL, null_space_basis, pseudo_inverse

# row order of the six independent entries of a symmetric 3x3 matrix
SYM6 = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))


def sym6(J):
    J = np.asarray(J, dtype=float)
    return np.array([J[i, j] for i, j in SYM6])


def inertia_matrix(space, value):
    """Coerce a user inertia (3x3, six-vector, or planar scalar) to a matrix."""
    td = space.torque_dim
    a = np.asarray(value, dtype=float)
    if td == 0:
        return np.zeros((0, 0))
    if td == 1:
        return a.reshape(1, 1)
    if a.shape == (6,):
        J = np.zeros((3, 3))
        for v, (i, j) in zip(a, SYM6):
            J[i, j] = J[j, i] = v
        return J
    return a.reshape(3, 3)


@dataclass(frozen=True)
class EquivalenceSystem:
    """Linear system ``R @ m = c`` over the force-carrying contacts."""

    R: np.ndarray
    c: np.ndarray
    mode: str
    columns: tuple
    n: int


@dataclass(frozen=True)
class TorqueShare:
    beta: float = 0.0
    weights: np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError("beta must lie in [0, 1]")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if np.any(w < 0):
                raise ValueError("torque weights must be nonnegative")
            if w.sum() <= 0:
                raise ValueError("torque weights must not all be zero")
            object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class MassSolution:
    m_star: np.ndarray
    feasible: bool
    diagnostics: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.m_star, self.feasible, self.diagnostics))


@dataclass(frozen=True)
class VirtualEquivalence:
    """
    Virtual inertial parameters of the lumped elements.

    In the pure-torque limit (beta == 1) the body inertia is unbounded;
    ``J_star_o`` is then None and the torque duty is carried by
    ``weights`` alone.
    """

    space: object
    m_star: np.ndarray
    m_star_o: float
    J_star_o: np.ndarray | None
    J_star: tuple
    J_force: np.ndarray
    beta: float = 0.0
    weights: np.ndarray | None = None
    pure_torque_limit: bool = False

    def mass_matrix(self, i, cs):
        """Block diag(m_i I, J_i) restricted to the slots contact i carries."""
        c = cs.contacts[i]
        blocks = []
        if c.model.has_force:
            blocks.append(self.m_star[i] * np.eye(self.space.force_dim))
        if c.model.has_torque:
            J = self.J_star[i]
            blocks.append(np.zeros((self.space.torque_dim,) * 2) if J is None else J)
        return _block_diag(blocks)


def _block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    M = np.zeros((n, n))
    k = 0
    for b in blocks:
        d = b.shape[0]
        M[k:k + d, k:k + d] = b
        k += d
    return M


def build_system(cs, m_star_o, J_target=None, mode="reduced"):
    """
    Assemble ``R m* = c`` for the virtual masses.

    Reduced mode keeps the mass-sum and CoM rows. Full mode adds the
    induced-inertia rows and needs ``J_target`` (already scaled by k).
    """
    if m_star_o <= 0:
        raise ValueError("total virtual mass must be positive")
    if mode not in ("full", "reduced"):
        raise ValueError(f"unknown equivalence mode {mode!r}")
    sp = cs.space
    cols = tuple(cs.force_contacts)
    pts = cs.points[list(cols)] if cols else np.zeros((0, sp.force_dim))
    rows = [np.ones(len(cols))]
    rhs = [float(m_star_o)]
    if sp.torque_dim and mode == "full":
        if J_target is None:
            raise MissingInertiaTarget("full equivalence mode needs an inertia target")
        J_t = inertia_matrix(sp, J_target)
        if sp.torque_dim == 3:
            s = np.array([sym6(moment_arm(sp, r) @ moment_arm(sp, r).T) for r in pts])
            rows.extend(s.T)
            rhs.extend(sym6(J_t))
        else:
            rows.append(np.sum(pts ** 2, axis=1))
            rhs.append(float(J_t[0, 0]))
    if sp.torque_dim:
        rows.extend(pts.T)
        rhs.extend([0.0] * sp.force_dim)
    R = np.array(rows, dtype=float).reshape(len(rows), len(cols))
    return EquivalenceSystem(R, np.array(rhs), mode, cols, cs.n)


def _min_norm_nonnegative(R, c, x0, tol):
    # projection of the origin onto {R m = c, m >= 0}; polished on the active set
    n = R.shape[1]
    res = minimize(
        lambda m: 0.5 * m @ m, np.clip(x0, 0, None), jac=lambda m: m,
        constraints=[{"type": "eq", "fun": lambda m: R @ m - c, "jac": lambda m: R}],
        bounds=[(0, None)] * n, method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500})
    m = np.clip(res.x, 0, None)
    free = m > 1e-8 * max(1.0, m.max(initial=0.0))
    x = np.zeros(n)
    if free.any():
        x[free] = pseudo_inverse(R[:, free], tol) @ c
    return x


def solve_masses(sys, tol=DEFAULT_TOL, nonnegative=False):
    """
    Minimum-norm virtual masses for an equivalence system.

    Returns a MassSolution (unpackable as ``m_star, feasible, diagnostics``).
    ``m_star`` has one entry per contact; torque-only contacts get zero.
    A negative mass marks the solution infeasible rather than being
    repaired, unless ``nonnegative`` asks for the constrained refinement.
    """
    R, c = sys.R, sys.c
    m = pseudo_inverse(R, tol) @ c
    res = float(np.linalg.norm(R @ m - c))
    if res > tol.residual_eps * (1.0 + np.linalg.norm(c)):
        raise Inconsistent(f"equivalence system has no solution (residual {res:.3e})")
    diag = {"residual": res, "refined": False}
    if nonnegative and np.any(m < -tol.residual_eps):
        m = _min_norm_nonnegative(R, c, m, tol)
        res = float(np.linalg.norm(R @ m - c))
        diag.update(residual=res, refined=True)
        if res > tol.residual_eps * (1.0 + np.linalg.norm(c)):
            diag["negative_mass"] = True
            diag["note"] = "no nonnegative solution exists"
    neg = [sys.columns[k] for k in np.flatnonzero(m < -tol.residual_eps)]
    if neg:
        diag["negative_mass"] = True
        diag["negative_contacts"] = neg
    full = np.zeros(sys.n)
    full[list(sys.columns)] = m
    feasible = not neg and res <= tol.residual_eps * (1.0 + np.linalg.norm(c))
    return MassSolution(full, feasible, diag)


def induced_inertia(cs, m_star):
    """Inertia contributed by the point masses: sum of m_i C(r_i) C(r_i)^T."""
    sp = cs.space
    m_star = np.asarray(m_star, dtype=float)
    if m_star.shape != (cs.n,):
        raise ValueError(f"expected {cs.n} virtual masses")
    J = np.zeros((sp.torque_dim, sp.torque_dim))
    for m, c in zip(m_star, cs.contacts):
        if c.model.has_force:
            C = moment_arm(sp, c.r)
            J += m * C @ C.T
    return J


def default_weights(cs):
    tc = cs.torque_contacts
    w = np.zeros(cs.n)
    if tc:
        w[tc] = 1.0 / len(tc)
    return w


def assign_torque_share(cs, m_star, share=TorqueShare(), m_star_o=None):
    """
    Build a VirtualEquivalence that puts a fraction ``beta`` of the
    resultant torque on pure manipulating torques.

    With J_f the mass-induced inertia: beta = 0 gives J*_o = J_f and no
    contact inertia; 0 < beta < 1 gives J*_o = J_f / (1 - beta) and
    J*_i = w_i beta / (1 - beta) J_f; beta = 1 is the pure-torque limit.
    """
    sp = cs.space
    m_star = np.asarray(m_star, dtype=float)
    if m_star.shape != (cs.n,):
        raise ValueError(f"expected {cs.n} virtual masses")
    tc = cs.torque_contacts
    if share.beta > 0 and not tc:
        raise NoTorqueContacts("a torque share needs at least one torque-capable contact")
    if share.weights is None:
        w = default_weights(cs)
    else:
        w = np.asarray(share.weights, dtype=float)
        if w.shape != (cs.n,):
            raise ValueError(f"expected {cs.n} torque weights")
        if np.any(w[[i for i in range(cs.n) if i not in tc]] != 0):
            raise ValueError("torque weights must be zero on force-only contacts")
        w = w / w.sum()
    m_o = float(m_star.sum()) if m_star_o is None else float(m_star_o)
    J_f = induced_inertia(cs, m_star)
    beta = float(share.beta)
    zero = np.zeros((sp.torque_dim, sp.torque_dim))
    if beta == 1.0:
        J_star = tuple(zero if c.model.has_torque else None for c in cs.contacts)
        return VirtualEquivalence(sp, m_star, m_o, None, J_star, J_f, beta, w, True)
    ratio = beta / (1.0 - beta)
    J_star = tuple((w[i] * ratio * J_f) if c.model.has_torque else None
                   for i, c in enumerate(cs.contacts))
    return VirtualEquivalence(sp, m_star, m_o, J_f / (1.0 - beta), J_star, J_f, beta, w)


def with_inertias(ve, cs, J_star):
    """
    Replace the per-contact inertias and recompute the body inertia as
    their sum plus the mass-induced part. Used for hand-built parameter sets.
    """
    sp = cs.space
    J_list = []
    for i, c in enumerate(cs.contacts):
        J = J_star[i] if i < len(J_star) else None
        if c.model.has_torque:
            J_list.append(np.zeros((sp.torque_dim,) * 2) if J is None
                          else inertia_matrix(sp, J))
        else:
            J_list.append(None)
    J_o = ve.J_force + sum((J for J in J_list if J is not None),
                           np.zeros((sp.torque_dim,) * 2))
    return replace(ve, J_star=tuple(J_list), J_star_o=J_o, pure_torque_limit=False)


def virtual_equivalence(cs, sys, share=TorqueShare(), tol=DEFAULT_TOL, m_star=None,
                        nonnegative=False):
    """solve_masses followed by assign_torque_share, with the full-mode guard."""
    if sys.mode == "full" and cs.space.torque_dim and share.beta > 0:
        raise EquivalenceConflict(
            "full equivalence pins the body inertia to the mass-induced inertia; "
            "only beta = 0 is consistent")
    if m_star is None:
        sol = solve_masses(sys, tol, nonnegative=nonnegative)
    else:
        m_star = np.asarray(m_star, dtype=float)
        res = float(np.linalg.norm(sys.R @ m_star[list(sys.columns)] - sys.c))
        if res > tol.residual_eps * (1.0 + np.linalg.norm(sys.c)):
            raise Inconsistent(f"virtual masses do not satisfy the system (residual {res:.3e})")
        sol = MassSolution(m_star, bool(np.all(m_star >= -tol.residual_eps)),
                           {"residual": res, "refined": False, "user_supplied": True})
    ve = assign_torque_share(cs, sol.m_star, share, m_star_o=float(sys.c[0]))
    return ve, sol


def scale_equivalence(ve, k):
    """Scale every virtual mass and inertia by k > 0."""
    if k <= 0:
        raise ValueError("scale must be positive")
    return replace(
        ve,
        m_star=ve.m_star * k,
        m_star_o=ve.m_star_o * k,
        J_star_o=None if ve.J_star_o is None else ve.J_star_o * k,
        J_star=tuple(None if J is None else J * k for J in ve.J_star),
        J_force=ve.J_force * k,
    )


def _prop_residual(J, J_o):
    # min over alpha of |J - alpha J_o| / |J_o| (Frobenius)
    nrm = np.linalg.norm(J_o)
    if nrm == 0:
        return float(np.linalg.norm(J))
    alpha = np.sum(J * J_o) / nrm ** 2
    return float(np.linalg.norm(J - alpha * J_o) / nrm)


@dataclass
class EquivalenceCheck:
    residuals: dict
    passed: dict

    @property
    def ok(self):
        return all(self.passed.values())


def check_equivalence(ve, cs, tol=DEFAULT_TOL):
    """
    Residuals of the four parameter constraints: mass sum, CoM, inertia sum
    and inertia proportionality.
    """
    sp = cs.space
    fc = cs.force_contacts
    m = ve.m_star
    pts = cs.points
    mass_sum = abs(ve.m_star_o - m[fc].sum()) if fc else abs(ve.m_star_o)
    com = float(np.linalg.norm((m[fc, None] * pts[fc]).sum(axis=0))) if (fc and sp.torque_dim) else 0.0
    J_f = induced_inertia(cs, m)
    if ve.pure_torque_limit:
        # limit quantities: J*_i / J*_o -> w_i, J_f / J*_o -> 0
        inertia_sum = abs(1.0 - float(np.sum(ve.weights))) if cs.torque_contacts else 0.0
        prop = 0.0
    elif sp.torque_dim == 0:
        inertia_sum = prop = 0.0
    else:
        J_sum = J_f + sum((J for J in ve.J_star if J is not None), np.zeros_like(J_f))
        inertia_sum = float(np.linalg.norm(ve.J_star_o - J_sum))
        prop = max([_prop_residual(J, ve.J_star_o) for J in ve.J_star if J is not None]
                   + [_prop_residual(J_f, ve.J_star_o)])
    residuals = {
        "mass_sum": float(mass_sum),
        "com": com,
        "inertia_sum": inertia_sum,
        "proportionality": prop,
    }
    passed = {k: v <= tol.residual_eps for k, v in residuals.items()}
    return EquivalenceCheck(residuals, passed)


def solution_dimension(sys, n_torque_slots, tol=DEFAULT_TOL):
    """Dimension of the manipulating solution set: torque slots plus nullity(R)."""
    return int(n_torque_slots) + null_space_basis(sys.R, tol).shape[1]
