"""
Wrench spaces, contact sets and the grasp matrix.

A stacked wrench vector lists, contact by contact, the force components
(if the contact carries force) followed by the torque components (if it
carries torque). ``ContactSet.slots`` gives the index ranges.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, ModelMismatch
from .numerics import skew


@dataclass(frozen=True)
class WrenchSpace:
    kind: str
    force_dim: int
    torque_dim: int

    @property
    def wrench_dim(self):
        return self.force_dim + self.torque_dim

    @classmethod
    def from_kind(cls, kind):
        try:
            return _SPACES[kind]
        except KeyError:
            raise ValueError(f"unknown wrench space {kind!r}") from None


SPATIAL = WrenchSpace("spatial", 3, 3)
PLANAR = WrenchSpace("planar", 2, 1)
TRANSLATIONAL2 = WrenchSpace("translational2", 2, 0)
TRANSLATIONAL3 = WrenchSpace("translational3", 3, 0)
_SPACES = {s.kind: s for s in (SPATIAL, PLANAR, TRANSLATIONAL2, TRANSLATIONAL3)}


class ContactModel(Enum):
    FORCE_ONLY = "force"
    FORCE_AND_TORQUE = "wrench"
    TORQUE_ONLY = "torque"

    @property
    def has_force(self):
        return self is not ContactModel.TORQUE_ONLY

    @property
    def has_torque(self):
        return self is not ContactModel.FORCE_ONLY


@dataclass(frozen=True)
class Contact:
    r: np.ndarray
    model: ContactModel = ContactModel.FORCE_AND_TORQUE

    def __post_init__(self):
        r = np.array(self.r, dtype=float).reshape(-1)
        if not np.all(np.isfinite(r)):
            raise ValueError("contact position must be finite")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "model", ContactModel(self.model))


@dataclass(frozen=True)
class Slot:
    force: slice | None
    torque: slice | None


class ContactSet:
    """Ordered contacts sharing one wrench space."""

    def __init__(self, space, contacts):
        if isinstance(space, str):
            space = WrenchSpace.from_kind(space)
        contacts = tuple(contacts)
        if not contacts:
            raise ValueError("a contact set needs at least one contact")
        for c in contacts:
            if c.r.shape != (space.force_dim,):
                raise DimensionMismatch(
                    f"contact position {c.r} does not match {space.kind} space")
            if c.model.has_torque and space.torque_dim == 0:
                raise ModelMismatch(f"{space.kind} space has no torque components")
        self.space = space
        self.contacts = contacts
        self._slots = []
        k = 0
        for c in contacts:
            fs = ts = None
            if c.model.has_force:
                fs = slice(k, k + space.force_dim)
                k += space.force_dim
            if c.model.has_torque:
                ts = slice(k, k + space.torque_dim)
                k += space.torque_dim
            self._slots.append(Slot(fs, ts))
        self.stack_dim = k

    @classmethod
    def from_points(cls, space, points, models=None):
        if isinstance(space, str):
            space = WrenchSpace.from_kind(space)
        if models is None:
            default = (ContactModel.FORCE_AND_TORQUE if space.torque_dim
                       else ContactModel.FORCE_ONLY)
            models = [default] * len(points)
        if len(models) != len(points):
            raise DimensionMismatch("one contact model per point is required")
        return cls(space, [Contact(p, m) for p, m in zip(points, models)])

    def __len__(self):
        return len(self.contacts)

    def __repr__(self):
        models = [c.model.value for c in self.contacts]
        return f"ContactSet({self.space.kind}, n={len(self)}, models={models})"

    @property
    def n(self):
        return len(self.contacts)

    @property
    def slots(self):
        return list(self._slots)

    @property
    def points(self):
        return np.array([c.r for c in self.contacts])

    @property
    def force_contacts(self):
        return [i for i, c in enumerate(self.contacts) if c.model.has_force]

    @property
    def torque_contacts(self):
        return [i for i, c in enumerate(self.contacts) if c.model.has_torque]

    def with_models(self, models):
        return ContactSet.from_points(self.space, self.points, models)

    def split(self, h):
        """Per-contact (force, torque) pairs; missing parts are zero vectors."""
        h = self.check_stack(h)
        fd, td = self.space.force_dim, self.space.torque_dim
        out = []
        for s in self._slots:
            f = h[s.force] if s.force is not None else np.zeros(fd)
            t = h[s.torque] if s.torque is not None else np.zeros(td)
            out.append((f, t))
        return out

    def stack(self, forces=None, torques=None):
        """Inverse of ``split``; parts a contact cannot carry must be zero or absent."""
        h = np.zeros(self.stack_dim)
        for i, s in enumerate(self._slots):
            if forces is not None and s.force is not None:
                h[s.force] = forces[i]
            if torques is not None and s.torque is not None:
                h[s.torque] = torques[i]
        return h

    def check_stack(self, h):
        h = np.asarray(h, dtype=float).reshape(-1)
        if h.shape[0] != self.stack_dim:
            raise DimensionMismatch(
                f"stacked vector has {h.shape[0]} entries, expected {self.stack_dim}")
        return h


@dataclass(frozen=True)
class Wrench:
    force: np.ndarray
    torque: np.ndarray

    @classmethod
    def from_vector(cls, space, v):
        v = np.asarray(v, dtype=float).reshape(-1)
        if v.shape[0] != space.wrench_dim:
            raise DimensionMismatch(
                f"wrench has {v.shape[0]} entries, {space.kind} needs {space.wrench_dim}")
        return cls(v[:space.force_dim].copy(), v[space.force_dim:].copy())

    @property
    def vector(self):
        return np.concatenate([self.force, self.torque])

    def __array__(self, dtype=None, copy=None):
        v = self.vector
        return v if dtype is None else v.astype(dtype)


def as_wrench_vector(space, h_o):
    if isinstance(h_o, Wrench):
        h_o = h_o.vector
    return Wrench.from_vector(space, h_o).vector


def moment_arm(space, r):
    """
    Matrix C(r) with torque = C(r) @ force for a force applied at r.

    Spatial: skew(r). Planar: the 1x2 row [-y, x]. Translational: 0 rows.
    """
    r = np.asarray(r, dtype=float)
    if space.torque_dim == 3:
        return skew(r)
    if space.torque_dim == 1:
        return np.array([[-r[1], r[0]]])
    return np.zeros((0, space.force_dim))


def grasp_matrix(cs):
    sp = cs.space
    fd, td = sp.force_dim, sp.torque_dim
    G = np.zeros((sp.wrench_dim, cs.stack_dim))
    for c, s in zip(cs.contacts, cs.slots):
        if s.force is not None:
            G[:fd, s.force] = np.eye(fd)
            G[fd:, s.force] = moment_arm(sp, c.r)
        if s.torque is not None:
            G[fd:, s.torque] = np.eye(td)
    return G


def resultant(cs, h):
    """Net wrench about the CoM of a stacked applied wrench vector."""
    h = cs.check_stack(h)
    return Wrench.from_vector(cs.space, grasp_matrix(cs) @ h)


def interaction_residuals(cs, f):
    """
    Pairwise interaction terms ``(f_j - f_i) . (r_j - r_i)`` for i < j.

    Only defined for contact sets that carry pure forces.
    """
    if any(c.model is not ContactModel.FORCE_ONLY for c in cs.contacts):
        raise ModelMismatch("interaction residuals need force-only contacts")
    f = cs.check_stack(f).reshape(cs.n, cs.space.force_dim)
    r = cs.points
    return [float(np.dot(f[j] - f[i], r[j] - r[i]))
            for i, j in combinations(range(cs.n), 2)]
