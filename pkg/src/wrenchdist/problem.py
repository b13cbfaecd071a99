"""
Problem files: JSON documents describing one synthesis or decomposition run.

Fields
------
space : "spatial" | "planar" | "translational2" | "translational3"
points : list of contact positions
contact_models : list of "force" | "wrench" | "torque" (default: wrench when
    the space has torques, force otherwise)
mode : "synthesis" | "decomposition"
resultant : wrench vector (synthesis)
applied : list of per-contact wrench vectors (decomposition); each entry
    lists only the components that contact carries
virtual_mass_total : default 1.0
equivalence : "reduced" (default) | "full"
inertia_scale_k, body_inertia : full mode only
torque_share_beta : default 0
torque_weights, lambda_m, lambda_c : optional
virtual_masses : optional, overrides the minimum-norm masses
virtual_inertias : optional per-contact inertias (null for none); the body
    inertia becomes their sum plus the mass-induced inertia
tolerance : optional {"rank_eps": ..., "residual_eps": ...}
"""

import json
from dataclasses import dataclass

import numpy as np

from .equivalence import TorqueShare, build_system, virtual_equivalence, with_inertias
from .errors import DimensionMismatch
from .model import ContactModel, ContactSet, WrenchSpace
from .numerics import DEFAULT_TOL, Tolerance

KNOWN_FIELDS = {
    "space", "points", "contact_models", "mode", "resultant", "applied",
    "virtual_mass_total", "equivalence", "inertia_scale_k", "body_inertia",
    "torque_share_beta", "torque_weights", "lambda_c", "lambda_m",
    "virtual_masses", "virtual_inertias", "tolerance",
}


class ProblemError(ValueError):
    """The problem file is malformed."""


@dataclass
class Problem:
    cs: ContactSet
    mode: str
    h_o: np.ndarray | None
    applied: np.ndarray | None
    m_star_o: float
    equivalence: str
    J_target: np.ndarray | None
    share: TorqueShare
    lambda_m: np.ndarray | None
    lambda_c: np.ndarray | None
    virtual_masses: np.ndarray | None
    virtual_inertias: list | None
    tol: Tolerance

    def system(self):
        return build_system(self.cs, self.m_star_o, self.J_target, self.equivalence)

    def equivalence_params(self, nonnegative=False):
        sys = self.system()
        ve, sol = virtual_equivalence(self.cs, sys, self.share, self.tol,
                                      m_star=self.virtual_masses, nonnegative=nonnegative)
        if self.virtual_inertias is not None:
            ve = with_inertias(ve, self.cs, self.virtual_inertias)
        return sys, ve, sol


def _vec(x, name):
    try:
        a = np.asarray(x, dtype=float)
    except (TypeError, ValueError):
        raise ProblemError(f"{name} must be numeric") from None
    if not np.all(np.isfinite(a)):
        raise ProblemError(f"{name} must be finite")
    return a


def parse_problem(doc, tol=None):
    """Validate a decoded problem document and build a Problem."""
    if not isinstance(doc, dict):
        raise ProblemError("problem file must hold a JSON object")
    unknown = set(doc) - KNOWN_FIELDS
    if unknown:
        raise ProblemError(f"unknown fields: {sorted(unknown)}")
    for key in ("space", "points", "mode"):
        if key not in doc:
            raise ProblemError(f"missing field {key!r}")
    try:
        space = WrenchSpace.from_kind(doc["space"])
    except ValueError as e:
        raise ProblemError(str(e)) from None
    points = _vec(doc["points"], "points")
    if points.ndim != 2:
        raise ProblemError("points must be a list of vectors")
    models = doc.get("contact_models")
    try:
        if models is not None:
            models = [ContactModel(m) for m in models]
        cs = ContactSet.from_points(space, points, models)
    except ValueError as e:
        raise ProblemError(str(e)) from None

    mode = doc["mode"]
    h_o = applied = None
    if mode == "synthesis":
        if "resultant" not in doc:
            raise ProblemError("synthesis mode needs 'resultant'")
        h_o = _vec(doc["resultant"], "resultant").reshape(-1)
        if h_o.shape != (space.wrench_dim,):
            raise ProblemError(f"resultant needs {space.wrench_dim} entries")
    elif mode == "decomposition":
        if "applied" not in doc:
            raise ProblemError("decomposition mode needs 'applied'")
        rows = doc["applied"]
        if not isinstance(rows, list) or len(rows) != cs.n:
            raise ProblemError("'applied' needs one entry per contact")
        parts = [_vec(r, "applied").reshape(-1) for r in rows]
        applied = np.concatenate(parts) if parts else np.zeros(0)
        if applied.shape != (cs.stack_dim,):
            raise ProblemError(f"'applied' needs {cs.stack_dim} values in total")
    else:
        raise ProblemError(f"unknown mode {mode!r}")

    m_o = float(doc.get("virtual_mass_total", 1.0))
    if not m_o > 0:
        raise ProblemError("virtual_mass_total must be positive")
    equivalence = doc.get("equivalence", "reduced")
    if equivalence not in ("reduced", "full"):
        raise ProblemError(f"unknown equivalence {equivalence!r}")
    J_target = None
    if equivalence == "full" and space.torque_dim:
        if "body_inertia" not in doc:
            raise ProblemError("full equivalence needs 'body_inertia'")
        k = float(doc.get("inertia_scale_k", 1.0))
        if not k > 0:
            raise ProblemError("inertia_scale_k must be positive")
        J_target = k * _vec(doc["body_inertia"], "body_inertia")

    try:
        weights = doc.get("torque_weights")
        share = TorqueShare(float(doc.get("torque_share_beta", 0.0)),
                            None if weights is None else _vec(weights, "torque_weights"))
    except ValueError as e:
        raise ProblemError(str(e)) from None

    t = doc.get("tolerance") or {}
    try:
        file_tol = Tolerance(float(t.get("rank_eps", DEFAULT_TOL.rank_eps)),
                             float(t.get("residual_eps", DEFAULT_TOL.residual_eps)))
    except (ValueError, AttributeError) as e:
        raise ProblemError(f"bad tolerance: {e}") from None

    def opt(key):
        v = doc.get(key)
        return None if v is None else _vec(v, key).reshape(-1)

    vm = opt("virtual_masses")
    if vm is not None and vm.shape != (cs.n,):
        raise ProblemError("virtual_masses needs one entry per contact")
    vi = doc.get("virtual_inertias")
    if vi is not None and (not isinstance(vi, list) or len(vi) != cs.n):
        raise ProblemError("virtual_inertias needs one entry per contact")

    return Problem(cs, mode, h_o, applied, m_o, equivalence, J_target, share,
                   opt("lambda_m"), opt("lambda_c"), vm, vi, tol or file_tol)


def load_problem(path, tol=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ProblemError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ProblemError(f"{path} is not valid JSON: {e}") from None
    try:
        return parse_problem(doc, tol)
    except DimensionMismatch as e:
        raise ProblemError(str(e)) from None
