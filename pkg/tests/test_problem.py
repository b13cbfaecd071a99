import json

import numpy as np
import pytest

from wrenchdist import cases
from wrenchdist.equivalence import induced_inertia
from wrenchdist.model import grasp_matrix
from wrenchdist.problem import ProblemError, load_problem, parse_problem


def test_sphere_points_match_angles():
    pts = cases.sphere_contacts().points
    for (az, el), p in zip(cases.SPHERE_ANGLES, pts):
        a, e = np.radians(az), np.radians(el)
        assert np.allclose(p, [np.cos(a) * np.cos(e), np.sin(a) * np.cos(e), np.sin(e)],
                           atol=1e-15)


def test_shipped_fixtures_parse():
    for name in ("sphere_decompose", "sphere_equal_torque", "sphere_synth_equal_torque",
                 "pointmass_synth", "triangle_synth", "sphere_corrupted_inertia"):
        pr = load_problem(cases.data_path(name))
        assert pr.cs.n >= 3


def test_pointmass_basis_fixture():
    d = cases.load_data("pointmass_z_basis")
    assert d["z1"] == cases.POINT_MASS["z1"] and d["z2"] == cases.POINT_MASS["z2"]


def test_full_mode_scales_target():
    rng = np.random.default_rng(13)
    doc = {"space": "spatial", "points": rng.normal(size=(10, 3)).tolist(),
           "contact_models": ["force"] * 10, "mode": "synthesis", "resultant": [0] * 6,
           "equivalence": "full", "body_inertia": [1, 2, 3, 0, 0, 0],
           "inertia_scale_k": 0.5, "virtual_mass_total": 2.0}
    pr = parse_problem(doc)
    assert np.allclose(pr.J_target, 0.5 * np.array([1, 2, 3, 0, 0, 0]))
    sys_, ve, sol = pr.equivalence_params()
    assert np.allclose(induced_inertia(pr.cs, sol.m_star), np.diag([0.5, 1.0, 1.5]), atol=1e-9)


def test_tolerance_override():
    doc = json.loads(cases.data_path("triangle_synth").read_text())
    doc["tolerance"] = {"residual_eps": 1e-6}
    assert parse_problem(doc).tol.residual_eps == 1e-6
    doc["tolerance"] = {"residual_eps": 0}
    with pytest.raises(ProblemError):
        parse_problem(doc)


def test_applied_rows_follow_contact_models():
    doc = json.loads(cases.data_path("triangle_synth").read_text())
    doc["mode"] = "decomposition"
    doc["applied"] = [[1, 0], [0, 1], [0, 0], [0.5]]
    assert parse_problem(doc).applied.shape == (7,)
    doc["applied"][3] = [0.5, 0.1]
    with pytest.raises(ProblemError):
        parse_problem(doc)


def test_helicoidal_fit_misses_resultant():
    cs = cases.sphere_contacts(["force"] * 4)
    G = grasp_matrix(cs)
    res = G @ np.ravel(cases.SPHERE["helicoidal_fit_forces"])
    assert np.abs(res - cases.SPHERE["helicoidal_fit_resultant"]).max() < 2e-3
    h_o = grasp_matrix(cases.sphere_contacts()) @ cases.sphere_applied()
    assert np.abs(res - h_o).max() > 0.05
