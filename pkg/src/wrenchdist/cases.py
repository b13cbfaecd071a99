"""
Reference problems and their expected values.

Tables hold values rounded to three decimals, so comparisons against
them use a 2e-3 absolute tolerance. Values marked "derived" were worked
out by hand for the stated setup.
"""

import json
from importlib.resources import files

import numpy as np

from .model import ContactModel, ContactSet

REFERENCE_TOL = 2e-3


def data_path(name):
    return files("wrenchdist") / "data" / f"{name}.json"


def load_data(name):
    """Parsed JSON from the package data directory."""
    return json.loads(data_path(name).read_text())


# -- unit sphere, four full-wrench contacts ---------------------------------

# contact directions as (azimuth, elevation) in degrees; the cartesian
# points shipped in the data files were computed from these once
SPHERE_ANGLES = ((0, 65), (-60, -25), (65, -45), (180, 0))
SPHERE_MASS_TOTAL = 4.0


def sphere_contacts(models=None):
    d = load_data("sphere_decompose")
    return ContactSet.from_points("spatial", d["points"], models)


def sphere_applied():
    return np.concatenate(load_data("sphere_decompose")["applied"])


SPHERE = {
    "resultant": [1.250, 1, 3, -0.208, 1.957, 1.846],
    "m_star": [1.123, 0.790, 0.967, 1.121],
    "J_star_o": [[2.430, 0.096, -0.074],
                 [0.096, 3.117, 0.176],
                 [-0.074, 0.176, 2.454]],
    "acceleration": [0.313, 0.250, 0.750, -0.087, 0.591, 0.707],
    # forces only: manipulating forces (torques are zero)
    "forces_only_h_m": [[0.952, 0.705, 0.562, 0, 0, 0],
                        [0.488, 0.421, 0.435, 0, 0, 0],
                        [-0.540, 0.387, 0.501, 0, 0, 0],
                        [0.350, -0.513, 1.503, 0, 0, 0]],
    "forces_only_h_c": [[-0.048, 0.205, -0.438, 0, -0.500, -0.500],
                        [0.488, 0.421, -0.565, -1.000, 0, 0],
                        [-0.290, -0.364, 0.501, 0, 0.500, -0.500],
                        [-0.150, -0.263, 0.503, 0.500, -0.750, 0]],
    # whole resultant torque shared equally as pure torques
    "equal_torque_h_m": [[0.351, 0.281, 0.842, -0.052, 0.489, 0.462],
                         [0.247, 0.197, 0.592, -0.052, 0.489, 0.462],
                         [0.302, 0.242, 0.725, -0.052, 0.489, 0.462],
                         [0.350, 0.280, 0.841, -0.052, 0.489, 0.462]],
    "equal_torque_h_c": [[-0.649, -0.219, -0.158, -0.052, -0.011, -0.039],
                         [0.247, 0.197, -0.408, -1.052, 0.489, 0.461],
                         [0.552, -0.508, 0.725, -0.052, 0.989, -0.039],
                         [-0.150, 0.530, -0.159, 0.448, -0.261, 0.461]],
    # inverse inertia on the wrong side of the moment arm
    "legacy_h_m": [[1.145, 0.627, 0.463, 0, 0, 0],
                   [0.434, 0.395, 0.351, 0, 0, 0],
                   [-0.736, 0.418, 0.398, 0, 0, 0],
                   [0.408, -0.439, 1.789, 0, 0, 0]],
    "legacy_resultant": [1.250, 1, 3, -0.126, 2.690, 1.820],
    # unweighted pseudo-inverse of the force-only grasp matrix
    "equilibrating_forces": [[0.969, 0.609, 0.478],
                             [0.555, 0.484, 0.542],
                             [-0.602, 0.350, 0.496],
                             [0.328, -0.443, 1.484]],
    # forces from a helicoidal-field fit, and the resultant they produce
    "helicoidal_fit_forces": [[0.889, 0.667, 0.481],
                              [0.600, 0.517, 0.563],
                              [-0.592, 0.370, 0.477],
                              [0.313, -0.459, 1.386]],
    "helicoidal_fit_resultant": [1.210, 1.095, 2.908, -0.260, 1.756, 1.935],
}


# -- planar equilateral triangle with a pure torque at the centroid -----------

TRIANGLE_ANGLES = (90.0, 210.0, 330.0)
TRIANGLE_RESULTANT = np.array([1.0, 2.0, -2.0])
TRIANGLE_MASS_TOTAL = 3.0


def triangle_contacts():
    pts = [[np.cos(np.radians(a)), np.sin(np.radians(a))] for a in TRIANGLE_ANGLES]
    pts.append([0.0, 0.0])
    models = [ContactModel.FORCE_ONLY] * 3 + [ContactModel.TORQUE_ONLY]
    return ContactSet.from_points("planar", pts, models)


TRIANGLE = {
    "m_star": [1, 1, 1, 0],
    # derived: J_f = sum m r^2 = 3; angular parts are J_o^-1 times the torque
    # produced by each family of manipulating loads
    "cases": {
        0.0: {"J_star_o": 3.0, "J_star_4": 0.0, "tau_m": 0.0,
              "x_f_angular": -2.0 / 3.0, "x_t_angular": 0.0},
        0.5: {"J_star_o": 6.0, "J_star_4": 3.0, "tau_m": -1.0,
              "x_f_angular": -1.0 / 6.0, "x_t_angular": -1.0 / 6.0},
        1.0: {"J_star_o": None, "J_star_4": None, "tau_m": -2.0,
              "x_f_angular": 0.0, "x_t_angular": 0.0},
    },
}


# -- three planar forces on a point mass -------------------------------------

POINT_MASS_TOTAL = 3.0
# only the direction of f_o matters for the bases; [2, 1] matches the
# stored constraint basis below
POINT_MASS_RESULTANT = np.array([2.0, 1.0])


def point_mass_contacts():
    return ContactSet.from_points("translational2", np.zeros((3, 2)))


POINT_MASS = {
    "d": 2,
    "m_star_min_norm": [1, 1, 1],
    "m_star_alternative": [2.25, 0.75, 0],
    "z1": [0.116, -0.231, -0.358, 0.716, 0.242, -0.485],
    "z2": [0.346, -0.693, -0.073, 0.146, -0.273, 0.546],
    # depends on applied forces that are not recorded here;
    # kept for documentation, not checked
    "lambda_c_documented": [3.220, 0.659],
}
