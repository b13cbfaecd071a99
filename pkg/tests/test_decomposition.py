import numpy as np
import pytest

from conftest import random_equivalence, random_problem
from wrenchdist import cases
from wrenchdist.decomposition import (
    centripetal,
    constraint_matrices,
    decompose,
    desired_accelerations,
    uk_constraint_wrenches,
)
from wrenchdist.equivalence import TorqueShare, build_system, virtual_equivalence
from wrenchdist.errors import SingularMass, TooFewContacts
from wrenchdist.model import ContactSet, grasp_matrix, moment_arm
from wrenchdist.numerics import skew
from wrenchdist.synthesis import synthesize


def _sphere_problem(beta):
    cs = cases.sphere_contacts()
    sys = build_system(cs, 4.0)
    return cs, sys, cases.sphere_applied(), TorqueShare(beta)


def test_two_contact_pattern_at_rest():
    r1, r2 = np.array([1.0, 0, 0]), np.array([0, 2.0, 0])
    cs = ContactSet.from_points("spatial", [r1, r2])
    sc = constraint_matrices(cs)
    I, O = np.eye(3), np.zeros((3, 3))
    expected = np.block([[-I, skew(r2 - r1), I, O], [O, -I, O, I]])
    assert np.allclose(sc.A, expected)
    assert np.array_equal(sc.b, np.zeros(6))


def test_too_few_contacts():
    with pytest.raises(TooFewContacts):
        constraint_matrices(ContactSet.from_points("spatial", [[0, 0, 0]]))


def _rigid_stack(cs, lin, ang, omega):
    out_f, out_t = [], []
    for c in cs.contacts:
        out_f.append(lin + moment_arm(cs.space, c.r).T @ ang + centripetal(cs.space, omega, c.r))
        out_t.append(ang)
    return cs.stack(out_f, out_t)


@pytest.mark.parametrize("models", [None, ["force", "wrench", "force", "wrench"]])
def test_rigid_accelerations_satisfy_constraints(rng, models):
    for _ in range(10):
        cs = ContactSet.from_points("spatial", rng.normal(size=(4, 3)), models)
        omega = rng.normal(size=3)
        x = _rigid_stack(cs, rng.normal(size=3), rng.normal(size=3), omega)
        sc = constraint_matrices(cs, omega)
        assert np.abs(sc.A @ x - sc.b).max() < 1e-10


def test_spinning_triangle_b_rows():
    cs = ContactSet.from_points("planar", cases.triangle_contacts().points[:3])
    w = 1.7
    sc = constraint_matrices(cs, [w])
    r = cs.points
    for k, j in enumerate((1, 2)):
        rows = sc.b[3 * k:3 * k + 2]
        assert np.allclose(rows, -w ** 2 * (r[j] - r[0]))


def test_uk_matches_decompose_sphere():
    cs, sys, h, share = _sphere_problem(0.4)
    ve, _ = virtual_equivalence(cs, sys, share)
    dec = decompose(h, cs, sys, ve=ve)
    sc = constraint_matrices(cs, None, ve)
    uk = uk_constraint_wrenches(sc, desired_accelerations(h, cs, ve))
    assert np.abs(uk - dec.h_c).max() < 1e-9


def test_uk_independent_of_reference_contact():
    cs, sys, h, share = _sphere_problem(0.7)
    ve, _ = virtual_equivalence(cs, sys, share)
    xdd = desired_accelerations(h, cs, ve)
    out = [uk_constraint_wrenches(constraint_matrices(cs, [0.3, -0.2, 0.5], ve, k), xdd)
           for k in range(cs.n)]
    for o in out[1:]:
        assert np.allclose(o, out[0], atol=1e-10)


def test_uk_general_constraints_for_force_contacts(rng):
    for _ in range(10):
        cs, sys, m, h = random_problem(rng, 5, models=["force"] * 5)
        ve, _ = virtual_equivalence(cs, sys, m_star=m)
        dec = decompose(h, cs, sys, ve=ve)
        sc = constraint_matrices(cs, None, ve)
        uk = uk_constraint_wrenches(sc, desired_accelerations(h, cs, ve))
        assert np.abs(uk - dec.h_c).max() < 1e-9


def test_zero_inertia_slots_are_dropped():
    cs, sys, h, _ = _sphere_problem(0.0)
    ve, _ = virtual_equivalence(cs, sys, TorqueShare(0.0))
    sc = constraint_matrices(cs, None, ve)
    assert len(sc.index) == 12
    assert all(cs.slots[i].force.start <= k < cs.slots[i].force.stop
               for i, k in zip(np.repeat(range(4), 3), sc.index))
    # the sphere applied set has torques on those dropped slots
    with pytest.raises(SingularMass):
        desired_accelerations(h, cs, ve)
    # without torque loads the reduced state works and agrees
    h2 = h.copy()
    for s in cs.slots:
        h2[s.torque] = 0
    dec = decompose(h2, cs, sys, ve=ve)
    uk = uk_constraint_wrenches(sc, desired_accelerations(h2, cs, ve))
    assert np.abs(uk - dec.h_c).max() < 1e-9


def test_massless_force_slot_is_singular():
    cs = cases.point_mass_contacts()
    ve, _ = virtual_equivalence(cs, build_system(cs, 3.0), m_star=[2.25, 0.75, 0])
    with pytest.raises(SingularMass):
        constraint_matrices(cs, None, ve)


def test_decompose_invariants(rng):
    for _ in range(10):
        cs, sys, m, h = random_problem(rng, 5)
        ve = random_equivalence(rng, cs, sys, m)
        dec = decompose(h, cs, sys, ve=ve)
        G = grasp_matrix(cs)
        assert np.array_equal(dec.h_c, dec.h_m - h)
        assert np.allclose(G @ dec.h_m, dec.h_o.vector, atol=1e-9)
        assert np.abs(G @ dec.h_c).max() < 1e-9


def test_fixed_point():
    cs, sys, h, share = _sphere_problem(0.3)
    ve, _ = virtual_equivalence(cs, sys, share)
    h_m = synthesize(grasp_matrix(cs) @ h, cs, ve)
    dec = decompose(h_m, cs, sys, ve=ve)
    assert np.abs(dec.h_c).max() < 1e-12
    assert np.abs(dec.lambda_c.lambda_c).max() < 1e-12


def test_constraint_wrench_sign():
    # constraint wrenches are added to the applied ones: h_m = h + h_c.
    # The opposite convention h = h_m + h_c gives the negated vector.
    cs, sys, h, share = _sphere_problem(0.0)
    dec = decompose(h, cs, sys, share)
    assert np.allclose(h + dec.h_c, dec.h_m)
    other = h - dec.h_m
    assert np.allclose(other, -dec.h_c)
    ref = np.ravel(cases.SPHERE["forces_only_h_c"])
    assert np.abs(dec.h_c - ref).max() < 2e-3
    assert np.abs(other - ref).max() > 0.5
