import numpy as np
import pytest

from wrenchdist import ContactSet, TorqueShare, WrenchSpace, build_system, virtual_equivalence


# filled by test_acceptance.report, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_problem(rng, n=4, space="spatial", models=None):
    """
    Random contact set whose points are centred on the mass-weighted
    centroid of positive random masses, plus a random applied stack.
    Returns (cs, sys, m_star, h).
    """
    fd = WrenchSpace.from_kind(space).force_dim
    cs0 = ContactSet.from_points(space, np.zeros((n, fd)), models)
    m = rng.uniform(0.5, 2.0, n)
    fc = cs0.force_contacts
    p = rng.normal(size=(n, fd))
    w = np.zeros(n)
    w[fc] = m[fc]
    p -= (w[:, None] * p).sum(axis=0) / w.sum()
    m_star = w
    cs = ContactSet.from_points(space, p, models)
    sys = build_system(cs, float(m_star.sum()))
    h = rng.normal(size=cs.stack_dim)
    return cs, sys, m_star, h


def random_equivalence(rng, cs, sys, m_star, beta=None):
    if beta is None:
        beta = rng.uniform(0.05, 0.95)
    w = None
    if cs.torque_contacts:
        w = np.zeros(cs.n)
        w[cs.torque_contacts] = rng.uniform(0.2, 1.0, len(cs.torque_contacts))
    ve, _ = virtual_equivalence(cs, sys, TorqueShare(beta, w), m_star=m_star)
    return ve


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
