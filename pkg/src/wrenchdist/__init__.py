"""Manipulating and constraint wrench distributions for rigid bodies."""

from .decomposition import (
    ConstraintSystem,
    Decomposition,
    constraint_matrices,
    decompose,
    desired_accelerations,
    uk_constraint_wrenches,
)
from .equivalence import (
    EquivalenceSystem,
    MassSolution,
    TorqueShare,
    VirtualEquivalence,
    assign_torque_share,
    build_system,
    check_equivalence,
    induced_inertia,
    scale_equivalence,
    solution_dimension,
    solve_masses,
    virtual_equivalence,
)
from .errors import *  # noqa: F401,F403
from .model import (
    PLANAR,
    SPATIAL,
    TRANSLATIONAL2,
    TRANSLATIONAL3,
    Contact,
    ContactModel,
    ContactSet,
    Wrench,
    WrenchSpace,
    grasp_matrix,
    interaction_residuals,
    resultant,
)
from .nullspaces import (
    InternalState,
    NullSpaceModel,
    build_model,
    compose,
    constraint_basis,
    internal_state,
    manipulating_basis,
    particular_solution,
)
from .numerics import DEFAULT_TOL, Tolerance
from .synthesis import (
    body_acceleration,
    closed_form_applicable,
    closed_form_pinv,
    field_split,
    legacy_parametrized_pinv,
    parametrized_pinv,
    point_accelerations,
    synthesize,
    unweighted_pinv,
)

__version__ = "0.1.0"
