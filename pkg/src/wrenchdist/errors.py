class WrenchError(Exception):
    """Base class for errors raised by wrenchdist."""


class DimensionMismatch(WrenchError, ValueError):
    pass


class ModelMismatch(WrenchError, ValueError):
    """An operation needs a contact model the contact set does not have."""


class Inconsistent(WrenchError):
    """A linear system has no solution within tolerance."""


class MissingInertiaTarget(WrenchError, ValueError):
    pass


class NoTorqueContacts(WrenchError, ValueError):
    pass


class EquivalenceConflict(WrenchError, ValueError):
    """A torque share cannot coexist with a pinned inertia target."""


class InfeasibleMasses(WrenchError):
    """Virtual masses came out negative."""


class SingularInertia(WrenchError):
    pass


class RankDeficient(WrenchError):
    pass


class SingularMass(WrenchError):
    pass


class TooFewContacts(WrenchError, ValueError):
    pass
