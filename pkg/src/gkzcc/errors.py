"""Exception hierarchy shared by every module of the engine."""


class GKZError(Exception):
    """Base class for all engine errors."""


class NotASublattice(GKZError):
    pass


class InfiniteIndex(GKZError):
    pass


class NotPointed(GKZError):
    """The cone over the columns contains a line (or a zero column)."""


class HypothesisFailure(GKZError):
    """The matrix violates a standing hypothesis (pointed cone, ZA = Z^d)."""


class UnboundedPolytope(GKZError):
    pass


class OverlapUnresolved(GKZError):
    pass


class InvalidWeight(GKZError):
    pass


class DegreeOverflow(GKZError):
    """An infinitesimal product exceeded the configured degree bound."""


class FaceNotInUmbrella(GKZError):
    pass


class NotAFace(GKZError):
    pass


class BoundInsufficient(GKZError):
    """A user-lowered search bound could not certify a negative answer."""


class UnsupportedConfiguration(GKZError):
    """The ranking data falls outside the closed-form cases."""


class NotSimplicial(GKZError):
    pass


class NotConvexFiltration(GKZError):
    pass


class InvariantViolation(GKZError):
    """An internal consistency check failed; this indicates a bug."""
