"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class
so the command line driver can map them to exit codes without string
matching.
"""


class TorusDeformError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------------------
# scalar field / critical point errors


class DegenerateField(TorusDeformError):
    """The field is constant (no term with a nonzero frequency pair)."""


class NotMorse(TorusDeformError):
    """A critical point is degenerate or critical points are not isolated."""


class ToleranceAmbiguity(TorusDeformError):
    """A candidate symmetry's deviation falls in the undecidable band
    between tol and 2*tol."""


# ---------------------------------------------------------------------------
# level-graph (Reeb) errors


class ResolutionTooCoarse(TorusDeformError):
    """Two distinct level-set components cannot be separated at the
    requested grid resolution."""


class InconsistentSweep(TorusDeformError):
    """Level sweep bookkeeping failed an internal consistency check
    (Euler count, endpoint degrees, or slab adjacency)."""


class NotACylinder(TorusDeformError):
    """A region handed to the cylinder decomposition is not an annulus
    with two boundary curves."""


class NoSpecialVertex(TorusDeformError):
    """No vertex (or more than one) has all complement regions open disks."""


class OrbitMismatch(TorusDeformError):
    """Disk regions do not fall into free translation orbits of the
    expected size."""


# ---------------------------------------------------------------------------
# group expression errors


class ShapeMismatch(TorusDeformError):
    """An element literal does not match the shape of the expression it
    is used with."""


class UnassignedAtom(TorusDeformError):
    """An operation needed a concrete group law for a symbolic atom."""


class WindowTooSmall(TorusDeformError):
    """An enumeration window was too small to decide a property."""


class InfiniteSubgroup(TorusDeformError):
    """Generators do not span a finite subgroup of (Q/Z)^2."""


# ---------------------------------------------------------------------------
# diagram construction errors


class IncompatibleLeaves(TorusDeformError):
    """A leaf triple does not form a short exact sequence D -> S -> G."""


class NonCentralGarside(TorusDeformError):
    """The distinguished quotient generator is not central where it must be."""


class NonPrimitiveGenerator(TorusDeformError):
    """A lattice vector expected to be primitive has content > 1."""
