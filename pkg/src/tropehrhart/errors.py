"""Exception types shared across the package.

Validation errors (bad input data: malformed fans, non-Bergman diagram rows,
inconsistent support functions) are kept separate from resource errors
(dimension caps, boxes too small) so the command line front-end can map them
to distinct exit codes.
"""


class TropehrhartError(Exception):
    """Base class for all package errors."""


class ValidationError(TropehrhartError):
    """Input data violates a structural invariant."""


class UnsupportedDimensionError(TropehrhartError):
    """Ambient dimension exceeds the supported cap for this operation."""


class UnboundedPolyhedronError(TropehrhartError):
    """A bounded polyhedron was required."""


class EmptyPolyhedronError(TropehrhartError):
    """A nonempty polyhedron was required."""


class NotInSupportError(TropehrhartError):
    """Query point lies outside the support of the fan."""


class NotPiecewiseLinearError(ValidationError):
    """Ray values do not extend to a linear function on some cone."""


class InvalidSupportFunctionError(ValidationError):
    """Branch multisets of a multi-valued support function disagree on a shared face."""


class BoxTooSmallError(TropehrhartError):
    """A lattice sum box has nonzero values on its margin shell."""


class UnsupportedOperandError(TropehrhartError):
    """Operation received a chain piece it cannot handle (e.g. unbounded)."""


class MatroidAxiomError(ValidationError):
    """Proposed basis family violates the exchange axiom."""


class BundleValidationError(ValidationError):
    """Diagram does not define a tropical vector bundle on the given fan."""


class RowNotInBergmanError(BundleValidationError):
    """Carries the 1-based row number and the offending non-flat level set."""

    def __init__(self, row_number, row, level_set):
        self.row_number = row_number
        self.row = row
        self.level_set = level_set
        super().__init__(
            f"diagram row {row_number} is not in the lifted Bergman fan: "
            f"level set {sorted(level_set)} is not a flat"
        )


class NoCommonApartmentError(BundleValidationError):
    def __init__(self, cone_rays):
        self.cone_rays = cone_rays
        super().__init__(
            f"rows of cone with rays {sorted(cone_rays)} lie in no common apartment"
        )


class InvalidBoundError(TropehrhartError):
    """Twisting function is too small for the bundle's filtrations."""


class InterpolationFailureError(TropehrhartError):
    """Interpolated polynomial failed its off-grid consistency check."""


class UnsupportedConeError(TropehrhartError):
    """Operation needs a maximal smooth cone."""
