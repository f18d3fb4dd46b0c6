"""Exception hierarchy.

Errors deriving from :class:`InputError` describe a caller problem (bad
matrices, bad specs) and map to exit code 2 in the CLI. Everything else is
a numerical or internal failure.
"""


class CspairError(Exception):
    """Base class for all package errors."""


class InputError(CspairError):
    """The input does not describe a valid problem instance."""


class InvalidMatrix(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class OddDimension(InputError):
    pass


class NotAComplexStructure(InputError):
    """``J @ J + I`` is too far from zero.

    ``which`` names the offending matrix (``"J1"`` or ``"J2"``) and
    ``residual`` the measured norm.
    """

    def __init__(self, which, residual, bound):
        super().__init__(
            f"{which} is not a complex structure: |{which}^2 + I| = "
            f"{residual:.3e} > {bound:.3e}"
        )
        self.which = which
        self.residual = residual
        self.bound = bound


class ZeroRoot(InputError):
    pass


class UnpairedFactor(InputError):
    """A spectral factor lacks its reciprocal partner (or multiplicities differ)."""


class InvalidSpec(InputError):
    pass


class NotQuaternionCase(InputError):
    pass


class SingularMatrix(CspairError):
    pass


class DecompositionFailure(CspairError):
    """An internal consistency check failed, usually a tolerance breakdown."""


class CondBoundUnreachable(CspairError):
    pass


class IllConditionedBasis(UserWarning):
    pass
