"""Exception hierarchy shared by all latproj modules."""

import numpy as np


class LatticeError(Exception):
    """Base class for latproj errors."""


class SingularMatrix(LatticeError, np.linalg.LinAlgError):
    """A pivot, diagonal entry or determinant fell below tolerance."""


class SingularSystem(SingularMatrix):
    """Generator rows are numerically dependent; no unique coordinates."""


class NotLatticeVector(LatticeError):
    """A vector that should lie in a lattice does not."""


class MembershipFailure(NotLatticeVector):
    """A constructed vector failed the numerical membership round-trip."""


class NotPrimitive(LatticeError):
    def __init__(self, gcd, msg=None):
        self.gcd = gcd
        super().__init__(msg or f"not primitive (gcd {gcd})")


class BadExtension(LatticeError):
    """The supplied completion does not give a unimodular matrix."""


class DimensionTooLarge(LatticeError):
    """Enumeration was asked for a lattice above the dimension cap."""
