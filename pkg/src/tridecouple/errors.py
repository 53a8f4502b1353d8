class TriDecoupleError(Exception):
    """Base class for every error raised by this package."""


class MalformedPolynomial(TriDecoupleError, ValueError):
    pass


class MalformedInput(TriDecoupleError, ValueError):
    """A tensor document or argument that cannot be interpreted."""


class DimensionMismatch(TriDecoupleError, ValueError):
    pass


class NotOrthogonal(TriDecoupleError, ValueError):
    pass


class DomainExcluded(TriDecoupleError, ArithmeticError):
    """Raised where H2 = 10*J2, on which the partial-test invariants are undefined."""


class DegenerateEigenvalues(TriDecoupleError):
    """A covariant matrix has a repeated eigenvalue, so eigenvectors are not determined."""


class NotDecoupleable(TriDecoupleError):
    pass


class ZeroTensor(TriDecoupleError, ValueError):
    pass


class Unsolvable(TriDecoupleError):
    """No real canonical-form tensor matches the extended invariants.

    ``condition`` names the violated requirement, one of ``"q1<0"``,
    ``"q2<0"``, ``"degree8<0"`` or ``"q2=0 branch"``.
    """

    def __init__(self, condition, detail=""):
        self.condition = condition
        super().__init__(f"{condition}{': ' + detail if detail else ''}")


class NoCandidateMatches(TriDecoupleError):
    """None of the 2**n eigenvector-sign candidates reproduces the target."""
