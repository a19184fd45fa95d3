"""Exception hierarchy shared by all epi_lab modules."""


class EpiLabError(Exception):
    """Base class for every error raised by epi_lab."""


class DomainError(EpiLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonSmoothPointError(DomainError):
    """A derivative was requested at a point where the density is not smooth."""


class NotPSDError(DomainError):
    """A matrix that must be positive (semi)definite is not."""


class UnsupportedOperationError(EpiLabError, TypeError):
    """The operation is not defined for this density family."""


class ConfigurationError(EpiLabError):
    """The quadrature configuration cannot represent the requested computation."""


class SingularMapError(EpiLabError, ArithmeticError):
    """A transport map has a vanishing or undefined derivative."""


class DegenerateError(EpiLabError):
    """The input makes the requested quantity ill-defined (zero density, zero distance)."""


class HypothesisError(EpiLabError):
    """A density fails the hypothesis of the inequality being checked."""


class ParseError(EpiLabError, ValueError):
    """Malformed density specification text.

    Attributes
    ----------
    position : int
        Zero-based character offset where parsing failed.
    """

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} (at position {position} in {text!r})")
