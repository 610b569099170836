"""Exception hierarchy shared by all modules."""


class Cat0CubeError(Exception):
    """Base class for every error raised by this package."""


class ParseError(Cat0CubeError):
    """Malformed input document."""


class ValidationError(Cat0CubeError):
    """Well-formed input that does not describe a valid poset with inconsistent pairs."""


class TooManyIdeals(Cat0CubeError):
    """Enumeration would exceed the caller's limit."""


class GeometryError(Cat0CubeError):
    """A point or pair of points does not fit the requested cell or star."""


class NotInComplex(GeometryError):
    pass


class NotInStar(GeometryError):
    pass


class NoCommonVertex(GeometryError):
    pass


class GapExceeded(GeometryError):
    """A midpoint query was issued between points farther apart than the oracle range."""


class IncompatibleSupport(Cat0CubeError):
    """Support of a local point is not a simplex of the link."""


class PrecisionLoss(Cat0CubeError):
    pass


class TooLarge(Cat0CubeError):
    """Instance exceeds what a brute-force or grid oracle is willing to handle."""


class NotApplicable(Cat0CubeError):
    pass


class LemmaViolated(Cat0CubeError):
    def __init__(self, check, n, index):
        super().__init__(f"check {check} failed for n={n} at index {index}")
        self.check = check
        self.n = n
        self.index = index
