"""Approximate geodesics in CAT(0) cube complexes given by posets with inconsistent pairs."""
from .complex import (
    Cell,
    initial_chain,
    make_point,
    minimal_cell,
    parse_point,
    star_coordinates,
)
from .driver import RunResult, distance, refine, run
from .errors import (
    Cat0CubeError,
    GapExceeded,
    NoCommonVertex,
    NotApplicable,
    NotInComplex,
    NotInStar,
    ParseError,
    PrecisionLoss,
    TooLarge,
    ValidationError,
)
from .orthant import GeodesicDesc, brute_force_geodesic, gtp_solve
from .pip import Ideal, Pip, enumerate_ideals, parse_pip, random_pip

__version__ = "0.1.0"
