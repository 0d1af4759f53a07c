"""Exact Poisson structures, Pfaffians and Frobenius splittings in characteristic p."""

from .errors import *  # noqa: F401,F403
from .exact import Fp, PrimeFieldScalar, RationalScalar, check_prime, inverse, reduce_mod_p
from .poly import Poly, parse_poly, format_poly
from .polyvec import (
    PolyVector,
    TorusWeightData,
    divided_power,
    evaluate_multi,
    generating_field,
    hamiltonian,
    rank,
    rank_at_point,
    schouten,
    wedge,
)

__version__ = "0.1.0"
