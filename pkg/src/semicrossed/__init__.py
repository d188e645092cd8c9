"""Recurrence structure of commuting Z_+^d actions and radical membership in
the associated semicrossed-product series algebra, computed exactly."""

from .algebra import Fn, Series, fourier_coefficient, multiply, power, spectral_radius_bracket
from .catalog import emit_example, list_examples, load_example
from .dynamics import Region, centre_peel, closure, is_J_recurrent, recurrent_region, wandering_region
from .radical import (
    index_family,
    lambda_mu,
    radical_oracle,
    radical_oracle_monomial,
    semisimplicity_decide,
    square_zero_check,
    witness_build,
    witness_verify,
)
from .scenario import parse
from .space import MapSystem, Point, apply, preimage, validate_system

__version__ = "0.1.0"

__all__ = [
    "Fn", "Series", "fourier_coefficient", "multiply", "power", "spectral_radius_bracket",
    "emit_example", "list_examples", "load_example",
    "Region", "centre_peel", "closure", "is_J_recurrent", "recurrent_region", "wandering_region",
    "index_family", "lambda_mu", "radical_oracle", "radical_oracle_monomial", "semisimplicity_decide",
    "square_zero_check", "witness_build", "witness_verify",
    "parse", "MapSystem", "Point", "apply", "preimage", "validate_system",
]
