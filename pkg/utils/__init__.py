"""Utilities package for Algebroid Lifts."""
from utils.validators import (
    validate_dimension,
    validate_points,
    validate_tolerance,
    validate_steps,
    validate_seed,
    validate_suite_name,
)

__all__ = [
    "validate_dimension",
    "validate_points",
    "validate_tolerance",
    "validate_steps",
    "validate_seed",
    "validate_suite_name",
]
