"""fincat: a finite-category computation engine and verification CLI.

Computes coslice and comma constructions over finite carriers, decides
epi/regular-epi classifications, and audits regularity conditions by
exhaustive universal-property checking at explicit bounds.
"""

__version__ = "0.1.0"

from .errors import BoundError, ValidationError
from .finset import FinFn, FinRel, FinSet, Partition
from .order import FinPoset, FinPreorder, MonotoneMap

__all__ = [
    "__version__",
    "BoundError",
    "ValidationError",
    "FinSet",
    "FinFn",
    "FinRel",
    "Partition",
    "FinPreorder",
    "FinPoset",
    "MonotoneMap",
]
