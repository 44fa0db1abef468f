"""Characters of highest-weight modules over untwisted affine Lie algebras.

Exact root/weight combinatorics, Kazhdan-Lusztig data, truncated formal
characters, and floating-point evaluation of the resulting meromorphic
functions on the interior of the complexified Tits cone.
"""

__version__ = "0.1.0"

from .errors import (
    AffcharError,
    CriticalLevelError,
    CutoffError,
    DomainError,
    PathError,
)
from .rootsys import AffineRootSystem, Root, build_affine

__all__ = [
    "AffcharError",
    "AffineRootSystem",
    "CriticalLevelError",
    "CutoffError",
    "DomainError",
    "PathError",
    "Root",
    "build_affine",
    "__version__",
]
