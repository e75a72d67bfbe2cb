"""Holonomy representations of flat manifolds, computed exactly.

Submodules:

* ``linalg``       Smith/Hermite normal forms and integer kernels
* ``groups``       finite groups by closure, classes, socle, Sylow
* ``characters``   Dixon-Burnside character tables mod a prime, Galois orbits, blocks
* ``lattices``     G-lattices and the homogeneity decision
* ``cohomology``   H^2(G, M), restriction and special classes
* ``crystal``      extensions, vector systems and torsion search
* ``kahler``       realification of complex affine data
* ``fixtures``     JSON fixture documents and the shipped catalog
* ``cli``          command-line entry point
"""

from .exceptions import (
    CapExceeded,
    FlatHoloError,
    InvariantViolation,
    ValidationError,
)
from .groups import FiniteGroup, GroupSpec, NAMED_GROUPS
from .lattices import GLattice, homogeneity_test
from .cohomology import h2, h2_cyclic, is_special
from .crystal import AffinePair, build_extension, extract_data, is_bieberbach, torsion_search

__version__ = "0.1.0"

__all__ = [
    "AffinePair",
    "CapExceeded",
    "FiniteGroup",
    "FlatHoloError",
    "GLattice",
    "GroupSpec",
    "InvariantViolation",
    "NAMED_GROUPS",
    "ValidationError",
    "build_extension",
    "extract_data",
    "h2",
    "h2_cyclic",
    "homogeneity_test",
    "is_bieberbach",
    "is_special",
    "torsion_search",
]
