"""Computer algebra for Gorenstein subcategories of bound quiver algebras.

The engine instantiates an abelian category as finite-dimensional
representations of an acyclic bound quiver algebra over a prime field,
and decides membership in the one- and two-sided Gorenstein
subcategories with machine-checkable certificates.
"""

__version__ = "0.1.0"

from .exactla import PrimeField
from .quiver import AlgebraHandle, validate_algebra, path_basis
from .rep import (
    Representation,
    Morphism,
    standard_module,
    hom_space,
    hom_dim,
    morphism_parts,
    decompose,
    is_isomorphic,
    dualize,
)

__all__ = [
    "PrimeField",
    "AlgebraHandle",
    "validate_algebra",
    "path_basis",
    "Representation",
    "Morphism",
    "standard_module",
    "hom_space",
    "hom_dim",
    "morphism_parts",
    "decompose",
    "is_isomorphic",
    "dualize",
    "__version__",
]
