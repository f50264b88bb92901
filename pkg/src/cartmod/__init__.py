"""Exact homological algebra for Cartier and Frobenius modules.

The package works over finite-dimensional commutative F_p-algebras with
exact arithmetic throughout: modules with Frobenius-semilinear structure
maps, their abelian category operations, free covers with the associated
adjunction, bounded complexes with truncations, Ext computations checked
against independent oracles, and perverse truncations in the Artinian
case.
"""

from .linalg import PrimeField, PrimeFieldMatrix, kernel_basis, rref, solve
from .algebra import (
    AModule,
    AModuleMap,
    FiniteAlgebra,
    FrobeniusEndo,
    catalog,
    ext_module,
    free_resolution,
    frobenius,
    frobenius_twist,
    frobenius_twist_map,
    hom_module_basis,
)
from .cartier import (
    CartierModule,
    CartierMorphism,
    FrobeniusModule,
    PullbackCartierModule,
    adjoint_swap,
    adjoint_swap_inverse,
    cokernel,
    coimage,
    forget,
    forget_map,
    hom_cart_basis,
    image,
    kernel,
)
from .free_monad import (
    FreeCartier,
    FreeToFreeMap,
    FreeToModuleMap,
    adjunction_backward,
    adjunction_forward,
    counit,
    ext_cart,
    standard_presentation,
)
from .complexes import BoundedComplex, ComplexMap, cone, heart_check, homology, truncate_geq, truncate_leq
from .derived_checks import (
    LESReport,
    verify_adjoint_transport,
    verify_les,
    verify_monadicity_ingredients,
    verify_pi_commutation,
)
from .perverse import (
    Perversity,
    block_decomposition,
    check_fstar_perverse_texact,
    matlis_dual,
    matlis_dual_map,
    perverse_truncate,
    perverse_truncate_cartier,
)

__all__ = [
    "PrimeField",
    "PrimeFieldMatrix",
    "rref",
    "kernel_basis",
    "solve",
    "FiniteAlgebra",
    "FrobeniusEndo",
    "AModule",
    "AModuleMap",
    "catalog",
    "frobenius",
    "frobenius_twist",
    "frobenius_twist_map",
    "hom_module_basis",
    "free_resolution",
    "ext_module",
    "CartierModule",
    "FrobeniusModule",
    "PullbackCartierModule",
    "CartierMorphism",
    "hom_cart_basis",
    "kernel",
    "cokernel",
    "image",
    "coimage",
    "forget",
    "forget_map",
    "adjoint_swap",
    "adjoint_swap_inverse",
    "FreeCartier",
    "FreeToModuleMap",
    "FreeToFreeMap",
    "adjunction_forward",
    "adjunction_backward",
    "counit",
    "standard_presentation",
    "ext_cart",
    "BoundedComplex",
    "ComplexMap",
    "homology",
    "truncate_geq",
    "truncate_leq",
    "cone",
    "heart_check",
    "LESReport",
    "verify_les",
    "verify_monadicity_ingredients",
    "verify_pi_commutation",
    "verify_adjoint_transport",
    "Perversity",
    "block_decomposition",
    "matlis_dual",
    "matlis_dual_map",
    "perverse_truncate",
    "perverse_truncate_cartier",
    "check_fstar_perverse_texact",
]

__version__ = "0.1.0"
