"""The abelian category of Cartier modules over a finite algebra.

A Cartier module is a finite module M together with an A-linear
structure map kappa from the Frobenius pushforward of M back to M;
a Frobenius module carries the map in the other direction.  Morphisms
are A-linear maps whose square against the structure maps commutes.
Kernels and cokernels are computed on underlying modules and the
structure map is carried along by restriction respectively descent;
every induced structure map is revalidated, and a failure is a hard
error rather than a silent wrong answer.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import (
    AModule,
    AModuleMap,
    FiniteAlgebra,
    frobenius,
    frobenius_twist,
    hom_module_basis,
    hom_space_matrix,
    quotient_module,
    submodule_on_basis,
    zero_module,
)
from .linalg import (
    PrimeFieldMatrix,
    column_space_basis,
    is_invertible,
    kernel_basis,
    solve,
    vstack,
)


class CartierModule:
    """Pair (M, kappa) with kappa: F_*M -> M A-linear."""

    def __init__(self, module: AModule, kappa: PrimeFieldMatrix, check: bool = True):
        if kappa.rows != module.dim or kappa.cols != module.dim:
            raise ValueError(f"kappa must be {module.dim}x{module.dim}, got {kappa.rows}x{kappa.cols}")
        self.module = module
        self.kappa = kappa
        if check:
            self.revalidate()

    def revalidate(self) -> None:
        """Check kappa is A-linear out of the pushforward; error on violation."""
        twisted = frobenius_twist(self.module)
        for i in range(self.module.algebra.dim):
            if self.module.actions[i] @ self.kappa != self.kappa @ twisted.actions[i]:
                raise ValueError(
                    "kappa is not semilinear for basis element "
                    f"{self.module.algebra.labels[i]}"
                )

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.module.algebra

    @property
    def dim(self) -> int:
        return self.module.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CartierModule)
            and other.module == self.module
            and other.kappa == self.kappa
        )

    def __hash__(self) -> int:
        return hash((self.module, self.kappa))

    def __repr__(self) -> str:
        return f"CartierModule(dim={self.dim} over {self.algebra.name})"


class FrobeniusModule:
    """Pair (M, tau) with tau: M -> F_*M A-linear."""

    def __init__(self, module: AModule, tau: PrimeFieldMatrix, check: bool = True):
        if tau.rows != module.dim or tau.cols != module.dim:
            raise ValueError(f"tau must be {module.dim}x{module.dim}, got {tau.rows}x{tau.cols}")
        self.module = module
        self.tau = tau
        if check:
            self.revalidate()

    def revalidate(self) -> None:
        twisted = frobenius_twist(self.module)
        for i in range(self.module.algebra.dim):
            if twisted.actions[i] @ self.tau != self.tau @ self.module.actions[i]:
                raise ValueError(
                    "tau is not semilinear for basis element "
                    f"{self.module.algebra.labels[i]}"
                )

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.module.algebra

    @property
    def dim(self) -> int:
        return self.module.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FrobeniusModule)
            and other.module == self.module
            and other.tau == self.tau
        )

    def __repr__(self) -> str:
        return f"FrobeniusModule(dim={self.dim} over {self.algebra.name})"


class CartierMorphism:
    """A-linear map commuting with the structure maps."""

    def __init__(
        self,
        source: CartierModule,
        target: CartierModule,
        matrix: PrimeFieldMatrix,
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            self.revalidate()

    def revalidate(self) -> None:
        AModuleMap(self.source.module, self.target.module, self.matrix)
        # F_* does not change the matrix of a map, so the compatibility
        # square is a plain matrix identity.
        if self.matrix @ self.source.kappa != self.target.kappa @ self.matrix:
            raise ValueError("matrix does not commute with the structure maps")

    def compose(self, other: "CartierMorphism") -> "CartierMorphism":
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return CartierMorphism(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "CartierMorphism") -> "CartierMorphism":
        return CartierMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def is_isomorphism(self) -> bool:
        return is_invertible(self.matrix)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CartierMorphism)
            and other.source == self.source
            and other.target == self.target
            and other.matrix == self.matrix
        )

    def __repr__(self) -> str:
        return f"CartierMorphism({self.source!r} -> {self.target!r})"


def identity_morphism(m: CartierModule) -> CartierMorphism:
    return CartierMorphism(m, m, PrimeFieldMatrix.identity(m.algebra.field, m.dim), check=False)


def zero_morphism(source: CartierModule, target: CartierModule) -> CartierMorphism:
    return CartierMorphism(
        source, target, PrimeFieldMatrix.zeros(source.algebra.field, target.dim, source.dim), check=False
    )


def zero_cartier(algebra: FiniteAlgebra) -> CartierModule:
    return CartierModule(zero_module(algebra), PrimeFieldMatrix.zeros(algebra.field, 0, 0), check=False)


def cartier_structure_basis(module: AModule) -> list[PrimeFieldMatrix]:
    """Basis of the space of valid kappa matrices on the module."""
    # hom_module_basis is cached, so repeated sampling on one module is cheap
    return [f.matrix for f in hom_module_basis(frobenius_twist(module), module)]


def frobenius_structure_basis(module: AModule) -> list[PrimeFieldMatrix]:
    """Basis of the space of valid tau matrices on the module."""
    return [f.matrix for f in hom_module_basis(module, frobenius_twist(module))]


# -- Hom as an equalizer --------------------------------------------------------


def hom_cart_constraints(m: CartierModule, n: CartierModule) -> PrimeFieldMatrix:
    """Stacked linear system cutting out Hom_Cart inside all matrices n <- m."""
    if m.algebra != n.algebra:
        raise ValueError("Hom needs Cartier modules over the same algebra")
    field = m.algebra.field
    linear = hom_space_matrix(m.module, n.module)
    eye_m = PrimeFieldMatrix.identity(field, m.dim)
    eye_n = PrimeFieldMatrix.identity(field, n.dim)
    # kappa_n f - f kappa_m = 0 on row-major vectorizations; this is the
    # kernel-of-the-difference form of the equalizer describing Hom.
    compat = n.kappa.kronecker(eye_m) - eye_n.kronecker(m.kappa.transpose())
    return vstack([linear, compat])


def hom_cart_basis(m: CartierModule, n: CartierModule) -> list[CartierMorphism]:
    """F_p-basis of Hom_Cart(m, n)."""
    basis = kernel_basis(hom_cart_constraints(m, n))
    out = []
    for j in range(basis.cols):
        mat = basis.col(j).reshape(n.dim, m.dim)
        out.append(CartierMorphism(m, n, mat, check=False))
    return out


def hom_cart_dimension(m: CartierModule, n: CartierModule) -> int:
    return len(hom_cart_basis(m, n))


# -- kernels, cokernels, images -------------------------------------------------


def kernel(f: CartierMorphism) -> tuple[CartierModule, CartierMorphism]:
    """Kernel object with restricted kappa, plus its inclusion."""
    basis = kernel_basis(f.matrix)
    sub, inclusion = submodule_on_basis(f.source.module, basis)
    moved = f.source.kappa @ basis
    restricted = solve(basis, moved)
    if restricted is None:
        raise ValueError("structure map does not preserve the kernel")
    ker_obj = CartierModule(sub, restricted)
    return ker_obj, CartierMorphism(ker_obj, f.source, basis)


def image(f: CartierMorphism) -> tuple[CartierModule, CartierMorphism]:
    """Image object with restricted kappa, plus its inclusion into the target."""
    basis = column_space_basis(f.matrix)
    sub, inclusion = submodule_on_basis(f.target.module, basis)
    moved = f.target.kappa @ basis
    restricted = solve(basis, moved)
    if restricted is None:
        raise ValueError("structure map does not preserve the image")
    img_obj = CartierModule(sub, restricted)
    return img_obj, CartierMorphism(img_obj, f.target, basis)


def cokernel(f: CartierMorphism) -> tuple[CartierModule, CartierMorphism]:
    """Cokernel object with descended kappa, plus the projection onto it."""
    basis = column_space_basis(f.matrix)
    quot, projection, section = quotient_module(f.target.module, basis)
    descended = projection.matrix @ f.target.kappa @ section
    coker_obj = CartierModule(quot, descended)
    return coker_obj, CartierMorphism(f.target, coker_obj, projection.matrix)


def coimage(f: CartierMorphism) -> tuple[CartierModule, CartierMorphism]:
    """Coimage (source modulo kernel), plus the projection onto it."""
    basis = kernel_basis(f.matrix)
    quot, projection, section = quotient_module(f.source.module, basis)
    descended = projection.matrix @ f.source.kappa @ section
    coim_obj = CartierModule(quot, descended)
    return coim_obj, CartierMorphism(f.source, coim_obj, projection.matrix)


def coimage_image_comparison(f: CartierMorphism) -> CartierMorphism:
    """The canonical map coimage -> image; an isomorphism in an abelian category."""
    coim, proj = coimage(f)
    img, incl = image(f)
    # factor f through the projection: comparison . proj = corestriction of f
    corestricted = solve(incl.matrix, f.matrix)
    if corestricted is None:
        raise ValueError("map does not factor through its image")
    section = solve(proj.matrix, PrimeFieldMatrix.identity(f.source.algebra.field, coim.dim))
    if section is None:
        raise ValueError("coimage projection is not surjective")
    return CartierMorphism(coim, img, corestricted @ section)


# -- forgetful functor ----------------------------------------------------------


def forget(m: CartierModule) -> AModule:
    return m.module


def forget_map(f: CartierMorphism) -> AModuleMap:
    return AModuleMap(f.source.module, f.target.module, f.matrix, check=False)


# -- direct sums -----------------------------------------------------------------


def direct_sum_cartier(
    mods: Sequence[CartierModule],
) -> tuple[CartierModule, list[CartierMorphism], list[CartierMorphism]]:
    if not mods:
        raise ValueError("direct sum needs at least one summand")
    from .algebra import direct_sum_modules

    underlying, incs, projs = direct_sum_modules([m.module for m in mods])
    kappa = mods[0].kappa
    for m in mods[1:]:
        kappa = kappa.direct_sum(m.kappa)
    total = CartierModule(underlying, kappa, check=False)
    inclusions = [CartierMorphism(m, total, inc.matrix, check=False) for m, inc in zip(mods, incs)]
    projections = [CartierMorphism(total, m, pr.matrix, check=False) for m, pr in zip(mods, projs)]
    return total, inclusions, projections


# -- the adjoint swap between pullback-Cartier and Frobenius modules -------------


def frobenius_pullback(m: AModule) -> AModule:
    """Restriction of scalars along the inverse Frobenius; needs phi invertible."""
    phi = frobenius(m.algebra)
    inv = phi.inverse_matrix()
    actions = [m.action_of(inv @ m.algebra.basis_element(i)) for i in range(m.algebra.dim)]
    return AModule(m.algebra, actions, check=False)


class PullbackCartierModule:
    """Pair (M, kappa) with kappa A-linear out of the inverse-Frobenius twist.

    This is the Cartier-module notion for the pullback functor; it only
    exists over algebras whose Frobenius is invertible (finite products
    of finite fields).
    """

    def __init__(self, module: AModule, kappa: PrimeFieldMatrix, check: bool = True):
        if not frobenius(module.algebra).is_invertible():
            raise ValueError("pullback Cartier modules need an invertible Frobenius")
        if kappa.rows != module.dim or kappa.cols != module.dim:
            raise ValueError("kappa has the wrong shape")
        self.module = module
        self.kappa = kappa
        if check:
            self.revalidate()

    def revalidate(self) -> None:
        pulled = frobenius_pullback(self.module)
        for i in range(self.module.algebra.dim):
            if self.module.actions[i] @ self.kappa != self.kappa @ pulled.actions[i]:
                raise ValueError(
                    "kappa is not semilinear (pullback convention) for "
                    f"{self.module.algebra.labels[i]}"
                )

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.module.algebra

    @property
    def dim(self) -> int:
        return self.module.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PullbackCartierModule)
            and other.module == self.module
            and other.kappa == self.kappa
        )

    def __repr__(self) -> str:
        return f"PullbackCartierModule(dim={self.dim} over {self.algebra.name})"


def pullback_structure_basis(module: AModule) -> list[PrimeFieldMatrix]:
    return [f.matrix for f in hom_module_basis(frobenius_pullback(module), module)]


def adjoint_swap(m: PullbackCartierModule) -> FrobeniusModule:
    """Transpose a pullback-Cartier structure across the adjunction.

    With phi invertible the pullback and pushforward are mutually
    inverse restrictions of scalars and the unit and counit are
    identities, so the transpose keeps the matrix and changes only
    which semilinearity it satisfies.
    """
    return FrobeniusModule(m.module, m.kappa)


def adjoint_swap_inverse(m: FrobeniusModule) -> PullbackCartierModule:
    return PullbackCartierModule(m.module, m.tau)


def is_frobenius_morphism(source: FrobeniusModule, target: FrobeniusModule, matrix: PrimeFieldMatrix) -> bool:
    try:
        AModuleMap(source.module, target.module, matrix)
    except ValueError:
        return False
    return matrix @ source.tau == target.tau @ matrix


def is_pullback_cartier_morphism(
    source: PullbackCartierModule, target: PullbackCartierModule, matrix: PrimeFieldMatrix
) -> bool:
    try:
        AModuleMap(source.module, target.module, matrix)
    except ValueError:
        return False
    return matrix @ source.kappa == target.kappa @ matrix
