"""Seeded random instances: modules, structure maps, morphisms, complexes.

Everything draws from a caller-supplied random.Random so runs are
reproducible from a printed seed.  Random modules are submodules or
quotients of small free modules, which covers cyclic and two-generated
behavior over every catalog algebra; structure maps and morphisms are
random combinations of a basis of the legal space, so constructed data
always satisfies its invariants.
"""

from __future__ import annotations

import random
from typing import Optional

import numpy as np

from .algebra import (
    AModule,
    AModuleMap,
    FiniteAlgebra,
    free_module,
    hom_module_basis,
    kernel_module,
    image_module,
    quotient_module,
    span_submodule,
    zero_module,
)
from .cartier import (
    CartierModule,
    CartierMorphism,
    cartier_structure_basis,
    hom_cart_basis,
    zero_cartier,
    zero_morphism,
)
from .complexes import (
    CARTIER,
    MODULE,
    BoundedComplex,
    _kernel,
    _make_map,
    _zero_object,
    concentrated,
)
from .linalg import PrimeFieldMatrix, solve


def random_matrix(field, rows: int, cols: int, rng: random.Random) -> PrimeFieldMatrix:
    entries = [[rng.randrange(field.p) for _ in range(cols)] for _ in range(rows)]
    return PrimeFieldMatrix(field, np.array(entries, dtype=np.int64).reshape(rows, cols))


_POOLS: dict = {}


def module_pool(
    algebra: FiniteAlgebra,
    seed: int,
    size: int = 48,
    max_dim: int = 4,
    min_dim: int = 0,
) -> tuple[AModule, ...]:
    """A reusable seeded pool of random modules.

    Drawing from a pool keeps the per-module caches (Hom spaces, twists,
    resolutions) hot across a long verification run without giving up
    reproducibility: the pool depends only on its key.
    """
    key = (algebra, seed, size, max_dim, min_dim)
    if key not in _POOLS:
        rng = random.Random(f"pool:{seed}:{algebra.name}:{size}:{max_dim}:{min_dim}")
        _POOLS[key] = tuple(
            random_amodule(algebra, rng, max_dim=max_dim, min_dim=min_dim) for _ in range(size)
        )
    return _POOLS[key]


def pooled_cartier_module(pool: tuple[AModule, ...], rng: random.Random) -> CartierModule:
    module = pool[rng.randrange(len(pool))]
    return CartierModule(module, random_kappa(module, rng))


def random_amodule(
    algebra: FiniteAlgebra,
    rng: random.Random,
    max_dim: int = 4,
    min_dim: int = 1,
) -> AModule:
    """A random submodule or quotient of a small free module."""
    for _ in range(128):
        k = rng.choice([1, 1, 2])
        free = free_module(algebra, k)
        n_vectors = rng.randrange(0, 3)
        vectors = random_matrix(algebra.field, free.dim, n_vectors, rng)
        sub, inclusion = span_submodule(free, vectors)
        if rng.random() < 0.5:
            candidate = sub
        else:
            candidate, _, _ = quotient_module(free, inclusion.matrix)
        if min_dim <= candidate.dim <= max_dim:
            return candidate
    if min_dim == 0:
        return zero_module(algebra)
    raise ValueError("failed to sample a module in the requested dimension range")


def random_combination(basis: list, rng: random.Random, p: int):
    coeffs = [rng.randrange(p) for _ in basis]
    return coeffs


def random_kappa(module: AModule, rng: random.Random) -> PrimeFieldMatrix:
    basis = cartier_structure_basis(module)
    acc = PrimeFieldMatrix.zeros(module.algebra.field, module.dim, module.dim)
    for b in basis:
        acc = acc + b.scale(rng.randrange(module.algebra.p))
    return acc


def random_cartier_module(
    algebra: FiniteAlgebra,
    rng: random.Random,
    max_dim: int = 4,
    min_dim: int = 1,
) -> CartierModule:
    module = random_amodule(algebra, rng, max_dim=max_dim, min_dim=min_dim)
    return CartierModule(module, random_kappa(module, rng))


def random_module_map(source: AModule, target: AModule, rng: random.Random) -> AModuleMap:
    basis = hom_module_basis(source, target)
    acc = PrimeFieldMatrix.zeros(source.algebra.field, target.dim, source.dim)
    for b in basis:
        acc = acc + b.matrix.scale(rng.randrange(source.algebra.p))
    return AModuleMap(source, target, acc, check=False)


def random_cartier_morphism(
    source: CartierModule, target: CartierModule, rng: random.Random
) -> CartierMorphism:
    basis = hom_cart_basis(source, target)
    if not basis:
        return zero_morphism(source, target)
    acc = PrimeFieldMatrix.zeros(source.algebra.field, target.dim, source.dim)
    for b in basis:
        acc = acc + b.matrix.scale(rng.randrange(source.algebra.p))
    return CartierMorphism(source, target, acc, check=False)


def random_short_exact_sequence(
    algebra: FiniteAlgebra, rng: random.Random, max_dim: int = 4
) -> tuple[AModule, AModule, AModule, AModuleMap, AModuleMap]:
    """0 -> K -> M -> I -> 0 built from a random map out of M."""
    m = random_amodule(algebra, rng, max_dim=max_dim)
    n = random_amodule(algebra, rng, max_dim=max_dim)
    f = random_module_map(m, n, rng)
    ker, inclusion = kernel_module(f)
    img, img_inclusion = image_module(f)
    corestricted = solve(img_inclusion.matrix, f.matrix)
    projection = AModuleMap(m, img, corestricted)
    return ker, m, img, inclusion, projection


def random_bounded_complex(
    algebra: FiniteAlgebra,
    rng: random.Random,
    context: str = MODULE,
    max_length: int = 4,
    max_dim: int = 3,
    lower_range: tuple[int, int] = (-2, 2),
    pool: Optional[tuple[AModule, ...]] = None,
) -> BoundedComplex:
    """Random bounded complex with honest d^2 = 0.

    Differentials are built top down: each one is a random map into the
    cycles of the previous one, composed with the inclusion.  With a
    pool, degreewise objects are drawn from it instead of being built
    fresh.
    """
    length = rng.randrange(1, max_length + 1)
    lower = rng.randrange(lower_range[0], lower_range[1] + 1)

    def draw_module() -> AModule:
        if pool is not None:
            return pool[rng.randrange(len(pool))]
        return random_amodule(algebra, rng, max_dim=max_dim, min_dim=0)

    if context == MODULE:
        objects = [draw_module() for _ in range(length)]
    else:
        objects = [
            CartierModule(m, random_kappa(m, rng)) for m in (draw_module() for _ in range(length))
        ]
    if length == 1:
        return BoundedComplex(context, lower, objects, [])
    diffs = []
    # the map leaving the lowest degree is unconstrained
    first = _random_arrow(objects[1], objects[0], context, rng)
    diffs.append(first)
    for k in range(2, length):
        cycles, inclusion = _kernel(context, diffs[-1])
        into_cycles = _random_arrow(objects[k], cycles, context, rng)
        composed = inclusion.matrix @ into_cycles.matrix
        diffs.append(_make_map(context, objects[k], objects[k - 1], composed, check=False))
    return BoundedComplex(context, lower, objects, diffs)


def _random_arrow(source, target, context: str, rng: random.Random):
    if context == MODULE:
        return random_module_map(source, target, rng)
    return random_cartier_morphism(source, target, rng)


def random_amodule_nonzero(algebra: FiniteAlgebra, rng: random.Random, max_dim: int = 4) -> AModule:
    return random_amodule(algebra, rng, max_dim=max_dim, min_dim=1)
