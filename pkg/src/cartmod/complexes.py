"""Bounded chain complexes over module and Cartier contexts.

Complexes use homological indexing: differentials lower the degree by
one.  The same code drives both contexts; in the Cartier context every
kernel or cokernel taken along the way re-derives the structure map by
restriction or descent and revalidates it.  Because the underlying
linear algebra is shared and deterministic, applying the forgetful
functor degreewise commutes with every construction here on the nose,
which is what the t-exactness checks assert.
"""

from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np

from . import algebra as alg
from . import cartier as cart
from .algebra import AModule, AModuleMap, FiniteAlgebra
from .cartier import CartierModule, CartierMorphism
from .linalg import PrimeFieldMatrix, hstack, kernel_basis, rank, solve, vstack

ComplexObject = Union[AModule, CartierModule]
ComplexArrow = Union[AModuleMap, CartierMorphism]

MODULE = "module"
CARTIER = "cartier"


def _check_context(context: str) -> None:
    if context not in (MODULE, CARTIER):
        raise ValueError(f"unknown complex context {context!r}")


def _algebra_of(obj: ComplexObject) -> FiniteAlgebra:
    return obj.algebra


def _zero_object(algebra: FiniteAlgebra, context: str) -> ComplexObject:
    return alg.zero_module(algebra) if context == MODULE else cart.zero_cartier(algebra)


def _make_map(context: str, source: ComplexObject, target: ComplexObject, matrix: PrimeFieldMatrix, check: bool = True) -> ComplexArrow:
    if context == MODULE:
        return AModuleMap(source, target, matrix, check=check)
    return CartierMorphism(source, target, matrix, check=check)


def _zero_arrow(context: str, source: ComplexObject, target: ComplexObject) -> ComplexArrow:
    matrix = PrimeFieldMatrix.zeros(source.algebra.field, target.dim, source.dim)
    return _make_map(context, source, target, matrix, check=False)


def _kernel(context: str, f: ComplexArrow):
    if context == MODULE:
        return alg.kernel_module(f)
    return cart.kernel(f)


def _cokernel(context: str, f: ComplexArrow):
    if context == MODULE:
        return alg.cokernel_module(f)
    return cart.cokernel(f)


def _direct_sum(context: str, objs: Sequence[ComplexObject]):
    if context == MODULE:
        return alg.direct_sum_modules(objs)
    return cart.direct_sum_cartier(objs)


class BoundedComplex:
    """Chain complex supported in a finite degree interval [lower, upper]."""

    def __init__(
        self,
        context: str,
        lower: int,
        objects: Sequence[ComplexObject],
        differentials: Sequence[ComplexArrow],
        check: bool = True,
    ):
        _check_context(context)
        if not objects:
            raise ValueError("a bounded complex needs at least one object")
        if len(differentials) != len(objects) - 1:
            raise ValueError("need one differential per adjacent pair of degrees")
        self.context = context
        self.lower = lower
        self.upper = lower + len(objects) - 1
        self.objects = tuple(objects)
        self.differentials = tuple(differentials)
        self.algebra = _algebra_of(objects[0])
        if check:
            self._validate()

    def _validate(self) -> None:
        expected_obj = CartierModule if self.context == CARTIER else AModule
        expected_arrow = CartierMorphism if self.context == CARTIER else AModuleMap
        for obj in self.objects:
            if not isinstance(obj, expected_obj):
                raise ValueError(f"object of type {type(obj).__name__} in a {self.context} complex")
            if _algebra_of(obj) != self.algebra:
                raise ValueError("complex objects must share one algebra")
        for n in range(self.lower + 1, self.upper + 1):
            d = self.differentials[n - self.lower - 1]
            if not isinstance(d, expected_arrow):
                raise ValueError(f"differential of type {type(d).__name__} in a {self.context} complex")
            if d.source != self.objects[n - self.lower] or d.target != self.objects[n - self.lower - 1]:
                raise ValueError(f"differential at degree {n} has the wrong endpoints")
        for n in range(self.lower + 2, self.upper + 1):
            upper_d = self.differential(n)
            lower_d = self.differential(n - 1)
            if not (lower_d.matrix @ upper_d.matrix).is_zero():
                raise ValueError(f"differentials do not square to zero at degree {n - 1}")

    # -- access with zero padding ------------------------------------------------

    def object(self, n: int) -> ComplexObject:
        if self.lower <= n <= self.upper:
            return self.objects[n - self.lower]
        return _zero_object(self.algebra, self.context)

    def differential(self, n: int) -> ComplexArrow:
        """The map leaving degree n (into degree n-1), zero outside the support."""
        if self.lower + 1 <= n <= self.upper:
            return self.differentials[n - self.lower - 1]
        return _zero_arrow(self.context, self.object(n), self.object(n - 1))

    def degrees(self) -> range:
        return range(self.lower, self.upper + 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoundedComplex):
            return NotImplemented
        if other.context != self.context or other.algebra != self.algebra:
            return False
        lo = min(self.lower, other.lower)
        hi = max(self.upper, other.upper)
        for n in range(lo, hi + 1):
            if self.object(n) != other.object(n):
                return False
            if n > lo and self.differential(n).matrix != other.differential(n).matrix:
                return False
        return True

    def __repr__(self) -> str:
        dims = [obj.dim for obj in self.objects]
        return f"BoundedComplex({self.context}, degrees [{self.lower}, {self.upper}], dims {dims})"


def concentrated(obj: ComplexObject, degree: int, context: str) -> BoundedComplex:
    return BoundedComplex(context, degree, [obj], [])


def zero_complex(algebra: FiniteAlgebra, context: str, degree: int = 0) -> BoundedComplex:
    return BoundedComplex(context, degree, [_zero_object(algebra, context)], [])


class ComplexMap:
    """Chain map between bounded complexes in one context."""

    def __init__(
        self,
        source: BoundedComplex,
        target: BoundedComplex,
        components: dict[int, ComplexArrow],
        check: bool = True,
    ):
        if source.context != target.context:
            raise ValueError("chain map needs complexes in the same context")
        if source.algebra != target.algebra:
            raise ValueError("chain map needs complexes over one algebra")
        self.source = source
        self.target = target
        self.components = dict(components)
        if check:
            self._validate()

    def component(self, n: int) -> ComplexArrow:
        if n in self.components:
            return self.components[n]
        return _zero_arrow(self.source.context, self.source.object(n), self.target.object(n))

    def _validate(self) -> None:
        lo = min(self.source.lower, self.target.lower)
        hi = max(self.source.upper, self.target.upper)
        for n, comp in self.components.items():
            if comp.source != self.source.object(n) or comp.target != self.target.object(n):
                raise ValueError(f"component at degree {n} has the wrong endpoints")
        for n in range(lo + 1, hi + 1):
            lhs = self.component(n - 1).matrix @ self.source.differential(n).matrix
            rhs = self.target.differential(n).matrix @ self.component(n).matrix
            if lhs != rhs:
                raise ValueError(f"chain map square fails at degree {n}")

    def __repr__(self) -> str:
        return f"ComplexMap({self.source!r} -> {self.target!r})"


def identity_complex_map(c: BoundedComplex) -> ComplexMap:
    comps = {
        n: _make_map(c.context, c.object(n), c.object(n), PrimeFieldMatrix.identity(c.algebra.field, c.object(n).dim), check=False)
        for n in c.degrees()
    }
    return ComplexMap(c, c, comps, check=False)


# -- homology ----------------------------------------------------------------------


class HomologyData:
    """Homology at one degree with enough data to push classes around.

    cycles includes the kernel of the outgoing differential into the
    ambient object; class_projection sends cycle coordinates onto
    homology coordinates.
    """

    def __init__(self, obj: ComplexObject, cycles: PrimeFieldMatrix, class_projection: PrimeFieldMatrix):
        self.object = obj
        self.cycles = cycles
        self.class_projection = class_projection

    @property
    def dimension(self) -> int:
        return self.object.dim

    def class_of(self, vector: PrimeFieldMatrix) -> PrimeFieldMatrix:
        coords = solve(self.cycles, vector)
        if coords is None:
            raise ValueError("vector is not a cycle")
        return self.class_projection @ coords


def homology_data(c: BoundedComplex, n: int) -> HomologyData:
    ker_obj, inclusion = _kernel(c.context, c.differential(n))
    incoming = c.differential(n + 1)
    corestricted = solve(inclusion.matrix, incoming.matrix)
    if corestricted is None:
        raise ValueError("incoming differential does not land in the cycles")
    to_cycles = _make_map(c.context, c.object(n + 1), ker_obj, corestricted)
    h_obj, projection = _cokernel(c.context, to_cycles)
    return HomologyData(h_obj, inclusion.matrix, projection.matrix)


def homology(c: BoundedComplex, n: int) -> ComplexObject:
    """ker(d_n)/im(d_{n+1}), with the structure map induced in the Cartier context."""
    return homology_data(c, n).object


def homology_dimensions(c: BoundedComplex) -> dict[int, int]:
    return {n: homology(c, n).dim for n in c.degrees()}


def homology_map(f: ComplexMap, n: int) -> PrimeFieldMatrix:
    """Matrix of the induced map on degree-n homology."""
    src = homology_data(f.source, n)
    tgt = homology_data(f.target, n)
    moved = f.component(n).matrix @ src.cycles
    coords = solve(tgt.cycles, moved)
    if coords is None:
        raise ValueError("chain map does not preserve cycles")
    reps = solve(src.class_projection, PrimeFieldMatrix.identity(f.source.algebra.field, src.dimension))
    if reps is None:
        raise ValueError("homology presentation is not surjective")
    return tgt.class_projection @ coords @ reps


def is_quasi_isomorphism(f: ComplexMap) -> bool:
    lo = min(f.source.lower, f.target.lower)
    hi = max(f.source.upper, f.target.upper)
    for n in range(lo, hi + 1):
        src = homology_data(f.source, n)
        tgt = homology_data(f.target, n)
        if src.dimension != tgt.dimension:
            return False
        induced = homology_map(f, n)
        if rank(induced) != src.dimension:
            return False
    return True


# -- truncations -------------------------------------------------------------------


def truncate_geq(c: BoundedComplex, n: int) -> BoundedComplex:
    """Homology-preserving truncation keeping degrees >= n.

    Degree n is replaced by the cycles there; in the Cartier context the
    structure map restricts to the cycles and is revalidated.
    """
    return _truncate_geq_with_inclusion(c, n)[0]


def truncate_geq_inclusion(c: BoundedComplex, n: int) -> ComplexMap:
    return _truncate_geq_with_inclusion(c, n)[1]


def _truncate_geq_with_inclusion(c: BoundedComplex, n: int) -> tuple[BoundedComplex, ComplexMap]:
    if n > c.upper:
        trunc = zero_complex(c.algebra, c.context, n)
        return trunc, ComplexMap(trunc, c, {}, check=False)
    n_eff = max(n, c.lower)
    ker_obj, inclusion = _kernel(c.context, c.differential(n_eff))
    objects = [ker_obj] + [c.object(k) for k in range(n_eff + 1, c.upper + 1)]
    diffs: list[ComplexArrow] = []
    if n_eff + 1 <= c.upper:
        corestricted = solve(inclusion.matrix, c.differential(n_eff + 1).matrix)
        if corestricted is None:
            raise ValueError("differential does not land in the cycles")
        diffs.append(_make_map(c.context, c.object(n_eff + 1), ker_obj, corestricted))
        diffs.extend(c.differential(k) for k in range(n_eff + 2, c.upper + 1))
    trunc = BoundedComplex(c.context, n_eff, objects, diffs)
    comps: dict[int, ComplexArrow] = {n_eff: _make_map(c.context, ker_obj, c.object(n_eff), inclusion.matrix, check=False)}
    for k in range(n_eff + 1, c.upper + 1):
        comps[k] = _make_map(
            c.context, c.object(k), c.object(k), PrimeFieldMatrix.identity(c.algebra.field, c.object(k).dim), check=False
        )
    return trunc, ComplexMap(trunc, c, comps)


def truncate_leq(c: BoundedComplex, n: int) -> BoundedComplex:
    """Homology-preserving truncation keeping degrees <= n.

    Degree n is replaced by the cokernel of the incoming differential;
    the structure map descends in the Cartier context.
    """
    return _truncate_leq_with_projection(c, n)[0]


def truncate_leq_projection(c: BoundedComplex, n: int) -> ComplexMap:
    return _truncate_leq_with_projection(c, n)[1]


def _truncate_leq_with_projection(c: BoundedComplex, n: int) -> tuple[BoundedComplex, ComplexMap]:
    if n < c.lower:
        trunc = zero_complex(c.algebra, c.context, n)
        return trunc, ComplexMap(c, trunc, {}, check=False)
    n_eff = min(n, c.upper)
    quot_obj, projection = _cokernel(c.context, c.differential(n_eff + 1))
    objects = [c.object(k) for k in range(c.lower, n_eff)] + [quot_obj]
    diffs = [c.differential(k) for k in range(c.lower + 1, n_eff)]
    if n_eff > c.lower:
        section = solve(projection.matrix, PrimeFieldMatrix.identity(c.algebra.field, quot_obj.dim))
        if section is None:
            raise ValueError("cokernel projection is not surjective")
        descended = c.differential(n_eff).matrix @ section
        diffs.append(_make_map(c.context, quot_obj, c.object(n_eff - 1), descended))
    trunc = BoundedComplex(c.context, c.lower, objects, diffs)
    comps: dict[int, ComplexArrow] = {n_eff: _make_map(c.context, c.object(n_eff), quot_obj, projection.matrix, check=False)}
    for k in range(c.lower, n_eff):
        comps[k] = _make_map(
            c.context, c.object(k), c.object(k), PrimeFieldMatrix.identity(c.algebra.field, c.object(k).dim), check=False
        )
    return trunc, ComplexMap(c, trunc, comps)


class TruncationTriple:
    """The degreewise short exact triple around a truncation.

    sub is the homology-preserving truncation in degrees >= n, quotient
    the degreewise cokernel of its inclusion; the quotient carries the
    same homology as the <= n-1 truncation, realizing the truncation
    fiber sequence at chain level.
    """

    def __init__(self, c: BoundedComplex, n: int):
        self.complex = c
        self.degree = n
        self.sub, self.inclusion = _truncate_geq_with_inclusion(c, n)
        comps: dict[int, ComplexArrow] = {}
        objects = []
        projections = {}
        for k in range(c.lower, c.upper + 1):
            q_obj, q_proj = _cokernel(c.context, self.inclusion.component(k))
            objects.append(q_obj)
            projections[k] = q_proj
        diffs = []
        for k in range(c.lower + 1, c.upper + 1):
            q_src = objects[k - c.lower]
            q_tgt = objects[k - c.lower - 1]
            section = solve(projections[k].matrix, PrimeFieldMatrix.identity(c.algebra.field, q_src.dim))
            if section is None:
                raise ValueError("quotient projection is not surjective")
            descended = projections[k - 1].matrix @ c.differential(k).matrix @ section
            diffs.append(_make_map(c.context, q_src, q_tgt, descended))
        self.quotient = BoundedComplex(c.context, c.lower, objects, diffs)
        self.projection = ComplexMap(c, self.quotient, projections)

    def degreewise_exact(self) -> bool:
        c = self.complex
        for k in range(c.lower, c.upper + 1):
            inc = self.inclusion.component(k).matrix
            proj = self.projection.component(k).matrix
            if rank(inc) != inc.cols:
                return False
            if rank(proj) != proj.rows:
                return False
            if not (proj @ inc).is_zero():
                return False
            if rank(inc) + rank(proj) != c.object(k).dim:
                return False
        return True

    def quotient_matches_coconnective(self) -> bool:
        other = truncate_leq(self.complex, self.degree - 1)
        lo = min(self.quotient.lower, other.lower)
        hi = max(self.quotient.upper, other.upper)
        return all(homology(self.quotient, k).dim == homology(other, k).dim for k in range(lo, hi + 1))


def truncation_triple(c: BoundedComplex, n: int) -> TruncationTriple:
    return TruncationTriple(c, n)


# -- shift, direct sum, cone ---------------------------------------------------------


def shift(c: BoundedComplex, k: int) -> BoundedComplex:
    """Degree shift by k with the usual sign (-1)^k on differentials."""
    sign = -1 if k % 2 else 1
    objects = list(c.objects)
    diffs = [
        _make_map(c.context, d.source, d.target, d.matrix.scale(sign), check=False)
        for d in c.differentials
    ]
    return BoundedComplex(c.context, c.lower + k, objects, diffs, check=False)


def direct_sum_complexes(a: BoundedComplex, b: BoundedComplex) -> BoundedComplex:
    if a.context != b.context or a.algebra != b.algebra:
        raise ValueError("direct sum needs complexes of the same kind")
    lo = min(a.lower, b.lower)
    hi = max(a.upper, b.upper)
    objects = []
    diffs = []
    for n in range(lo, hi + 1):
        total, _, _ = _direct_sum(a.context, [a.object(n), b.object(n)])
        objects.append(total)
    for n in range(lo + 1, hi + 1):
        mat = a.differential(n).matrix.direct_sum(b.differential(n).matrix)
        diffs.append(_make_map(a.context, objects[n - lo], objects[n - lo - 1], mat))
    return BoundedComplex(a.context, lo, objects, diffs)


def cone(f: ComplexMap) -> BoundedComplex:
    """Mapping cone: degree n is source_{n-1} + target_n."""
    x, y = f.source, f.target
    context = x.context
    lo = min(y.lower, x.lower + 1)
    hi = max(y.upper, x.upper + 1)
    objects = []
    for n in range(lo, hi + 1):
        total, _, _ = _direct_sum(context, [x.object(n - 1), y.object(n)])
        objects.append(total)
    diffs = []
    for n in range(lo + 1, hi + 1):
        dx = x.differential(n - 1).matrix
        dy = y.differential(n).matrix
        fn = f.component(n - 1).matrix
        field = x.algebra.field
        top = hstack([-dx, PrimeFieldMatrix.zeros(field, dx.rows, dy.cols)])
        bottom = hstack([-fn, dy])
        mat = vstack([top, bottom])
        diffs.append(_make_map(context, objects[n - lo], objects[n - lo - 1], mat))
    return BoundedComplex(context, lo, objects, diffs)


# -- heart -------------------------------------------------------------------------


def heart_check(c: BoundedComplex) -> Optional[CartierModule]:
    """The degree-0 homology when all other homology vanishes, else None.

    Complexes whose homology sits entirely in the heart are exactly
    Cartier modules in the abelian sense.
    """
    if c.context != CARTIER:
        raise ValueError("heart_check expects a Cartier-context complex")
    for n in c.degrees():
        if n != 0 and homology(c, n).dim != 0:
            return None
    h = homology(c, 0)
    assert isinstance(h, CartierModule)
    return h


# -- forgetful functor, degreewise ---------------------------------------------------


def forget_complex(c: BoundedComplex) -> BoundedComplex:
    """Apply the forgetful functor degreewise to a Cartier complex."""
    if c.context != CARTIER:
        raise ValueError("forget_complex expects a Cartier-context complex")
    objects = [cart.forget(obj) for obj in c.objects]
    diffs = [cart.forget_map(d) for d in c.differentials]
    return BoundedComplex(MODULE, c.lower, objects, diffs, check=False)


def forget_complex_map(f: ComplexMap) -> ComplexMap:
    src = forget_complex(f.source)
    tgt = forget_complex(f.target)
    comps = {n: cart.forget_map(m) for n, m in f.components.items()}
    return ComplexMap(src, tgt, comps, check=False)


def twist_complex(c: BoundedComplex) -> BoundedComplex:
    """Apply the Frobenius pushforward degreewise to a module complex."""
    if c.context != MODULE:
        raise ValueError("twist_complex expects a module-context complex")
    objects = [alg.frobenius_twist(obj) for obj in c.objects]
    diffs = []
    for n in range(c.lower + 1, c.upper + 1):
        d = c.differential(n)
        diffs.append(AModuleMap(objects[n - c.lower], objects[n - c.lower - 1], d.matrix))
    return BoundedComplex(MODULE, c.lower, objects, diffs, check=False)


# -- chain map spaces -----------------------------------------------------------------


def chain_map_basis(x: BoundedComplex, y: BoundedComplex) -> list[ComplexMap]:
    """F_p-basis of the space of chain maps x -> y (no homotopies taken)."""
    if x.context != y.context or x.algebra != y.algebra:
        raise ValueError("chain maps need complexes of the same kind")
    context = x.context
    field = x.algebra.field
    lo = min(x.lower, y.lower)
    hi = max(x.upper, y.upper)
    degrees = list(range(lo, hi + 1))
    sizes = {n: y.object(n).dim * x.object(n).dim for n in degrees}
    offsets = {}
    total = 0
    for n in degrees:
        offsets[n] = total
        total += sizes[n]

    rows: list[np.ndarray] = []

    def blank() -> np.ndarray:
        return np.zeros((0, total), dtype=np.int64)

    # per-degree membership constraints (A-linearity, plus structure map in Cartier)
    for n in degrees:
        if sizes[n] == 0:
            continue
        if context == MODULE:
            local = alg.hom_space_matrix(x.object(n), y.object(n))
        else:
            local = cart.hom_cart_constraints(x.object(n), y.object(n))
        block = np.zeros((local.rows, total), dtype=np.int64)
        block[:, offsets[n] : offsets[n] + sizes[n]] = local.array
        rows.append(block)

    # commuting squares: f_{n-1} d_n = d_n f_n
    for n in range(lo + 1, hi + 1):
        t_prev = y.object(n - 1).dim
        s_prev = x.object(n - 1).dim
        t_cur = y.object(n).dim
        s_cur = x.object(n).dim
        out_rows = t_prev * x.object(n).dim
        if out_rows == 0:
            continue
        block = np.zeros((out_rows, total), dtype=np.int64)
        dx = x.differential(n).matrix
        dy = y.differential(n).matrix
        if sizes[n - 1]:
            eye_prev = np.eye(t_prev, dtype=np.int64)
            block[:, offsets[n - 1] : offsets[n - 1] + sizes[n - 1]] = np.kron(eye_prev, dx.array.T)
        if sizes[n]:
            eye_cur = np.eye(s_cur, dtype=np.int64)
            block[:, offsets[n] : offsets[n] + sizes[n]] -= np.kron(dy.array, eye_cur)
        rows.append(block)

    system = PrimeFieldMatrix(field, np.concatenate(rows, axis=0) if rows else np.zeros((0, total), dtype=np.int64))
    basis = kernel_basis(system)
    out = []
    for j in range(basis.cols):
        vec = basis.col(j).array[:, 0]
        comps = {}
        for n in degrees:
            if sizes[n] == 0:
                continue
            seg = vec[offsets[n] : offsets[n] + sizes[n]].reshape(y.object(n).dim, x.object(n).dim)
            comps[n] = _make_map(context, x.object(n), y.object(n), PrimeFieldMatrix(field, seg), check=False)
        out.append(ComplexMap(x, y, comps, check=False))
    return out
