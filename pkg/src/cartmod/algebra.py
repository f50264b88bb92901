"""Finite-dimensional commutative F_p-algebras and their finite modules.

An algebra is given by structure constants on a chosen basis; a module
by one action matrix per basis element.  On top of that sit the
operations every later layer leans on: the Frobenius endomorphism
a -> a^p and the pushforward twist it induces on modules, Hom spaces,
block (idempotent) decompositions, free resolutions with minimal
generator choices, and Ext groups over the algebra.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .cochain import Cochain, quotient_projection
from .linalg import (
    PrimeField,
    PrimeFieldMatrix,
    column_space_basis,
    hstack,
    kernel_basis,
    rank,
    rref,
    solve,
)


class FiniteAlgebra:
    """Commutative unital algebra over F_p given by structure constants.

    structure_constants[i][j][k] is the e_k-coefficient of e_i * e_j.
    Commutativity, associativity on all basis triples, and the unit law
    are checked at construction; a violation is a hard error naming the
    offending basis elements.
    """

    def __init__(
        self,
        field: PrimeField,
        structure_constants,
        unit: Sequence[int],
        labels: Optional[Sequence[str]] = None,
        name: Optional[str] = None,
    ):
        table = np.mod(np.asarray(structure_constants, dtype=np.int64), field.p)
        if table.ndim != 3 or table.shape[0] != table.shape[1] or table.shape[0] != table.shape[2]:
            raise ValueError(f"structure constants must be d x d x d, got shape {table.shape}")
        d = table.shape[0]
        unit_vec = np.mod(np.asarray(unit, dtype=np.int64).reshape(-1), field.p)
        if unit_vec.shape != (d,):
            raise ValueError("unit vector has the wrong length")
        if labels is None:
            labels = [f"e{i}" for i in range(d)]
        if len(labels) != d:
            raise ValueError("need one label per basis element")
        table.flags.writeable = False
        unit_vec.flags.writeable = False
        self.field = field
        self.dim = d
        self.table = table
        self.unit_vector = unit_vec
        self.labels = tuple(labels)
        self.name = name or "A"
        self._validate()
        self._frobenius: Optional[FrobeniusEndo] = None
        self._idempotents: Optional[tuple[PrimeFieldMatrix, ...]] = None

    @property
    def p(self) -> int:
        return self.field.p

    def _validate(self) -> None:
        p = self.p
        d = self.dim
        t = self.table
        for i in range(d):
            for j in range(i + 1, d):
                if not np.array_equal(t[i, j], t[j, i]):
                    raise ValueError(
                        f"multiplication not commutative at basis pair ({self.labels[i]}, {self.labels[j]})"
                    )
        # (e_i e_j) e_k vs e_i (e_j e_k) on every triple
        left = np.mod(np.einsum("ijm,mkl->ijkl", t, t), p)
        right = np.mod(np.einsum("jkm,iml->ijkl", t, t), p)
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            i, j, k = (int(x) for x in bad[:3])
            raise ValueError(
                f"multiplication not associative at triple ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})"
            )
        if not np.array_equal(self.left_mult_array(self.unit_vector), np.eye(d, dtype=np.int64)):
            raise ValueError("declared unit does not act as the identity")

    # -- elements -------------------------------------------------------------

    def unit(self) -> PrimeFieldMatrix:
        return PrimeFieldMatrix(self.field, self.unit_vector.reshape(-1, 1))

    def basis_element(self, i: int) -> PrimeFieldMatrix:
        v = np.zeros((self.dim, 1), dtype=np.int64)
        v[i, 0] = 1
        return PrimeFieldMatrix(self.field, v)

    def multiply(self, x: PrimeFieldMatrix, y: PrimeFieldMatrix) -> PrimeFieldMatrix:
        out = np.einsum("i,j,ijk->k", x.array[:, 0], y.array[:, 0], self.table)
        return PrimeFieldMatrix(self.field, np.mod(out, self.p).reshape(-1, 1))

    def left_mult_array(self, x: np.ndarray) -> np.ndarray:
        """Matrix of multiplication by the element with coordinates x."""
        return np.mod(np.einsum("i,ijk->kj", x, self.table), self.p)

    def left_mult_matrix(self, x: PrimeFieldMatrix) -> PrimeFieldMatrix:
        return PrimeFieldMatrix(self.field, self.left_mult_array(x.array[:, 0]))

    def element_power(self, x: PrimeFieldMatrix, n: int) -> PrimeFieldMatrix:
        """x^n by repeated squaring (x^0 is the unit)."""
        result = self.unit()
        base = x
        while n:
            if n & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteAlgebra)
            and other.field == self.field
            and other.dim == self.dim
            and bool(np.array_equal(other.table, self.table))
            and bool(np.array_equal(other.unit_vector, self.unit_vector))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.dim, self.table.tobytes(), self.unit_vector.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name}, p={self.p}, dim={self.dim})"


class FrobeniusEndo:
    """The endomorphism a -> a^p of a finite algebra, as a matrix.

    Columns are the coordinates of e_i^p.  Construction recomputes each
    power by plain repeated multiplication as an independent check and
    verifies the ring-homomorphism laws; any discrepancy is an error.
    """

    def __init__(self, algebra: FiniteAlgebra):
        d = algebra.dim
        cols = []
        for i in range(d):
            e = algebra.basis_element(i)
            fast = algebra.element_power(e, algebra.p)
            slow = e
            for _ in range(algebra.p - 1):
                slow = algebra.multiply(slow, e)
            if fast != slow:
                raise ValueError(f"inconsistent p-th power of basis element {algebra.labels[i]}")
            cols.append(fast.array[:, 0])
        matrix = PrimeFieldMatrix(algebra.field, np.stack(cols, axis=1))
        self.algebra = algebra
        self.matrix = matrix
        self._validate()

    def _validate(self) -> None:
        a = self.algebra
        if self.apply(a.unit()) != a.unit():
            raise ValueError("Frobenius does not fix the unit")
        for i in range(a.dim):
            for j in range(i, a.dim):
                lhs = self.apply(a.multiply(a.basis_element(i), a.basis_element(j)))
                rhs = a.multiply(self.apply(a.basis_element(i)), self.apply(a.basis_element(j)))
                if lhs != rhs:
                    raise ValueError(
                        f"Frobenius not multiplicative on ({a.labels[i]}, {a.labels[j]})"
                    )

    def apply(self, x: PrimeFieldMatrix) -> PrimeFieldMatrix:
        return self.matrix @ x

    def is_invertible(self) -> bool:
        return rank(self.matrix) == self.algebra.dim

    def inverse_matrix(self) -> PrimeFieldMatrix:
        inv = solve(self.matrix, PrimeFieldMatrix.identity(self.algebra.field, self.algebra.dim))
        if inv is None:
            raise ValueError("Frobenius endomorphism is not invertible on this algebra")
        return inv


def frobenius(algebra: FiniteAlgebra) -> FrobeniusEndo:
    """The Frobenius endomorphism of the algebra (cached per algebra)."""
    if algebra._frobenius is None:
        algebra._frobenius = FrobeniusEndo(algebra)
    return algebra._frobenius


class AModule:
    """Finite module over a FiniteAlgebra: one action matrix per basis element."""

    def __init__(self, algebra: FiniteAlgebra, actions: Sequence[PrimeFieldMatrix], check: bool = True):
        if len(actions) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        dims = {(m.rows, m.cols) for m in actions} or {(0, 0)}
        if len(dims) != 1:
            raise ValueError("action matrices must share one square shape")
        (n_rows, n_cols) = next(iter(dims))
        if n_rows != n_cols:
            raise ValueError("action matrices must be square")
        self.algebra = algebra
        self.dim = n_rows
        self.actions = tuple(actions)
        if check:
            self._validate()

    def _validate(self) -> None:
        a = self.algebra
        if self.action_of(a.unit()) != PrimeFieldMatrix.identity(a.field, self.dim):
            raise ValueError("unit does not act as the identity on the module")
        for i in range(a.dim):
            for j in range(i, a.dim):
                rhs = self.action_of(a.multiply(a.basis_element(i), a.basis_element(j)))
                # the product is commutative, so both orders must hit it
                if self.actions[i] @ self.actions[j] != rhs or self.actions[j] @ self.actions[i] != rhs:
                    raise ValueError(
                        f"action matrices do not respect the product {a.labels[i]} * {a.labels[j]}"
                    )

    def action_of(self, element: PrimeFieldMatrix) -> PrimeFieldMatrix:
        out = PrimeFieldMatrix.zeros(self.algebra.field, self.dim, self.dim)
        for i, c in enumerate(element.array[:, 0]):
            if c:
                out = out + self.actions[i].scale(int(c))
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AModule)
            and other.algebra == self.algebra
            and other.dim == self.dim
            and other.actions == self.actions
        )

    def __hash__(self) -> int:
        return hash((self.algebra, self.actions))

    def __repr__(self) -> str:
        return f"AModule(dim={self.dim} over {self.algebra.name})"


class AModuleMap:
    """A-linear map between modules over the same algebra."""

    def __init__(self, source: AModule, target: AModule, matrix: PrimeFieldMatrix, check: bool = True):
        if source.algebra != target.algebra:
            raise ValueError("module map needs source and target over the same algebra")
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise ValueError(
                f"map matrix has shape {matrix.rows}x{matrix.cols}, expected {target.dim}x{source.dim}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            self._validate()

    def _validate(self) -> None:
        for i in range(self.source.algebra.dim):
            if self.target.actions[i] @ self.matrix != self.matrix @ self.source.actions[i]:
                raise ValueError(
                    f"map is not A-linear for basis element {self.source.algebra.labels[i]}"
                )

    def compose(self, other: "AModuleMap") -> "AModuleMap":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        return AModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "AModuleMap") -> "AModuleMap":
        return AModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AModuleMap)
            and other.source == self.source
            and other.target == self.target
            and other.matrix == self.matrix
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def __repr__(self) -> str:
        return f"AModuleMap({self.source!r} -> {self.target!r})"


def identity_map(m: AModule) -> AModuleMap:
    return AModuleMap(m, m, PrimeFieldMatrix.identity(m.algebra.field, m.dim), check=False)


def zero_map(source: AModule, target: AModule) -> AModuleMap:
    return AModuleMap(source, target, PrimeFieldMatrix.zeros(source.algebra.field, target.dim, source.dim), check=False)


def zero_module(algebra: FiniteAlgebra) -> AModule:
    empty = PrimeFieldMatrix.zeros(algebra.field, 0, 0)
    return AModule(algebra, [empty] * algebra.dim, check=False)


def regular_module(algebra: FiniteAlgebra) -> AModule:
    actions = [
        PrimeFieldMatrix(algebra.field, algebra.left_mult_array(algebra.basis_element(i).array[:, 0]))
        for i in range(algebra.dim)
    ]
    return AModule(algebra, actions, check=False)


def free_module(algebra: FiniteAlgebra, g: int) -> AModule:
    """A^g with copy-major coordinates: index t*dim + i for copy t, basis e_i."""
    reg = regular_module(algebra)
    eye = PrimeFieldMatrix.identity(algebra.field, g)
    actions = [eye.kronecker(act) for act in reg.actions]
    return AModule(algebra, actions, check=False)


def free_generator_columns(algebra: FiniteAlgebra, g: int) -> PrimeFieldMatrix:
    """Coordinates of the g standard generators of A^g (the unit in each copy)."""
    d = algebra.dim
    cols = np.zeros((g * d, g), dtype=np.int64)
    for t in range(g):
        cols[t * d : (t + 1) * d, t] = algebra.unit_vector
    return PrimeFieldMatrix(algebra.field, cols)


def map_from_generator_images(
    source_free: AModule, g: int, target: AModule, images: PrimeFieldMatrix
) -> AModuleMap:
    """The A-linear map A^g -> target sending generator t to images[:, t]."""
    algebra = target.algebra
    d = algebra.dim
    cols = []
    for t in range(g):
        base = images.col(t)
        for i in range(d):
            cols.append(target.actions[i] @ base)
    matrix = (
        hstack(cols) if cols else PrimeFieldMatrix.zeros(algebra.field, target.dim, 0)
    )
    return AModuleMap(source_free, target, matrix)


def direct_sum_modules(mods: Sequence[AModule]) -> tuple[AModule, list[AModuleMap], list[AModuleMap]]:
    """Direct sum with its inclusion and projection maps."""
    if not mods:
        raise ValueError("direct sum needs at least one summand")
    algebra = mods[0].algebra
    for m in mods:
        if m.algebra != algebra:
            raise ValueError("direct sum needs modules over one algebra")
    total = sum(m.dim for m in mods)
    field = algebra.field
    actions = []
    for i in range(algebra.dim):
        act = mods[0].actions[i]
        for m in mods[1:]:
            act = act.direct_sum(m.actions[i])
        actions.append(act)
    out = AModule(algebra, actions, check=False)
    inclusions = []
    projections = []
    offset = 0
    for m in mods:
        inc = np.zeros((total, m.dim), dtype=np.int64)
        inc[offset : offset + m.dim, :] = np.eye(m.dim, dtype=np.int64)
        inclusions.append(AModuleMap(m, out, PrimeFieldMatrix(field, inc), check=False))
        projections.append(AModuleMap(out, m, PrimeFieldMatrix(field, inc.T), check=False))
        offset += m.dim
    return out, inclusions, projections


# -- sub and quotient modules -------------------------------------------------


def submodule_on_basis(m: AModule, basis: PrimeFieldMatrix) -> tuple[AModule, AModuleMap]:
    """Submodule with the given independent, action-invariant basis columns."""
    algebra = m.algebra
    sub_actions = []
    for i in range(algebra.dim):
        moved = m.actions[i] @ basis
        coords = solve(basis, moved)
        if coords is None:
            raise ValueError(f"columns are not invariant under {algebra.labels[i]}")
        sub_actions.append(coords)
    sub = AModule(algebra, sub_actions)
    inclusion = AModuleMap(sub, m, basis)
    return sub, inclusion


def span_submodule(m: AModule, vectors: PrimeFieldMatrix) -> tuple[AModule, AModuleMap]:
    """Submodule generated by the given vectors."""
    if vectors.cols == 0:
        basis = PrimeFieldMatrix.zeros(m.algebra.field, m.dim, 0)
    else:
        pieces = [m.actions[i] @ vectors for i in range(m.algebra.dim)]
        basis = column_space_basis(hstack(pieces))
    return submodule_on_basis(m, basis)


def quotient_module(m: AModule, sub_basis: PrimeFieldMatrix) -> tuple[AModule, AModuleMap, PrimeFieldMatrix]:
    """Quotient by an invariant subspace; returns (quotient, projection, section)."""
    algebra = m.algebra
    q, s = quotient_projection(algebra.field, m.dim, sub_basis)
    actions = [q @ m.actions[i] @ s for i in range(algebra.dim)]
    quot = AModule(algebra, actions)
    projection = AModuleMap(m, quot, q)
    return quot, projection, s


def kernel_module(f: AModuleMap) -> tuple[AModule, AModuleMap]:
    return submodule_on_basis(f.source, kernel_basis(f.matrix))


def image_module(f: AModuleMap) -> tuple[AModule, AModuleMap]:
    return submodule_on_basis(f.target, column_space_basis(f.matrix))


def cokernel_module(f: AModuleMap) -> tuple[AModule, AModuleMap]:
    quot, projection, _ = quotient_module(f.target, column_space_basis(f.matrix))
    return quot, projection


# -- Hom ----------------------------------------------------------------------


def hom_space_matrix(m: AModule, n: AModule) -> PrimeFieldMatrix:
    """Stacked intertwining constraints on row-major vectorized maps n <- m."""
    if m.algebra != n.algebra:
        raise ValueError("Hom needs modules over the same algebra")
    field = m.algebra.field
    blocks = []
    eye_m = PrimeFieldMatrix.identity(field, m.dim)
    eye_n = PrimeFieldMatrix.identity(field, n.dim)
    for i in range(m.algebra.dim):
        blocks.append(n.actions[i].kronecker(eye_m) - eye_n.kronecker(m.actions[i].transpose()))
    if not blocks:
        return PrimeFieldMatrix.zeros(field, 0, n.dim * m.dim)
    return PrimeFieldMatrix(field, np.concatenate([b.array for b in blocks], axis=0))


@lru_cache(maxsize=16384)
def _hom_module_basis_cached(m: AModule, n: AModule) -> tuple[AModuleMap, ...]:
    basis = kernel_basis(hom_space_matrix(m, n))
    maps = []
    for j in range(basis.cols):
        mat = basis.col(j).reshape(n.dim, m.dim)
        maps.append(AModuleMap(m, n, mat, check=False))
    return tuple(maps)


def hom_module_basis(m: AModule, n: AModule) -> list[AModuleMap]:
    """F_p-basis of Hom_A(m, n), via the kernel of the intertwining constraints."""
    return list(_hom_module_basis_cached(m, n))


# -- Frobenius twist ----------------------------------------------------------


@lru_cache(maxsize=16384)
def frobenius_twist(m: AModule) -> AModule:
    """Pushforward along Frobenius: same space, e_i acts through phi(e_i)."""
    phi = frobenius(m.algebra)
    actions = [m.action_of(phi.apply(m.algebra.basis_element(i))) for i in range(m.algebra.dim)]
    return AModule(m.algebra, actions, check=False)


def frobenius_twist_map(f: AModuleMap) -> AModuleMap:
    """Restriction of scalars changes actions, never the matrix of a map."""
    return AModuleMap(frobenius_twist(f.source), frobenius_twist(f.target), f.matrix)


def frobenius_twist_iterated(m: AModule, k: int) -> AModule:
    out = m
    for _ in range(k):
        out = frobenius_twist(out)
    return out


# -- radical and idempotents --------------------------------------------------


def radical_basis(algebra: FiniteAlgebra) -> PrimeFieldMatrix:
    """Basis of the nilradical, computed as the kernel of a Frobenius power.

    An element of a d-dimensional commutative algebra is nilpotent iff
    its p^k-th power vanishes once p^k >= d, and taking p^k-th powers is
    the k-th Frobenius power, a linear map.
    """
    cached = getattr(algebra, "_radical", None)
    if cached is not None:
        return cached
    phi = frobenius(algebra).matrix
    k = 0
    power = 1
    while power < algebra.dim:
        power *= algebra.p
        k += 1
    result = kernel_basis(phi.power(k))
    algebra._radical = result
    return result


def primitive_idempotents(algebra: FiniteAlgebra) -> tuple[PrimeFieldMatrix, ...]:
    """Complete set of orthogonal primitive idempotents, in canonical order.

    Idempotents live in the Frobenius-fixed subalgebra {a : a^p = a},
    which is spanned by the primitive idempotents themselves; splitting
    is by Lagrange interpolation on minimal polynomials of fixed
    elements.
    """
    if algebra._idempotents is not None:
        return algebra._idempotents
    p = algebra.p
    field = algebra.field
    phi = frobenius(algebra).matrix
    fixed = kernel_basis(phi - PrimeFieldMatrix.identity(field, algebra.dim))
    idems = [algebra.unit()]
    for j in range(fixed.cols):
        b = fixed.col(j)
        refined: list[PrimeFieldMatrix] = []
        for e in idems:
            x = algebra.multiply(e, b)
            min_poly = _relative_minimal_polynomial(algebra, e, x)
            roots = [c for c in range(p) if _poly_eval_scalar(min_poly, c, p) == 0]
            if len(roots) != len(min_poly) - 1:
                raise ValueError("fixed element has a non-split minimal polynomial")
            if len(roots) == 1:
                refined.append(e)
                continue
            for c in roots:
                quotient_coeffs = _synthetic_division(min_poly, c, p)
                piece = _poly_eval_element(algebra, quotient_coeffs, x, e)
                denom = _poly_eval_scalar(quotient_coeffs, c, p)
                piece = piece.scale(pow(denom, -1, p))
                if algebra.multiply(piece, piece) != piece:
                    raise ValueError("Lagrange splitting produced a non-idempotent")
                refined.append(piece)
        idems = refined
    idems.sort(key=lambda e: tuple(int(v) for v in e.array[:, 0]))
    for a_i in idems:
        for b_i in idems:
            expected = a_i if a_i == b_i else PrimeFieldMatrix.zeros(field, algebra.dim, 1)
            if algebra.multiply(a_i, b_i) != expected:
                raise ValueError("idempotent set is not orthogonal")
    total = idems[0]
    for e in idems[1:]:
        total = total + e
    if total != algebra.unit():
        raise ValueError("idempotents do not sum to the unit")
    algebra._idempotents = tuple(idems)
    return algebra._idempotents


def _relative_minimal_polynomial(
    algebra: FiniteAlgebra, e: PrimeFieldMatrix, x: PrimeFieldMatrix
) -> list[int]:
    """Monic minimal polynomial of x inside the corner algebra e*A (x^0 := e)."""
    powers = [e]
    while True:
        powers.append(algebra.multiply(powers[-1], x))
        stacked = hstack(powers)
        if rank(stacked) < stacked.cols:
            coeffs = kernel_basis(stacked).col(0)
            vec = [int(v) for v in coeffs.array[:, 0]]
            lead = vec[-1]
            inv = pow(lead, -1, algebra.p)
            return [(c * inv) % algebra.p for c in vec]


def _poly_eval_scalar(coeffs: Sequence[int], c: int, p: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * c + a) % p
    return acc


def _synthetic_division(coeffs: Sequence[int], root: int, p: int) -> list[int]:
    """Divide a polynomial (low-to-high coefficients) by (t - root)."""
    out = [0] * (len(coeffs) - 1)
    carry = 0
    for k in range(len(coeffs) - 1, 0, -1):
        carry = (coeffs[k] + carry * root) % p
        out[k - 1] = carry
    return out


def _poly_eval_element(
    algebra: FiniteAlgebra, coeffs: Sequence[int], x: PrimeFieldMatrix, e: PrimeFieldMatrix
) -> PrimeFieldMatrix:
    acc = PrimeFieldMatrix.zeros(algebra.field, algebra.dim, 1)
    for a in reversed(coeffs):
        acc = algebra.multiply(acc, x) + e.scale(a)
    return acc


def simple_module(algebra: FiniteAlgebra, block_index: int) -> AModule:
    """The simple module of the given block: block residue field as an A-module."""
    idems = primitive_idempotents(algebra)
    if not 0 <= block_index < len(idems):
        raise ValueError(f"no block with index {block_index}")
    reg = regular_module(algebra)
    killers = [radical_basis(algebra)]
    for j, e in enumerate(idems):
        if j != block_index:
            killers.append(column_space_basis(reg.action_of(e)))
    sub_basis = column_space_basis(hstack(killers))
    quot, _, _ = quotient_module(reg, sub_basis)
    return quot


# -- minimal generators and free resolutions ----------------------------------


def minimal_generators(m: AModule, strategy: str = "minimal") -> PrimeFieldMatrix:
    """Columns generating m over A, selected greedily from a spanning set.

    With the default strategy the spanning set is fronted by block-wise
    radical-complement lifts combined across blocks, which makes the
    greedy pass pick a generating set of minimal size.  The "basis"
    strategy greedily selects from the standard basis only; it still
    generates but may be redundant, which is exactly what the
    resolution-independence tests want.
    """
    algebra = m.algebra
    field = algebra.field
    if m.dim == 0:
        return PrimeFieldMatrix.zeros(field, 0, 0)
    candidates: list[PrimeFieldMatrix] = []
    if strategy == "minimal":
        candidates.extend(_combined_block_generators(m))
    elif strategy != "basis":
        raise ValueError(f"unknown generator strategy {strategy!r}")
    eye = PrimeFieldMatrix.identity(field, m.dim)
    candidates.extend(eye.col(j) for j in range(m.dim))

    selected: list[PrimeFieldMatrix] = []
    span = PrimeFieldMatrix.zeros(field, m.dim, 0)
    for v in candidates:
        if v.is_zero():
            continue
        if span.cols and solve(span, v) is not None:
            continue
        selected.append(v)
        moved = hstack([m.actions[i] @ v for i in range(algebra.dim)])
        span = column_space_basis(hstack([span, moved]) if span.cols else moved)
        if span.cols == m.dim:
            break
    if span.cols != m.dim:
        raise ValueError("candidate set failed to generate the module")
    return hstack(selected)


def _combined_block_generators(m: AModule) -> list[PrimeFieldMatrix]:
    """Cross-block sums of radical-complement lifts; minimal by Nakayama per block."""
    algebra = m.algebra
    field = algebra.field
    rad = radical_basis(algebra)
    per_block: list[list[PrimeFieldMatrix]] = []
    for e in primitive_idempotents(algebra):
        block_basis = column_space_basis(m.action_of(e))
        if block_basis.cols == 0:
            per_block.append([])
            continue
        if rad.cols:
            rad_cols = hstack([m.action_of(rad.col(j)) @ block_basis for j in range(rad.cols)])
            rad_basis = column_space_basis(rad_cols)
        else:
            rad_basis = PrimeFieldMatrix.zeros(field, m.dim, 0)
        candidate = hstack([rad_basis, block_basis])
        _, pivots, _ = rref(candidate)
        lifts = [candidate.col(pc) for pc in pivots if pc >= rad_basis.cols]
        per_block.append(lifts)
    count = max((len(lifts) for lifts in per_block), default=0)
    combined = []
    for t in range(count):
        acc = PrimeFieldMatrix.zeros(field, m.dim, 1)
        for lifts in per_block:
            if t < len(lifts):
                acc = acc + lifts[t]
        combined.append(acc)
    return combined


class FreeResolution:
    """Free resolution P_len -> ... -> P_0 -> m by modules A^{g_j}."""

    def __init__(
        self,
        module: AModule,
        ranks: Sequence[int],
        terms: Sequence[AModule],
        differentials: Sequence[AModuleMap],
        augmentation: AModuleMap,
    ):
        self.module = module
        self.ranks = tuple(ranks)
        self.terms = tuple(terms)
        self.differentials = tuple(differentials)
        self.augmentation = augmentation

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def generator_columns(self, j: int) -> PrimeFieldMatrix:
        return free_generator_columns(self.module.algebra, self.ranks[j])

    def validate(self) -> None:
        """Rank checks: complexes compose to zero and are exact below the top."""
        aug = self.augmentation.matrix
        if rank(aug) != self.module.dim:
            raise ValueError("augmentation is not surjective")
        prev = aug
        for j, d in enumerate(self.differentials):
            if not (prev @ d.matrix).is_zero():
                raise ValueError(f"composite into degree {j} is nonzero")
            ker_dim = prev.cols - rank(prev)
            if rank(d.matrix) != ker_dim:
                raise ValueError(f"resolution fails exactness at degree {j}")
            prev = d.matrix


@lru_cache(maxsize=4096)
def _free_resolution_cached(m: AModule, length: int, strategy: str) -> FreeResolution:
    return _build_free_resolution(m, length, strategy)


def free_resolution(m: AModule, length: int, strategy: str = "minimal") -> FreeResolution:
    """Free resolution of m of the given length (P_0 .. P_length).

    Resolutions are cached per (module, length, strategy); the returned
    value is shared and must be treated as read-only, which every caller
    here does.
    """
    return _free_resolution_cached(m, length, strategy)


def _build_free_resolution(m: AModule, length: int, strategy: str = "minimal") -> FreeResolution:
    if length < 0:
        raise ValueError("resolution length must be nonnegative")
    algebra = m.algebra
    ranks: list[int] = []
    terms: list[AModule] = []
    differentials: list[AModuleMap] = []

    gens = minimal_generators(m, strategy=strategy)
    p0 = free_module(algebra, gens.cols)
    ranks.append(gens.cols)
    terms.append(p0)
    augmentation = map_from_generator_images(p0, gens.cols, m, gens)

    current_map = augmentation
    for _ in range(length):
        ker, inclusion = kernel_module(current_map)
        gens = minimal_generators(ker, strategy=strategy)
        p_next = free_module(algebra, gens.cols)
        ranks.append(gens.cols)
        terms.append(p_next)
        to_kernel = map_from_generator_images(p_next, gens.cols, ker, gens)
        differential = inclusion.compose(to_kernel)
        differentials.append(AModuleMap(p_next, current_map.source, differential.matrix, check=False))
        current_map = to_kernel
    return FreeResolution(m, ranks, terms, differentials, augmentation)


# -- Ext over the algebra -----------------------------------------------------


def hom_free_cochain(res: FreeResolution, n: AModule) -> Cochain:
    """The cochain complex Hom_A(P_., n) in generator coordinates.

    Hom_A(A^g, n) is identified with n^g by recording generator images;
    the differential is built from the A-coefficients of the resolution
    differentials acting on n.
    """
    algebra = res.module.algebra
    field = algebra.field
    d = algebra.dim
    dims = [g * n.dim for g in res.ranks]
    deltas = []
    for j, diff in enumerate(res.differentials):
        g_low = res.ranks[j]
        g_high = res.ranks[j + 1]
        gen_images = diff.matrix @ res.generator_columns(j + 1)
        out = np.zeros((g_high * n.dim, g_low * n.dim), dtype=np.int64)
        for s in range(g_high):
            for t in range(g_low):
                coeff = gen_images.array[t * d : (t + 1) * d, s]
                block = n.action_of(PrimeFieldMatrix(field, coeff.reshape(-1, 1)))
                out[s * n.dim : (s + 1) * n.dim, t * n.dim : (t + 1) * n.dim] = block.array
        deltas.append(PrimeFieldMatrix(field, out))
    return Cochain(field, dims, deltas)


def hom_matrix_from_coords(
    res: FreeResolution, j: int, n: AModule, coords: PrimeFieldMatrix
) -> PrimeFieldMatrix:
    """Rebuild the matrix P_j -> n from generator-image coordinates."""
    algebra = res.module.algebra
    d = algebra.dim
    g = res.ranks[j]
    cols = []
    for t in range(g):
        w = coords.take_rows(range(t * n.dim, (t + 1) * n.dim))
        for i in range(d):
            cols.append(n.actions[i] @ w)
    if not cols:
        return PrimeFieldMatrix.zeros(algebra.field, n.dim, 0)
    return hstack(cols)


def coords_from_hom_matrix(res: FreeResolution, j: int, n: AModule, matrix: PrimeFieldMatrix) -> PrimeFieldMatrix:
    images = matrix @ res.generator_columns(j)
    # stack generator images on top of each other, generator-major
    return images.transpose().flatten()


def ext_module(
    m: AModule, n: AModule, degree: int, strategy: str = "minimal"
) -> tuple[int, list[AModuleMap]]:
    """Ext^degree_A(m, n): dimension and cocycle representatives P_degree -> n."""
    if degree < 0:
        raise ValueError("Ext degree must be nonnegative")
    if m.algebra != n.algebra:
        raise ValueError("Ext needs modules over the same algebra")
    res = free_resolution(m, degree + 1, strategy=strategy)
    cochain = hom_free_cochain(res, n)
    data = cochain.cohomology(degree)
    reps = []
    for j in range(data.dimension):
        mat = hom_matrix_from_coords(res, degree, n, data.representatives.col(j))
        reps.append(AModuleMap(res.terms[degree], n, mat, check=False))
    return data.dimension, reps


# -- standard catalog ----------------------------------------------------------


def field_algebra(p: int) -> FiniteAlgebra:
    field = PrimeField(p)
    return FiniteAlgebra(field, [[[1]]], [1], labels=["1"], name=f"F{p}")


def f4() -> FiniteAlgebra:
    """F_4 over F_2 with basis 1, w where w^2 = w + 1."""
    field = PrimeField(2)
    table = np.zeros((2, 2, 2), dtype=np.int64)
    table[0, 0] = [1, 0]
    table[0, 1] = [0, 1]
    table[1, 0] = [0, 1]
    table[1, 1] = [1, 1]
    return FiniteAlgebra(field, table, [1, 0], labels=["1", "w"], name="F4")


def truncated_polynomial_algebra(p: int, n: int) -> FiniteAlgebra:
    """F_p[x]/(x^n) with monomial basis 1, x, ..., x^(n-1)."""
    field = PrimeField(p)
    table = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                table[i, j, i + j] = 1
    unit = [1] + [0] * (n - 1)
    labels = ["1"] + [f"x^{k}" if k > 1 else "x" for k in range(1, n)]
    return FiniteAlgebra(field, table, unit, labels=labels, name=f"F{p}[x]/(x^{n})")


def product_algebra(a: FiniteAlgebra, b: FiniteAlgebra, name: Optional[str] = None) -> FiniteAlgebra:
    """Direct product with block-diagonal structure constants."""
    if a.field != b.field:
        raise ValueError("product needs algebras over the same field")
    da, db = a.dim, b.dim
    d = da + db
    table = np.zeros((d, d, d), dtype=np.int64)
    table[:da, :da, :da] = a.table
    table[da:, da:, da:] = b.table
    unit = np.concatenate([a.unit_vector, b.unit_vector])
    labels = [f"{lab}|0" for lab in a.labels] + [f"0|{lab}" for lab in b.labels]
    return FiniteAlgebra(a.field, table, unit, labels=labels, name=name or f"{a.name}x{b.name}")


def catalog() -> dict[str, FiniteAlgebra]:
    """The standard algebra catalog: fields, non-reduced, and non-local cases."""
    return {
        "F2": field_algebra(2),
        "F3": field_algebra(3),
        "F4": f4(),
        "F2[x]/(x^2)": truncated_polynomial_algebra(2, 2),
        "F3[x]/(x^2)": truncated_polynomial_algebra(3, 2),
        "F2[x]/(x^3)": truncated_polynomial_algebra(2, 3),
        "F2xF2": product_algebra(field_algebra(2), field_algebra(2), name="F2xF2"),
        "F4xF2[x]/(x^2)": product_algebra(f4(), truncated_polynomial_algebra(2, 2), name="F4xF2[x]/(x^2)"),
    }
