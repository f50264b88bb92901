"""Cochain complexes of F_p vector spaces with explicit cohomology data.

This is the shared bookkeeping for Ext computations: a finite run of
spaces C^0 -> C^1 -> ... given by plain matrices, together with
cohomology presented so that classes of cocycles can be read off as
coordinate vectors.  Induced maps on cohomology then become honest
matrices, which is what the long-exact-sequence checks need.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .linalg import (
    PrimeField,
    PrimeFieldMatrix,
    hstack,
    kernel_basis,
    rref,
    solve,
)


def quotient_projection(
    field: PrimeField, dim: int, sub_columns: PrimeFieldMatrix
) -> tuple[PrimeFieldMatrix, PrimeFieldMatrix]:
    """Projection q and section s for F^dim / span(sub_columns).

    q has ker q = span(sub_columns) and q s = identity; the complement is
    chosen greedily from the standard basis so the output is canonical.
    """
    if sub_columns.rows != dim:
        raise ValueError("subspace columns live in the wrong ambient space")
    basis = _independent_columns(sub_columns)
    r = basis.cols
    candidate = hstack([basis, PrimeFieldMatrix.identity(field, dim)])
    _, pivots, rk = rref(candidate)
    if rk != dim:
        raise ValueError("quotient_projection: ambient space not spanned")
    full = candidate.take_columns(pivots)
    inv = solve(full, PrimeFieldMatrix.identity(field, dim))
    assert inv is not None
    q = inv.take_rows(range(r, dim))
    s = full.take_columns(range(r, dim))
    return q, s


def _independent_columns(m: PrimeFieldMatrix) -> PrimeFieldMatrix:
    _, pivots, _ = rref(m)
    return m.take_columns(pivots)


class CohomologyData:
    """H^i of a cochain spot, with coordinates for classes of cocycles."""

    __slots__ = ("dimension", "cocycles", "class_projection", "representatives")

    def __init__(
        self,
        cocycles: PrimeFieldMatrix,
        class_projection: PrimeFieldMatrix,
        representatives: PrimeFieldMatrix,
    ):
        self.dimension = class_projection.rows
        self.cocycles = cocycles
        self.class_projection = class_projection
        self.representatives = representatives

    def class_of(self, cocycle: PrimeFieldMatrix) -> PrimeFieldMatrix:
        coords = solve(self.cocycles, cocycle)
        if coords is None:
            raise ValueError("vector is not a cocycle of this spot")
        return self.class_projection @ coords


class Cochain:
    """Bounded cochain complex of F_p spaces given by matrices.

    differentials[i] is the matrix of d^i: C^i -> C^{i+1}; dims lists the
    dimensions of C^0 .. C^top.  Cohomology in degree i is reliable for
    i < top since d^top is not part of the data.
    """

    def __init__(self, field: PrimeField, dims: Sequence[int], differentials: Sequence[PrimeFieldMatrix]):
        if len(differentials) != len(dims) - 1:
            raise ValueError("need one differential per adjacent pair of spots")
        for i, d in enumerate(differentials):
            if d.cols != dims[i] or d.rows != dims[i + 1]:
                raise ValueError(f"differential {i} has shape {d.rows}x{d.cols}, expected {dims[i + 1]}x{dims[i]}")
        for i in range(len(differentials) - 1):
            if not (differentials[i + 1] @ differentials[i]).is_zero():
                raise ValueError(f"d^{i + 1} d^{i} != 0")
        self.field = field
        self.dims = tuple(dims)
        self.differentials = tuple(differentials)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def differential(self, i: int) -> PrimeFieldMatrix:
        """d^i, with zero maps outside the stored range."""
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        rows = self.dims[i + 1] if 0 <= i + 1 <= self.top else 0
        cols = self.dims[i] if 0 <= i <= self.top else 0
        return PrimeFieldMatrix.zeros(self.field, rows, cols)

    def cohomology(self, i: int) -> CohomologyData:
        if not 0 <= i <= self.top:
            zero = PrimeFieldMatrix.zeros(self.field, 0, 0)
            return CohomologyData(zero, zero, zero)
        cocycles = kernel_basis(self.differential(i))
        incoming = self.differential(i - 1)
        image_coords = solve(cocycles, incoming) if incoming.cols else PrimeFieldMatrix.zeros(self.field, cocycles.cols, 0)
        if image_coords is None:
            raise ValueError("incoming differential does not land in the cocycles")
        q, s = quotient_projection(self.field, cocycles.cols, image_coords)
        representatives = cocycles @ s
        return CohomologyData(cocycles, q, representatives)


def induced_map(
    source: CohomologyData, target: CohomologyData, chain_map: PrimeFieldMatrix
) -> PrimeFieldMatrix:
    """Matrix of the map on cohomology induced by a chain-level matrix."""
    image = chain_map @ source.representatives
    coords = solve(target.cocycles, image)
    if coords is None:
        raise ValueError("chain map does not send cocycles to cocycles")
    return target.class_projection @ coords
