"""Brute-force ground truth by exhaustive enumeration.

These oracles never share code paths with the computations they check:
module structures and intertwiners are enumerated as raw matrix tuples
and filtered by the defining identities, and first Ext groups are
counted by classifying genuine short exact sequences up to equivalence.
Size guards keep every enumeration inside F_2 and tiny dimensions.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .algebra import AModule, FiniteAlgebra, frobenius
from .cartier import CartierModule
from .linalg import PrimeFieldMatrix

ENUMERATION_LIMIT = 1 << 20


def _all_arrays(p: int, rows: int, cols: int) -> list[np.ndarray]:
    cells = rows * cols
    out = []
    for combo in itertools.product(range(p), repeat=cells):
        out.append(np.array(combo, dtype=np.int64).reshape(rows, cols))
    return out


def enumerate_matrices(field, rows: int, cols: int) -> list[PrimeFieldMatrix]:
    if field.p ** (rows * cols) > ENUMERATION_LIMIT:
        raise ValueError("matrix enumeration guard exceeded")
    return [PrimeFieldMatrix(field, a) for a in _all_arrays(field.p, rows, cols)]


def _module_laws_hold(algebra: FiniteAlgebra, mats: Sequence[np.ndarray], dim: int) -> bool:
    p = algebra.p
    unit_action = np.zeros((dim, dim), dtype=np.int64)
    for i, coeff in enumerate(algebra.unit_vector):
        if coeff:
            unit_action = (unit_action + coeff * mats[i]) % p
    if not np.array_equal(unit_action, np.eye(dim, dtype=np.int64)):
        return False
    for i in range(algebra.dim):
        for j in range(i, algebra.dim):
            rhs = np.zeros((dim, dim), dtype=np.int64)
            for k, coeff in enumerate(algebra.table[i, j]):
                if coeff:
                    rhs = (rhs + coeff * mats[k]) % p
            # both orders: a module over a commutative algebra has commuting actions
            if not np.array_equal((mats[i] @ mats[j]) % p, rhs):
                return False
            if not np.array_equal((mats[j] @ mats[i]) % p, rhs):
                return False
    return True


def enumerate_modules(algebra: FiniteAlgebra, dim: int) -> list[AModule]:
    """Every module structure of the given dimension, by exhaustive search."""
    p = algebra.p
    if dim == 0:
        from .algebra import zero_module

        return [zero_module(algebra)]
    if p ** (dim * dim * algebra.dim) > ENUMERATION_LIMIT:
        raise ValueError("module enumeration guard exceeded")
    candidates = _all_arrays(p, dim, dim)
    k_count = len(candidates)
    encode = {a.tobytes(): idx for idx, a in enumerate(candidates)}
    mul = np.zeros((k_count, k_count), dtype=np.int64)
    for i, a in enumerate(candidates):
        for j, b in enumerate(candidates):
            mul[i, j] = encode[((a @ b) % p).tobytes()]
    add = np.zeros((k_count, k_count), dtype=np.int64)
    for i, a in enumerate(candidates):
        for j, b in enumerate(candidates):
            add[i, j] = encode[((a + b) % p).tobytes()]
    scale = np.zeros((p, k_count), dtype=np.int64)
    for c in range(p):
        for i, a in enumerate(candidates):
            scale[c, i] = encode[((c * a) % p).tobytes()]
    zero_idx = encode[np.zeros((dim, dim), dtype=np.int64).tobytes()]
    eye_idx = encode[np.eye(dim, dtype=np.int64).tobytes()]

    d = algebra.dim
    table = algebra.table
    unit = algebra.unit_vector
    results: list[AModule] = []
    choice = [0] * d

    def rhs_index(i: int, j: int) -> int:
        acc = zero_idx
        for k in range(d):
            coeff = int(table[i, j, k])
            if coeff:
                acc = add[acc, scale[coeff, choice[k]]]
        return acc

    def partial_ok(j: int) -> bool:
        # check every product constraint whose data is already chosen
        for i in range(j + 1):
            support = np.nonzero(table[i, j])[0]
            if len(support) and support.max() > j:
                continue
            if mul[choice[i], choice[j]] != rhs_index(i, j):
                return False
            if mul[choice[j], choice[i]] != rhs_index(i, j):
                return False
        unit_support = np.nonzero(unit)[0]
        if len(unit_support) and unit_support.max() == j:
            acc = zero_idx
            for k in unit_support:
                acc = add[acc, scale[int(unit[k]), choice[k]]]
            if acc != eye_idx:
                return False
        return True

    def full_ok() -> bool:
        return _module_laws_hold(algebra, [candidates[c] for c in choice], dim)

    def dfs(j: int) -> None:
        if j == d:
            if full_ok():
                actions = [PrimeFieldMatrix(algebra.field, candidates[c]) for c in choice]
                results.append(AModule(algebra, actions, check=False))
            return
        for idx in range(k_count):
            choice[j] = idx
            if partial_ok(j):
                dfs(j + 1)

    dfs(0)
    return results


def enumerate_kappas(module: AModule) -> list[PrimeFieldMatrix]:
    """Every valid structure map on the module, by filtering all matrices."""
    algebra = module.algebra
    phi = frobenius(algebra).matrix
    twisted_actions = []
    for i in range(algebra.dim):
        twisted_actions.append(module.action_of(phi @ algebra.basis_element(i)))
    out = []
    for kappa in enumerate_matrices(algebra.field, module.dim, module.dim):
        if all(
            module.actions[i] @ kappa == kappa @ twisted_actions[i]
            for i in range(algebra.dim)
        ):
            out.append(kappa)
    return out


def enumerate_cartier_modules(algebra: FiniteAlgebra, max_dim: int) -> list[CartierModule]:
    out = []
    for dim in range(max_dim + 1):
        for module in enumerate_modules(algebra, dim):
            for kappa in enumerate_kappas(module):
                out.append(CartierModule(module, kappa, check=False))
    return out


def count_intertwiners(m: CartierModule, n: CartierModule) -> int:
    """Number of Cartier morphisms m -> n, by trying every matrix."""
    algebra = m.algebra
    p = algebra.p
    if p ** (n.dim * m.dim) > ENUMERATION_LIMIT:
        raise ValueError("matrix enumeration guard exceeded")
    if n.dim * m.dim == 0:
        return 1
    stack = np.stack(_all_arrays(p, n.dim, m.dim))
    keep = np.ones(stack.shape[0], dtype=bool)
    for i in range(algebra.dim):
        lhs = np.einsum("ij,kjl->kil", n.module.actions[i].array, stack) % p
        rhs = np.einsum("kij,jl->kil", stack, m.module.actions[i].array) % p
        keep &= np.all(lhs == rhs, axis=(1, 2))
    lhs = np.einsum("kij,jl->kil", stack, m.kappa.array) % p
    rhs = np.einsum("ij,kjl->kil", n.kappa.array, stack) % p
    keep &= np.all(lhs == rhs, axis=(1, 2))
    return int(keep.sum())


def _log_power(value: int, p: int) -> int:
    exponent = 0
    while value > 1:
        if value % p:
            raise ValueError(f"count {value} is not a power of {p}")
        value //= p
        exponent += 1
    return exponent


def yoneda_admits(m: CartierModule, n: CartierModule) -> bool:
    return m.algebra.p == 2 and m.dim + n.dim <= 3


def yoneda_ext1_dimension(m: CartierModule, n: CartierModule) -> int:
    """Ext^1 by classifying short exact sequences 0 -> n -> E -> m -> 0.

    Middles are normalized to block upper-triangular form on n + m; the
    free off-diagonal data is enumerated, filtered by the module laws
    and semilinearity, and counted modulo the change-of-splitting
    translations.  Equivalence classes form an F_p-vector space, so the
    class count must be a power of p; its exponent is the dimension.
    """
    if not yoneda_admits(m, n):
        raise ValueError("Yoneda oracle guard: needs p = 2 and total dimension <= 3")
    algebra = m.algebra
    p = algebra.p
    d = algebra.dim
    dm, dn = m.dim, n.dim
    phi = frobenius(algebra).matrix.array
    rho_m = [a.array for a in m.module.actions]
    rho_n = [a.array for a in n.module.actions]
    kappa_m = m.kappa.array
    kappa_n = n.kappa.array
    dim_e = dn + dm

    def middle_action(lams: Sequence[np.ndarray], i: int) -> np.ndarray:
        out = np.zeros((dim_e, dim_e), dtype=np.int64)
        out[:dn, :dn] = rho_n[i]
        out[:dn, dn:] = lams[i]
        out[dn:, dn:] = rho_m[i]
        return out

    def middle_kappa(c: np.ndarray) -> np.ndarray:
        out = np.zeros((dim_e, dim_e), dtype=np.int64)
        out[:dn, :dn] = kappa_n
        out[:dn, dn:] = c
        out[dn:, dn:] = kappa_m
        return out

    lambda_choices = list(itertools.product(_all_arrays(p, dn, dm), repeat=d))
    c_choices = _all_arrays(p, dn, dm)

    valid: set[bytes] = set()
    for lams in lambda_choices:
        actions = [middle_action(lams, i) for i in range(d)]
        if not _module_laws_hold(algebra, actions, dim_e):
            continue
        twisted = []
        for i in range(d):
            acc = np.zeros((dim_e, dim_e), dtype=np.int64)
            for k in range(d):
                if phi[k, i]:
                    acc = (acc + phi[k, i] * actions[k]) % p
            twisted.append(acc)
        for c in c_choices:
            ke = middle_kappa(c)
            if all(
                np.array_equal((ke @ twisted[i]) % p, (actions[i] @ ke) % p)
                for i in range(d)
            ):
                key = b"".join(l.tobytes() for l in lams) + c.tobytes()
                valid.add(key)

    # translations from re-choosing the vector space splitting by h
    translations: set[bytes] = set()
    for h in _all_arrays(p, dn, dm):
        lam_shift = [((rho_n[i] @ h - h @ rho_m[i]) % p) for i in range(d)]
        c_shift = (kappa_n @ h - h @ kappa_m) % p
        translations.add(b"".join(l.tobytes() for l in lam_shift) + c_shift.tobytes())

    if not valid:
        raise ValueError("no extensions found; the split extension is always valid")
    if len(valid) % len(translations):
        raise ValueError("translation group does not act freely on the extensions")
    classes = len(valid) // len(translations)
    return _log_power(classes, p)
