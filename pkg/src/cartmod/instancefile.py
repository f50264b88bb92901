"""Plain-text instance files: algebras, modules, structures, complexes.

One section per object, matrices row-major with ';' between rows, and
every parse or invariant failure reported with its section and line.
Algebras come either as explicit structure constants or through a
small monomial-quotient presentation front-end (one or two variables
whose relations admit a finite monomial basis by leading-term
elimination); anything richer must be entered as structure constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import AModule, FiniteAlgebra
from .cartier import CartierModule, FrobeniusModule
from .complexes import CARTIER, MODULE, BoundedComplex
from .linalg import PrimeField, PrimeFieldMatrix
from .perverse import Perversity


class InstanceError(ValueError):
    """Parse or invariant failure, located by section and line."""

    def __init__(self, message: str, section: Optional[str] = None, line: Optional[int] = None):
        location = []
        if section:
            location.append(f"section [{section}]")
        if line is not None:
            location.append(f"line {line}")
        prefix = ", ".join(location)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.section = section
        self.line = line


@dataclass
class ParsedInstance:
    algebra: FiniteAlgebra
    modules: dict[str, AModule] = field(default_factory=dict)
    cartier: dict[str, CartierModule] = field(default_factory=dict)
    frobenius: dict[str, FrobeniusModule] = field(default_factory=dict)
    complexes: dict[str, BoundedComplex] = field(default_factory=dict)
    perversities: dict[str, Perversity] = field(default_factory=dict)


@dataclass
class _Section:
    kind: str
    name: str
    line: int
    entries: list[tuple[int, str, str]] = field(default_factory=list)


_SECTION_RE = re.compile(r"^\[([a-z]+)(?:\s+(\S+))?\]$")


def _split_sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    current: Optional[_Section] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _SECTION_RE.match(line)
        if match:
            current = _Section(match.group(1), match.group(2) or "", line_no)
            sections.append(current)
            continue
        if current is None:
            raise InstanceError("content before the first section header", line=line_no)
        if "=" not in line:
            raise InstanceError(f"expected 'key = value', got {line!r}", current.kind, line_no)
        key, value = line.split("=", 1)
        current.entries.append((line_no, key.strip(), value.strip()))
    return sections


def _parse_ints(value: str, where: _Section, line: int) -> list[int]:
    try:
        return [int(tok) for tok in value.split()]
    except ValueError:
        raise InstanceError(f"expected integers, got {value!r}", where.kind, line)


def _parse_matrix(value: str, rows: int, cols: int, fieldp: PrimeField, where: _Section, line: int) -> PrimeFieldMatrix:
    row_chunks = [chunk for chunk in value.split(";")] if value.strip() else []
    if rows == 0 or cols == 0:
        if value.strip():
            raise InstanceError("expected an empty matrix", where.kind, line)
        return PrimeFieldMatrix.zeros(fieldp, rows, cols)
    entries = []
    if len(row_chunks) == 1 and rows > 1:
        flat = _parse_ints(row_chunks[0], where, line)
        if len(flat) != rows * cols:
            raise InstanceError(
                f"matrix needs {rows * cols} entries ({rows}x{cols}), got {len(flat)}", where.kind, line
            )
        arr = np.array(flat, dtype=np.int64).reshape(rows, cols)
        return PrimeFieldMatrix(fieldp, arr)
    if len(row_chunks) != rows:
        raise InstanceError(f"matrix needs {rows} rows, got {len(row_chunks)}", where.kind, line)
    for chunk in row_chunks:
        row = _parse_ints(chunk, where, line)
        if len(row) != cols:
            raise InstanceError(f"matrix row needs {cols} entries, got {len(row)}", where.kind, line)
        entries.append(row)
    return PrimeFieldMatrix.from_rows(fieldp, entries)


# -- polynomial presentations ---------------------------------------------------------


_TOKEN_RE = re.compile(r"\s*([A-Za-z]\w*|\d+|[\^\*\+\-])")


def _parse_polynomial(text: str, variables: list[str], p: int, where: _Section, line: int) -> dict[tuple[int, ...], int]:
    """Parse a sum of terms like 2*x^2*y + x + 1 into {exponents: coeff}."""
    poly: dict[tuple[int, ...], int] = {}
    text = text.strip()
    pos = 0
    sign = 1
    tokens: list[str] = []
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise InstanceError(f"cannot tokenize polynomial near {text[pos:]!r}", where.kind, line)
        tokens.append(match.group(1))
        pos = match.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    idx = 0

    def term() -> tuple[tuple[int, ...], int]:
        nonlocal idx
        coeff = 1
        expo = [0] * len(variables)
        expect_factor = True
        while idx < len(tokens):
            tok = tokens[idx]
            if tok in "+-" and not expect_factor:
                break
            if tok == "*":
                idx += 1
                expect_factor = True
                continue
            if tok.isdigit():
                coeff = (coeff * int(tok)) % p
                idx += 1
                expect_factor = False
                continue
            if re.match(r"^[A-Za-z]\w*$", tok):
                if tok not in variables:
                    raise InstanceError(f"unknown variable {tok!r}", where.kind, line)
                power = 1
                idx += 1
                if idx < len(tokens) and tokens[idx] == "^":
                    idx += 1
                    if idx >= len(tokens) or not tokens[idx].isdigit():
                        raise InstanceError("expected an integer exponent after '^'", where.kind, line)
                    power = int(tokens[idx])
                    idx += 1
                expo[variables.index(tok)] += power
                expect_factor = False
                continue
            raise InstanceError(f"unexpected token {tok!r} in polynomial", where.kind, line)
        return tuple(expo), coeff

    while idx < len(tokens):
        tok = tokens[idx]
        if tok == "+":
            sign = 1
            idx += 1
            continue
        if tok == "-":
            sign = -1
            idx += 1
            continue
        mono, coeff = term()
        poly[mono] = (poly.get(mono, 0) + sign * coeff) % p
        sign = 1
    return {m: c for m, c in poly.items() if c}


def _deglex_key(mono: tuple[int, ...]) -> tuple:
    return (sum(mono), mono)


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _mono_div(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def algebra_from_presentation(p: int, spec: str, where: _Section, line: int) -> FiniteAlgebra:
    """Monomial-quotient presentation: 'vars ; relation ; relation ...'."""
    fieldp = PrimeField(p)
    segments = [seg.strip() for seg in spec.split(";")]
    if len(segments) < 2:
        raise InstanceError("presentation needs 'variables ; relations'", where.kind, line)
    variables = segments[0].split()
    if not 1 <= len(variables) <= 2:
        raise InstanceError("presentations support one or two variables", where.kind, line)
    if len(set(variables)) != len(variables):
        raise InstanceError("duplicate variable names", where.kind, line)

    rules: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {}
    for segment in segments[1:]:
        if not segment:
            continue
        if "=" in segment:
            lhs_text, rhs_text = segment.split("=", 1)
            poly = _parse_polynomial(lhs_text, variables, p, where, line)
            for mono, coeff in _parse_polynomial(rhs_text, variables, p, where, line).items():
                poly[mono] = (poly.get(mono, 0) - coeff) % p
            poly = {m: c for m, c in poly.items() if c}
        else:
            poly = _parse_polynomial(segment, variables, p, where, line)
        if not poly:
            raise InstanceError("relation reduces to 0 = 0", where.kind, line)
        lead = max(poly, key=_deglex_key)
        lead_coeff = poly[lead]
        inv = pow(lead_coeff, -1, p)
        rest = {m: (-c * inv) % p for m, c in poly.items() if m != lead}
        if any(_deglex_key(m) >= _deglex_key(lead) for m in rest):
            raise InstanceError("relation has no strict leading term", where.kind, line)
        rules[lead] = rest

    for v_index, v_name in enumerate(variables):
        if not any(
            all(e == 0 for i, e in enumerate(lead) if i != v_index) and lead[v_index] > 0
            for lead in rules
        ):
            raise InstanceError(
                f"no pure-power relation bounds variable {v_name!r}; "
                "enter this algebra by structure constants",
                where.kind,
                line,
            )

    def reducible(mono: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        for lead in rules:
            if _divides(lead, mono):
                return lead
        return None

    def reduce(poly: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int]:
        work = dict(poly)
        for _ in range(10000):
            target = None
            for mono in sorted(work, key=_deglex_key, reverse=True):
                if work[mono] and reducible(mono):
                    target = mono
                    break
            if target is None:
                return {m: c for m, c in work.items() if c}
            lead = reducible(target)
            assert lead is not None
            quotient = _mono_div(target, lead)
            coeff = work.pop(target)
            for mono, c in rules[lead].items():
                lifted = _mono_mul(mono, quotient)
                work[lifted] = (work.get(lifted, 0) + coeff * c) % p
        raise InstanceError("relation rewriting did not terminate", where.kind, line)

    bounds = []
    for v_index in range(len(variables)):
        pure = [
            lead[v_index]
            for lead in rules
            if lead[v_index] > 0 and all(e == 0 for i, e in enumerate(lead) if i != v_index)
        ]
        bounds.append(min(pure))
    basis = []
    from itertools import product as iproduct

    for expo in iproduct(*(range(b) for b in bounds)):
        if reducible(expo) is None:
            basis.append(expo)
    basis.sort(key=_deglex_key)
    if len(basis) > 64:
        raise InstanceError("monomial basis has more than 64 elements", where.kind, line)
    index = {mono: i for i, mono in enumerate(basis)}

    d = len(basis)
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            reduced = reduce({_mono_mul(a, b): 1})
            for mono, coeff in reduced.items():
                if mono not in index:
                    raise InstanceError(
                        "product leaves the monomial basis; relations are inconsistent",
                        where.kind,
                        line,
                    )
                table[i, j, index[mono]] = coeff
    unit = [0] * d
    unit[index[tuple(0 for _ in variables)]] = 1

    def label(mono: tuple[int, ...]) -> str:
        if all(e == 0 for e in mono):
            return "1"
        parts = []
        for v_name, e in zip(variables, mono):
            if e == 1:
                parts.append(v_name)
            elif e > 1:
                parts.append(f"{v_name}^{e}")
        return "*".join(parts)

    try:
        return FiniteAlgebra(fieldp, table, unit, labels=[label(m) for m in basis], name=f"F{p}<{spec}>")
    except ValueError as exc:
        raise InstanceError(f"presented algebra is invalid: {exc}", where.kind, line)


# -- section assembly --------------------------------------------------------------------


def _entry_map(section: _Section) -> dict[str, tuple[int, str]]:
    out = {}
    for line_no, key, value in section.entries:
        if key in out:
            raise InstanceError(f"duplicate key {key!r}", section.kind, line_no)
        out[key] = (line_no, value)
    return out


def _require(entries: dict, key: str, section: _Section) -> tuple[int, str]:
    if key not in entries:
        raise InstanceError(f"missing required key {key!r}", section.kind, section.line)
    return entries[key]


def _build_algebra(section: _Section) -> FiniteAlgebra:
    entries = _entry_map(section)
    line_p, value_p = _require(entries, "p", section)
    try:
        p = int(value_p)
    except ValueError:
        raise InstanceError(f"p must be an integer, got {value_p!r}", section.kind, line_p)
    try:
        fieldp = PrimeField(p)
    except ValueError as exc:
        raise InstanceError(str(exc), section.kind, line_p)

    if "presentation" in entries:
        line_pres, pres = entries["presentation"]
        return algebra_from_presentation(p, pres, section, line_pres)

    line_dim, value_dim = _require(entries, "dim", section)
    dim = int(value_dim)
    unit_line, unit_value = _require(entries, "unit", section)
    unit = _parse_ints(unit_value, section, unit_line)
    if len(unit) != dim:
        raise InstanceError(f"unit needs {dim} coordinates", section.kind, unit_line)
    labels = None
    if "labels" in entries:
        labels = entries["labels"][1].split()
        if len(labels) != dim:
            raise InstanceError(f"need {dim} labels", section.kind, entries["labels"][0])
    table = np.zeros((dim, dim, dim), dtype=np.int64)
    seen = set()
    for line_no, key, value in section.entries:
        if not key.startswith("mul"):
            continue
        parts = key.split()
        if len(parts) != 3:
            raise InstanceError(f"expected 'mul i j', got {key!r}", section.kind, line_no)
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError:
            raise InstanceError(f"mul indices must be integers in {key!r}", section.kind, line_no)
        if not (0 <= i < dim and 0 <= j < dim):
            raise InstanceError(f"mul indices out of range in {key!r}", section.kind, line_no)
        coords = _parse_ints(value, section, line_no)
        if len(coords) != dim:
            raise InstanceError(f"product needs {dim} coordinates", section.kind, line_no)
        table[i, j] = coords
        table[j, i] = coords
        seen.add((min(i, j), max(i, j)))
    for i in range(dim):
        for j in range(i, dim):
            if (i, j) not in seen:
                raise InstanceError(f"missing product 'mul {i} {j}'", section.kind, section.line)
    try:
        return FiniteAlgebra(fieldp, table, unit, labels=labels, name=section.name or "A")
    except ValueError as exc:
        raise InstanceError(str(exc), section.kind, section.line)


def _build_module(section: _Section, algebra: FiniteAlgebra) -> AModule:
    entries = _entry_map(section)
    line_dim, value_dim = _require(entries, "dim", section)
    dim = int(value_dim)
    actions: list[Optional[PrimeFieldMatrix]] = [None] * algebra.dim
    for line_no, key, value in section.entries:
        if not key.startswith("action"):
            continue
        parts = key.split()
        if len(parts) != 2:
            raise InstanceError(f"expected 'action i', got {key!r}", section.kind, line_no)
        i = int(parts[1])
        if not 0 <= i < algebra.dim:
            raise InstanceError(
                f"action index {i} out of range for algebra of dimension {algebra.dim}",
                section.kind,
                line_no,
            )
        actions[i] = _parse_matrix(value, dim, dim, algebra.field, section, line_no)
    for i, a in enumerate(actions):
        if a is None:
            raise InstanceError(f"missing 'action {i}' ({algebra.labels[i]})", section.kind, section.line)
    try:
        return AModule(algebra, actions)
    except ValueError as exc:
        raise InstanceError(str(exc), section.kind, section.line)


def parse_instance(text: str) -> ParsedInstance:
    sections = _split_sections(text)
    algebra_sections = [s for s in sections if s.kind == "algebra"]
    if len(algebra_sections) != 1:
        raise InstanceError(f"need exactly one [algebra] section, found {len(algebra_sections)}")
    algebra = _build_algebra(algebra_sections[0])
    instance = ParsedInstance(algebra=algebra)

    for section in sections:
        if section.kind == "algebra":
            continue
        if not section.name and section.kind != "algebra":
            raise InstanceError("section needs a name", section.kind, section.line)
        if section.kind == "module":
            instance.modules[section.name] = _build_module(section, algebra)
        elif section.kind in ("cartier", "frobenius"):
            entries = _entry_map(section)
            line_mod, mod_name = _require(entries, "module", section)
            if mod_name not in instance.modules:
                raise InstanceError(f"unknown module {mod_name!r}", section.kind, line_mod)
            module = instance.modules[mod_name]
            key = "kappa" if section.kind == "cartier" else "tau"
            line_mat, value = _require(entries, key, section)
            matrix = _parse_matrix(value, module.dim, module.dim, algebra.field, section, line_mat)
            try:
                if section.kind == "cartier":
                    instance.cartier[section.name] = CartierModule(module, matrix)
                else:
                    instance.frobenius[section.name] = FrobeniusModule(module, matrix)
            except ValueError as exc:
                raise InstanceError(str(exc), section.kind, line_mat)
        elif section.kind == "complex":
            instance.complexes[section.name] = _build_complex(section, instance)
        elif section.kind == "perversity":
            entries = _entry_map(section)
            line_vals, value = _require(entries, "values", section)
            values = _parse_ints(value, section, line_vals)
            try:
                instance.perversities[section.name] = Perversity(algebra, tuple(values))
            except ValueError as exc:
                raise InstanceError(str(exc), section.kind, line_vals)
        else:
            raise InstanceError(f"unknown section kind {section.kind!r}", section.kind, section.line)
    return instance


def _build_complex(section: _Section, instance: ParsedInstance) -> BoundedComplex:
    from .cartier import CartierMorphism
    from .algebra import AModuleMap

    entries = _entry_map(section)
    line_ctx, context = _require(entries, "context", section)
    if context not in (MODULE, CARTIER):
        raise InstanceError(f"context must be 'module' or 'cartier', got {context!r}", section.kind, line_ctx)
    line_lower, value_lower = _require(entries, "lower", section)
    lower = int(value_lower)
    line_objs, names_value = _require(entries, "objects", section)
    names = names_value.split()
    pool = instance.modules if context == MODULE else instance.cartier
    objects = []
    for name in names:
        if name not in pool:
            raise InstanceError(f"unknown {context} object {name!r}", section.kind, line_objs)
        objects.append(pool[name])
    diffs_by_degree: dict[int, tuple[int, str]] = {}
    for line_no, key, value in section.entries:
        if not key.startswith("d "):
            continue
        degree = int(key.split()[1])
        diffs_by_degree[degree] = (line_no, value)
    algebra = instance.algebra
    diffs = []
    for n in range(lower + 1, lower + len(objects)):
        if n not in diffs_by_degree:
            raise InstanceError(f"missing differential 'd {n}'", section.kind, section.line)
        line_no, value = diffs_by_degree[n]
        src = objects[n - lower]
        tgt = objects[n - lower - 1]
        matrix = _parse_matrix(value, tgt.dim, src.dim, algebra.field, section, line_no)
        try:
            if context == MODULE:
                diffs.append(AModuleMap(src, tgt, matrix))
            else:
                diffs.append(CartierMorphism(src, tgt, matrix))
        except ValueError as exc:
            raise InstanceError(str(exc), section.kind, line_no)
    try:
        return BoundedComplex(context, lower, objects, diffs)
    except ValueError as exc:
        raise InstanceError(str(exc), section.kind, section.line)


def load_instance(path: str) -> ParsedInstance:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())
