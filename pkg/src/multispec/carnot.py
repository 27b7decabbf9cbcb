"""Carnot-group frontend: stratified Lie algebras to truncated multicomplexes.

From structure constants and layer weights this builds the polynomial group
law in exponential coordinates (Dynkin's form of the BCH series, exact for
nilpotent algebras), the left-invariant vector fields, and the de Rham
complex with polynomial coefficients truncated at a weighted degree D.  The
weight-preserving part of d is the Chevalley-Eilenberg differential; the
weight-w parts differentiate coefficients along the layer-w fields.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import Matrix, format_scalar, parse_scalar
from .multicomplex import Bidegree, MulticomplexData
from .polynomials import Exponent, Poly, monomials_up_to_weighted_degree


@dataclass(frozen=True)
class CarnotAlgebraSpec:
    """Structure constants (0-based, i < j), layer weights, truncation degree."""

    dim: int
    weights: tuple[int, ...]
    brackets: dict[tuple[int, int], dict[int, Fraction]]
    poly_degree: int

    def bracket_coeffs(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def step(self) -> int:
        return max(self.weights) if self.weights else 1

    def volume_weight(self) -> int:
        return sum(self.weights)


@dataclass
class LieValidationReport:
    errors: list[str]

    @property
    def valid(self) -> bool:
        return not self.errors

    def summary(self) -> str:
        return "valid" if self.valid else "\n".join(self.errors)


def validate_lie(spec: CarnotAlgebraSpec) -> LieValidationReport:
    errors: list[str] = []
    n = spec.dim
    if len(spec.weights) != n:
        errors.append("weights length differs from dim")
        return LieValidationReport(errors)
    if any(w <= 0 for w in spec.weights):
        errors.append("weights must be positive")
    if list(spec.weights) != sorted(spec.weights):
        errors.append("weights must be nondecreasing")
    for (i, j), table in sorted(spec.brackets.items()):
        if not (0 <= i < j < n):
            errors.append(f"bracket indices ({i + 1},{j + 1}) out of range or not i<j")
            continue
        for k, c in table.items():
            if not (0 <= k < n):
                errors.append(f"bracket target {k + 1} out of range")
            elif c and spec.weights[k] != spec.weights[i] + spec.weights[j]:
                errors.append(
                    f"grading broken: [X{i + 1},X{j + 1}] hits X{k + 1} but "
                    f"w({k + 1}) != w({i + 1})+w({j + 1})")
    if errors:
        return LieValidationReport(errors)

    def ad(i: int, v: dict[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for j, c in v.items():
            for k, ck in spec.bracket_coeffs(i, j).items():
                out[k] = out.get(k, Fraction(0)) + c * ck
        return {k: c for k, c in out.items() if c}

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: dict[int, Fraction] = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = spec.bracket_coeffs(a, b)
                    for m, cm in ad(c, inner).items():
                        acc[m] = acc.get(m, Fraction(0)) - cm
                    # [[X_a, X_b], X_c] = -[X_c, [X_a, X_b]]
                if any(acc.values()):
                    errors.append(f"Jacobi fails on triple ({i + 1},{j + 1},{k + 1})")
    return LieValidationReport(errors)


# ---------------------------------------------------------------------------
# BCH group law and left-invariant fields
# ---------------------------------------------------------------------------

def _bracket_poly(spec: CarnotAlgebraSpec, u: list[Poly], v: list[Poly]) -> list[Poly]:
    n = spec.dim
    nv = u[0].nvars
    out = [Poly.zero(nv) for _ in range(n)]
    for (i, j), table in spec.brackets.items():
        mixed = u[i] * v[j] - u[j] * v[i]
        if mixed.is_zero():
            continue
        for k, c in table.items():
            if c:
                out[k] = out[k] + mixed.scale(c)
    return out


def _compositions(step: int):
    """Sequences ((p_1,q_1),...,(p_n,q_n)), p_i+q_i >= 1, total degree <= step."""
    blocks = [(p, q) for p in range(step + 1) for q in range(step + 1) if p + q >= 1]

    def rec(remaining: int, acc: list[tuple[int, int]]):
        if acc:
            yield list(acc)
        for (p, q) in blocks:
            if p + q <= remaining:
                acc.append((p, q))
                yield from rec(remaining - p - q, acc)
                acc.pop()

    yield from rec(step, [])


@dataclass
class GroupLaw:
    """Polynomial product in exponential coordinates: z = law(x, y)."""

    spec: CarnotAlgebraSpec
    components: list[Poly]  # polynomials in (x_1..x_n, y_1..y_n)

    def multiply(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        point = [Fraction(v) for v in x] + [Fraction(v) for v in y]
        return tuple(z.eval(point) for z in self.components)

    def inverse(self, x: Sequence) -> tuple[Fraction, ...]:
        return tuple(-Fraction(v) for v in x)


def bch_group_law(spec: CarnotAlgebraSpec) -> GroupLaw:
    """Dynkin's BCH series, truncated at the nilpotency step (hence exact)."""
    n = spec.dim
    nv = 2 * n
    step = spec.step()
    x = [Poly.var(nv, i) for i in range(n)]
    y = [Poly.var(nv, n + i) for i in range(n)]
    out = [Poly.zero(nv) for _ in range(n)]
    for comp in _compositions(step):
        nblocks = len(comp)
        total = sum(p + q for (p, q) in comp)
        word: list[list[Poly]] = []
        for (p, q) in comp:
            word.extend([x] * p)
            word.extend([y] * q)
        vec = word[-1]
        for letter in reversed(word[:-1]):
            vec = _bracket_poly(spec, letter, vec)
            if all(c.is_zero() for c in vec):
                break
        if all(c.is_zero() for c in vec):
            continue
        denom = nblocks * total
        for (p, q) in comp:
            denom *= math.factorial(p) * math.factorial(q)
        coeff = Fraction((-1) ** (nblocks - 1), denom)
        for k in range(n):
            if not vec[k].is_zero():
                out[k] = out[k] + vec[k].scale(coeff)
    return GroupLaw(spec, out)


def left_invariant_fields(spec: CarnotAlgebraSpec,
                          law: Optional[GroupLaw] = None) -> list[list[Poly]]:
    """fields[i][k] is the coefficient of the k-th coordinate derivative in X_i."""
    if law is None:
        law = bch_group_law(spec)
    n = spec.dim
    fields: list[list[Poly]] = []
    for i in range(n):
        row = []
        for k in range(n):
            j = law.components[k].diff(n + i).set_zero_from(n)
            row.append(j.restrict_vars(n))
        fields.append(row)
    return fields


def apply_field(field: list[Poly], f: Poly) -> Poly:
    out = Poly.zero(f.nvars)
    for k, coeff in enumerate(field):
        if coeff.is_zero():
            continue
        df = f.diff(k)
        if not df.is_zero():
            out = out + coeff * df
    return out


def field_bracket(fields: list[list[Poly]], i: int, j: int) -> list[Poly]:
    """[X_i, X_j] as a derivation: its coordinate coefficients."""
    n = len(fields)
    out = []
    for m in range(n):
        out.append(apply_field(fields[i], fields[j][m]) - apply_field(fields[j], fields[i][m]))
    return out


# ---------------------------------------------------------------------------
# Polynomial de Rham multicomplex
# ---------------------------------------------------------------------------

def _sort_with_sign(word: Sequence[int]) -> tuple[Optional[tuple[int, ...]], int]:
    """Sort covector indices; None when repeated (wedge vanishes)."""
    items = list(word)
    if len(set(items)) != len(items):
        return None, 0
    sign = 1
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a] > items[b]:
                sign = -sign
    return tuple(sorted(items)), sign


@dataclass
class DeRhamModel:
    """Truncated polynomial de Rham complex of a Carnot group."""

    spec: CarnotAlgebraSpec
    law: GroupLaw
    fields: list[list[Poly]]
    mc: MulticomplexData
    basis: dict[Bidegree, list[tuple[Exponent, tuple[int, ...]]]]
    monomials: list[Exponent]

    @property
    def n(self) -> int:
        return self.spec.dim

    @property
    def Q(self) -> int:
        return self.spec.volume_weight()

    def monomial_count(self) -> int:
        return len(self.monomials)

    def basis_index(self, a: int, b: int) -> dict[tuple[Exponent, tuple[int, ...]], int]:
        return {elem: idx for idx, elem in enumerate(self.basis[(a, b)])}


def _covector_label(I: tuple[int, ...], n: int) -> str:
    if not I:
        return "1"
    if n <= 9:
        return "t" + "".join(str(i + 1) for i in I)
    return "t(" + ",".join(str(i + 1) for i in I) + ")"


def _monomial_label(e: Exponent) -> str:
    bits = [f"x{i + 1}" + (f"^{k}" if k > 1 else "")
            for i, k in enumerate(e) if k]
    return "*".join(bits) if bits else "1"


def polynomial_derham(spec: CarnotAlgebraSpec) -> DeRhamModel:
    report = validate_lie(spec)
    if not report.valid:
        raise ValueError("invalid Lie algebra spec:\n" + report.summary())
    n = spec.dim
    D = spec.poly_degree
    law = bch_group_law(spec)
    fields = left_invariant_fields(spec, law)
    monomials = monomials_up_to_weighted_degree(spec.weights, D)

    subsets_by_bidegree: dict[Bidegree, list[tuple[int, ...]]] = {}
    all_subsets: list[tuple[int, ...]] = [()]
    for i in range(n):
        all_subsets = all_subsets + [s + (i,) for s in all_subsets]
    for I in sorted(all_subsets, key=lambda s: (len(s), s)):
        a = sum(spec.weights[i] for i in I)
        b = len(I) - a
        subsets_by_bidegree.setdefault((a, b), []).append(tuple(I))

    basis: dict[Bidegree, list[tuple[Exponent, tuple[int, ...]]]] = {}
    spaces: dict[Bidegree, int] = {}
    labels: dict[Bidegree, tuple[str, ...]] = {}
    for bd, subsets in sorted(subsets_by_bidegree.items()):
        elems = [(alpha, I) for I in subsets for alpha in monomials]
        basis[bd] = elems
        spaces[bd] = len(elems)
        labels[bd] = tuple(
            f"{_monomial_label(alpha)}.{_covector_label(I, n)}" for (alpha, I) in elems)

    index: dict[Bidegree, dict[tuple[Exponent, tuple[int, ...]], int]] = {
        bd: {elem: i for i, elem in enumerate(elems)} for bd, elems in basis.items()}

    maps: dict[tuple[int, int, int], Matrix] = {}

    def add_entry(i_order: int, src_bd: Bidegree, row: int, col: int, value: Fraction):
        tgt_bd = (src_bd[0] + i_order, src_bd[1] + 1 - i_order)
        key = (i_order, src_bd[0], src_bd[1])
        m = maps.get(key)
        if m is None:
            m = Matrix.zeros(spaces.get(tgt_bd, 0), spaces[src_bd])
            maps[key] = m
        m.data[row][col] += value

    # d_0: Chevalley-Eilenberg part, polynomial-linear
    for bd, elems in basis.items():
        tgt_bd = (bd[0], bd[1] + 1)
        if spaces.get(tgt_bd, 0) == 0:
            continue
        tindex = index[tgt_bd]
        for col, (alpha, I) in enumerate(elems):
            for t, it in enumerate(I):
                for (u, v), table in spec.brackets.items():
                    c = table.get(it)
                    if not c:
                        continue
                    word = list(I[:t]) + [u, v] + list(I[t + 1:])
                    sorted_word, sgn = _sort_with_sign(word)
                    if sorted_word is None:
                        continue
                    coeff = Fraction((-1) ** t) * (-c) * sgn
                    row = tindex[(alpha, sorted_word)]
                    add_entry(0, bd, row, col, coeff)

    # d_w (w >= 1): coefficient derivative along the layer-w fields
    for bd, elems in basis.items():
        for j in range(n):
            w = spec.weights[j]
            tgt_bd = (bd[0] + w, bd[1] + 1 - w)
            if spaces.get(tgt_bd, 0) == 0:
                continue
            tindex = index[tgt_bd]
            for col, (alpha, I) in enumerate(elems):
                if j in I:
                    continue
                word = [j] + list(I)
                sorted_word, sgn = _sort_with_sign(word)
                if sorted_word is None:
                    continue
                mono = Poly(n, {alpha: Fraction(1)})
                derived = apply_field(fields[j], mono)
                if derived.is_zero():
                    continue
                for gamma, q in derived.terms.items():
                    row = tindex[(gamma, sorted_word)]
                    add_entry(w, bd, row, col, q * sgn)

    maps = {k: m for k, m in maps.items() if not m.is_zero()}
    mc = MulticomplexData(
        Q=spec.volume_weight(),
        s=spec.step() + 1,
        spaces={bd: d for bd, d in spaces.items() if d > 0},
        maps=maps,
        labels=labels,
    )
    return DeRhamModel(spec, law, fields, mc, basis, monomials)


# ---------------------------------------------------------------------------
# Catalog and JSON interchange
# ---------------------------------------------------------------------------

def catalog(name: str, poly_degree: int = 3) -> CarnotAlgebraSpec:
    """Standard examples: heisenberg1, heisenberg2, engel, abelian-n, step2-free-2."""
    one = Fraction(1)
    if name == "engel":
        return CarnotAlgebraSpec(
            4, (1, 1, 2, 3), {(0, 1): {2: one}, (0, 2): {3: one}}, poly_degree)
    if name == "heisenberg1" or name == "step2-free-2":
        return CarnotAlgebraSpec(3, (1, 1, 2), {(0, 1): {2: one}}, poly_degree)
    if name == "heisenberg2":
        return CarnotAlgebraSpec(
            5, (1, 1, 1, 1, 2), {(0, 1): {4: one}, (2, 3): {4: one}}, poly_degree)
    if name.startswith("abelian-"):
        try:
            n = int(name.split("-", 1)[1])
        except ValueError:
            raise ValueError(f"unknown catalog name: {name}") from None
        if n < 1:
            raise ValueError("abelian-n needs n >= 1")
        return CarnotAlgebraSpec(n, (1,) * n, {}, poly_degree)
    raise ValueError(f"unknown catalog name: {name}")


CATALOG_NAMES = ("heisenberg1", "heisenberg2", "engel", "abelian-n", "step2-free-2")


def algebra_to_json(spec: CarnotAlgebraSpec) -> str:
    brackets = []
    for (i, j), table in sorted(spec.brackets.items()):
        for k, c in sorted(table.items()):
            if c:
                brackets.append({"i": i + 1, "j": j + 1, "k": k + 1,
                                 "c": format_scalar(c)})
    doc = {"dim": spec.dim, "weights": list(spec.weights),
           "brackets": brackets, "poly_degree": spec.poly_degree}
    return json.dumps(doc, indent=1, sort_keys=True)


def algebra_from_dict(doc: dict) -> CarnotAlgebraSpec:
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for br in doc.get("brackets", []):
        i, j, k = int(br["i"]) - 1, int(br["j"]) - 1, int(br["k"]) - 1
        c = parse_scalar(str(br["c"]))
        brackets.setdefault((i, j), {})[k] = c
    return CarnotAlgebraSpec(
        dim=int(doc["dim"]),
        weights=tuple(int(w) for w in doc["weights"]),
        brackets=brackets,
        poly_degree=int(doc["poly_degree"]),
    )


def algebra_from_json(text: str) -> CarnotAlgebraSpec:
    return algebra_from_dict(json.loads(text))
