"""Sparse multivariate polynomials with exact rational coefficients.

Just enough polynomial algebra for the group-law and vector-field
constructions: terms are kept in a dict from exponent tuples to Fractions,
indexed the same way the de Rham monomial bases are, so no conversion layer
is needed when assembling matrices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[e] = Fraction(c)

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def const(nvars: int, c) -> "Poly":
        c = Fraction(c)
        return Poly(nvars, {(0,) * nvars: c} if c else {})

    @staticmethod
    def var(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly(self.nvars)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.nvars, out)

    def diff(self, i: int) -> "Poly":
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return Poly(self.nvars, out)

    def eval(self, point: Sequence) -> Fraction:
        vals = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                for _ in range(k):
                    term *= x
            total += term
        return total

    def weighted_degree(self, weights: Sequence[int]) -> int:
        """Max weighted degree of the terms (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        return max(sum(k * w for k, w in zip(e, weights)) for e in self.terms)

    def is_weighted_homogeneous(self, weights: Sequence[int], degree: int) -> bool:
        return all(sum(k * w for k, w in zip(e, weights)) == degree for e in self.terms)

    def restrict_vars(self, keep: int) -> "Poly":
        """Drop trailing variables, requiring they never occur."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if any(e[keep:]):
                raise ValueError("polynomial involves dropped variables")
            out[e[:keep]] = c
        return Poly(keep, out)

    def set_zero_from(self, start: int) -> "Poly":
        """Substitute 0 for all variables from index `start` on."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if any(e[start:]):
                continue
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.nvars, out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}"
                            for i, k in enumerate(e) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


def monomials_up_to_weighted_degree(weights: Sequence[int], cap: int) -> list[Exponent]:
    """All exponent tuples of weighted degree <= cap, graded-lex ordered."""
    n = len(weights)
    out: list[Exponent] = []

    def rec(i: int, remaining: int, acc: list[int]):
        if i == n:
            out.append(tuple(acc))
            return
        w = weights[i]
        top = remaining // w
        for k in range(top + 1):
            acc.append(k)
            rec(i + 1, remaining - k * w, acc)
            acc.pop()

    rec(0, cap, [])
    out.sort(key=lambda e: (sum(k * w for k, w in zip(e, weights)), e))
    return out
