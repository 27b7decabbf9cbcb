"""Brute-force spectral sequence of the weight filtration.

Implemented straight from the textbook filtered-complex formulas
(Z = F^p cap d^{-1} F^{p+r}, pages as quotients of those), sharing nothing
with the spectral engine beyond the exact linear algebra layer.  Serves as
an independent oracle for page dimensions and differential ranks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    Matrix,
    Subspace,
    canonical_basis,
    kernel,
    subspace_sum,
    zero_subspace,
)
from .multicomplex import TotalComplex


@dataclass
class ClassicalPage:
    """dim E_r^{p,q} and rank d_r per (r, p, q); q = degree - p."""

    dims: dict[tuple[int, int, int], int]
    ranks: dict[tuple[int, int, int], int]

    def dim(self, r: int, p: int, q: int) -> int:
        return self.dims.get((r, p, q), 0)

    def rank(self, r: int, p: int, q: int) -> int:
        return self.ranks.get((r, p, q), 0)


class _FilteredComplex:
    def __init__(self, tc: TotalComplex):
        self.tc = tc
        self._zcache: dict[tuple[int, int, int], Subspace] = {}

    def dim(self, h: int) -> int:
        return self.tc.dims.get(h, 0)

    def filtration_columns(self, h: int, p: int) -> list[int]:
        """Coordinate indices of F^p inside the degree-h total space."""
        cols = []
        for (a, _b, off, d) in self.tc.layout.get(h, []):
            if a >= p:
                cols.extend(range(off, off + d))
        return cols

    def zspace(self, r: int, p: int, h: int) -> Subspace:
        """F^p cap Tot_h cap d^{-1}(F^{p+r}); r < 0 treated as r = 0."""
        r = max(r, 0)
        key = (r, p, h)
        if key in self._zcache:
            return self._zcache[key]
        n = self.dim(h)
        if n == 0:
            out = zero_subspace(0)
            self._zcache[key] = out
            return out
        cols = self.filtration_columns(h, p)
        if not cols:
            out = zero_subspace(n)
            self._zcache[key] = out
            return out
        D = self.tc.D.get(h)
        if D is None:
            bad_rows = []
        else:
            deep = set(self.filtration_columns(h + 1, p + r))
            bad_rows = [i for i in range(D.rows) if i not in deep]
        rows = []
        for i in bad_rows:
            rows.append([D.data[i][c] for c in cols])
        if rows:
            ker = kernel(Matrix(len(rows), len(cols), rows))
            small = ker.basis_rows()
        else:
            small = Matrix.identity(len(cols)).data
        big = []
        for v in small:
            w = [0] * n
            for c, x in zip(cols, v):
                w[c] = x
            big.append(w)
        out = canonical_basis(big, n)
        self._zcache[key] = out
        return out

    def boundary_image(self, r: int, p: int, h: int) -> Subspace:
        """d(Z_{r-1}^{p-r+1, deg h-1}) as a subspace of Tot_h."""
        n = self.dim(h)
        src = self.zspace(r - 1, p - r + 1, h - 1)
        D = self.tc.D.get(h - 1)
        if D is None or src.dim == 0:
            return zero_subspace(n)
        return canonical_basis([D.apply(v) for v in src.basis_rows()], n)


def classical_pages(tc: TotalComplex, r_max: int) -> ClassicalPage:
    """Exact page dimensions and differential ranks for r = 1..r_max."""
    fc = _FilteredComplex(tc)
    dims: dict[tuple[int, int, int], int] = {}
    ranks: dict[tuple[int, int, int], int] = {}
    weights = sorted({a for (a, _b) in tc.mc.spaces})

    def denominator(r: int, p: int, h: int) -> Subspace:
        return subspace_sum(fc.zspace(r - 1, p + 1, h), fc.boundary_image(r, p, h))

    for h in tc.degrees:
        for p in weights:
            if tc.block_offset(h, p) is None:
                continue
            for r in range(1, r_max + 1):
                z = fc.zspace(r, p, h)
                den = denominator(r, p, h)
                dims[(r, p, h - p)] = z.dim - den.dim
    for (r, p, q), d in list(dims.items()):
        h = p + q
        z = fc.zspace(r, p, h)
        D = tc.D.get(h)
        tgt_h = h + 1
        tgt_p = p + r
        if D is None or fc.dim(tgt_h) == 0:
            ranks[(r, p, q)] = 0
            continue
        img = canonical_basis([D.apply(v) for v in z.basis_rows()], fc.dim(tgt_h)) \
            if z.dim else zero_subspace(fc.dim(tgt_h))
        den_t = denominator(r, tgt_p, tgt_h)
        ranks[(r, p, q)] = subspace_sum(img, den_t).dim - den_t.dim
    page = ClassicalPage(dims, ranks)
    _check_page_recursion(page, tc, r_max)
    return page


def _check_page_recursion(page: ClassicalPage, tc: TotalComplex, r_max: int) -> None:
    """Self-consistency: dim E_{r+1} = dim E_r - rank(out) - rank(in)."""
    for (r, p, q), d in page.dims.items():
        if r + 1 > r_max or (r + 1, p, q) not in page.dims:
            continue
        out_rank = page.rank(r, p, q)
        in_rank = page.rank(r, p - r, q + r - 1)
        expected = d - out_rank - in_rank
        got = page.dim(r + 1, p, q)
        if got != expected:
            raise AssertionError(
                f"page recursion broken at r={r} (p,q)=({p},{q}): {got} != {expected}")


@dataclass
class ComparisonReport:
    mismatches: list[str]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if self.ok:
            return f"all pages match ({self.checked} cells)"
        return f"{len(self.mismatches)} mismatches:\n" + "\n".join(self.mismatches)


def compare(classical: ClassicalPage, ws, r_max: int) -> ComparisonReport:
    """Cross-check the spectral engine against the classical oracle.

    For every populated (r, p, k): dim Z_r - dim B_r must equal the classical
    page dimension, and the quotient rank of Delta_r the classical rank.
    """
    mismatches: list[str] = []
    checked = 0
    mc = ws.mc
    for (a, b) in mc.bidegrees():
        k = a + b
        for r in range(1, r_max + 1):
            zdim = ws.z_direct(r, a, k).dim
            bdim = ws.b_direct(r, a, k).dim
            expected = classical.dim(r, a, b)
            checked += 1
            if zdim - bdim != expected:
                mismatches.append(
                    f"dim E_{r} at (p,k)=({a},{k}): Z-B gives {zdim - bdim}, oracle {expected}")
            drank = ws.delta_rank(r, a, k)
            expected_rank = classical.rank(r, a, b)
            if drank != expected_rank:
                mismatches.append(
                    f"rank Delta_{r} at (p,k)=({a},{k}): {drank}, oracle {expected_rank}")
    return ComparisonReport(mismatches, checked)


def einfinity_totals(page: ClassicalPage, tc: TotalComplex, r_inf: int) -> dict[int, int]:
    """Sum of stable page dimensions per degree."""
    totals: dict[int, int] = {}
    for (r, p, q), d in page.dims.items():
        if r == r_inf and d:
            totals[p + q] = totals.get(p + q, 0) + d
    return totals
