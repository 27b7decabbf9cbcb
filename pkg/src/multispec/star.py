"""Hodge-star operator and star-conjugated adjoints for de Rham models.

The star acts monomial-wise: a covector monomial goes to its complement with
the permutation sign, the polynomial coefficient rides along, and the volume
form is the full ordered wedge.  delta_i and delta_c^i are constructed by
star conjugation with the dimension-dependent sign; for the weight-preserving
map this reproduces the transpose-based adjoint of the Hodge kit exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .carnot import DeRhamModel
from .hodge import HodgeKit
from .linalg import Matrix, Subspace, canonical_basis, dot
from .multicomplex import Bidegree
from .rumin import RuminOperators
from .spectral import SpectralWorkspace


@dataclass
class StarKit:
    model: DeRhamModel
    n: int                              # top form degree
    Q: int                              # weight of the volume form
    star_maps: dict[Bidegree, Matrix]   # C_{p,k-p} -> C_{Q-p, n-k-Q+p}
    vol_bidegree: Bidegree
    vol_index: int

    def star(self, a: int, b: int) -> Matrix:
        m = self.star_maps.get((a, b))
        if m is not None:
            return m
        ta, tb = self.star_bidegree(a, b)
        return Matrix.zeros(self.model.mc.dim(ta, tb), self.model.mc.dim(a, b))

    def star_bidegree(self, a: int, b: int) -> Bidegree:
        k = a + b
        return (self.Q - a, self.n - k - self.Q + a)

    def star_subspace(self, a: int, b: int, s: Subspace) -> Subspace:
        """Image of a subspace of C_{a,b} under the star map."""
        m = self.star(a, b)
        ta, tb = self.star_bidegree(a, b)
        amb = self.model.mc.dim(ta, tb)
        return canonical_basis([m.apply(v) for v in s.basis_rows()], amb)

    def adjoint_sign(self, k: int) -> Fraction:
        """(-1)^{n(k+1)+1} for an operator acting on degree-k elements."""
        return Fraction((-1) ** (self.n * (k + 1) + 1))

    def delta_i(self, i: int, a: int, b: int) -> Matrix:
        """delta_i = sign * star d_i star on C_{a,b}: weight -i, degree -1."""
        k = a + b
        sa, sb = self.star_bidegree(a, b)
        d = self.model.mc.dmat(i, sa, sb)
        star_back = self.star(sa + i, sb + 1 - i)
        sign = self.adjoint_sign(k)
        return star_back.mul(d).mul(self.star(a, b)).scale(sign)

    def delta_c_i(self, rum: RuminOperators, i: int, a: int, b: int) -> Matrix:
        """delta_c^i = sign * star d_c^i star, ambient matrices on C_{a,b}."""
        k = a + b
        sa, sb = self.star_bidegree(a, b)
        d = rum.dc_block_ambient(i, sa, sb)
        star_back = self.star(sa + i, sb + 1 - i)
        sign = self.adjoint_sign(k)
        return star_back.mul(d).mul(self.star(a, b)).scale(sign)


def _perm_sign(word) -> int:
    sign = 1
    items = list(word)
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            if items[a] > items[b]:
                sign = -sign
    return sign


def build_star(model: DeRhamModel) -> StarKit:
    """Star operator from the defining identity alpha wedge star(beta) = <alpha,beta> vol."""
    if not isinstance(model, DeRhamModel):
        raise TypeError("Hodge star needs a de Rham model with wedge structure")
    mc = model.mc
    n = model.n
    Q = model.Q
    full = tuple(range(n))
    star_maps: dict[Bidegree, Matrix] = {}
    for (a, b), elems in model.basis.items():
        k = a + b
        ta, tb = Q - a, n - k - Q + a
        tgt = model.basis.get((ta, tb), [])
        tindex = {e: i for i, e in enumerate(tgt)}
        m = Matrix.zeros(len(tgt), len(elems))
        for col, (alpha, I) in enumerate(elems):
            comp = tuple(i for i in full if i not in I)
            # theta_I wedge theta_comp = sign * vol
            sign = _perm_sign(list(I) + list(comp))
            row = tindex[(alpha, comp)]
            m.data[row][col] = Fraction(sign)
        star_maps[(a, b)] = m
    vol_bd = (Q, n - Q)
    vol_elem = ((0,) * model.spec.dim, full)
    vol_index = model.basis[vol_bd].index(vol_elem)
    return StarKit(model, n, Q, star_maps, vol_bd, vol_index)


@dataclass
class StarDualityReport:
    checked: list[tuple[int, int, int, int]]
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if self.ok:
            return f"star duality holds at all {len(self.checked)} computed stations"
        return (f"{len(self.mismatches)} station dualities fail "
                f"(of {len(self.checked)}):\n" + "\n".join(self.mismatches))


def check_star_duality(kit: StarKit, ws: SpectralWorkspace,
                       stations: Optional[list[tuple[int, int, int, int]]] = None
                       ) -> StarDualityReport:
    """Compare star images of E_{r1,r2} with E_{r2,r1} at dual spots.

    stations: list of (r1, r2, p, k); defaults to every station of every
    enumerated spectral complex.  Mismatches are listed, not raised: on
    polynomial truncations the transpose-based and star-conjugated adjoints
    of the derivative terms differ, so equality is a property to report.
    """
    if stations is None:
        chains, _ = ws.enumerate_spectral_complexes()
        seen = []
        for ch in chains:
            for st in ch.stations:
                item = (st.z_order, st.b_order, st.weight, st.degree)
                if item not in seen:
                    seen.append(item)
        stations = seen
    mismatches = []
    for (r1, r2, p, k) in stations:
        b = k - p
        left = kit.star_subspace(p, b, ws.e_jl(r1, r2, p, k))
        ta, tb = kit.star_bidegree(p, b)
        right = ws.e_jl(r2, r1, ta, ta + tb)
        if left != right:
            mismatches.append(
                f"*E_({r1},{r2})^({p},{b}) has dim {left.dim}, "
                f"E_({r2},{r1})^({ta},{tb}) has dim {right.dim}"
                + ("" if left.dim != right.dim else " (same dim, different spaces)"))
    return StarDualityReport(stations, mismatches)
