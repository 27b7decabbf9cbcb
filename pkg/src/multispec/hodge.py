"""Algebraic Hodge theory for the weight-preserving differential.

For a validated multicomplex this builds, per bidegree, the transpose
delta_0 of d_0 (the bases are declared orthonormal), the Laplacian
box_0 = d_0 delta_0 + delta_0 d_0, the partial inverse d_0^{-1}, the
orthogonal projection pi_0 onto ker box_0, and the harmonic subspaces
e_0 = ker d_0 cap ker delta_0 underlying everything in the spectral engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .linalg import Matrix, Subspace, kernel, pinv, vec_sub, zero_subspace
from .multicomplex import Bidegree, MulticomplexData


@dataclass
class HodgeKit:
    mc: MulticomplexData
    delta0_maps: dict[Bidegree, Matrix]
    d0inv_maps: dict[Bidegree, Matrix]
    pi0_maps: dict[Bidegree, Matrix]
    box0_maps: dict[Bidegree, Matrix]
    e0_spaces: dict[Bidegree, Subspace]

    def d0(self, a: int, b: int) -> Matrix:
        return self.mc.dmat(0, a, b)

    def delta0(self, a: int, b: int) -> Matrix:
        m = self.delta0_maps.get((a, b))
        return m if m is not None else Matrix.zeros(self.mc.dim(a, b - 1), self.mc.dim(a, b))

    def d0inv(self, a: int, b: int) -> Matrix:
        m = self.d0inv_maps.get((a, b))
        return m if m is not None else Matrix.zeros(self.mc.dim(a, b - 1), self.mc.dim(a, b))

    def pi0(self, a: int, b: int) -> Matrix:
        m = self.pi0_maps.get((a, b))
        return m if m is not None else Matrix.identity(self.mc.dim(a, b))

    def box0(self, a: int, b: int) -> Matrix:
        m = self.box0_maps.get((a, b))
        n = self.mc.dim(a, b)
        return m if m is not None else Matrix.zeros(n, n)

    def e0(self, a: int, b: int) -> Subspace:
        s = self.e0_spaces.get((a, b))
        return s if s is not None else zero_subspace(self.mc.dim(a, b))

    def e0_dims_by_degree(self) -> dict[int, dict[int, int]]:
        """degree -> {weight: dim e0} for the populated harmonic spots."""
        out: dict[int, dict[int, int]] = {}
        for (a, b), s in sorted(self.e0_spaces.items()):
            if s.dim:
                out.setdefault(a + b, {})[a] = s.dim
        return out


def build_hodge_kit(mc: MulticomplexData) -> HodgeKit:
    delta0: dict[Bidegree, Matrix] = {}
    d0inv: dict[Bidegree, Matrix] = {}
    pi0: dict[Bidegree, Matrix] = {}
    box0: dict[Bidegree, Matrix] = {}
    e0: dict[Bidegree, Subspace] = {}
    for (a, b) in mc.bidegrees():
        d_here = mc.dmat(0, a, b)          # C_{a,b}   -> C_{a,b+1}
        d_below = mc.dmat(0, a, b - 1)     # C_{a,b-1} -> C_{a,b}
        delta0[(a, b)] = d_below.transpose()
        inv_here = pinv(d_below)           # C_{a,b}   -> C_{a,b-1}
        d0inv[(a, b)] = inv_here
        n = mc.dim(a, b)
        ident = Matrix.identity(n)
        # pi_0 = Id - d_0^{-1} d_0 - d_0 d_0^{-1}
        up_then_back = pinv(d_here).mul(d_here) if d_here.rows else Matrix.zeros(n, n)
        down_then_up = d_below.mul(inv_here) if d_below.cols else Matrix.zeros(n, n)
        pi0[(a, b)] = ident.sub(up_then_back).sub(down_then_up)
        box = d_here.transpose().mul(d_here).add(d_below.mul(d_below.transpose()))
        box0[(a, b)] = box
        e0[(a, b)] = kernel(box)
    return HodgeKit(mc, delta0, d0inv, pi0, box0, e0)


def hodge_split(kit: HodgeKit, a: int, b: int, x: Sequence) -> tuple[tuple, tuple, tuple]:
    """Decompose x in C_{a,b} as (check, bar, hat).

    check lies in Im d_0, bar in ker box_0, hat in Im delta_0, pairwise
    orthogonal, with x = check + bar + hat.
    """
    if len(x) != kit.mc.dim(a, b):
        raise ValueError("vector length mismatch")
    hat = kit.d0inv(a, b + 1).apply(kit.d0(a, b).apply(x))
    check = kit.d0(a, b - 1).apply(kit.d0inv(a, b).apply(x))
    bar = vec_sub(vec_sub(tuple(x), check), hat)
    return check, bar, hat


def harmonic_space(kit: HodgeKit, a: int, b: int) -> Subspace:
    """ker box_0 at (a,b) = ker d_0 cap ker delta_0; the Rumin forms there."""
    return kit.e0(a, b)
