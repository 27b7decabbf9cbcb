"""The Rumin complex of a truncated multicomplex.

Builds the weight-raising homotopy b = -d_0^{-1}(d - d_0), its Neumann
inverse, the complementary projections pi_E / pi_F, the recursively defined
operators partial_r, and the differential d_c on the harmonic spaces e_0,
split into its weight-homogeneous pieces d_c^r of bidegree (r, 1-r).

d_c is computed along two independent routes (conjugation pi_0 d pi_E pi_0
and the partial_r recursion); build_rumin insists they agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .hodge import HodgeKit
from .linalg import (
    Matrix,
    Subspace,
    intersect,
    image,
    kernel,
    orthogonal_complement,
)
from .multicomplex import MulticomplexData, TotalComplex, total_complex


@dataclass
class RuminOperators:
    mc: MulticomplexData
    kit: HodgeKit
    tc: TotalComplex
    N: int                                  # nilpotency bound, Q + 1
    b_ops: dict[int, Matrix]                # degree h -> Tot_h -> Tot_h
    neumann: dict[int, Matrix]              # (Id - b)^{-1}
    pi_f: dict[int, Matrix]
    pi_e: dict[int, Matrix]
    e0_layout: dict[int, list[tuple[int, int, int]]]  # h -> [(weight, offset, dim)]
    e0_tot: dict[int, Subspace]             # harmonic subspace of Tot_h
    dc: dict[int, Matrix]                   # e0 coords at h -> e0 coords at h+1
    d0_tot: dict[int, Matrix] = field(default_factory=dict)
    d0inv_tot: dict[int, Matrix] = field(default_factory=dict)
    pi0_tot: dict[int, Matrix] = field(default_factory=dict)
    _partial_cache: dict[tuple[int, int, int], Matrix] = field(default_factory=dict)
    _dc_block_cache: dict[tuple[int, int, int], Matrix] = field(default_factory=dict)

    # -- degree bookkeeping -------------------------------------------------
    def e0_dim(self, h: int) -> int:
        return sum(d for (_a, _o, d) in self.e0_layout.get(h, []))

    def e0_weights(self, h: int) -> list[int]:
        return [a for (a, _o, d) in self.e0_layout.get(h, []) if d > 0]

    def e0_block(self, h: int, a: int) -> Optional[tuple[int, int]]:
        for (wa, off, d) in self.e0_layout.get(h, []):
            if wa == a:
                return off, d
        return None

    def embed_e0(self, h: int, a: int, coords) -> tuple:
        """Coordinates in e0(a, h-a) -> coordinates in the degree-h e0 space."""
        blk = self.e0_block(h, a)
        if blk is None:
            raise ValueError(f"no harmonic block of weight {a} in degree {h}")
        off, d = blk
        out = [Fraction(0)] * self.e0_dim(h)
        out[off:off + d] = list(coords)
        return tuple(out)

    # -- operators ----------------------------------------------------------
    def partial(self, r: int, a: int, b: int) -> Matrix:
        """partial_r as an ambient map C_{a,b} -> C_{a+r, b+1-r}.

        partial_1 = d_1 and partial_r = d_r - sum_{j<r} d_{r-j} d_0^{-1} partial_j.
        """
        if r < 1:
            raise ValueError("partial_r needs r >= 1")
        key = (r, a, b)
        cached = self._partial_cache.get(key)
        if cached is not None:
            return cached
        mc, kit = self.mc, self.kit
        out = mc.dmat(r, a, b)
        if r > 1:
            for j in range(1, r):
                pj = self.partial(j, a, b)            # -> C_{a+j, b+1-j}
                if pj.rows == 0 or pj.is_zero():
                    continue
                inv = kit.d0inv(a + j, b + 1 - j)     # -> C_{a+j, b-j}
                if inv.rows == 0:
                    continue
                d_next = mc.dmat(r - j, a + j, b - j)  # -> C_{a+r, b+1-r}
                if d_next.rows == 0:
                    continue
                out = out.sub(d_next.mul(inv).mul(pj))
        self._partial_cache[key] = out
        return out

    def dc_block_ambient(self, r: int, a: int, b: int) -> Matrix:
        """d_c^r = pi_0 partial_r as an ambient map C_{a,b} -> C_{a+r,b+1-r}."""
        p = self.partial(r, a, b)
        if p.rows == 0:
            return p
        return self.kit.pi0(a + r, b + 1 - r).mul(p)

    def dc_block(self, r: int, a: int, b: int) -> Matrix:
        """d_c^r restricted to harmonic spaces, in e0 coordinates."""
        key = (r, a, b)
        cached = self._dc_block_cache.get(key)
        if cached is not None:
            return cached
        src = self.kit.e0(a, b)
        tgt = self.kit.e0(a + r, b + 1 - r)
        if src.dim == 0 or tgt.dim == 0:
            m = Matrix.zeros(tgt.dim, src.dim)
            self._dc_block_cache[key] = m
            return m
        amb = self.dc_block_ambient(r, a, b)
        cols = []
        for v in src.basis_rows():
            w = amb.apply(v)
            cols.append(tgt.coords(w))
        m = Matrix(tgt.dim, src.dim,
                   [[cols[c][rr] for c in range(src.dim)] for rr in range(tgt.dim)])
        self._dc_block_cache[key] = m
        return m

    def dc_matrix(self, h: int) -> Matrix:
        """d_c from degree-h e0 coordinates to degree-(h+1) e0 coordinates."""
        m = self.dc.get(h)
        return m if m is not None else Matrix.zeros(self.e0_dim(h + 1), self.e0_dim(h))


def build_rumin(mc: MulticomplexData, kit: HodgeKit) -> RuminOperators:
    tc = total_complex(mc)
    degrees = tc.degrees
    dims = tc.dims
    N = mc.Q + 1

    def dim_at(h: int) -> int:
        return dims.get(h, 0)

    def d_tot(h: int) -> Matrix:
        m = tc.D.get(h)
        return m if m is not None else Matrix.zeros(dim_at(h + 1), dim_at(h))

    def blockwise(h: int, target_h: int, getter) -> Matrix:
        """Weight-preserving operator Tot_h -> Tot_{target_h} from blocks."""
        m = Matrix.zeros(dim_at(target_h), dim_at(h))
        for (a, b, off, d) in tc.layout.get(h, []):
            blk = getter(a, b)
            if blk.rows == 0 or blk.is_zero():
                continue
            tgt = tc.block_offset(target_h, a)
            if tgt is None:
                continue
            toff, _td = tgt
            for r in range(blk.rows):
                for c in range(blk.cols):
                    if blk.data[r][c]:
                        m.data[toff + r][off + c] = blk.data[r][c]
        return m

    d0_tot = {h: blockwise(h, h + 1, lambda a, b: mc.dmat(0, a, b)) for h in degrees}
    d0inv_tot = {h: blockwise(h, h - 1, lambda a, b: kit.d0inv(a, b)) for h in degrees}
    pi0_tot = {h: blockwise(h, h, lambda a, b: kit.pi0(a, b)) for h in degrees}

    b_ops: dict[int, Matrix] = {}
    neumann: dict[int, Matrix] = {}
    for h in degrees:
        n = dim_at(h)
        rest = d_tot(h).sub(d0_tot[h])
        binv = d0inv_tot.get(h + 1, Matrix.zeros(n, dim_at(h + 1)))
        b = binv.mul(rest).neg()
        b_ops[h] = b
        acc = Matrix.identity(n)
        power = b
        for _ in range(N - 1):
            if power.is_zero():
                break
            acc = acc.add(power)
            power = power.mul(b)
        if not power.is_zero():
            raise AssertionError(f"homotopy b not nilpotent within N={N} at degree {h}")
        neumann[h] = acc

    pi_f: dict[int, Matrix] = {}
    pi_e: dict[int, Matrix] = {}
    for h in degrees:
        n = dim_at(h)
        first = neumann[h].mul(d0inv_tot.get(h + 1, Matrix.zeros(n, dim_at(h + 1)))).mul(d_tot(h))
        if h - 1 in degrees:
            second = d_tot(h - 1).mul(neumann[h - 1]).mul(d0inv_tot[h])
        else:
            second = Matrix.zeros(n, n)
        pf = first.add(second)
        pi_f[h] = pf
        pi_e[h] = Matrix.identity(n).sub(pf)

    # harmonic layout per degree
    e0_layout: dict[int, list[tuple[int, int, int]]] = {}
    e0_tot: dict[int, Subspace] = {}
    for h in degrees:
        rows: list[list[Fraction]] = []
        pivots: list[int] = []
        layout = []
        off_coords = 0
        for (a, b, off, d) in tc.layout[h]:
            sp = kit.e0(a, b)
            if sp.dim == 0:
                continue
            layout.append((a, off_coords, sp.dim))
            for i, r in enumerate(sp.basis_rows()):
                row = [Fraction(0)] * dims[h]
                row[off:off + d] = list(r)
                rows.append(row)
                pivots.append(off + sp.pivots[i])
            off_coords += sp.dim
        e0_layout[h] = layout
        e0_tot[h] = Subspace(dims[h], Matrix(len(rows), dims[h], rows), pivots)

    rum = RuminOperators(mc, kit, tc, N, b_ops, neumann, pi_f, pi_e,
                         e0_layout, e0_tot, {}, d0_tot, d0inv_tot, pi0_tot)

    # route 1: conjugated construction pi_0 d pi_E pi_0 restricted to e0
    dc_conj: dict[int, Matrix] = {}
    for h in degrees:
        src = e0_tot[h]
        tgt = e0_tot.get(h + 1)
        if src.dim == 0:
            continue
        tdim = tgt.dim if tgt is not None else 0
        if tdim == 0:
            dc_conj[h] = Matrix.zeros(0, src.dim)
            continue
        op = pi0_tot[h + 1].mul(d_tot(h)).mul(pi_e[h]).mul(pi0_tot[h])
        cols = []
        for v in src.basis_rows():
            w = op.apply(v)
            if not tgt.contains(w):
                raise AssertionError("conjugated d_c leaves the harmonic space")
            cols.append(tgt.coords(w))
        dc_conj[h] = Matrix(tdim, src.dim,
                            [[cols[c][r] for c in range(src.dim)] for r in range(tdim)])

    # route 2: sum of the bidegree-(r, 1-r) pieces from the recursion
    for h in degrees:
        src_layout = e0_layout[h]
        tgt_layout = e0_layout.get(h + 1, [])
        sdim = sum(d for (_a, _o, d) in src_layout)
        tdim = sum(d for (_a, _o, d) in tgt_layout)
        if sdim == 0:
            continue
        m = Matrix.zeros(tdim, sdim)
        for (a, soff, sd) in src_layout:
            for (ta, toff, td) in tgt_layout:
                r = ta - a
                if r < 1 or r >= N:
                    continue
                blk = rum.dc_block(r, a, h - a)
                for rr in range(blk.rows):
                    for cc in range(blk.cols):
                        if blk.data[rr][cc]:
                            m.data[toff + rr][soff + cc] = blk.data[rr][cc]
        expected = dc_conj.get(h, Matrix.zeros(tdim, sdim))
        if m != expected:
            raise AssertionError(f"d_c routes disagree at degree {h}")
        rum.dc[h] = m

    return rum


def check_d0_partial(rum: RuminOperators, r: int, a: int, b: int) -> bool:
    """Exactness of the d_0 partial_r identity on every harmonic basis vector.

    For r = 1:  d_0 partial_1 = 0 on harmonics.  For r >= 2:
    d_0 partial_r = - sum_{i<r} d_i (partial_{r-i} - d_0 d_0^{-1} partial_{r-i}).
    """
    mc, kit = rum.mc, rum.kit
    e0 = kit.e0(a, b)
    if e0.dim == 0:
        return True
    lhs_op = mc.dmat(0, a + r, b + 1 - r).mul(rum.partial(r, a, b))
    tgt_rows = mc.dim(a + r, b + 2 - r)
    rhs_op = Matrix.zeros(tgt_rows, mc.dim(a, b))
    if r >= 2:
        for i in range(1, r):
            p = rum.partial(r - i, a, b)              # -> C_{a+r-i, b+1-r+i}
            if p.rows == 0:
                continue
            aw, bw = a + r - i, b + 1 - r + i
            d_below = mc.dmat(0, aw, bw - 1)
            proj_im = d_below.mul(kit.d0inv(aw, bw))
            corrected = p.sub(proj_im.mul(p))
            d_i = mc.dmat(i, aw, bw)                  # -> C_{a+r, b+2-r}
            if d_i.rows == 0:
                continue
            rhs_op = rhs_op.add(d_i.mul(corrected))
    for v in e0.basis_rows():
        if lhs_op.apply(v) != rhs_op.neg().apply(v):
            return False
    return True


def rumin_cohomology(rum: RuminOperators, h: int) -> tuple[int, Subspace]:
    """Cohomology of (E_0, d_c) in degree h, with harmonic representatives."""
    n = rum.e0_dim(h)
    if n == 0:
        from .linalg import zero_subspace

        return 0, zero_subspace(0)
    ker = kernel(rum.dc_matrix(h))
    prev = rum.dc_matrix(h - 1)
    if prev.cols > 0 and not prev.is_zero():
        reps = intersect(ker, orthogonal_complement(image(prev)))
    else:
        reps = ker
    return reps.dim, reps
