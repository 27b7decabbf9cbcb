"""Spectral-sequence modules and the enumeration of spectral complexes.

Z_r / B_r are computed both directly from their witness definitions and
through the harmonic characterization in terms of the d_c^r operators; the
page differentials Delta_r act on canonical representatives orthogonal to
B_r.  Maximal paths in the arrow graph of nonzero d_c^r restrictions give
the collection of spectral complexes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import (
    Matrix,
    Subspace,
    canonical_basis,
    intersect,
    kernel,
    orthogonal_complement,
    projector,
    solve_min_norm_multi,
    subspace_sum,
    vec_sub,
    zero_subspace,
)
from .rumin import RuminOperators

Vector = tuple[Fraction, ...]


@dataclass
class Station:
    degree: int
    weight: int
    z_order: int            # outgoing page order j (1 at the final station)
    b_order: int            # incoming page order l (1 at the initial station)
    space: Subspace         # E_{z_order, b_order} inside C_{weight, degree-weight}


@dataclass
class SpectralChain:
    stations: list[Station]
    orders: list[int]                       # differential orders along the chain
    deltas: list[Matrix]                    # ambient images per station basis vector
    summand_orders: list[tuple[int, ...]]   # contributing d_c^i orders per arrow

    def signature(self) -> tuple:
        return tuple((st.degree, st.weight) for st in self.stations) + tuple(self.orders)


@dataclass
class StabilizedCohomology:
    degree: int
    per_weight: dict[int, int]
    total: int
    stable_indices: dict[int, tuple[int, int]]  # weight -> (J, L)


class SpectralWorkspace:
    """Caches Z/B subspaces, harmonic variants and Delta data for one complex."""

    def __init__(self, rum: RuminOperators):
        self.rum = rum
        self.mc = rum.mc
        self.kit = rum.kit
        self._z: dict[tuple[int, int, int], Subspace] = {}
        self._b: dict[tuple[int, int, int], Subspace] = {}
        self._zh: dict[tuple[int, int, int], Subspace] = {}
        self._bh: dict[tuple[int, int, int], Subspace] = {}
        self._delta: dict[tuple[int, int, int], tuple[list[Vector], Subspace]] = {}
        self._b_proj: dict[tuple[int, int, int], Matrix] = {}

    # ------------------------------------------------------------------
    def z_direct(self, r: int, p: int, k: int) -> Subspace:
        """Z_r at weight p, degree k, from the witness definition."""
        if r < 1:
            raise ValueError("page index must be >= 1")
        key = (r, p, k)
        if key in self._z:
            return self._z[key]
        mc = self.mc
        n0 = mc.dim(p, k - p)
        if n0 == 0:
            out = zero_subspace(0 if n0 == 0 else n0)
            self._z[key] = out
            return out
        col_blocks = [n0] + [mc.dim(p + j, k - p - j) for j in range(1, r)]
        offsets = []
        off = 0
        for nb in col_blocks:
            offsets.append(off)
            off += nb
        ncols = off
        rows: list[list[Fraction]] = []
        for n in range(0, r):
            tdim = mc.dim(p + n, k - p - n + 1)
            if tdim == 0:
                continue
            block_rows = [[Fraction(0)] * ncols for _ in range(tdim)]
            dn = mc.dmat(n, p, k - p)
            for rr in range(tdim):
                for cc in range(n0):
                    if dn.data[rr][cc]:
                        block_rows[rr][cc] = dn.data[rr][cc]
            # condition n reads  d_n alpha - sum_{j=1}^{n} d_{n-j} z_{p+j} = 0
            for j in range(1, n + 1):
                dz = mc.dmat(n - j, p + j, k - p - j)
                if dz.rows == 0:
                    continue
                o = offsets[j]
                for rr in range(tdim):
                    for cc in range(dz.cols):
                        if dz.data[rr][cc]:
                            block_rows[rr][o + cc] = -dz.data[rr][cc]
            rows.extend(block_rows)
        big = Matrix(len(rows), ncols, rows)
        ker = kernel(big)
        out = canonical_basis([row[:n0] for row in ker.basis.data], n0)
        self._z[key] = out
        return out

    def b_direct(self, r: int, p: int, k: int) -> Subspace:
        """B_r at weight p, degree k, as the image of the constrained tuples."""
        if r < 1:
            raise ValueError("page index must be >= 1")
        key = (r, p, k)
        if key in self._b:
            return self._b[key]
        mc = self.mc
        amb = mc.dim(p, k - p)
        if amb == 0:
            out = zero_subspace(0)
            self._b[key] = out
            return out
        col_blocks = [mc.dim(p - j, k - 1 - p + j) for j in range(0, r)]
        offsets = []
        off = 0
        for nb in col_blocks:
            offsets.append(off)
            off += nb
        ncols = off
        rows: list[list[Fraction]] = []
        for l in range(1, r):
            tdim = mc.dim(p - l, k - p + l)
            if tdim == 0:
                continue
            block_rows = [[Fraction(0)] * ncols for _ in range(tdim)]
            for kk in range(l, r):
                d = mc.dmat(kk - l, p - kk, k - 1 - p + kk)
                if d.rows == 0:
                    continue
                o = offsets[kk]
                for rr in range(tdim):
                    for cc in range(d.cols):
                        if d.data[rr][cc]:
                            block_rows[rr][o + cc] = d.data[rr][cc]
            rows.extend(block_rows)
        constraints = Matrix(len(rows), ncols, rows)
        ker = kernel(constraints) if rows else None
        top = Matrix.zeros(amb, ncols)
        for kk in range(0, r):
            d = mc.dmat(kk, p - kk, k - 1 - p + kk)
            if d.rows == 0:
                continue
            o = offsets[kk]
            for rr in range(amb):
                for cc in range(d.cols):
                    if d.data[rr][cc]:
                        top.data[rr][o + cc] = d.data[rr][cc]
        if ker is None:
            vecs = [top.column(j) for j in range(ncols)]
        else:
            vecs = [top.apply(v) for v in ker.basis_rows()]
        out = canonical_basis(vecs, amb)
        self._b[key] = out
        return out

    # ------------------------------------------------------------------
    def z_harmonic(self, r: int, p: int, k: int) -> Subspace:
        """Harmonic part of Z_r via the d_c^j witness conditions (ambient coords)."""
        if r < 1:
            raise ValueError("page index must be >= 1")
        key = (r, p, k)
        if key in self._zh:
            return self._zh[key]
        kit, rum = self.kit, self.rum
        amb = self.mc.dim(p, k - p)
        e0 = kit.e0(p, k - p)
        if e0.dim == 0:
            out = zero_subspace(amb)
            self._zh[key] = out
            return out
        col_blocks = [e0.dim] + [kit.e0(p + i, k - p - i).dim for i in range(1, r - 1)]
        offsets = []
        off = 0
        for nb in col_blocks:
            offsets.append(off)
            off += nb
        ncols = off
        rows: list[list[Fraction]] = []
        for j in range(1, r):
            tgt = kit.e0(p + j, k - p + 1 - j)
            if tgt.dim == 0:
                continue
            block_rows = [[Fraction(0)] * ncols for _ in range(tgt.dim)]
            dj = rum.dc_block(j, p, k - p)
            for rr in range(tgt.dim):
                for cc in range(e0.dim):
                    if dj.data[rr][cc]:
                        block_rows[rr][cc] = dj.data[rr][cc]
            for i in range(1, j):
                if i >= len(col_blocks):
                    continue
                dji = rum.dc_block(j - i, p + i, k - p - i)
                if dji.rows == 0:
                    continue
                o = offsets[i]
                for rr in range(tgt.dim):
                    for cc in range(dji.cols):
                        if dji.data[rr][cc]:
                            block_rows[rr][o + cc] = -dji.data[rr][cc]
            rows.extend(block_rows)
        if rows:
            ker = kernel(Matrix(len(rows), ncols, rows))
            coord_rows = [row[:e0.dim] for row in ker.basis.data]
        else:
            coord_rows = Matrix.identity(e0.dim).data
        out = canonical_basis([e0.from_coords(c) for c in coord_rows], amb)
        self._zh[key] = out
        return out

    def b_harmonic(self, r: int, p: int, k: int) -> Subspace:
        """Harmonic part of B_r via images of d_c^j on witness tuples."""
        if r < 1:
            raise ValueError("page index must be >= 1")
        key = (r, p, k)
        if key in self._bh:
            return self._bh[key]
        kit, rum = self.kit, self.rum
        amb = self.mc.dim(p, k - p)
        e0_t = kit.e0(p, k - p)
        if r == 1 or e0_t.dim == 0:
            out = zero_subspace(amb)
            self._bh[key] = out
            return out
        # tuple: (cbar at weight p-r+1, witnesses at weights p-r+2 .. p-1), degree k-1
        base_w = p - r + 1
        col_blocks = [kit.e0(base_w + i, k - 1 - base_w - i).dim for i in range(0, r - 1)]
        offsets = []
        off = 0
        for nb in col_blocks:
            offsets.append(off)
            off += nb
        ncols = off
        rows: list[list[Fraction]] = []
        for i in range(1, r - 1):
            tgt = kit.e0(base_w + i, k - base_w - i)
            if tgt.dim == 0:
                continue
            block_rows = [[Fraction(0)] * ncols for _ in range(tgt.dim)]
            di = rum.dc_block(i, base_w, k - 1 - base_w)
            for rr in range(tgt.dim):
                for cc in range(col_blocks[0]):
                    if di.data[rr][cc]:
                        block_rows[rr][cc] = di.data[rr][cc]
            for hh in range(1, i):
                src_idx = i - hh
                if src_idx <= 0 or src_idx >= len(col_blocks):
                    continue
                dh = rum.dc_block(hh, base_w + src_idx, k - 1 - base_w - src_idx)
                if dh.rows == 0:
                    continue
                o = offsets[src_idx]
                for rr in range(tgt.dim):
                    for cc in range(dh.cols):
                        if dh.data[rr][cc]:
                            block_rows[rr][o + cc] = -dh.data[rr][cc]
            rows.extend(block_rows)
        if rows:
            ker = kernel(Matrix(len(rows), ncols, rows))
            tuples = ker.basis_rows()
        else:
            tuples = Matrix.identity(ncols).data
        top_i = r - 1
        out_vecs = []
        for t in tuples:
            acc = [Fraction(0)] * e0_t.dim
            dtop = rum.dc_block(top_i, base_w, k - 1 - base_w)
            c0 = t[:col_blocks[0]]
            v = dtop.apply(c0)
            acc = [x + y for x, y in zip(acc, v)]
            for hh in range(1, top_i):
                src_idx = top_i - hh
                if src_idx >= len(col_blocks) or col_blocks[src_idx] == 0:
                    continue
                dh = rum.dc_block(hh, base_w + src_idx, k - 1 - base_w - src_idx)
                o = offsets[src_idx]
                w = dh.apply(t[o:o + col_blocks[src_idx]])
                acc = [x - y for x, y in zip(acc, w)]
            out_vecs.append(e0_t.from_coords(acc))
        out = canonical_basis(out_vecs, amb)
        self._bh[key] = out
        return out

    def e_jl(self, j: int, l: int, p: int, k: int) -> Subspace:
        """E_{j,l} = Z_j cap (B_l)^perp inside the harmonic space at (p, k)."""
        if j < 1 or l < 1:
            raise ValueError("page indices must be >= 1")
        zh = self.z_harmonic(j, p, k)
        bh = self.b_harmonic(l, p, k)
        if bh.dim == 0:
            return zh
        return intersect(zh, orthogonal_complement(bh))

    # ------------------------------------------------------------------
    def _b_projector(self, r: int, p: int, k: int) -> Matrix:
        key = (r, p, k)
        if key not in self._b_proj:
            self._b_proj[key] = projector(self.b_direct(r, p, k))
        return self._b_proj[key]

    def _witness_system(self, r: int, p: int, k: int) -> tuple[Matrix, list[tuple[int, int]]]:
        """Stacked d_c^j witness system for Delta_r; unknowns omega at p+1..p+r-2."""
        kit, rum = self.kit, self.rum
        col_blocks = [(i, kit.e0(p + i, k - p - i).dim) for i in range(1, r - 1)]
        offsets = {}
        off = 0
        for i, nb in col_blocks:
            offsets[i] = off
            off += nb
        ncols = off
        rows: list[list[Fraction]] = []
        row_blocks = []
        for j in range(2, r):
            tgt = kit.e0(p + j, k - p + 1 - j)
            row_blocks.append((j, tgt.dim))
            if tgt.dim == 0:
                continue
            block_rows = [[Fraction(0)] * ncols for _ in range(tgt.dim)]
            for i in range(1, j):
                nb = dict(col_blocks).get(i, 0)
                if nb == 0:
                    continue
                dji = rum.dc_block(j - i, p + i, k - p - i)
                o = offsets[i]
                for rr in range(tgt.dim):
                    for cc in range(nb):
                        if dji.data[rr][cc]:
                            block_rows[rr][o + cc] = dji.data[rr][cc]
            rows.extend(block_rows)
        return Matrix(len(rows), ncols, rows), row_blocks

    def _witness_rhs(self, r: int, p: int, k: int, alpha_bar_coords) -> list[Fraction]:
        kit, rum = self.kit, self.rum
        rhs: list[Fraction] = []
        for j in range(2, r):
            tgt = kit.e0(p + j, k - p + 1 - j)
            if tgt.dim == 0:
                continue
            dj = rum.dc_block(j, p, k - p)
            rhs.extend(dj.apply(alpha_bar_coords))
        return rhs

    def delta_reps(self, r: int, p: int, k: int) -> tuple[list[Vector], Subspace]:
        """Canonical representatives of Delta_r on a basis of Z_r.

        Returns (reps, domain): reps[i] is the canonical element of
        (B_r at the target)^perp representing Delta_r of the i-th basis
        vector of z_direct(r, p, k); each rep is an ambient vector in
        C_{p+r, k+1-p-r}.
        """
        key = (r, p, k)
        if key in self._delta:
            return self._delta[key]
        kit, rum = self.kit, self.rum
        dom = self.z_direct(r, p, k)
        tgt_amb = self.mc.dim(p + r, k + 1 - p - r)
        if dom.dim == 0 or tgt_amb == 0:
            reps = [tuple([Fraction(0)] * tgt_amb) for _ in range(dom.dim)]
            self._delta[key] = (reps, dom)
            return self._delta[key]
        e0_src = kit.e0(p, k - p)
        e0_tgt = kit.e0(p + r, k + 1 - p - r)
        pi0 = kit.pi0(p, k - p)
        alpha_bars = []
        for v in dom.basis_rows():
            bar = pi0.apply(v)
            alpha_bars.append(e0_src.coords(bar) if e0_src.dim else ())
        if r >= 3:
            M, _ = self._witness_system(r, p, k)
            rhs_cols = [self._witness_rhs(r, p, k, ab) for ab in alpha_bars]
            sols = solve_min_norm_multi(M, rhs_cols)
            if sols is None:
                raise AssertionError("witness system unsolvable on Z_r; broken invariant")
        else:
            sols = [[] for _ in alpha_bars]
        col_blocks = [(i, kit.e0(p + i, k - p - i).dim) for i in range(1, r - 1)]
        offsets = {}
        off = 0
        for i, nb in col_blocks:
            offsets[i] = off
            off += nb
        reps = []
        bproj = self._b_projector(r, p + r, k + 1)
        for ab, w in zip(alpha_bars, sols):
            if e0_tgt.dim == 0:
                raw_amb = tuple([Fraction(0)] * tgt_amb)
            else:
                acc = list(rum.dc_block(r, p, k - p).apply(ab))
                for i in range(2, r):
                    idx = r - i
                    nb = dict(col_blocks).get(idx, 0)
                    if nb == 0:
                        continue
                    o = offsets[idx]
                    di = rum.dc_block(i, p + idx, k - p - idx)
                    corr = di.apply(w[o:o + nb])
                    acc = [x - y for x, y in zip(acc, corr)]
                raw_amb = e0_tgt.from_coords(acc)
            rep = vec_sub(raw_amb, bproj.apply(raw_amb))
            reps.append(rep)
        self._delta[key] = (reps, dom)
        return self._delta[key]

    def delta_apply(self, r: int, p: int, k: int, alpha: Sequence) -> Vector:
        """Delta_r of a single cocycle, as its canonical representative."""
        dom = self.z_direct(r, p, k)
        if not dom.contains(alpha):
            raise ValueError("no witnesses: vector not in Z_r")
        reps, _ = self.delta_reps(r, p, k)
        coords = dom.coords(alpha)
        tgt_amb = self.mc.dim(p + r, k + 1 - p - r)
        out = [Fraction(0)] * tgt_amb
        for c, rep in zip(coords, reps):
            if c:
                for i, x in enumerate(rep):
                    if x:
                        out[i] += c * x
        return tuple(out)

    def delta_rank(self, r: int, p: int, k: int) -> int:
        reps, _ = self.delta_reps(r, p, k)
        tgt_amb = self.mc.dim(p + r, k + 1 - p - r)
        if not reps or tgt_amb == 0:
            return 0
        return canonical_basis(reps, tgt_amb).dim

    # ------------------------------------------------------------------
    def index_sets(self) -> dict[tuple[int, int], list[int]]:
        """I_{p,k}: the orders r with d_c^r nonzero on the harmonic space at (p,k)."""
        out: dict[tuple[int, int], list[int]] = {}
        for (a, b), sp in sorted(self.kit.e0_spaces.items()):
            if sp.dim == 0:
                continue
            k = a + b
            orders = []
            for r in range(1, self.mc.Q + 1):
                if not self.rum.dc_block(r, a, b).is_zero():
                    orders.append(r)
            out[(a, k)] = orders
        return out

    def arrow_graph(self) -> tuple[list[tuple[int, int]], list[tuple[int, int, int]]]:
        """Nodes (p, k) with e0 != 0 and labeled edges (p, k, r)."""
        isets = self.index_sets()
        nodes = sorted(isets.keys(), key=lambda t: (t[1], t[0]))
        edges = [(p, k, r) for (p, k), orders in sorted(isets.items()) for r in orders]
        return nodes, edges

    def enumerate_spectral_complexes(self, cap: int = 64) -> tuple[list[SpectralChain], bool]:
        """All maximal chains of nonzero d_c^r arrows, with station data.

        Returns (chains, truncated): truncated is set when the path count
        exceeded the cap and the list was cut short.
        """
        if cap < 1:
            raise ValueError("cap must be >= 1")
        nodes, edges = self.arrow_graph()
        out_edges: dict[tuple[int, int], list[int]] = {}
        has_in: set[tuple[int, int]] = set()
        for (p, k, r) in edges:
            out_edges.setdefault((p, k), []).append(r)
            has_in.add((p + r, k + 1))
        roots = [v for v in nodes if v not in has_in and out_edges.get(v)]
        paths: list[tuple[list[tuple[int, int]], list[int]]] = []
        truncated = False

        def dfs(node, node_seq, order_seq):
            nonlocal truncated
            if len(paths) >= cap:
                truncated = True
                return
            outs = out_edges.get(node, [])
            if not outs:
                if order_seq:
                    paths.append((node_seq[:], order_seq[:]))
                return
            for r in sorted(outs):
                nxt = (node[0] + r, node[1] + 1)
                dfs(nxt, node_seq + [nxt], order_seq + [r])

        for root in roots:
            dfs(root, [root], [])
        chains = []
        for node_seq, orders in paths:
            chains.append(self._build_chain(node_seq, orders))
        chains.sort(key=lambda c: c.signature())
        return chains, truncated

    def _build_chain(self, node_seq, orders) -> SpectralChain:
        stations: list[Station] = []
        m = len(orders)
        for t, (p, k) in enumerate(node_seq):
            j_out = orders[t] if t < m else 1
            l_in = orders[t - 1] if t > 0 else 1
            stations.append(Station(k, p, j_out, l_in, self.e_jl(j_out, l_in, p, k)))
        deltas: list[Matrix] = []
        summands: list[tuple[int, ...]] = []
        for t in range(m):
            p, k = node_seq[t]
            r = orders[t]
            st = stations[t]
            images = [self.delta_apply(r, p, k, v) for v in st.space.basis_rows()]
            tgt_amb = self.mc.dim(p + r, k + 1 - p - r)
            deltas.append(Matrix(len(images), tgt_amb, [list(v) for v in images]))
            summands.append(self._delta_summands(r, p, k, st.space))
        return SpectralChain(stations, list(orders), deltas, summands)

    def _delta_summands(self, r: int, p: int, k: int, domain: Subspace) -> tuple[int, ...]:
        """Orders of the d_c^i addends that contribute to Delta_r on `domain`."""
        kit, rum = self.kit, self.rum
        e0_src = kit.e0(p, k - p)
        orders = set()
        if e0_src.dim == 0 or domain.dim == 0:
            return ()
        pi0 = kit.pi0(p, k - p)
        alpha_bars = [e0_src.coords(pi0.apply(v)) for v in domain.basis_rows()]
        if any(any(rum.dc_block(r, p, k - p).apply(ab)) for ab in alpha_bars):
            orders.add(r)
        if r >= 3:
            M, _ = self._witness_system(r, p, k)
            rhs_cols = [self._witness_rhs(r, p, k, ab) for ab in alpha_bars]
            sols = solve_min_norm_multi(M, rhs_cols)
            if sols is None:
                raise AssertionError("witness system unsolvable")
            col_blocks = [(i, kit.e0(p + i, k - p - i).dim) for i in range(1, r - 1)]
            offsets = {}
            off = 0
            for i, nb in col_blocks:
                offsets[i] = off
                off += nb
            for w in sols:
                for i in range(2, r):
                    idx = r - i
                    nb = dict(col_blocks).get(idx, 0)
                    if nb == 0:
                        continue
                    di = rum.dc_block(i, p + idx, k - p - idx)
                    if any(di.apply(w[offsets[idx]:offsets[idx] + nb])):
                        orders.add(i)
        return tuple(sorted(orders))

    # ------------------------------------------------------------------
    def stabilization_bound(self) -> int:
        return self.mc.Q + 2

    def stabilized_cohomology(self, k: int) -> StabilizedCohomology:
        """E_infinity dimensions per weight at degree k, with (J, L) detection."""
        rmax = self.stabilization_bound()
        per_weight: dict[int, int] = {}
        indices: dict[int, tuple[int, int]] = {}
        for (a, b) in self.mc.bidegrees():
            if a + b != k:
                continue
            zs = {r: self.z_direct(r, a, k) for r in range(1, rmax + 2)}
            bs = {r: self.b_direct(r, a, k) for r in range(1, rmax + 2)}
            if zs[rmax] != zs[rmax + 1] or bs[rmax] != bs[rmax + 1]:
                raise AssertionError(f"pages did not stabilize by r={rmax} at ({a},{k})")
            j_stab = next(r for r in range(1, rmax + 1) if zs[r] == zs[rmax])
            l_stab = next(r for r in range(1, rmax + 1) if bs[r] == bs[rmax])
            dim_inf = zs[rmax].dim - bs[rmax].dim
            if dim_inf:
                per_weight[a] = dim_inf
            indices[a] = (max(j_stab - 1, 1), max(l_stab - 1, 1))
        return StabilizedCohomology(k, per_weight, sum(per_weight.values()), indices)


# Convenience wrappers mirroring the operation-level API -------------------

def z_direct(ws: SpectralWorkspace, r: int, p: int, k: int) -> Subspace:
    return ws.z_direct(r, p, k)


def b_direct(ws: SpectralWorkspace, r: int, p: int, k: int) -> Subspace:
    return ws.b_direct(r, p, k)


def z_harmonic(ws: SpectralWorkspace, r: int, p: int, k: int) -> Subspace:
    return ws.z_harmonic(r, p, k)


def b_harmonic(ws: SpectralWorkspace, r: int, p: int, k: int) -> Subspace:
    return ws.b_harmonic(r, p, k)


def e_jl(ws: SpectralWorkspace, j: int, l: int, p: int, k: int) -> Subspace:
    return ws.e_jl(j, l, p, k)


def delta_r(ws: SpectralWorkspace, r: int, p: int, k: int, alpha) -> Vector:
    return ws.delta_apply(r, p, k, alpha)


def index_sets(ws: SpectralWorkspace) -> dict[tuple[int, int], list[int]]:
    return ws.index_sets()


def enumerate_spectral_complexes(ws: SpectralWorkspace, cap: int = 64):
    return ws.enumerate_spectral_complexes(cap)


def stabilized_cohomology(ws: SpectralWorkspace, k: int) -> StabilizedCohomology:
    return ws.stabilized_cohomology(k)
