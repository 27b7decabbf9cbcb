"""Truncated multicomplexes and their total complexes.

A multicomplex here is a finite bigraded rational vector space C_{a,b}
(a = weight in [0, Q], a+b = degree) with structure maps d_i of bidegree
(i, 1-i) obeying the relations  sum_{i+j=n} d_i d_j = 0  and d_k = 0 for
k >= s.  The total complex collapses each degree to one space, with the
weight filtration kept through a block layout.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .linalg import (
    Matrix,
    Subspace,
    canonical_basis,
    format_scalar,
    image,
    intersect,
    kernel,
    orthogonal_complement,
    parse_scalar,
)

Bidegree = tuple[int, int]


@dataclass(frozen=True)
class MulticomplexData:
    """Bigraded dimensions plus structure maps, the central object."""

    Q: int
    s: int
    spaces: dict[Bidegree, int]
    maps: dict[tuple[int, int, int], Matrix]  # (i, a, b) -> C_{a,b} -> C_{a+i, b+1-i}
    labels: dict[Bidegree, tuple[str, ...]] = field(default_factory=dict)

    def dim(self, a: int, b: int) -> int:
        return self.spaces.get((a, b), 0)

    def bidegrees(self) -> list[Bidegree]:
        return sorted(k for k, d in self.spaces.items() if d > 0)

    def degrees(self) -> list[int]:
        return sorted({a + b for (a, b), d in self.spaces.items() if d > 0})

    def bidegrees_at_degree(self, h: int) -> list[Bidegree]:
        """Populated bidegrees of total degree h, ordered by weight."""
        return sorted((a, b) for (a, b), d in self.spaces.items() if d > 0 and a + b == h)

    def dmat(self, i: int, a: int, b: int) -> Matrix:
        """Structure map d_i on C_{a,b}; zero when absent."""
        m = self.maps.get((i, a, b))
        if m is not None:
            return m
        return Matrix.zeros(self.dim(a + i, b + 1 - i), self.dim(a, b))

    def label_list(self, a: int, b: int) -> tuple[str, ...]:
        lab = self.labels.get((a, b))
        if lab is not None:
            return lab
        return tuple(f"w{a}b{b}_{i}" for i in range(self.dim(a, b)))


@dataclass
class ValidationReport:
    structural_errors: list[str]
    relation_violations: list[tuple[int, int, int]]  # (n, a, b), sorted

    @property
    def valid(self) -> bool:
        return not self.structural_errors and not self.relation_violations

    def summary(self) -> str:
        if self.valid:
            return "valid"
        lines = list(self.structural_errors)
        lines += [f"relation violated: n={n} at (a,b)=({a},{b})"
                  for (n, a, b) in self.relation_violations]
        return "\n".join(lines)


def validate_multicomplex(mc: MulticomplexData) -> ValidationReport:
    """Check shapes, weight bounds, truncation and all d_i d_j relations."""
    structural: list[str] = []
    for (a, b), d in sorted(mc.spaces.items()):
        if d < 0:
            structural.append(f"negative dimension at ({a},{b})")
        if d > 0 and not (0 <= a <= mc.Q):
            structural.append(f"weight {a} outside [0,{mc.Q}] at ({a},{b})")
    for (i, a, b), m in sorted(mc.maps.items()):
        if i < 0:
            structural.append(f"map d_{i} has negative order")
            continue
        if i >= mc.s and not m.is_zero():
            structural.append(f"d_{i} nonzero but truncation index s={mc.s}")
        src = mc.dim(a, b)
        tgt = mc.dim(a + i, b + 1 - i)
        if m.cols != src or m.rows != tgt:
            structural.append(
                f"d_{i} at ({a},{b}) has shape {m.rows}x{m.cols}, expected {tgt}x{src}")
    if structural:
        return ValidationReport(structural, [])

    violations: list[tuple[int, int, int]] = []
    for (a, b) in mc.bidegrees():
        for n in range(0, 2 * mc.s - 1):
            tgt_rows = mc.dim(a + n, b + 2 - n)
            src_cols = mc.dim(a, b)
            if tgt_rows == 0 or src_cols == 0:
                continue
            acc = Matrix.zeros(tgt_rows, src_cols)
            for j in range(0, n + 1):
                i = n - j
                first = mc.maps.get((j, a, b))
                if first is None:
                    continue
                second = mc.maps.get((i, a + j, b + 1 - j))
                if second is None:
                    continue
                acc = acc.add(second.mul(first))
            if not acc.is_zero():
                violations.append((n, a, b))
    violations.sort()
    return ValidationReport([], violations)


@dataclass
class TotalComplex:
    """Direct sum over weights per degree, with d = d_0 + ... + d_s."""

    mc: MulticomplexData
    degrees: list[int]
    layout: dict[int, list[tuple[int, int, int, int]]]  # h -> [(a, b, offset, dim)]
    dims: dict[int, int]
    D: dict[int, Matrix]  # h -> Tot_h -> Tot_{h+1}

    def block_offset(self, h: int, a: int) -> Optional[tuple[int, int]]:
        for (wa, _b, off, d) in self.layout.get(h, []):
            if wa == a:
                return off, d
        return None

    def embed(self, h: int, a: int, v) -> tuple:
        """Embed a weight-a vector into the degree-h total space."""
        off_d = self.block_offset(h, a)
        if off_d is None:
            raise ValueError(f"no block of weight {a} in degree {h}")
        off, d = off_d
        if len(v) != d:
            raise ValueError("block length mismatch")
        out = [Fraction(0)] * self.dims[h]
        out[off:off + d] = list(v)
        return tuple(out)

    def component(self, h: int, a: int, v) -> tuple:
        off_d = self.block_offset(h, a)
        if off_d is None:
            return ()
        off, d = off_d
        return tuple(v[off:off + d])


def total_complex(mc: MulticomplexData) -> TotalComplex:
    """Assemble the total complex; raises on invalid input, asserts D^2 = 0."""
    report = validate_multicomplex(mc)
    if not report.valid:
        raise ValueError("invalid multicomplex:\n" + report.summary())
    degrees = mc.degrees()
    layout: dict[int, list[tuple[int, int, int, int]]] = {}
    dims: dict[int, int] = {}
    for h in degrees:
        off = 0
        blocks = []
        for (a, b) in mc.bidegrees_at_degree(h):
            d = mc.dim(a, b)
            blocks.append((a, b, off, d))
            off += d
        layout[h] = blocks
        dims[h] = off
    D: dict[int, Matrix] = {}
    for h in degrees:
        tgt_dim = dims.get(h + 1, 0)
        m = Matrix.zeros(tgt_dim, dims[h])
        for (a, b, off, d) in layout[h]:
            for i in range(0, mc.s):
                blk = mc.maps.get((i, a, b))
                if blk is None or blk.rows == 0:
                    continue
                tgt = next(((toff, td) for (ta, _tb, toff, td) in layout.get(h + 1, [])
                            if ta == a + i), None)
                if tgt is None:
                    if not blk.is_zero():
                        raise ValueError(f"d_{i} at ({a},{b}) maps into absent space")
                    continue
                toff, _td = tgt
                for r in range(blk.rows):
                    row = m.data[toff + r]
                    brow = blk.data[r]
                    for c in range(blk.cols):
                        if brow[c]:
                            row[off + c] = brow[c]
        D[h] = m
    for h in degrees:
        if h + 1 in D:
            comp = D[h + 1].mul(D[h])
            if not comp.is_zero():
                raise AssertionError(f"D^2 != 0 at degree {h}")
    return TotalComplex(mc, degrees, layout, dims, D)


def total_cohomology(tc: TotalComplex, h: int) -> tuple[int, Subspace]:
    """Betti number and harmonic representatives ker D_h cap (Im D_{h-1})^perp."""
    n = tc.dims.get(h, 0)
    if n == 0:
        from .linalg import zero_subspace

        return 0, zero_subspace(0)
    ker = kernel(tc.D[h]) if h in tc.D else canonical_basis(Matrix.identity(n).data, n)
    if h - 1 in tc.D and tc.dims.get(h - 1, 0) > 0:
        im = image(tc.D[h - 1])
        reps = intersect(ker, orthogonal_complement(im))
    else:
        reps = ker
    return reps.dim, reps


def restrict_to_d0(mc: MulticomplexData) -> MulticomplexData:
    """The same bigraded space with only the weight-preserving map kept."""
    maps = {k: m for k, m in mc.maps.items() if k[0] == 0}
    return MulticomplexData(mc.Q, mc.s, dict(mc.spaces), maps, dict(mc.labels))


# ---------------------------------------------------------------------------
# Random instances with known cohomology
# ---------------------------------------------------------------------------

def _random_unimodular(rng: random.Random, n: int, ops: int = 4) -> tuple[Matrix, Matrix]:
    """Random integer matrix with determinant +-1, together with its inverse."""
    m = Matrix.identity(n)
    minv = Matrix.identity(n)
    for _ in range(ops if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = Fraction(rng.choice([-2, -1, 1, 2]))
        # row_i += c * row_j on m;  inverse gets the opposite column op
        for col in range(n):
            m.data[i][col] += c * m.data[j][col]
        for row in range(n):
            minv.data[row][j] -= c * minv.data[row][i]
    return m, minv


def random_conjugated_multicomplex(
    seed: int,
    max_weight: int = 3,
    max_degree: int = 4,
    max_dim: int = 2,
    fill: float = 0.7,
    total_cap: int = 32,
    weight_pattern: Optional[dict[int, list[int]]] = None,
) -> tuple[MulticomplexData, dict[int, int]]:
    """Random valid multicomplex with known total cohomology.

    Construction: a split weight-preserving differential e (so H(e) is known
    by bookkeeping), conjugated by g = Id + n with n strictly weight
    increasing.  Conjugation preserves cohomology, and splitting d = g e g^-1
    by weight shift yields structure maps satisfying the relations exactly.

    weight_pattern optionally prescribes, per degree, which weights may be
    populated (used to build single- or two-weight instances).

    Returns (mc, {degree: dim H}).
    """
    rng = random.Random(seed)
    Q = max_weight
    dims: dict[Bidegree, int] = {}
    total = 0
    for h in range(0, max_degree + 1):
        allowed = weight_pattern.get(h, list(range(0, Q + 1))) if weight_pattern else range(0, Q + 1)
        for a in allowed:
            if rng.random() < fill:
                d = rng.randint(1, max_dim)
                if total + d > total_cap:
                    continue
                dims[(a, h - a)] = d
                total += d

    # split differential per weight column, with known cohomology
    ranks: dict[tuple[int, int], int] = {}  # (a, h) -> rank of e: V_{a,h} -> V_{a,h+1}
    for a in range(0, Q + 1):
        prev_rank = 0
        for h in range(0, max_degree + 1):
            n_h = dims.get((a, h - a), 0)
            n_next = dims.get((a, h + 1 - a), 0)
            cap = min(n_h - prev_rank, n_next)
            r = rng.randint(0, cap) if cap > 0 else 0
            ranks[(a, h)] = r
            prev_rank = r

    known: dict[int, int] = {}
    for h in range(0, max_degree + 1):
        tot = 0
        for a in range(0, Q + 1):
            n_h = dims.get((a, h - a), 0)
            tot += n_h - ranks.get((a, h), 0) - ranks.get((a, h - 1), 0)
        if tot:
            known[h] = tot

    # e maps the last r coordinates of V_{a,h} onto the first r of V_{a,h+1};
    # mixing by unimodular conjugation keeps cohomology dimensions.
    mixers: dict[tuple[int, int], tuple[Matrix, Matrix]] = {}
    for a in range(0, Q + 1):
        for h in range(0, max_degree + 1):
            n = dims.get((a, h - a), 0)
            if n:
                mixers[(a, h)] = _random_unimodular(rng, n)

    e_blocks: dict[tuple[int, int], Matrix] = {}
    for a in range(0, Q + 1):
        for h in range(0, max_degree + 1):
            n_h = dims.get((a, h - a), 0)
            n_next = dims.get((a, h + 1 - a), 0)
            r = ranks.get((a, h), 0)
            if n_h == 0 or n_next == 0 or r == 0:
                if n_h and n_next:
                    e_blocks[(a, h)] = Matrix.zeros(n_next, n_h)
                continue
            m = Matrix.zeros(n_next, n_h)
            for t in range(r):
                m.data[t][n_h - r + t] = Fraction(1)
            t_next, _ = mixers[(a, h + 1)]
            _, t_inv = mixers[(a, h)]
            e_blocks[(a, h)] = t_next.mul(m).mul(t_inv)

    # degree layouts for the total spaces
    def blocks_at(h: int) -> list[tuple[int, int, int]]:
        out = []
        off = 0
        for a in range(0, Q + 1):
            d = dims.get((a, h - a), 0)
            if d:
                out.append((a, off, d))
                off += d
        return out

    tot_dim = {h: sum(d for (_a, _o, d) in blocks_at(h)) for h in range(0, max_degree + 2)}

    # nu strictly increases weight within each degree; g = Id + nu
    g: dict[int, Matrix] = {}
    ginv: dict[int, Matrix] = {}
    for h in range(0, max_degree + 1):
        n = tot_dim[h]
        nu = Matrix.zeros(n, n)
        blocks = blocks_at(h)
        for si, (a_src, off_src, d_src) in enumerate(blocks):
            for (a_tgt, off_tgt, d_tgt) in blocks[si + 1:]:
                if a_tgt <= a_src:
                    continue
                for r in range(d_tgt):
                    for c in range(d_src):
                        if rng.random() < 0.4:
                            nu.data[off_tgt + r][off_src + c] = Fraction(rng.choice([-2, -1, 1, 2]))
        ident = Matrix.identity(n)
        g[h] = ident.add(nu)
        inv = ident
        power = nu
        sign = -1
        for _ in range(Q + 1):
            if power.is_zero():
                break
            inv = inv.add(power.scale(sign))
            power = power.mul(nu)
            sign = -sign
        ginv[h] = inv

    maps: dict[tuple[int, int, int], Matrix] = {}
    max_order = 0
    for h in range(0, max_degree + 1):
        if tot_dim[h] == 0 or tot_dim[h + 1] == 0:
            continue
        e_tot = Matrix.zeros(tot_dim[h + 1], tot_dim[h])
        for (a, off_src, d_src) in blocks_at(h):
            blk = e_blocks.get((a, h))
            if blk is None:
                continue
            tgt = next(((o, d) for (ta, o, d) in blocks_at(h + 1) if ta == a), None)
            if tgt is None:
                continue
            toff, _ = tgt
            for r in range(blk.rows):
                for c in range(blk.cols):
                    if blk.data[r][c]:
                        e_tot.data[toff + r][off_src + c] = blk.data[r][c]
        d_tot = g[h + 1].mul(e_tot).mul(ginv[h]) if h + 1 in g else e_tot.mul(ginv[h])
        for (a_src, off_src, d_src) in blocks_at(h):
            for (a_tgt, off_tgt, d_tgt) in blocks_at(h + 1):
                i = a_tgt - a_src
                if i < 0:
                    continue
                blk = Matrix(d_tgt, d_src,
                             [[d_tot.data[off_tgt + r][off_src + c] for c in range(d_src)]
                              for r in range(d_tgt)])
                if not blk.is_zero():
                    maps[(i, a_src, h - a_src)] = blk
                    max_order = max(max_order, i)

    mc = MulticomplexData(Q=Q, s=max_order + 1, spaces=dims, maps=maps)
    return mc, known


def random_filtered_multicomplex(
    seed: int,
    max_weight: int = 3,
    max_degree: int = 4,
    max_dim: int = 2,
    fill: float = 0.7,
    total_cap: int = 32,
    weight_pattern: Optional[dict[int, list[int]]] = None,
    density: float = 0.5,
) -> MulticomplexData:
    """Random valid multicomplex with generically nonzero higher structure.

    Unlike the conjugated construction (whose weight-preserving part equals
    the split differential, forcing a degenerate harmonic differential), this
    builds a random weight-nondecreasing square-zero total differential
    degree by degree: each D_h is a random weight-raising matrix composed
    with the RREF reduction map killing Im D_{h-1}.  The reduction map only
    adds support at same-or-higher weight coordinates, so weight blocks stay
    upper triangular and the weight split of D obeys all relations.
    """
    rng = random.Random(seed)
    Q = max_weight
    dims: dict[Bidegree, int] = {}
    total = 0
    for h in range(0, max_degree + 1):
        allowed = weight_pattern.get(h, list(range(0, Q + 1))) if weight_pattern else range(0, Q + 1)
        for a in allowed:
            if rng.random() < fill:
                d = rng.randint(1, max_dim)
                if total + d > total_cap:
                    continue
                dims[(a, h - a)] = d
                total += d

    def blocks_at(h: int) -> list[tuple[int, int, int]]:
        out = []
        off = 0
        for a in range(0, Q + 1):
            d = dims.get((a, h - a), 0)
            if d:
                out.append((a, off, d))
                off += d
        return out

    tot_dim = {h: sum(d for (_a, _o, d) in blocks_at(h)) for h in range(0, max_degree + 2)}

    maps: dict[tuple[int, int, int], Matrix] = {}
    max_order = 0
    prev_image: Optional[Subspace] = None
    for h in range(0, max_degree + 1):
        n, m = tot_dim[h], tot_dim[h + 1]
        if n == 0:
            prev_image = None
            continue
        if m == 0:
            prev_image = None
            continue
        raw = Matrix.zeros(m, n)
        for (a_s, off_s, d_s) in blocks_at(h):
            for (a_t, off_t, d_t) in blocks_at(h + 1):
                if a_t < a_s:
                    continue
                for r in range(d_t):
                    for c in range(d_s):
                        if rng.random() < density:
                            raw.data[off_t + r][off_s + c] = Fraction(rng.choice([-2, -1, 1, 2]))
        if prev_image is not None and prev_image.dim:
            red = Matrix.identity(n)
            for i, p in enumerate(prev_image.pivots):
                for row in range(n):
                    red.data[row][p] = -prev_image.basis.data[i][row] if row != p else (
                        Fraction(1) - prev_image.basis.data[i][row])
            # red kills prev_image and never moves weight down (RREF support
            # sits at same-or-higher coordinates, ordered by weight)
            d_tot = raw.mul(red)
        else:
            d_tot = raw
        prev_image = image(d_tot)
        for (a_s, off_s, d_s) in blocks_at(h):
            for (a_t, off_t, d_t) in blocks_at(h + 1):
                i = a_t - a_s
                if i < 0:
                    continue
                blk = Matrix(d_t, d_s,
                             [[d_tot.data[off_t + r][off_s + c] for c in range(d_s)]
                              for r in range(d_t)])
                if not blk.is_zero():
                    maps[(i, a_s, h - a_s)] = blk
                    max_order = max(max_order, i)
    return MulticomplexData(Q=Q, s=max_order + 1, spaces=dims, maps=maps)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def multicomplex_to_json(mc: MulticomplexData, extra: Optional[dict] = None) -> str:
    spaces = [
        {"a": a, "b": b, "dim": d, "labels": list(mc.label_list(a, b))}
        for (a, b), d in sorted(mc.spaces.items()) if d > 0
    ]
    maps = []
    for (i, a, b), m in sorted(mc.maps.items()):
        if m.is_zero():
            continue
        maps.append({
            "i": i, "a": a, "b": b, "rows": m.rows, "cols": m.cols,
            "entries": [[format_scalar(x) for x in row] for row in m.data],
        })
    doc = {"Q": mc.Q, "s": mc.s, "spaces": spaces, "maps": maps}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=1, sort_keys=True)


def multicomplex_from_json(text: str) -> MulticomplexData:
    doc = json.loads(text)
    return multicomplex_from_dict(doc)


def multicomplex_from_dict(doc: dict) -> MulticomplexData:
    spaces: dict[Bidegree, int] = {}
    labels: dict[Bidegree, tuple[str, ...]] = {}
    for sp in doc["spaces"]:
        key = (int(sp["a"]), int(sp["b"]))
        spaces[key] = int(sp["dim"])
        if sp.get("labels"):
            labels[key] = tuple(sp["labels"])
    maps: dict[tuple[int, int, int], Matrix] = {}
    for mp in doc.get("maps", []):
        m = Matrix(int(mp["rows"]), int(mp["cols"]),
                   [[parse_scalar(x) for x in row] for row in mp["entries"]])
        maps[(int(mp["i"]), int(mp["a"]), int(mp["b"]))] = m
    return MulticomplexData(Q=int(doc["Q"]), s=int(doc["s"]), spaces=spaces,
                            maps=maps, labels=labels)
