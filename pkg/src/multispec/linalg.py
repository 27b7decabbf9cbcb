"""Exact linear algebra over the rationals.

Everything downstream (multicomplexes, Hodge kits, spectral pages) is built on
the two value types defined here: dense rational matrices and subspaces held in
reduced-row-echelon canonical form.  All operations are pure and exact; two
subspaces are equal as sets iff their canonical bases are identical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Scalar = Fraction
Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable) -> Vector:
    return tuple(_frac(x) for x in entries)


def zero_vec(n: int) -> Vector:
    return (_ZERO,) * n


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    s = _ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, u: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in u)


class Matrix:
    """Dense matrix of Fractions; rows x cols, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: list[list[Fraction]]):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("matrix shape mismatch")
        self.rows = rows
        self.cols = cols
        self.data = data

    @staticmethod
    def from_rows(rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        data = [[_frac(x) for x in r] for r in rows]
        if data:
            c = len(data[0])
        elif cols is not None:
            c = cols
        else:
            raise ValueError("empty matrix needs explicit column count")
        return Matrix(len(data), c, data)

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, [[_ZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        data = [[_ZERO] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = _ONE
        return Matrix(n, n, data)

    def copy(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [row[:] for row in self.data])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def row(self, i: int) -> Vector:
        return tuple(self.data[i])

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def add(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in add")
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def sub(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in sub")
        return Matrix(self.rows, self.cols,
                      [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def neg(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        c = _frac(c)
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch in mul: {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        out = [[_ZERO] * other.cols for _ in range(self.rows)]
        odata = other.data
        for i, row in enumerate(self.data):
            acc = out[i]
            for k, a in enumerate(row):
                if not a:
                    continue
                orow = odata[k]
                for j, b in enumerate(orow):
                    if b:
                        acc[j] += a * b
        return Matrix(self.rows, other.cols, out)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch in apply")
        out = [_ZERO] * self.rows
        for i, row in enumerate(self.data):
            s = _ZERO
            for a, b in zip(row, v):
                if a and b:
                    s += a * b
            out[i] = s
        return tuple(out)

    def stack(self, other: "Matrix") -> "Matrix":
        """Vertical stack (same column count)."""
        if self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        return Matrix(self.rows + other.rows, self.cols,
                      [r[:] for r in self.data] + [r[:] for r in other.data])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Matrix(self.rows, self.cols + other.cols,
                      [r1 + r2 for r1, r2 in zip(self.data, other.data)])


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Matrix.zeros(rows, cols)
    i0 = 0
    j0 = 0
    for b in blocks:
        for i in range(b.rows):
            row = out.data[i0 + i]
            brow = b.data[i]
            for j in range(b.cols):
                if brow[j]:
                    row[j0 + j] = brow[j]
        i0 += b.rows
        j0 += b.cols
    return out


def _rref_in_place(data: list[list[Fraction]], cols: int) -> list[int]:
    """Row-reduce in place to reduced echelon form; returns pivot columns."""
    pivots: list[int] = []
    r = 0
    nrows = len(data)
    for c in range(cols):
        pr = None
        for i in range(r, nrows):
            if data[i][c]:
                pr = i
                break
        if pr is None:
            continue
        data[r], data[pr] = data[pr], data[r]
        piv = data[r][c]
        if piv != _ONE:
            inv = _ONE / piv
            row = data[r]
            for j in range(c, cols):
                if row[j]:
                    row[j] = row[j] * inv
        prow = data[r]
        for i in range(nrows):
            if i == r:
                continue
            f = data[i][c]
            if not f:
                continue
            row = data[i]
            for j in range(c, cols):
                pv = prow[j]
                if pv:
                    row[j] = row[j] - f * pv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    data = [row[:] for row in M.data]
    pivots = _rref_in_place(data, M.cols)
    return Matrix(M.rows, M.cols, data), pivots


class Subspace:
    """Subspace of Q^ambient, stored as its unique RREF row basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient: int, basis: Matrix, pivots: list[int]):
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of Q^{self.ambient})"

    def basis_rows(self) -> list[Vector]:
        return [self.basis.row(i) for i in range(self.basis.rows)]

    def contains(self, v: Sequence[Fraction]) -> bool:
        if len(v) != self.ambient:
            raise ValueError("ambient mismatch")
        w = list(v)
        for i, p in enumerate(self.pivots):
            c = w[p]
            if c:
                row = self.basis.data[i]
                for j in range(p, self.ambient):
                    if row[j]:
                        w[j] -= c * row[j]
        return not any(w)

    def coords(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of v in the RREF basis (v must lie in the subspace)."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return tuple(v[p] for p in self.pivots)

    def from_coords(self, c: Sequence[Fraction]) -> Vector:
        out = [_ZERO] * self.ambient
        for ci, row in zip(c, self.basis.data):
            if ci:
                for j, b in enumerate(row):
                    if b:
                        out[j] += ci * b
        return tuple(out)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.basis_rows())


def zero_subspace(ambient: int) -> Subspace:
    return Subspace(ambient, Matrix.zeros(0, ambient), [])


def full_subspace(ambient: int) -> Subspace:
    return Subspace(ambient, Matrix.identity(ambient), list(range(ambient)))


def canonical_basis(vectors, ambient: Optional[int] = None) -> Subspace:
    """Row space of the input vectors, in canonical RREF form."""
    if isinstance(vectors, Matrix):
        data = [row[:] for row in vectors.data]
        amb = vectors.cols
    else:
        data = [[_frac(x) for x in r] for r in vectors]
        amb = len(data[0]) if data else ambient
    if amb is None:
        raise ValueError("ambient dimension required for empty input")
    if ambient is not None and data and amb != ambient:
        raise ValueError("ambient mismatch")
    pivots = _rref_in_place(data, amb)
    rank = len(pivots)
    return Subspace(amb, Matrix(rank, amb, data[:rank]), pivots)


def kernel(M: Matrix) -> Subspace:
    """Null space {v : Mv = 0} as a canonical subspace of Q^cols."""
    R, pivots = rref(M)
    pivset = set(pivots)
    free = [j for j in range(M.cols) if j not in pivset]
    rows = []
    for f in free:
        v = [_ZERO] * M.cols
        v[f] = _ONE
        for i, p in enumerate(pivots):
            coef = R.data[i][f]
            if coef:
                v[p] = -coef
        rows.append(v)
    return canonical_basis(rows, M.cols)


def image(M: Matrix) -> Subspace:
    """Column space of M as a canonical subspace of Q^rows."""
    return canonical_basis([M.column(j) for j in range(M.cols)], M.rows)


def row_space(M: Matrix) -> Subspace:
    return canonical_basis(M.data, M.cols)


def _solve_gauss(M: Matrix, rhs_cols: list[list[Fraction]]) -> Optional[list[list[Fraction]]]:
    """Particular solutions of M x = b for several right-hand sides.

    Returns one solution per rhs (free variables set to zero), or None if any
    system is inconsistent.
    """
    n = M.cols
    k = len(rhs_cols)
    data = [row[:] + [col[i] for col in rhs_cols] for i, row in enumerate(M.data)]
    pivots = _rref_in_place(data, n + k)
    if any(p >= n for p in pivots):
        return None
    sols = []
    for t in range(k):
        x = [_ZERO] * n
        for i, p in enumerate(pivots):
            x[p] = data[i][n + t]
        sols.append(x)
    return sols


def solve_min_norm_multi(M: Matrix, rhs_cols: list[list[Fraction]]) -> Optional[list[list[Fraction]]]:
    """Minimum-norm solutions of M x = b for several right-hand sides.

    The minimum-norm solution is M^T y with (M M^T) y = b; it is unique and
    linear in b, which keeps downstream constructions deterministic.
    """
    G = M.mul(M.transpose())
    ys = _solve_gauss(G, rhs_cols)
    if ys is None:
        return None
    Mt = M.transpose()
    return [list(Mt.apply(y)) for y in ys]


def solve_particular(M: Matrix, b: Sequence[Fraction],
                     constraint: Optional[Subspace] = None) -> Optional[Vector]:
    """Minimum-norm x with M x = b (and x in `constraint` when given).

    Returns None when no solution exists.  With a constraint S the system is
    augmented with the rows of Id - projector(S), which forces x into S while
    keeping the plain minimum-norm machinery.
    """
    b = [_frac(x) for x in b]
    if len(b) != M.rows:
        raise ValueError("rhs length mismatch")
    A = M
    rhs = b
    if constraint is not None:
        if constraint.ambient != M.cols:
            raise ValueError("constraint ambient mismatch")
        P = projector(constraint)
        comp = Matrix.identity(M.cols).sub(P)
        A = M.stack(comp)
        rhs = b + [_ZERO] * M.cols
    sols = solve_min_norm_multi(A, [rhs])
    if sols is None:
        return None
    return tuple(sols[0])


def orthogonal_complement(S: Subspace) -> Subspace:
    """Orthogonal complement w.r.t. the standard dot product."""
    return kernel(S.basis)


def subspace_sum(S1: Subspace, S2: Subspace) -> Subspace:
    if S1.ambient != S2.ambient:
        raise ValueError("ambient mismatch in sum")
    return canonical_basis(S1.basis.data + S2.basis.data, S1.ambient)


def intersect(S1: Subspace, S2: Subspace) -> Subspace:
    if S1.ambient != S2.ambient:
        raise ValueError("ambient mismatch in intersection")
    return orthogonal_complement(
        subspace_sum(orthogonal_complement(S1), orthogonal_complement(S2)))


def projector(S: Subspace) -> Matrix:
    """Orthogonal projector onto S: symmetric, idempotent, image S."""
    B = S.basis
    if B.rows == 0:
        return Matrix.zeros(S.ambient, S.ambient)
    G = B.mul(B.transpose())
    Ginv = invert(G)
    return B.transpose().mul(Ginv).mul(B)


def invert(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise ValueError("only square matrices invert")
    n = M.rows
    data = [row[:] + [_ONE if i == j else _ZERO for j in range(n)]
            for i, row in enumerate(M.data)]
    pivots = _rref_in_place(data, 2 * n)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return Matrix(n, n, [row[n:] for row in data])


def pinv(M: Matrix) -> Matrix:
    """Exact Moore-Penrose pseudoinverse via full-rank factorization."""
    R, pivots = rref(M)
    r = len(pivots)
    if r == 0:
        return Matrix.zeros(M.cols, M.rows)
    G = Matrix(r, M.cols, [R.data[i][:] for i in range(r)])
    F = Matrix(M.rows, r, [[M.data[i][p] for p in pivots] for i in range(M.rows)])
    GGt_inv = invert(G.mul(G.transpose()))
    FtF_inv = invert(F.transpose().mul(F))
    return G.transpose().mul(GGt_inv).mul(FtF_inv).mul(F.transpose())


def parse_scalar(s: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    return Fraction(s)


def format_scalar(x: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    return str(x)
