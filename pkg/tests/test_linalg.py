import random
from fractions import Fraction

from multispec.linalg import (
    Matrix,
    canonical_basis,
    dot,
    full_subspace,
    image,
    intersect,
    invert,
    kernel,
    orthogonal_complement,
    pinv,
    projector,
    solve_particular,
    subspace_sum,
    zero_subspace,
)

F = Fraction


def rand_matrix(rng, rows, cols, lo=-3, hi=3):
    return Matrix.from_rows(
        [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols)


def test_canonical_basis_scaling_invariance():
    s = canonical_basis([[2, 0], [0, 3]])
    assert s.basis == Matrix.from_rows([[1, 0], [0, 1]])


def test_canonical_basis_empty_input():
    s = canonical_basis([], ambient=4)
    assert s.dim == 0 and s.ambient == 4


def test_canonical_basis_dependent_rows():
    s = canonical_basis([[1, 1], [2, 2]])
    assert s.dim == 1
    assert s.basis == Matrix.from_rows([[1, 1]])


def test_kernel_image_trivial():
    z = Matrix.zeros(3, 3)
    assert kernel(z).dim == 3
    assert image(z).dim == 0
    i = Matrix.identity(4)
    assert kernel(i).dim == 0
    assert image(i).dim == 4


def test_kernel_image_rank_one():
    m = Matrix.from_rows([[1, 2], [2, 4]])
    assert kernel(m) == canonical_basis([[2, -1]])
    assert image(m) == canonical_basis([[1, 2]])


def test_solve_identity_and_inconsistent():
    i = Matrix.identity(3)
    assert solve_particular(i, [1, 2, 3]) == (1, 2, 3)
    m = Matrix.from_rows([[1, 0], [0, 0]])
    assert solve_particular(m, [0, 1]) is None


def test_solve_min_norm():
    m = Matrix.from_rows([[1, 1]])
    assert solve_particular(m, [2]) == (1, 1)


def test_solve_with_constraint():
    # x + y = 2 restricted to the line x = y picks (1, 1); restricted to the
    # x-axis it must take (2, 0).
    m = Matrix.from_rows([[1, 1]])
    line = canonical_basis([[1, 1]])
    assert solve_particular(m, [2], constraint=line) == (1, 1)
    axis = canonical_basis([[1, 0]])
    assert solve_particular(m, [2], constraint=axis) == (2, 0)
    perp = canonical_basis([[1, -1]])
    assert solve_particular(m, [2], constraint=perp) is None


def test_orthogonal_complement_examples():
    assert orthogonal_complement(zero_subspace(3)) == full_subspace(3)
    assert orthogonal_complement(canonical_basis([[1, 0]])) == canonical_basis([[0, 1]])
    s = orthogonal_complement(canonical_basis([[1, 1, 0]]))
    assert s == canonical_basis([[1, -1, 0], [0, 0, 1]])


def test_intersect_and_sum():
    a = canonical_basis([[1, 0]])
    b = canonical_basis([[0, 1]])
    assert intersect(a, b).dim == 0
    assert subspace_sum(a, b) == full_subspace(2)
    s = canonical_basis([[1, 1], [1, 0]])
    t = canonical_basis([[1, 1], [0, 1]])
    assert intersect(s, t) == full_subspace(2)
    assert intersect(s, s) == s
    assert subspace_sum(s, s) == s


def test_projector_examples():
    assert projector(full_subspace(2)) == Matrix.identity(2)
    assert projector(zero_subspace(2)) == Matrix.zeros(2, 2)
    p = projector(canonical_basis([[1, 1]]))
    h = F(1, 2)
    assert p == Matrix.from_rows([[h, h], [h, h]])


def test_projector_properties_random():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 6)
        s = canonical_basis(
            [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, n))],
            ambient=n)
        p = projector(s)
        assert p.mul(p) == p
        assert p.transpose() == p
        assert image(p) == s
        assert kernel(p) == orthogonal_complement(s)
        for v in s.basis_rows():
            assert p.apply(v) == v
        for w in orthogonal_complement(s).basis_rows():
            assert not any(p.apply(w))


def test_rank_nullity_and_fredholm_random():
    rng = random.Random(11)
    for _ in range(40):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        m = rand_matrix(rng, r, c)
        k = kernel(m)
        im = image(m)
        assert k.dim + im.dim == c
        assert im == orthogonal_complement(kernel(m.transpose()))
        for v in k.basis_rows():
            assert not any(m.apply(v))


def test_canonical_idempotent_and_order_insensitive():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, 5))]
        s = canonical_basis(rows, n)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        scaled = [[2 * x for x in r] for r in shuffled]
        assert canonical_basis(scaled, n) == s
        assert canonical_basis(s.basis) == s


def test_solve_roundtrip_exact():
    rng = random.Random(5)
    for _ in range(20):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        m = rand_matrix(rng, r, c)
        x = [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(c)]
        b = m.apply(x)
        sol = solve_particular(m, b)
        assert sol is not None
        assert m.apply(sol) == b


def test_dim_formula_intersection_sum():
    rng = random.Random(13)
    for _ in range(25):
        n = rng.randint(1, 7)
        s1 = canonical_basis(
            [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, n))], n)
        s2 = canonical_basis(
            [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, n))], n)
        assert s1.dim + s2.dim == intersect(s1, s2).dim + subspace_sum(s1, s2).dim


def test_pinv_moore_penrose():
    rng = random.Random(17)
    for _ in range(20):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        a = rand_matrix(rng, r, c)
        p = pinv(a)
        assert a.mul(p).mul(a) == a
        assert p.mul(a).mul(p) == p
        assert a.mul(p).transpose() == a.mul(p)
        assert p.mul(a).transpose() == p.mul(a)


def test_invert():
    m = Matrix.from_rows([[2, 1], [1, 1]])
    assert m.mul(invert(m)) == Matrix.identity(2)


def test_subspace_coords_roundtrip():
    s = canonical_basis([[1, 2, 0], [0, 0, 3]])
    v = s.from_coords([F(1, 2), F(2)])
    assert s.contains(v)
    assert s.coords(v) == (F(1, 2), F(2))
    assert not s.contains((1, 0, 0))


def test_dot_and_formats():
    from multispec.linalg import format_scalar, parse_scalar

    assert dot([1, 2], [3, 4]) == 11
    assert parse_scalar("3/4") == F(3, 4)
    assert format_scalar(F(3, 4)) == "3/4"
    assert format_scalar(F(5)) == "5"
    assert parse_scalar("-2") == -2
