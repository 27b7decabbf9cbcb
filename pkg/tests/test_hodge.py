import random
from fractions import Fraction

from multispec.hodge import build_hodge_kit, harmonic_space, hodge_split
from multispec.linalg import (
    Matrix,
    canonical_basis,
    image,
    intersect,
    kernel,
    projector,
    vec_add,
)
from multispec.multicomplex import (
    MulticomplexData,
    random_conjugated_multicomplex,
    restrict_to_d0,
    total_cohomology,
    total_complex,
)


def test_zero_d0_gives_identity_pi0():
    mc = MulticomplexData(Q=1, s=1, spaces={(0, 0): 2, (1, 0): 1}, maps={})
    kit = build_hodge_kit(mc)
    assert kit.pi0(0, 0) == Matrix.identity(2)
    assert kit.delta0(0, 0).is_zero()
    assert kit.e0(0, 0).dim == 2
    assert kit.e0(1, 0).dim == 1


def test_identity_d0_kills_harmonics():
    mc = MulticomplexData(
        Q=0, s=1, spaces={(0, 0): 1, (0, 1): 1},
        maps={(0, 0, 0): Matrix.from_rows([[1]])})
    kit = build_hodge_kit(mc)
    assert kit.e0(0, 0).dim == 0
    assert kit.e0(0, 1).dim == 0
    assert kit.pi0(0, 0).is_zero()


def rand_kits(n, start=0):
    for seed in range(start, start + n):
        mc, known = random_conjugated_multicomplex(seed)
        yield seed, mc, build_hodge_kit(mc)


def test_exact_operator_identities():
    for seed, mc, kit in rand_kits(15):
        for (a, b) in mc.bidegrees():
            d0 = kit.d0(a, b)
            inv_up = kit.d0inv(a, b + 1)      # C_{a,b+1} -> C_{a,b}
            inv_here = kit.d0inv(a, b)        # C_{a,b}   -> C_{a,b-1}
            d_below = kit.d0(a, b - 1)
            pi0 = kit.pi0(a, b)
            n = mc.dim(a, b)
            ident = Matrix.identity(n)
            # delta_0 is the transpose in the orthonormal frame
            assert kit.delta0(a, b + 1) == d0.transpose()
            # (d_0^{-1})^2 = 0
            assert inv_here.mul(inv_up).is_zero() or mc.dim(a, b - 2) == 0
            # d_0 d_0^{-1} = projector(Im d_0), d_0^{-1} d_0 = projector(Im delta_0)
            if d_below.cols:
                assert d_below.mul(kit.d0inv(a, b)) == projector(image(d_below))
            if d0.rows:
                assert inv_up.mul(d0) == projector(image(d0.transpose()))
            # pi_0 identities
            assert pi0 == ident.sub(inv_up.mul(d0)).sub(d_below.mul(inv_here))
            assert pi0.mul(pi0) == pi0
            assert pi0.transpose() == pi0
            assert image(pi0) == kit.e0(a, b)
            # box_0 symmetric with kernel = e0 = ker d0 cap ker delta0
            box = kit.box0(a, b)
            assert box.transpose() == box
            assert kernel(box) == kit.e0(a, b)
            both = intersect(kernel(d0), kernel(kit.delta0(a, b)))
            assert both == kit.e0(a, b)


def test_orthogonal_three_way_dimension_split():
    for seed, mc, kit in rand_kits(10, start=20):
        for (a, b) in mc.bidegrees():
            d_below = kit.d0(a, b - 1)
            d_here = kit.d0(a, b)
            dim_im = image(d_below).dim if d_below.cols else 0
            dim_coim = image(d_here.transpose()).dim if d_here.rows else 0
            assert dim_im + kit.e0(a, b).dim + dim_coim == mc.dim(a, b)
            # pairwise orthogonality of the three pieces
            if d_below.cols and d_here.rows:
                assert d_here.mul(d_below).is_zero()


def test_hodge_split_recombines_and_lands_in_pieces():
    rng = random.Random(31)
    for seed, mc, kit in rand_kits(10, start=40):
        for (a, b) in mc.bidegrees():
            n = mc.dim(a, b)
            x = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n))
            check, bar, hat = hodge_split(kit, a, b, x)
            assert vec_add(vec_add(check, bar), hat) == x
            d_below = kit.d0(a, b - 1)
            if d_below.cols:
                assert image(d_below).contains(check)
            else:
                assert not any(check)
            assert kit.e0(a, b).contains(bar)
            up = kit.d0(a, b)
            if up.rows:
                assert image(up.transpose()).contains(hat)
            else:
                assert not any(hat)


def test_split_of_special_vectors():
    for seed, mc, kit in rand_kits(5, start=60):
        for (a, b) in mc.bidegrees():
            for v in kit.e0(a, b).basis_rows():
                check, bar, hat = hodge_split(kit, a, b, v)
                assert bar == v and not any(check) and not any(hat)
            d_below = kit.d0(a, b - 1)
            if d_below.cols:
                y = tuple(Fraction(1) for _ in range(d_below.cols))
                x = d_below.apply(y)
                check, bar, hat = hodge_split(kit, a, b, x)
                assert check == x and not any(bar) and not any(hat)


def test_harmonic_dims_match_d0_cohomology():
    # sum over weights of dim e0 equals the cohomology of (Tot C, d_0)
    for seed in range(8):
        mc, _ = random_conjugated_multicomplex(seed, max_weight=2, max_degree=3)
        kit = build_hodge_kit(mc)
        tc0 = total_complex(restrict_to_d0(mc))
        per_degree: dict[int, int] = {}
        for (a, b) in mc.bidegrees():
            per_degree[a + b] = per_degree.get(a + b, 0) + kit.e0(a, b).dim
        for h in tc0.degrees:
            assert per_degree.get(h, 0) == total_cohomology(tc0, h)[0]


def test_harmonic_space_alias():
    mc, _ = random_conjugated_multicomplex(2)
    kit = build_hodge_kit(mc)
    for (a, b) in mc.bidegrees():
        assert harmonic_space(kit, a, b) == kit.e0(a, b)
