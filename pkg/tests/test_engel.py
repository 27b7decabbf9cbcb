"""Engel-model regressions pinning the exact truncated-model behavior."""

from multispec.linalg import canonical_basis, image, intersect, kernel, orthogonal_complement


def e0_subspace(stack, a, b):
    return canonical_basis(
        [v for v in stack.kit.e0(a, b).basis_rows()], stack.mc.dim(a, b))


def test_engel_chain_paths_and_station_dims(engel3):
    chains, truncated = engel3.ws.enumerate_spectral_complexes()
    assert not truncated and len(chains) == 2
    a, b = chains
    assert a.orders == [1, 2, 3, 1]
    assert b.orders == [1, 3, 2, 1]
    assert [(st.degree, st.weight, st.space.dim) for st in a.stations] == [
        (0, 0, 14), (1, 1, 28), (2, 3, 14), (3, 6, 23), (4, 7, 14)]
    assert [(st.degree, st.weight, st.space.dim) for st in b.stations] == [
        (0, 0, 14), (1, 1, 25), (2, 4, 14), (3, 6, 28), (4, 7, 14)]


def test_engel_truncation_collapses_delta3_into_top(engel3):
    # Im d_c^3|_3 sits inside Im d_c^2|_4 on polynomial coefficients, so the
    # third-page differential into (6,-3) vanishes and B_3 = B_4 there.
    ws = engel3.ws
    rum = engel3.rum
    i3 = image(rum.dc_block(3, 3, -1))
    i2 = image(rum.dc_block(2, 4, -2))
    assert i3.is_subspace_of(i2)
    assert ws.b_direct(3, 6, 3) == ws.b_direct(4, 6, 3)
    assert ws.delta_rank(3, 3, 2) == 0
    chains, _ = ws.enumerate_spectral_complexes()
    first = next(c for c in chains if c.orders == [1, 2, 3, 1])
    assert first.deltas[2].is_zero()


def test_engel_z_side_strictness_survives_truncation(engel3):
    ws = engel3.ws
    z3 = ws.z_direct(3, 1, 1)
    z4 = ws.z_direct(4, 1, 1)
    assert z4.is_subspace_of(z3) and z4 != z3
    assert ws.delta_rank(3, 1, 1) == 1


def test_engel_summand_decomposition_flags(engel3):
    chains, _ = engel3.ws.enumerate_spectral_complexes()
    for ch in chains:
        for t, orders in enumerate(ch.summand_orders):
            # Engel arrows carry a single differential order (or none when the
            # truncated arrow is zero)
            assert len(orders) <= 1
            if orders:
                assert orders[0] == ch.orders[t]


def test_engel_station_spaces_from_constructions(engel3):
    ws, rum, kit, mc = engel3.ws, engel3.rum, engel3.kit, engel3.mc
    # expected spaces built from raw operators, independent of e_jl internals
    e0_11 = e0_subspace(engel3, 1, 0)
    dc2 = rum.dc_block(2, 1, 0)
    ker_coords = kernel(dc2)
    expected_ker = canonical_basis(
        [kit.e0(1, 0).from_coords(c) for c in ker_coords.basis_rows()], mc.dim(1, 0))
    assert ws.e_jl(3, 1, 1, 1) == expected_ker
    im2 = image(rum.dc_block_ambient(2, 4, -2).mul(
        kit.e0(4, -2).basis.transpose()))
    expected_perp = intersect(e0_subspace(engel3, 6, -3), orthogonal_complement(im2))
    assert ws.e_jl(1, 3, 6, 3) == expected_perp
