import random
from fractions import Fraction

import pytest

from multispec.hodge import build_hodge_kit
from multispec.linalg import (
    Matrix,
    canonical_basis,
    image,
    kernel,
    solve_min_norm_multi,
    subspace_sum,
    vec_add,
    vec_sub,
    zero_subspace,
)
from multispec.multicomplex import (
    MulticomplexData,
    random_conjugated_multicomplex,
    random_filtered_multicomplex,
    total_cohomology,
    total_complex,
)
from multispec.rumin import build_rumin, rumin_cohomology
from multispec.spectral import SpectralWorkspace


def workspace(mc):
    kit = build_hodge_kit(mc)
    return SpectralWorkspace(build_rumin(mc, kit))


def rand_ws(n, start=0, filtered=False, **kw):
    for seed in range(start, start + n):
        if filtered:
            mc = random_filtered_multicomplex(seed, **kw)
            known = None
        else:
            mc, known = random_conjugated_multicomplex(seed, **kw)
        yield seed, mc, known, workspace(mc)


def test_z1_is_kernel_of_d0():
    for seed, mc, known, ws in rand_ws(6):
        for (a, b) in mc.bidegrees():
            assert ws.z_direct(1, a, a + b) == kernel(mc.dmat(0, a, b))


def test_b1_is_image_of_d0():
    for seed, mc, known, ws in rand_ws(4, start=6):
        for (a, b) in mc.bidegrees():
            below = mc.dmat(0, a, b - 1)
            expected = image(below) if below.cols else zero_subspace(mc.dim(a, b))
            assert ws.b_direct(1, a, a + b) == expected


def test_pure_d0_all_pages_equal_first():
    pattern = {h: [0, 1, 2] for h in range(5)}
    mc, _ = random_conjugated_multicomplex(3, weight_pattern=pattern, fill=0.8)
    mc0 = MulticomplexData(mc.Q, 1, mc.spaces,
                           {k: m for k, m in mc.maps.items() if k[0] == 0})
    ws = workspace(mc0)
    for (a, b) in mc0.bidegrees():
        k = a + b
        z1, b1 = ws.z_direct(1, a, k), ws.b_direct(1, a, k)
        for r in range(2, mc0.Q + 3):
            assert ws.z_direct(r, a, k) == z1
            assert ws.b_direct(r, a, k) == b1
        assert ws.index_sets().get((a, k), []) == [] or ws.kit.e0(a, b).dim == 0


def test_inclusion_chain():
    for seed, mc, known, ws in rand_ws(8, start=10, filtered=True):
        for (a, b) in mc.bidegrees():
            k = a + b
            rmax = mc.Q + 2
            for r in range(1, rmax):
                assert ws.b_direct(r, a, k).is_subspace_of(ws.b_direct(r + 1, a, k))
                assert ws.z_direct(r + 1, a, k).is_subspace_of(ws.z_direct(r, a, k))
            assert ws.b_direct(rmax, a, k).is_subspace_of(ws.z_direct(rmax, a, k))
            for r in range(1, rmax + 1):
                assert ws.b_direct(r, a, k).is_subspace_of(ws.z_direct(r, a, k))


def test_harmonic_equals_direct_mod_im_d0():
    # Z_r = Im d_0 + z_harmonic and B_r = Im d_0 + b_harmonic (orthogonal split)
    for seed, mc, known, ws in rand_ws(8, start=20, filtered=True):
        for (a, b) in mc.bidegrees():
            k = a + b
            below = mc.dmat(0, a, b - 1)
            imd0 = image(below) if below.cols else zero_subspace(mc.dim(a, b))
            for r in range(1, mc.Q + 3):
                zh = ws.z_harmonic(r, a, k)
                assert subspace_sum(imd0, zh) == ws.z_direct(r, a, k), \
                    f"seed {seed} Z_{r} at ({a},{k})"
                bh = ws.b_harmonic(r, a, k)
                assert subspace_sum(imd0, bh) == ws.b_direct(r, a, k), \
                    f"seed {seed} B_{r} at ({a},{k})"
                # harmonic parts really are harmonic
                e0 = ws.kit.e0(a, b)
                assert zh.is_subspace_of(e0) or zh.dim == 0
                assert bh.is_subspace_of(e0) or bh.dim == 0


def test_z2_b2_harmonic_single_term_formulas():
    for seed, mc, known, ws in rand_ws(6, start=40, filtered=True):
        for (a, b) in mc.bidegrees():
            k = a + b
            e0 = ws.kit.e0(a, b)
            if e0.dim == 0:
                continue
            dc1 = ws.rum.dc_block(1, a, b)
            expected_z = canonical_basis(
                [e0.from_coords(c) for c in kernel(dc1).basis_rows()], mc.dim(a, b))
            assert ws.z_harmonic(2, a, k) == expected_z
            prev = ws.kit.e0(a - 1, b)
            if prev.dim:
                dc1p = ws.rum.dc_block(1, a - 1, b)
                vecs = [e0.from_coords(dc1p.apply(v))
                        for v in Matrix.identity(prev.dim).data]
                assert ws.b_harmonic(2, a, k) == canonical_basis(vecs, mc.dim(a, b))
            else:
                assert ws.b_harmonic(2, a, k).dim == 0


def test_e_jl_with_ones_is_harmonic_space():
    for seed, mc, known, ws in rand_ws(5, start=50, filtered=True):
        for (a, b) in mc.bidegrees():
            e0_sub = canonical_basis(
                [v for v in ws.kit.e0(a, b).basis_rows()], mc.dim(a, b)) \
                if ws.kit.e0(a, b).dim else zero_subspace(mc.dim(a, b))
            assert ws.e_jl(1, 1, a, a + b) == e0_sub


def test_delta_on_boundary_is_zero():
    for seed, mc, known, ws in rand_ws(8, start=60, filtered=True):
        for (a, b) in mc.bidegrees():
            k = a + b
            for r in range(1, mc.Q + 2):
                bsub = ws.b_direct(r, a, k)
                for v in bsub.basis_rows():
                    rep = ws.delta_apply(r, a, k, v)
                    assert not any(rep), f"seed {seed} r={r} ({a},{k})"


def test_delta_image_lands_in_next_z_orthogonal_to_b():
    for seed, mc, known, ws in rand_ws(6, start=70, filtered=True):
        for (a, b) in mc.bidegrees():
            k = a + b
            for r in range(1, mc.Q + 2):
                reps, dom = ws.delta_reps(r, a, k)
                if not reps:
                    continue
                tgt_p, tgt_k = a + r, k + 1
                zt = ws.z_direct(r, tgt_p, tgt_k)
                bt = ws.b_direct(r, tgt_p, tgt_k)
                for rep in reps:
                    if not any(rep):
                        continue
                    assert zt.contains(rep)
                    assert all(
                        not sum(x * y for x, y in zip(rep, w)) for w in bt.basis_rows())


def test_delta_witness_independence():
    # perturbing the minimum-norm witnesses by a kernel element of the witness
    # system changes the raw value only by an element of B_r at the target
    rng = random.Random(5)
    checked = 0
    for seed, mc, known, ws in rand_ws(60, start=80, filtered=True, max_weight=4, fill=0.85):
        if checked >= 20:
            break
        for (a, b) in mc.bidegrees():
            k = a + b
            for r in range(3, mc.Q + 2):
                dom = ws.z_direct(r, a, k)
                if dom.dim == 0:
                    continue
                M, _ = ws._witness_system(r, a, k)
                if M.cols == 0:
                    continue
                kerM = kernel(M)
                if kerM.dim == 0:
                    continue
                e0_src = ws.kit.e0(a, b)
                if e0_src.dim == 0:
                    continue
                v = dom.basis_rows()[rng.randrange(dom.dim)]
                bar = ws.kit.pi0(a, b).apply(v)
                ab = e0_src.coords(bar)
                rhs = ws._witness_rhs(r, a, k, ab)
                sols = solve_min_norm_multi(M, [rhs])
                assert sols is not None
                w0 = sols[0]
                kv = kerM.basis_rows()[rng.randrange(kerM.dim)]
                w1 = [x + y for x, y in zip(w0, kv)]

                def raw(witness):
                    e0_tgt = ws.kit.e0(a + r, k + 1 - a - r)
                    acc = list(ws.rum.dc_block(r, a, b).apply(ab))
                    col_blocks = [(i, ws.kit.e0(a + i, b - i).dim) for i in range(1, r - 1)]
                    off = 0
                    offsets = {}
                    for i, nb in col_blocks:
                        offsets[i] = off
                        off += nb
                    for i in range(2, r):
                        idx = r - i
                        nb = dict(col_blocks).get(idx, 0)
                        if nb == 0:
                            continue
                        di = ws.rum.dc_block(i, a + idx, b - idx)
                        corr = di.apply(witness[offsets[idx]:offsets[idx] + nb])
                        acc = [x - y for x, y in zip(acc, corr)]
                    return e0_tgt.from_coords(acc) if e0_tgt.dim else ()

                r0, r1 = raw(w0), raw(w1)
                if r0 or r1:
                    diff = vec_sub(r1, r0)
                    assert ws.b_direct(r, a + r, k + 1).contains(diff)
                    checked += 1
    assert checked >= 20


def test_index_sets_and_chains_on_pure_d0():
    pattern = {h: [0, 1] for h in range(4)}
    mc, _ = random_conjugated_multicomplex(2, weight_pattern=pattern, fill=0.9)
    mc0 = MulticomplexData(mc.Q, 1, mc.spaces,
                           {k: m for k, m in mc.maps.items() if k[0] == 0})
    ws = workspace(mc0)
    assert all(not orders for orders in ws.index_sets().values())
    chains, truncated = ws.enumerate_spectral_complexes()
    assert chains == [] and not truncated


def test_chain_structure_and_composition():
    for seed, mc, known, ws in rand_ws(12, start=120, filtered=True):
        chains, truncated = ws.enumerate_spectral_complexes()
        assert not truncated
        for ch in chains:
            assert len(ch.orders) >= 1
            for t in range(len(ch.orders)):
                src = ch.stations[t]
                tgt = ch.stations[t + 1]
                assert tgt.weight == src.weight + ch.orders[t]
                assert tgt.degree == src.degree + 1
                # delta image contained in the next station space
                for row in ch.deltas[t].data:
                    if any(row):
                        assert tgt.space.contains(row)
            # consecutive deltas compose to zero
            for t in range(len(ch.orders) - 1):
                r_next = ch.orders[t + 1]
                p, k = ch.stations[t + 1].weight, ch.stations[t + 1].degree
                for row in ch.deltas[t].data:
                    if any(row):
                        out = ws.delta_apply(r_next, p, k, row)
                        assert not any(out)


def test_station_spaces_inside_harmonic():
    for seed, mc, known, ws in rand_ws(6, start=140, filtered=True):
        chains, _ = ws.enumerate_spectral_complexes()
        for ch in chains:
            for st in ch.stations:
                e0 = ws.kit.e0(st.weight, st.degree - st.weight)
                assert st.space.is_subspace_of(e0)


def test_stabilized_cohomology_matches_total():
    for seed, mc, known, ws in rand_ws(10, start=160):
        tc = ws.rum.tc
        for k in tc.degrees:
            stab = ws.stabilized_cohomology(k)
            total, _ = total_cohomology(tc, k)
            assert stab.total == total == known.get(k, 0), f"seed {seed} degree {k}"


def test_main_theorem_dimension_identities():
    # dim H(E_0, d_c) = dim H(Tot, d) = sum_p (dim Z_inf - dim B_inf)
    stacks = list(rand_ws(5, start=180)) + list(rand_ws(8, start=180, filtered=True))
    for seed, mc, known, ws in stacks:
        tc = ws.rum.tc
        for k in tc.degrees:
            hr, _ = rumin_cohomology(ws.rum, k)
            ht, _ = total_cohomology(tc, k)
            stab = ws.stabilized_cohomology(k)
            assert hr == ht == stab.total


def test_single_weight_pattern_extracts_rumin_complex():
    # one populated weight per degree -> exactly one chain, stations = full e0,
    # every delta literally the d_c^r matrix
    produced = 0
    for seed in range(40):
        pattern = {0: [0], 1: [1], 2: [2], 3: [3], 4: [4]}
        mc = random_filtered_multicomplex(
            seed, max_weight=4, weight_pattern=pattern, fill=0.95, max_dim=3)
        ws = workspace(mc)
        nodes, edges = ws.arrow_graph()
        chains, _ = ws.enumerate_spectral_complexes()
        if not edges:
            assert chains == []
            continue
        # chains partition the edges; when the arrow graph is one unbroken
        # path through every populated degree there is exactly one chain
        assert sum(len(c.orders) for c in chains) == len(edges)
        degs = sorted({k for (_p, k) in nodes})
        unbroken = all(
            any(k == d for (_p, k, _r) in edges) for d in degs[:-1])
        if unbroken:
            assert len(chains) == 1
        for ch in chains:
            produced += 1
            for st in ch.stations:
                e0 = ws.kit.e0(st.weight, st.degree - st.weight)
                amb = mc.dim(st.weight, st.degree - st.weight)
                assert st.space == canonical_basis(
                    [v for v in e0.basis_rows()], amb)
            for t, r in enumerate(ch.orders):
                st = ch.stations[t]
                a, b = st.weight, st.degree - st.weight
                dcr = ws.rum.dc_block_ambient(r, a, b)
                for row_idx, v in enumerate(st.space.basis_rows()):
                    assert ch.deltas[t].row(row_idx) == dcr.apply(v)
    assert produced >= 10
