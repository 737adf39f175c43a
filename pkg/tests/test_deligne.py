import pytest

from icsheaf import demos
from icsheaf.deligne import (build_ic, build_ic_pure, check_decomposition,
                             clc_coarsen, compare_stratifications)
from icsheaf.fields import QQ
from icsheaf import sections as sec
from icsheaf.sheaves import SheafError, constant_complex
from icsheaf.stratify import StratificationError, validate_stratification

import oracles


def test_manifold_trivial_build():
    # no singular strata: the recursion is the shifted constant sheaf
    from icsheaf.simplicial import SimplicialComplex
    from itertools import combinations
    K = SimplicialComplex(range(6), [list(c) for c in combinations(range(6), 5)])
    strat = validate_stratification(
        K, {"2": [list(c) for c in combinations(range(6), 5)], "1": [], "0": []})
    b = build_ic(strat)
    for sid in sorted(K.full_set().ids):
        assert b.ic.stalk_cohomology(sid) == {-2: 1}


def test_wedge_ic_values(wedge_ic, wedge):
    K, strat = wedge
    v0 = K.id_of([0])
    assert wedge_ic.ic.stalk_cohomology(v0) == {-2: 1, -1: 1}
    assert sec.cell_costalk(wedge_ic.ic, v0) == {1: 1, 2: 1}
    # independent oracle: shifted sphere cohomologies of the two components
    from itertools import combinations
    h4 = oracles.cochain_cohomology_dims([list(c) for c in combinations(range(6), 5)])
    h2 = oracles.cochain_cohomology_dims([list(c) for c in combinations([0, 6, 7, 8], 3)])
    expect = {}
    for q, d in h4.items():
        expect[q - 2] = expect.get(q - 2, 0) + d
    for q, d in h2.items():
        expect[q - 1] = expect.get(q - 1, 0) + d
    assert sec.hypercohomology(wedge_ic.ic) == expect == {-2: 1, -1: 1, 1: 1, 2: 1}
    # costalk at a smooth top-component simplex sits in the manifold degree
    smooth = K.id_of([1, 2])
    assert sec.cell_costalk(wedge_ic.ic, smooth) == {2: 1}


def test_wedge_restriction_to_u1_is_shifted_system(wedge_ic, wedge):
    K, strat = wedge
    filt = wedge_ic.filtration
    back = wedge_ic.ic.restrict_open(filt.U[1])
    for m, um in filt.U_m.items():
        for sid in um.ids:
            assert back.stalk_cohomology(sid) == {-m: 1}


def test_tower_restriction_compatibility(built):
    for name, b in built.items():
        for i in range(len(b.intermediates) - 1):
            prev, cur = b.intermediates[i], b.intermediates[i + 1]
            backed = cur.restrict_open(prev.domain)
            for sid in sorted(prev.domain.ids):
                assert backed.stalk_cohomology(sid) == prev.stalk_cohomology(sid)


def test_vanishing_by_construction(built):
    # degrees on each W_{k+1} stay at or below the middle-perversity cutoff
    for name, b in built.items():
        filt = b.filtration
        n = filt.n
        for k in range(1, n + 1):
            for sid in sorted(filt.W[k + 1].ids):
                table = b.ic.stalk_cohomology(sid)
                assert all(q <= k - 1 - n for q in table), (name, k, sid)


def test_attaching_by_construction(built):
    # costalks vanish in degrees <= n-k across the non-open strata
    for name, b in built.items():
        filt = b.filtration
        n = filt.n
        for k in range(1, n + 1):
            zone = filt.U[k + 1].difference(filt.U[k])
            for sid in sorted(zone.ids):
                table = sec.cell_costalk(b.ic, sid)
                assert all(q > n - k for q in table), (name, k, sid)


def test_pinched_torus_against_normalization_oracle(built):
    # the construction matches the sphere pushed forward: H*(S^2)[1]
    h2 = oracles.cochain_cohomology_dims(demos.icosahedron_faces())
    expect = {q - 1: d for q, d in h2.items()}
    got = sec.hypercohomology(built["pinched-torus"].ic)
    assert got == {q: d for q, d in expect.items() if d} == {-1: 1, 1: 1}


def test_pure_wrapper_matches_direct_build(built, spaces):
    K, strat = spaces["pinched-torus"]
    piece, sub_bundle = build_ic_pure(strat, 1)
    direct = built["pinched-torus"].ic
    for sid in sorted(K.full_set().ids):
        assert piece.stalk_cohomology(sid) == direct.stalk_cohomology(sid)


def test_pure_wrapper_rejects_nonpure(spaces):
    K, strat = spaces["wedge"]
    with pytest.raises(StratificationError, match="dimension 3|no open strata"):
        build_ic_pure(strat, 3)


def test_susp_oracle_and_duality(built):
    cells = [[demos._product_label(u, w) for (u, w) in cell]
             for cell in demos._s1xs2_cells()]
    h_m = oracles.cochain_cohomology_dims(cells)
    assert h_m == {0: 1, 1: 1, 2: 1, 3: 1}
    expect = oracles.suspension_ic_hyperco(h_m, n=2)
    got = sec.hypercohomology(built["susp-s1xs2"].ic)
    assert got == expect == {-2: 1, -1: 1, 1: 1, 2: 1}
    # duality smoke test: the dimension vector is palindromic
    dims = [got.get(q, 0) for q in range(-2, 3)]
    assert dims == dims[::-1]


def test_susp_cone_point_stalk(built, spaces):
    K, strat = spaces["susp-s1xs2"]
    apex = K.id_of([12])
    cells = [[demos._product_label(u, w) for (u, w) in cell]
             for cell in demos._s1xs2_cells()]
    h_m = oracles.cochain_cohomology_dims(cells)
    expect = oracles.truncated_shift_dims(h_m, shift=2, cutoff=-1)
    assert built["susp-s1xs2"].ic.stalk_cohomology(apex) == expect == {-2: 1, -1: 1}


def test_decomposition_wedge_and_nonpure(built):
    rep = check_decomposition(built["wedge"])
    assert rep["passed"]
    rep2 = check_decomposition(built["nonpure-wedge"])
    assert rep2["passed"]
    assert rep2["summand_hypercohomology"][1] == {-1: 1, 1: 1}
    assert rep2["summand_hypercohomology"][2] == {-2: 1, -1: 1, 1: 1, 2: 1}
    assert rep2["sum_hypercohomology"] == {-2: 1, -1: 2, 1: 2, 2: 1}
    assert rep2["direct_hypercohomology"] == rep2["sum_hypercohomology"]


def test_decomposition_pure_space_single_summand(spaces):
    K, strat = spaces["pinched-torus"]
    b = build_ic(strat)
    rep = check_decomposition(b)
    assert rep["passed"] and list(rep["summand_hypercohomology"]) == [1]


def test_decomposition_all_spaces_and_random_refinements(built, spaces):
    import random
    for name, b in built.items():
        if name in ("wedge", "nonpure-wedge", "pinched-torus"):
            continue  # covered elsewhere
        assert check_decomposition(b)["passed"], name
    for name, seed in (("wedge", 41), ("fake-surface", 42)):
        K, strat = spaces[name]
        refined = demos.random_refinement(strat, random.Random(seed))
        rep = check_decomposition(build_ic(refined))
        assert rep["passed"], (name, seed, rep["first_mismatch"])


def test_hypercohomology_additive_over_sums(built):
    S = built["wedge"].ic
    T = S.direct_sum(S)
    hs = sec.hypercohomology(S)
    assert sec.hypercohomology(T) == {q: 2 * d for q, d in hs.items()}


def test_compare_same_and_refined(wedge, spaces):
    K, strat = wedge
    rep, _, _ = compare_stratifications(strat, strat)
    assert rep["passed"]
    refined = demos.refine_stratification(strat, "extra-point")
    rep2, _, _ = compare_stratifications(strat, refined)
    assert rep2["passed"]


def test_compare_naive_fails_with_witness(spaces):
    K, strat = spaces["fake-surface"]
    rep, b1, b2 = compare_stratifications(strat, strat, naive_first=True)
    assert not rep["passed"]
    kinds = {w["kind"] for w in rep["witnesses"]}
    assert "stalk" in kinds
    fake = {tuple(sorted(s)) for s in
            (tuple(t) for t in (K.simplices[i] for i in demos.fake_surface_stratum_ids(K)))}
    first = rep["witnesses"][0]
    assert tuple(first["simplex"]) in fake


def test_coarsen_examples(built, spaces):
    # fake refinement of the wedge coarsens back to the minimal levels
    K, strat = spaces["fake-surface"]
    b = build_ic(strat)
    state = clc_coarsen(strat, b.ic)
    Kw, wedge_doc = demos.demo_space("wedge")
    minimal = validate_stratification(K, wedge_doc["levels"])
    assert all(state.levels[k] == minimal.level(k) for k in range(3))
    # constant sheaf on a manifold with a fake point coarsens to the trivial filtration
    from icsheaf.simplicial import SimplicialComplex
    from itertools import combinations
    Km = SimplicialComplex(range(6), [list(c) for c in combinations(range(6), 5)])
    sm = validate_stratification(
        Km, {"2": [list(c) for c in combinations(range(6), 5)], "1": [[0]], "0": [[0]]})
    S = constant_complex(QQ, Km, Km.full_set()).shift(2)
    st = clc_coarsen(sm, S)
    assert len(st.levels[0]) == 0 and len(st.levels[1]) == 0
    # the pinch point never merges
    Kp, sp = spaces["pinched-torus"]
    stp = clc_coarsen(sp, built["pinched-torus"].ic)
    assert stp.levels[0].tuples() == [(0,)]


def test_coarsen_rejects_non_clc(spaces):
    K, strat = spaces["wedge"]
    # a skyscraper off the strata pattern is not locally constant stratumwise
    v = K.simplex_set({K.id_of([1])})
    sky = constant_complex(QQ, K, v).extend_by_zero(K.full_set())
    with pytest.raises(SheafError, match="locally constant"):
        clc_coarsen(strat, sky)


def test_icbundle_log_and_flags(built):
    b = built["wedge"]
    assert [s["cutoff"] for s in b.log] == [-2, -1]
    assert not b.naive
    assert b.field is QQ
