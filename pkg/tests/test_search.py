import pytest

import skewlab as sl
from conftest import brute_max_free


def test_grid_trivial_and_exhaustive_oracle():
    assert sl.max_skew_corner_free(sl.grid(1)).best_size == 1
    for n in (2, 3):
        res = sl.max_skew_corner_free(sl.grid(n))
        assert res.optimal
        assert res.best_size == brute_max_free(n, torus=False)
        assert sl.find_skew_corner(res.witness) is None
        assert len(res.witness) == res.best_size


def test_grid2_value():
    assert sl.max_skew_corner_free(sl.grid(2)).best_size == 2


def test_torus_exhaustive_oracle_n_le_4():
    for N in (2, 3, 4):
        res = sl.max_skew_corner_free(sl.torus(N))
        assert res.optimal
        assert res.best_size == brute_max_free(N, torus=True)
        res_bi = sl.max_skew_corner_free(sl.torus(N), mode="bi_skew")
        assert res_bi.best_size == brute_max_free(N, torus=True, bi=True)
        assert sl.is_bi_skew_corner_free(res_bi.witness)


def test_grid_bi_exhaustive_oracle_n_le_3():
    for n in (2, 3):
        res = sl.max_skew_corner_free(sl.grid(n), mode="bi_skew")
        assert res.optimal
        assert res.best_size == brute_max_free(n, torus=False, bi=True)
        assert sl.is_bi_skew_corner_free(res.witness)


def test_symmetry_breaking_never_changes_best_size():
    for N in (3, 4, 5):
        for mode in ("skew", "bi_skew"):
            sym = sl.max_skew_corner_free(sl.torus(N), mode=mode)
            plain = sl.max_skew_corner_free(sl.torus(N), mode=mode, symmetry=False)
            assert sym.best_size == plain.best_size
    for n in (2, 3, 4):
        sym = sl.max_skew_corner_free(sl.grid(n))
        plain = sl.max_skew_corner_free(sl.grid(n), symmetry=False)
        assert sym.best_size == plain.best_size


def test_torus6_bi_skew_matches_known_example(eight_point_set):
    res = sl.max_skew_corner_free(sl.torus(6), mode="bi_skew")
    assert res.best_size >= len(eight_point_set) == 8
    assert sl.is_bi_skew_corner_free(res.witness)


def test_nodes_deterministic():
    a = sl.max_skew_corner_free(sl.torus(5))
    b = sl.max_skew_corner_free(sl.torus(5))
    assert a.nodes_explored == b.nodes_explored
    assert a.witness == b.witness


def test_budget_exhaustion_flags_result():
    res = sl.max_skew_corner_free(sl.torus(6), budget=50)
    assert res.budget_exhausted and not res.optimal
    assert res.best_size <= 9
    if len(res.witness):
        assert sl.find_skew_corner(res.witness) is None


def test_capability_guard():
    with pytest.raises(sl.CapabilityError):
        sl.max_skew_corner_free(sl.grid(65))


def test_find_base_set_edge_cases():
    assert sl.find_base_set(1) is None
    base = sl.find_base_set(6)
    assert base is not None
    assert len(base) > 6
    assert sl.find_skew_corner(base.points) is None


def test_s_table_monotone_and_certified():
    rows = sl.s_table(4)
    assert [r.n for r in rows] == [1, 2, 3, 4]
    assert rows[0].size == 1 and rows[1].size == 2
    assert all(r.certified for r in rows)
    sizes = [r.size for r in rows]
    assert sizes == sorted(sizes)
    assert all(r.size <= r.n**2 for r in rows)


def test_witnesses_pass_oracle_modes():
    for mode in ("skew", "bi_skew"):
        res = sl.max_skew_corner_free(sl.torus(6), mode=mode)
        assert sl.find_skew_corner(res.witness) is None
        if mode == "bi_skew":
            assert sl.is_bi_skew_corner_free(res.witness)
