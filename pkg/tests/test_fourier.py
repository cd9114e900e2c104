import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import skewlab as sl
from conftest import rand_grid_set, rand_torus_set


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def test_dft_constant_and_delta():
    t = sl.dft(np.ones(8))
    assert t.coeffs[0] == pytest.approx(1)
    assert np.abs(t.coeffs[1:]).max() < 1e-12
    delta = np.zeros(8)
    delta[0] = 1
    t = sl.dft(delta)
    assert np.allclose(t.coeffs, 1 / 8)


def test_dft_inversion_and_parseval():
    rng = np.random.default_rng(0)
    f = rng.normal(size=16)
    t = sl.dft(f)
    assert np.abs(t.inverse().real - f).max() < 1e-9
    assert abs((np.abs(t.coeffs) ** 2).sum() - (f**2).mean()) < 1e-9


def test_row_transforms_match_dft():
    rng = np.random.default_rng(1)
    vals = rng.normal(size=(6, 6))
    f = sl.TwoDFunction(6, vals)
    rows = sl.row_transforms(f)
    for x in range(6):
        assert np.allclose(rows[x], sl.dft(vals[x]).coeffs)


# ---------------------------------------------------------------------------
# counting form
# ---------------------------------------------------------------------------

def test_lambda_constant_is_one():
    one = sl.TwoDFunction.constant(6)
    assert sl.lambda_form(one, one, one) == pytest.approx(1)


def test_lambda_singleton():
    N = 8
    ind = sl.TwoDFunction.indicator(sl.make_grid_set([(2, 5)], sl.torus(N)))
    assert sl.lambda_form(ind, ind, ind) == pytest.approx(1 / N**4)


def test_lambda_matches_tuple_counts():
    rng = np.random.default_rng(2)
    for N in (4, 8):
        a = rand_torus_set(rng, N, 0.4)
        ind = sl.TwoDFunction.indicator(a)
        lam = sl.lambda_form(ind, ind, ind)
        assert lam * N**4 == pytest.approx(
            sl.count_skew_corners_naive(a).total, rel=1e-9, abs=1e-6
        )


def test_lambda_requires_equal_moduli():
    with pytest.raises(sl.ParameterError):
        sl.lambda_form(
            sl.TwoDFunction.constant(4),
            sl.TwoDFunction.constant(4),
            sl.TwoDFunction.constant(6),
        )


def test_lambda_consistency_guard_detects_route_disagreement(monkeypatch):
    import skewlab.fourier as fourier_mod

    real = fourier_mod.row_transforms
    monkeypatch.setattr(fourier_mod, "row_transforms", lambda f: real(f) * 1.001)
    ind = sl.TwoDFunction.indicator(
        sl.make_grid_set([(0, 0), (1, 2), (3, 1)], sl.torus(4))
    )
    with pytest.raises(sl.ConsistencyError):
        sl.lambda_form(ind, ind, ind)


# ---------------------------------------------------------------------------
# marginals and balanced functions
# ---------------------------------------------------------------------------

def test_column_marginal_and_normalized_constant():
    one = sl.TwoDFunction.constant(6)
    assert np.allclose(sl.column_marginal(one), 1)
    tilde = sl.column_normalized(one)
    assert np.allclose(sl.column_marginal(tilde), 1)


def test_column_normalized_zero_on_empty_columns():
    a = sl.make_grid_set([(0, 1), (0, 3)], sl.torus(4))
    tilde = sl.column_normalized(sl.TwoDFunction.indicator(a))
    marg = sl.column_marginal(tilde)
    assert marg[0] == pytest.approx(1)
    assert np.allclose(marg[1:], 0)


def test_balanced_function_empty_is_zero():
    f = sl.balanced_function(sl.make_grid_set([], sl.grid(4)))
    assert not f.values.any()


def test_balanced_function_trivial_coefficient_vanishes():
    rng = np.random.default_rng(3)
    a = rand_grid_set(rng, 6, 0.5)
    fa = sl.balanced_function(a)
    coeff0 = sl.dft(sl.column_marginal(fa)).coeffs[0]
    assert abs(coeff0) < 1e-12


# ---------------------------------------------------------------------------
# counting inequality, dichotomy, spectral cross sums
# ---------------------------------------------------------------------------

def test_gvn_full_torus_and_empty():
    N = 4
    full = sl.make_grid_set([(x, y) for x in range(N) for y in range(N)], sl.torus(N))
    rep = sl.check_gvn(full)
    assert rep.lam == pytest.approx(1)
    assert rep.max_nontrivial_coeff == pytest.approx(0)
    rep = sl.check_gvn(sl.make_grid_set([], sl.torus(N)))
    assert rep.lam == 0 and rep.inequality_holds


def test_gvn_holds_on_random_sets():
    rng = np.random.default_rng(4)
    for N in (4, 8, 12, 16):
        for _ in range(25):
            a = rand_torus_set(rng, N, float(rng.uniform(0.05, 0.8)))
            rep = sl.check_gvn(a)  # raises FalsificationError on violation
            assert rep.inequality_holds


def test_dichotomy_empty_and_diagonal():
    rep = sl.dichotomy_report(sl.make_grid_set([], sl.grid(8)))
    assert rep.branch == "i"
    diag = sl.make_grid_set([(i, i) for i in range(1, 9)], sl.grid(8))
    assert sl.find_skew_corner(diag) is None
    rep = sl.dichotomy_report(diag)
    assert rep.branch in ("i", "ii")


def test_dichotomy_rejects_non_free_input():
    bad = sl.make_grid_set([(1, 1), (1, 2), (2, 1)], sl.grid(2))
    with pytest.raises(sl.ParameterError):
        sl.dichotomy_report(bad)


def test_dichotomy_on_construction_output():
    a, _ = sl.sphere_construction(32)
    rep = sl.dichotomy_report(a)
    assert rep.branch in ("i", "ii")


def test_parseval_full_sum_counts_nonempty_columns():
    rng = np.random.default_rng(5)
    # half the columns occupied on a torus of side 8
    pts = [(x, y) for x in range(0, 8, 2) for y in range(8) if rng.random() < 0.6]
    a = sl.make_grid_set(pts, sl.torus(8))
    rep = sl.parseval_bound(a)
    assert rep.full_sum == pytest.approx(rep.nonempty_columns / 8, abs=1e-9)
    assert rep.nontrivial_sum <= rep.full_sum + 1e-12
    empty = sl.parseval_bound(sl.make_grid_set([], sl.torus(8)))
    assert empty.full_sum == 0


def test_parseval_exactly_half_the_columns():
    pts = [(x, y) for x in range(4) for y in (0, 2, x)]
    a = sl.make_grid_set(pts, sl.torus(8))
    rep = sl.parseval_bound(a)
    assert rep.nonempty_columns == 4
    assert rep.full_sum == pytest.approx(0.5, abs=1e-9)


def test_parseval_embeds_grid_sets():
    rng = np.random.default_rng(6)
    a = rand_grid_set(rng, 8, 0.5)
    rep = sl.parseval_bound(a)
    assert rep.modulus == 16
    nonempty = int((a.column_sizes() > 0).sum())
    assert rep.full_sum == pytest.approx(nonempty / 16, abs=1e-9)
    assert rep.nontrivial_sum <= 1 + 1e-12


# ---------------------------------------------------------------------------
# heavy-prefix selection
# ---------------------------------------------------------------------------

def test_zeta_against_mpmath():
    for s in (9 / 8, 25 / 24, 1.5, 2.0):
        assert abs(sl.zeta_value(s) - float(mpmath.zeta(s))) < 1e-12


def test_technical_select_worked_example():
    # single heavy term: c < 1 so m = 1 qualifies
    b = [0.5] + [0.0] * 30
    assert sl.technical_select(b, 0.5, 1.5, 0.0, 4 / 3) == 1
    c = (2 * sl.zeta_value(9 / 8)) ** (-2 / 3)
    assert c < 1


def test_technical_select_q1_delta_sequence():
    b = [1.0] + [0.0] * 10
    assert sl.technical_select(b, 1.0, 2.0, 1.0, 1.5) == 1


def test_technical_select_validates_input():
    with pytest.raises(sl.ParameterError):
        sl.technical_select([0.1, 0.5], 0.5, 1.5, 0.0, 4 / 3)  # increasing
    with pytest.raises(sl.ParameterError):
        sl.technical_select([0.5, 0.1], 0.5, 1.5, 0.0, 1.6)  # p' >= p
    with pytest.raises(sl.ParameterError):
        sl.technical_select([0.01, 0.0], 0.5, 1.5, 0.0, 4 / 3)  # mass short


def _feasible_sequence(rng, p, q):
    raw = np.sort(rng.uniform(0, 1, size=rng.integers(2, 40)))[::-1]
    lam = ((raw**p).sum() ** (q / p) / raw.sum()) ** (1 / (1 - q))
    b = lam * raw
    beta = float((b**p).sum() ** (1 / p))
    return b, beta


@pytest.mark.parametrize("p,q,p_prime", [(1.5, 0.0, 4 / 3), (1.25, 0.5, 1.2)])
def test_technical_select_property(p, q, p_prime):
    rng = np.random.default_rng(7)
    c = (2 * sl.zeta_value(p / p_prime)) ** (-1 / p)
    for _ in range(100):
        b, beta = _feasible_sequence(rng, p, q)
        m = sl.technical_select(b, beta, p, q, p_prime)
        bound = math.ceil(2 ** (1 / (p - 1)) * beta ** (p * (q - 1) / (p - 1)))
        assert 1 <= m <= bound
        assert b[:m].sum() >= c * m ** (1 - 1 / p_prime) * beta - 1e-9


# ---------------------------------------------------------------------------
# rational approximation and annihilation
# ---------------------------------------------------------------------------

def test_dirichlet_worked_examples():
    assert sl.dirichlet([Fraction(1, 3)], 3) == 3
    assert sl.dirichlet([Fraction(1, 2), Fraction(1, 3)], 36) == 6
    assert sl.dirichlet([Fraction(0, 1)], 7) == 1


def test_dirichlet_accepts_floats():
    q = sl.dirichlet([0.123456], 50)
    assert 1 <= q <= 50
    dist = abs(q * 0.123456 - round(q * 0.123456))
    assert dist <= 1 / 50


def test_dirichlet_bound_holds_on_random_rationals():
    rng = np.random.default_rng(8)
    for _ in range(50):
        m = int(rng.integers(1, 4))
        N = int(rng.integers(8, 200))
        thetas = [Fraction(int(rng.integers(1, N)), N) for _ in range(m)]
        ell = int(rng.integers(1, 5))
        Q = (6 * ell) ** m
        q = sl.dirichlet(thetas, Q)
        assert 1 <= q <= Q
        for t in thetas:
            frac = q * t - math.floor(q * t)
            dist = min(frac, 1 - frac)
            assert float(dist) <= Q ** (-1 / m) + 1e-12


def test_annihilation_examples():
    gs = sl.CharacterSet(24, (1, 5))
    rep = sl.annihilation_check(gs, [0], 1.0)
    assert rep.annihilated  # characters are 1 at 0
    gs = sl.CharacterSet(24, (1,))
    rep = sl.annihilation_check(gs, range(0, 3), 1.0)
    assert rep.annihilated
    assert rep.min_coeff >= rep.coeff_bound - 1e-9
    gs = sl.CharacterSet(8, (4,))  # gamma(1) = e(1/2) = -1, defect 2
    rep = sl.annihilation_check(gs, [1], 1.0)
    assert not rep.annihilated
    assert rep.max_defect == pytest.approx(2)


def test_annihilating_progression_small_density_guard():
    gs = sl.CharacterSet(64, (3,))
    assert sl.annihilating_progression(gs, 0.5, 32) is None  # 16 < 36


def test_annihilating_progression_contract():
    n = 10**4
    gs = sl.CharacterSet(2 * n, (1,))
    prog = sl.annihilating_progression(gs, 1.0, n)
    assert prog is not None
    assert prog.length == int(math.isqrt(n) / 6)
    assert prog.span <= n
    assert prog.last <= n
    rep = sl.annihilation_check(gs, prog.elements(), 1.0)
    assert rep.annihilated


def test_annihilating_progression_multi_character():
    n = 2600  # alpha n just above 6^3 with alpha = 1 allows m = 2
    gs = sl.CharacterSet(2 * n, (7, 1100))
    prog = sl.annihilating_progression(gs, 1.0, n)
    assert prog is not None
    assert prog.span <= n
    defects = [
        abs(np.exp(2j * np.pi * a * x / (2 * n)) - 1)
        for a in gs.frequencies
        for x in prog.elements()
    ]
    assert max(defects) <= 1 + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 63), st.integers(2, 40))
def test_progression_elements_consistent(start, length):
    p = sl.Progression(start=start, difference=3, length=length)
    els = list(p.elements())
    assert len(els) == length
    assert els[0] == start and els[-1] == p.last
    assert p.span == length * 3
