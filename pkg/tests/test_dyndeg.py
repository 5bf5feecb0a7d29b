import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birdeg import errors
from birdeg.dyndeg import (
    A_POLY,
    LAMBDA_RANGE,
    PRINTED_A,
    check_conjugacy,
    check_duality,
    check_product,
    cited_intervals,
    cited_psi_profile,
    lambda1_report,
    lambda_exceeds_a,
    monomial_degree_sequence,
    random_unimodular,
    random_unimodular_box,
    root_a,
    separation_from_powers_of_a,
    symbol_order,
    tower_profile,
)
from birdeg.monomial import IntMatrix, det, to_projective
from birdeg.profiles import (
    CITED,
    EXACT,
    DynDegProfile,
    Monom,
    UndecidedComparison,
    compare_symbols,
    exact_entry,
    identity_profile,
    max_merge_profile,
    symbolic_profile,
)
from birdeg.projmap import RationalMap
from birdeg.polyring import BlockShape

from oracles import eval_univariate, hand_clearing_degree, matmul

FIB = IntMatrix([[2, 1], [1, 1]])
FIB3 = IntMatrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
GOLDEN_SQ = (3 + math.sqrt(5)) / 2


def syms(profile):
    return [str(s) for s in profile.symbols()]


# root a ---------------------------------------------------------------------------


def test_polynomial_transcription():
    assert len(A_POLY) == 10
    assert A_POLY == (1, -173, -291, -2, 332, 334, 238, 0, 75, 75)
    assert A_POLY[7] == 0  # no a² term


def test_seed_bracket_changes_sign_exactly():
    lo, hi = eval_univariate(A_POLY, Fraction(174)), eval_univariate(A_POLY, Fraction(175))
    assert lo < 0 < hi


def test_root_a_certificate():
    cert = root_a()
    assert cert.width <= 1e-6
    assert abs(cert.value - PRINTED_A) <= 5e-4
    assert cert.sign_change()
    assert eval_univariate(A_POLY, cert.lo) * eval_univariate(A_POLY, cert.hi) < 0
    doc = cert.to_dict()
    assert doc["sign_change"] is True and doc["coefficients"] == list(A_POLY)


def test_root_a_fails_loudly_without_sign_change():
    with pytest.raises(ValueError):
        root_a(bracket=(0, 1))
    with pytest.raises(ValueError):
        root_a(coefficients=(1, 0, 1), bracket=(-5, 5))


def test_root_a_exact_root():
    cert = root_a(coefficients=(1, -3), bracket=(2, 4))
    assert cert.lo == cert.hi == 3


@settings(max_examples=20)
@given(st.integers(-50, 50), st.integers(1, 30))
def test_bisection_keeps_the_sign_change(r, spread):
    # (x - r - 1/3) has a single root strictly inside the bracket
    coeffs = (3, -(3 * r + 1))
    cert = root_a(1e-9, coeffs, (r - spread, r + spread))
    assert cert.sign_change() or cert.lo == cert.hi
    assert abs(cert.value - (r + Fraction(1, 3))) <= 1e-9


# intervals and profiles -----------------------------------------------------------


def test_cited_intervals():
    lam, a = cited_intervals()
    assert float(lam.a) == 291 and float(lam.b) == 669
    assert 174.666 < float(a.a) <= float(a.b) < 174.6661
    assert lambda_exceeds_a()


def test_tower_profile_six():
    prof = tower_profile(6)
    assert syms(prof) == ["1", "λ", "aλ", "λ²", "aλ", "λ", "1"]
    assert all(e.kind == CITED for e in prof.entries)


def test_tower_profile_plateau():
    assert syms(tower_profile(7))[3:5] == ["λ²", "λ²"]
    s10 = syms(tower_profile(10))
    assert s10[3:8] == ["λ²"] * 5 and s10[2] == s10[8] == "aλ"
    for d in range(6, 15):
        s = syms(tower_profile(d))
        assert s == s[::-1] and len(s) == d + 1
        assert s.count("λ²") == d - 5
    with pytest.raises(ValueError):
        tower_profile(5)


def test_a_lambda_interval():
    lo, hi = tower_profile(6)[2].bounds
    assert 5.08e4 <= lo <= 5.09e4
    assert 1.168e5 <= hi <= 1.169e5
    for e in tower_profile(9).entries:
        assert e.bounds[0] <= e.bounds[1]


def test_interior_entries_avoid_powers_of_a():
    seps = separation_from_powers_of_a(tower_profile(8))
    assert [p for p, _, _ in seps] == list(range(1, 8))
    assert {s: k for _, s, k in seps} == {"λ": 1, "aλ": 2, "λ²": 2}


def test_psi_profile_merge():
    psi = cited_psi_profile()
    assert syms(psi) == ["1", "λ", "a", "1"]
    merged = max_merge_profile(psi, psi.reversed())
    assert syms(merged) == syms(tower_profile(6))


def test_merge_with_identity_gives_max_list():
    prof = tower_profile(6)
    for d in range(7, 13):
        prof = max_merge_profile(prof)
        assert syms(prof) == syms(tower_profile(d))


def test_repeated_identity_merges_insert_a_plateau():
    lam, a = cited_intervals()
    base = symbolic_profile([Monom(), Monom(1), Monom(2), Monom(1), Monom()], lam, a)
    prof = base
    for k in range(1, 5):
        prof = max_merge_profile(prof)
        assert syms(prof) == ["1", "λ"] + ["λ²"] * (k + 1) + ["λ", "1"]


def test_all_ones_merge():
    out = max_merge_profile(identity_profile(3), identity_profile(2))
    assert out.values() == (1.0,) * 6
    assert all(e.kind == EXACT for e in out.entries)


def test_numeric_merge_matches_products():
    p1 = DynDegProfile((exact_entry(1, 0), exact_entry(3, 0), exact_entry(1, 0)))
    p2 = DynDegProfile((exact_entry(1, 0), exact_entry(2, 0), exact_entry(1, 0)))
    assert max_merge_profile(p1, p2).values() == (1, 3, 6, 3, 1)


def test_undecided_comparison():
    lam, a = cited_intervals()
    assert compare_symbols(Monom(1), Monom(0, 1), lam, a) == 1
    assert compare_symbols(Monom(1, 1), Monom(2), lam, a) == -1
    assert compare_symbols(Monom(2), Monom(2), lam, a) == 0
    import mpmath

    wide = mpmath.iv.mpf([100, 200])
    with pytest.raises(UndecidedComparison):
        compare_symbols(Monom(1), Monom(0, 1), wide, a)


def test_monom_text_round_trip():
    for m in [Monom(), Monom(1), Monom(0, 1), Monom(1, 1), Monom(2), Monom(3, 2)]:
        assert Monom.parse(str(m)) == m
    assert str(Monom(1, 1)) == "aλ" and str(Monom(2)) == "λ²"
    with pytest.raises(ValueError):
        Monom.parse("bλ")


def test_symbol_order_of_tower():
    assert symbol_order(tower_profile(6)) == [-1, -1, -1, 1, 1, 1]


# identity checks ------------------------------------------------------------------


def test_duality_examples():
    rep = check_duality(FIB3)
    assert rep.passed
    assert rep.rows[1][1] == pytest.approx(GOLDEN_SQ, rel=1e-9)
    assert rep.rows[1][2] == pytest.approx(GOLDEN_SQ, rel=1e-9)
    assert check_duality(IntMatrix.identity(4)).passed
    with pytest.raises(errors.NotUnimodular):
        check_duality(IntMatrix.diag(2, 1))


def test_product_examples():
    rep = check_product(FIB, FIB)
    assert rep.passed
    assert rep.rows[2][1] == pytest.approx(GOLDEN_SQ**2, rel=1e-9)
    assert rep.rows[2][1] == pytest.approx(6.854102, abs=1e-6)
    rep = check_product(IntMatrix.identity(2), FIB3)
    assert rep.passed
    assert [round(r[1], 6) for r in rep.rows] == [1, 2.618034, 2.618034, 2.618034, 2.618034, 1]


def test_conjugacy_examples():
    perm = IntMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    M = IntMatrix([[3, 1, 2], [1, 1, 0], [5, 2, 4]])
    rep = check_conjugacy(M, perm)
    assert rep.passed and all(r[1] == r[2] for r in rep.rows)
    rep = check_conjugacy(FIB, IntMatrix([[1, 1], [0, 1]]), tol=1e-9)
    assert rep.passed


def test_checkers_report_failures():
    rep = check_duality(FIB3, tol=1e-6)
    rep.add(9, 1.0, 2.0)
    assert not rep.passed
    assert rep.to_dict()["passed"] is False


unimod = st.tuples(st.integers(2, 5), st.integers(0, 10**6)).map(
    lambda t: random_unimodular(t[0], random.Random(t[1]), max_entry=6))


@settings(max_examples=30, deadline=None)
@given(unimod)
def test_duality_property(M):
    assert check_duality(M).passed


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10**6))
def test_product_property(n1, n2, seed):
    rng = random.Random(seed)
    assert check_product(random_unimodular(n1, rng, max_entry=6), random_unimodular(n2, rng, max_entry=6)).passed


@settings(max_examples=30, deadline=None)
@given(unimod, st.integers(0, 10**6))
def test_conjugacy_property(M, seed):
    C = random_unimodular(M.n, random.Random(seed), max_entry=4)
    assert check_conjugacy(M, C).passed


@settings(max_examples=30)
@given(st.integers(1, 6), st.integers(0, 10**6))
def test_random_unimodular_generators(n, seed):
    rng = random.Random(seed)
    M = random_unimodular(n, rng, max_entry=5)
    assert det(M) in (1, -1) and max(abs(x) for r in M.rows for x in r) <= 5
    if n <= 3:
        B = random_unimodular_box(n, rng, bound=5)
        assert det(B) in (1, -1) and max(abs(x) for r in B.rows for x in r) <= 5


# degree growth --------------------------------------------------------------------


def test_lambda1_report_examples():
    rep = lambda1_report(to_projective(FIB), 3)
    assert rep.sequence.degrees == [3, 8, 21]
    assert rep.sequence.roots == pytest.approx([3, math.sqrt(8), 21 ** (1 / 3)])
    assert rep.sequence.roots[2] == pytest.approx(2.758, abs=1e-3)
    assert rep.in_interval is None
    rep = lambda1_report(RationalMap.identity(BlockShape((3,))), 4)
    assert rep.sequence.degrees == [1, 1, 1, 1] and rep.sequence.upper_bound == 1


def test_lambda1_report_interval_flag():
    rep = lambda1_report(to_projective(FIB), 1, cited_interval=LAMBDA_RANGE)
    assert rep.in_interval is False
    rep = lambda1_report(to_projective(FIB), 1, cited_interval=(1, 3))
    assert rep.in_interval is True
    assert rep.to_dict()["degree_in_cited_interval"] is True


def test_lambda1_report_keeps_partial_results():
    rep = lambda1_report(to_projective(FIB), 20, max_degree=100)
    assert rep.sequence.degrees == [3, 8, 21, 55]
    assert rep.commentary[0].startswith("stopped early")


def test_monomial_degree_sequence_matches_hand_clearing():
    seq = monomial_degree_sequence(FIB, max_degree=10**4)
    P = [[1, 0], [0, 1]]
    for n, d in zip(seq.ns, seq.degrees):
        P = matmul(P, FIB.rows)
        assert hand_clearing_degree(P) == d
    assert seq.truncated is not None
    assert seq.estimate == pytest.approx(GOLDEN_SQ, rel=1e-3)
