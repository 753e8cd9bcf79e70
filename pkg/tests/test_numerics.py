import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from bplab import numerics as nm

mpmath.mp.dps = 50


def mp_indep(n, k, p):
    """C(n,k)(1-p)^C(k,2) at 50 digits."""
    return mpmath.binomial(n, k) * mpmath.mpf(1 - mpmath.mpf(p)) ** (k * (k - 1) // 2)


def mp_term(n, m, r, p):
    p = mpmath.mpf(p)
    c2 = m * (m - 1) // 2
    inner = 2 * c2 * (1 + (p / (1 - p)) ** 2) ** m
    return mpmath.binomial(n, m) * 2 * (1 - p) ** c2 * inner ** r


# ------------------------------------------------------------ critical value

def test_p0_root():
    x = nm.p0()
    assert abs(4 * x**3 - 7 * x**2 + 5 * x - 1) < 1e-12
    assert 0.3119 < x < 0.3120
    assert round(x, 3) == 0.312
    real = [r.real for r in np.roots([4, -7, 5, -1]) if abs(r.imag) < 1e-12]
    assert len(real) == 1 and abs(real[0] - x) < 1e-12


def test_p0_interval_certified_with_exact_arithmetic():
    poly = lambda t: 4 * t**3 - 7 * t**2 + 5 * t - 1
    assert poly(Fraction(3119, 10000)) < 0 < poly(Fraction(3120, 10000))


def test_root_sign_examples():
    assert nm.root_sign(0.25) < 0
    assert nm.root_sign(0.4) > 0
    assert abs(nm.root_sign(nm.P0)) < 1e-10
    assert nm.root_sign(nm.P0 - 1e-6) < 0 < nm.root_sign(nm.P0 + 1e-6)


def test_root_sign_vanishes_only_at_p0():
    # 1 + x^2 = (1-p)^(-1/2) with x = p/(1-p) reduces to the cubic; check via mpmath root
    f = lambda p: 1 + (p / (1 - p)) ** 2 - (1 - p) ** mpmath.mpf(-0.5)
    root = mpmath.findroot(f, 0.31)
    assert abs(float(root) - nm.P0) < 1e-14


# ------------------------------------------------------------ ratio lemmas

def test_ratio_examples():
    assert nm.ratio_R(2, 0, 1 / 3) == pytest.approx(1.0, rel=1e-15)
    assert nm.ratio_R(3, 1, 0.5) == pytest.approx(1 / 3, rel=1e-15)
    with pytest.raises(nm.BadArgs):
        nm.ratio_R(2, 2, 0.3)


def test_ratio_exact_fraction():
    p = Fraction(1, 200)
    for r in range(1, 40):
        for s in range(r):
            exact = Fraction(r - s, r + s + 2) * ((1 - p) / p) ** (s + 1)
            assert nm.ratio_R(r, s, 0.005) == pytest.approx(float(exact), rel=1e-12)


def test_lemma6_small_p_exhaustive():
    assert all(nm.ratio_R(r, s, 0.005) > 2 for r in range(1, 201) for s in range(r))
    assert all(nm.log_ratio_R(r, s, 0.005) > math.log(2) for r in range(1, 201) for s in range(r))


@pytest.mark.parametrize("p", [0.1, 0.2, 0.3, 0.4, 0.45])
def test_ratio_threshold_found_and_tight(p):
    N = nm.ratio_threshold(p, r_max=2000)
    assert N is not None and N <= 10_000
    assert all(nm.ratio_R(r, s, p) > 1 for r in range(N, 2001) for s in range(r))
    if N > 1:
        assert any(nm.ratio_R(N - 1, s, p) <= 1 for s in range(N - 1))


# ------------------------------------------------------------ sum lemma

def exact_combo_lhs(n1, m1, p):
    x = p / (1 - p)
    return sum(math.comb(n1, l + mu) * math.comb(l + mu, l) * x ** (l * mu)
               for mu in range(m1, n1 + 1) for l in range(mu, n1 + 1) if l + mu <= n1)


def test_combo_single_term():
    p = Fraction(1, 200)
    exact = 6 * (p / (1 - p)) ** 4
    assert nm.combo_lhs(4, 2, 0.005) == pytest.approx(float(exact), rel=1e-12)
    assert nm.combo_lhs(4, 2, 0.005) <= nm.combo_rhs(4, 2, 0.005)


@pytest.mark.parametrize("n1,m1", [(4, 2), (7, 2), (9, 3), (12, 4), (15, 2)])
def test_combo_against_exact_fractions(n1, m1):
    p = Fraction(1, 200)
    assert nm.combo_lhs(n1, m1, 0.005) == pytest.approx(float(exact_combo_lhs(n1, m1, p)), rel=1e-12)
    rhs = 2 * math.comb(n1, m1) * (1 + (p / (1 - p)) ** m1) ** n1
    assert nm.combo_rhs(n1, m1, 0.005) == pytest.approx(float(rhs), rel=1e-12)


def test_lemma7_small_p_exhaustive():
    for m1 in (2, 3, 4):
        for n1 in range(2 * m1, 201):
            assert nm.log_combo_lhs(n1, m1, 0.005) <= nm.log_combo_rhs(n1, m1, 0.005)


def test_combo_lhs_increasing_in_n():
    for m1 in (2, 3):
        vals = [nm.log_combo_lhs(n1, m1, 0.005) for n1 in range(2 * m1, 60)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


# ------------------------------------------------------------ decomposition bound

def test_lemma8_r0():
    for n1 in (4, 5, 9):
        assert nm.lemma8_bound(n1, 0, 0.3) == pytest.approx(2 * 0.7 ** math.comb(n1, 2), rel=1e-12)


def test_lemma8_against_mpmath():
    for n1, r in [(4, 1), (6, 2), (20, 3)]:
        assert nm.log_lemma8_bound(n1, r, 0.005) == pytest.approx(float(mpmath.log(mp_term(n1, n1, r, 0.005)
                                                                                    / mpmath.binomial(n1, n1))),
                                                                   rel=1e-12)


# ------------------------------------------------------------ constant-p regime

@pytest.mark.parametrize("p", [0.1, 0.25, 0.3])
def test_epsilon_p_substitution(p):
    eps = nm.epsilon_p(p)
    assert 0 < eps < p
    assert 1 + (p / (1 - p)) ** 2 < (1 - eps) * (1 - p) ** -0.5


def test_epsilon_p_vanishes_at_p0():
    assert nm.epsilon_p(nm.P0 - 1e-9) < 1e-8
    with pytest.raises(nm.NotBelowP0):
        nm.epsilon_p(0.35)


def _k_condition(n, k, p, eps):
    b = 1 / (1 - mpmath.mpf(p))
    rhs = mpmath.mpf(n) ** (-mpmath.log(1 - mpmath.mpf(eps)) / mpmath.log(b))
    return mp_indep(n, k, p) < rhs


@pytest.mark.parametrize("n", [2**10, 2**14, 2**20])
def test_k_constant_minimal(n):
    p = 0.25
    eps = nm.epsilon_p(p)
    k = nm.k_constant(n, p)
    assert _k_condition(n, k, p, eps)
    assert not _k_condition(n, k - 1, p, eps)


def test_k_constant_monotone_in_n():
    ks = [nm.k_constant(2**e, 0.25) for e in range(10, 21)]
    assert ks == sorted(ks)


def test_k_constant_second_order_estimate():
    # first-moment threshold k ~ 2log_b n - 2log_b log_b n + 2log_b(e/2) + 1
    n, p = 2**20, 0.25
    lb = lambda x: math.log(x) / -math.log1p(-p)
    refined = 2 * lb(n) - 2 * lb(lb(n)) + 2 * lb(math.e / 2) + 1
    assert abs(nm.k_constant(n, p) - refined) <= 3


def test_k_gamma():
    n, gamma = 10**6, -0.2
    k = nm.k_gamma(n, gamma)
    p = n ** gamma
    thr = mpmath.mpf(n) ** (gamma + mpmath.mpf(1) / 3)
    assert mp_indep(n, k, p) < thr and not mp_indep(n, k - 1, p) < thr
    ref = 2 * (1 + gamma) * math.log(n) / p
    assert 0.7 <= k / ref <= 1.3
    ks = [nm.k_gamma(10**e, gamma) for e in range(4, 9)]
    assert all(a < b for a, b in zip(ks, ks[1:]))


def test_first_moment_terms_against_mpmath():
    n, k, p = 300, 12, 0.25
    terms = nm.first_moment_log_terms(n, k, p, 1)
    for r in (1, 2, 10, 100, n - k):
        assert terms[r - 1] == pytest.approx(float(mpmath.log(mp_term(n, k + r, r, p))), rel=1e-10)
    total = mpmath.fsum(mp_term(n, k + r, r, p) for r in range(1, n - k + 1))
    assert nm.expected_W_bound(n, k, p).value == pytest.approx(float(mpmath.log(total)), rel=1e-10)


def test_expected_W_single_term_identity():
    n, k, p = 5000, 20, 0.3
    t1 = nm.first_moment_log_terms(n, k, p, 1)[0]
    assert t1 == pytest.approx(nm.log_binom(n, k + 1) + nm.log_lemma8_bound(k + 1, 1, p), rel=1e-13)


def test_expected_W_decreasing_in_k():
    n, p = 2**16, 0.25
    k0 = nm.k_constant(n, p)
    vals = [nm.expected_W_bound(n, k, p).value for k in range(k0 - 5, k0 + 6)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_expected_Wprime_r0_identity():
    n, k, p = 5000, 20, 0.3
    terms = nm.first_moment_log_terms(n, k + 1, p, 0)
    assert terms[0] == pytest.approx(math.log(2) + nm.log_binom(n, k + 1) + math.comb(k + 1, 2) * math.log(1 - p),
                                     rel=1e-13)
    # C(n,k+1)(1-p)^C(k+1,2) = C(n,k)(1-p)^C(k,2) * (1-p)^k (n-k)/(k+1)
    ratio = terms[0] - (math.log(2) + nm.log_binom(n, k) + math.comb(k, 2) * math.log(1 - p))
    assert ratio == pytest.approx(k * math.log(1 - p) + math.log((n - k) / (k + 1)), abs=1e-9)
    rep = nm.expected_Wprime_bound(n, k, p)
    assert rep.extra["argmax_r"] is not None and rep.finite


def test_h_and_kappa():
    n, k, p = 5000, 20, 0.3
    for i in range(2, k - 2):
        assert nm.log_kappa_i(n, k, p, i) == pytest.approx(nm.log_h_i(n, k, p, i + 1) - nm.log_h_i(n, k, p, i),
                                                           abs=1e-9)
    for i in range(2, k - 1):
        assert nm.h_i(n, k, p, i) > 0
        exact = (mpmath.binomial(k - 1, i) * mpmath.binomial(n - k + 1, k - i - 1) / mpmath.binomial(n, k - 1)
                 * (1 - mpmath.mpf(p)) ** -(i * (i - 1) // 2))
        assert nm.h_i(n, k, p, i) == pytest.approx(float(exact), rel=1e-9)
    with pytest.raises(nm.BadArgs):
        nm.h_i(n, k, p, 1)
    with pytest.raises(nm.BadArgs):
        nm.kappa_i(n, k, p, k - 2)


def test_h2_leading_order():
    n, p = 10**6, 0.25
    k = nm.k_constant(n, p)
    assert nm.h_i(n, k, p, 2) <= k**4 / ((1 - p) * n**2)


# ------------------------------------------------------------ p0 <= p < 1/2 regime

def _mp_condition(p, m):
    p = mpmath.mpf(p)
    return (1 - p / 4096) ** (-1 / (80 * mpmath.mpf(m) ** 2)) > 1 + (p / (1 - p)) ** (m + 1)


def test_m_p_minimal_and_monotone():
    grid = [0.32, 0.35, 0.38, 0.41, 0.44, 0.47, 0.49]
    ms = [nm.m_p(p) for p in grid]
    for p, m in zip(grid, ms):
        assert m > 3 and _mp_condition(p, m)
        assert not any(_mp_condition(p, j) for j in range(4, m))
    assert ms == sorted(ms)
    assert ms[0] <= 200


def test_m_p_domain():
    with pytest.raises(nm.BadArgs):
        nm.m_p(0.25)


def test_k_part2_and_sum():
    n, p = 10**6, 0.35
    k = nm.k_part2(n, p)
    m = nm.m_p(p)
    shrink = 1 - mpmath.mpf(p) / 4096
    assert shrink ** (k / (40 * mpmath.mpf(m) ** 2)) < mpmath.mpf(1) / n**2
    assert not shrink ** ((k - 1) / (40 * mpmath.mpf(m) ** 2)) < mpmath.mpf(1) / n**2
    q = n * shrink ** (k / (40 * mpmath.mpf(m) ** 2))
    assert q < mpmath.mpf(1) / n
    rep = nm.expected_W_part2(n, p)
    assert rep.value < 0
    closed = 4 * q**k / (1 - q)
    assert rep.value == pytest.approx(float(mpmath.log(closed)), rel=1e-9)


def test_expected_W_part2_diverges_for_small_k():
    with pytest.raises(nm.DivergentSum):
        nm.expected_W_part2(10**6, 0.35, k=10)


def test_k_part2_log_growth():
    ratios = [nm.k_part2(10**e, 0.35) / math.log(10**e) for e in range(4, 9)]
    assert max(ratios) / min(ratios) < 3


# ------------------------------------------------------------ construction constants

def direct_section5(p, a, c):
    """Linear-scale substitution into the three constraints (independent of the log form)."""
    i3 = ((1 - p) ** -0.5) ** ((a + 4 * c) / (a * (1 - a) * (1 + 2 * c))) < 1 + (p / (1 - p)) ** 2
    i4 = ((1 - p) ** 2 + p**2) ** ((1 - 10 * a) / (1 - a / 2)) < 1 - p
    i5 = (1 - 4 * a) * (1 + c) / (1 - a / 2) < 1
    return i3, i4, i5


@pytest.mark.parametrize("p", [0.33, 0.35, 0.4, 0.45, 0.49])
def test_section5_constants_pass_substitution(p):
    a, c = nm.section5_constants(p)
    assert 0 < c < a < 0.01
    assert nm.check_section5(p, a, c)
    assert all(direct_section5(p, a, c))
    assert nm.section5_inequalities(p, a, c) == direct_section5(p, a, c)


def test_section5_ineq5_hand_value():
    numerator = (1 - 0.036) * 1.00009
    assert numerator == pytest.approx(0.96409, abs=1e-5)
    lhs = numerator / (1 - 0.0045)
    assert lhs == pytest.approx(0.968445, abs=1e-6) and lhs < 1
    assert nm.section5_inequalities(0.4, 0.009, 0.00009)[2]


def test_section5_reports_infeasible():
    with pytest.raises(nm.NoFeasiblePair):
        nm.section5_constants(0.32)
    assert not nm.check_section5(0.4, 0.02, 0.001)  # a out of range


def test_k_section5():
    n, p = 10**6, 0.4
    lb = math.log(n) / -math.log1p(-p)
    assert nm.k_section5(n, p, 0.0, 0.0) == pytest.approx(2 * lb)
    a, c = nm.section5_constants(p)
    ks = [nm.k_section5(10**e, p, a, c) for e in range(3, 9)]
    assert all(x < y for x, y in zip(ks, ks[1:]))
    # n - (1 - a/2) k = n - 2(1 + c) log_b n
    assert n - (1 - a / 2) * nm.k_section5(n, p, a, c) == pytest.approx(n - 2 * (1 + c) * lb, rel=1e-12)


# ------------------------------------------------------------ reports

def test_bound_report_dict():
    d = nm.evaluate("p0").to_dict()
    assert {"op", "params", "log10_value", "finite"} <= set(d)
    assert d["value"] == pytest.approx(0.312, abs=5e-4)
    d = nm.evaluate("expected_W_bound", n=2**10, k=20, p=0.25).to_dict()
    assert d["params"] == {"n": 1024, "k": 20, "p": 0.25} and d["finite"]
    with pytest.raises(nm.BadArgs):
        nm.evaluate("nope")


def test_evaluators_are_pure():
    a = nm.expected_W_bound(2**16, 57, 0.25).value
    b = nm.expected_W_bound(2**16, 57, 0.25).value
    assert a == b


def test_chunked_first_moment_matches_full_sum(monkeypatch):
    from scipy.special import logsumexp
    n, p = 3000, 0.25
    k = nm.k_constant(n, p)
    full = float(logsumexp(nm.first_moment_log_terms(n, k, p, 1)))
    monkeypatch.setattr(nm, "_CHUNK", 64)
    rep = nm.expected_W_bound(n, k, p)
    assert "log_tail_bound" in rep.extra
    assert rep.value >= full - 1e-9
    assert rep.value == pytest.approx(full, abs=1e-9)


def test_first_moment_huge_n_is_cheap():
    rep = nm.expected_Wprime_bound(2**60, nm.k_constant(2**60, 0.25), 0.25)
    assert rep.log10_value < 0 and rep.extra["truncated_at_r"] < 2**21
