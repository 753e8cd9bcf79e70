"""Closed-form quantities for bp(G(n, p)): the critical probability, the ratio
and sum lemmas, decomposition-probability bounds, first-moment sums, the
k-selectors and the constants of the upper-bound construction.

Large combinatorial magnitudes are carried as natural logarithms; functions
prefixed ``log_`` return them directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import betaln, logsumexp

LN2 = math.log(2.0)
BKR_SHRINK = 2.0 ** -12


class BadArgs(ValueError):
    pass


class NotBelowP0(ValueError):
    pass


class DivergentSum(ArithmeticError):
    pass


class NoFeasiblePair(ValueError):
    pass


@dataclass
class BoundReport:
    """A bound evaluated in log space; ``value`` is the natural log."""

    op: str
    value: float
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    @property
    def log10_value(self) -> float:
        return self.value / math.log(10.0)

    @property
    def linear(self) -> float:
        try:
            return math.exp(self.value)
        except OverflowError:
            return math.inf

    def to_dict(self) -> dict:
        d = {"op": self.op, "params": self.params, "log10_value": self.log10_value, "finite": self.finite}
        d.update(self.extra)
        return d


def log_binom(n, k):
    """log C(n, k), elementwise for arrays; -inf outside 0 <= k <= n.

    Uses the Beta function form, which stays accurate for n far beyond 2^53
    where a difference of two log-gammas would cancel catastrophically.
    """
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    bad = (k < 0) | (k > n)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -np.log1p(n) - betaln(np.where(bad, 1.0, n - k + 1), np.where(bad, 1.0, k + 1))
    out = np.where(bad, -np.inf, out)
    return out.item() if out.ndim == 0 else out


def _check_p(p: float):
    if not 0.0 < p < 1.0:
        raise BadArgs(f"p={p} must lie in (0, 1)")


def base(p: float) -> float:
    """b = 1/(1-p)."""
    _check_p(p)
    return 1.0 / (1.0 - p)


def _odds(p: float) -> float:
    return p / (1.0 - p)


# ------------------------------------------------------------ critical value

def critical_poly(x: float) -> float:
    return ((4.0 * x - 7.0) * x + 5.0) * x - 1.0


def p0() -> float:
    """Real root of 4x^3 - 7x^2 + 5x - 1, bisected on [0.25, 0.4] to machine precision."""
    lo, hi = 0.25, 0.4
    assert critical_poly(lo) < 0 < critical_poly(hi)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if critical_poly(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(critical_poly(lo)) <= abs(critical_poly(hi)) else hi


P0 = p0()


def root_sign(p: float) -> float:
    """1 + (p/(1-p))^2 - (1-p)^(-1/2); negative below p0, positive above."""
    _check_p(p)
    return 1.0 + _odds(p) ** 2 - (1.0 - p) ** -0.5


# ------------------------------------------------------------ ratio and sum lemmas

def log_ratio_R(r: int, s: int, p: float) -> float:
    if not (s >= 0 and r > s):
        raise BadArgs(f"need r > s >= 0, got r={r}, s={s}")
    _check_p(p)
    return math.log(r - s) - math.log(r + s + 2) + (s + 1) * math.log((1.0 - p) / p)


def ratio_R(r: int, s: int, p: float) -> float:
    """(r-s)/(r+s+2) * ((1-p)/p)^(s+1), the ratio f(r, s+2)/f(r, s); inf past float range."""
    try:
        return math.exp(log_ratio_R(r, s, p))
    except OverflowError:
        return math.inf


def ratio_threshold(p: float, r_max: int = 10_000) -> Optional[int]:
    """Smallest N <= r_max with R(r, s, p) > 1 for every N <= r <= r_max, s < r."""
    _check_p(p)
    xi = math.log((1.0 - p) / p)
    bad = 0
    for r in range(1, r_max + 1):
        s = np.arange(r)
        logs = np.log(r - s) - np.log(r + s + 2) + (s + 1) * xi
        if logs.min() <= 0.0:
            bad = r
    return bad + 1 if bad < r_max else None


def log_combo_lhs(n1: int, m1: int, p: float) -> float:
    """log of sum_{l >= mu >= m', l + mu <= n'} C(n', l+mu) C(l+mu, l) (p/(1-p))^(l mu)."""
    _check_p(p)
    lo = math.log(_odds(p))
    mu, l = np.meshgrid(np.arange(m1, n1 + 1), np.arange(m1, n1 + 1), indexing="ij")
    keep = (l >= mu) & (l + mu <= n1)
    mu, l = mu[keep], l[keep]
    if mu.size == 0:
        return -math.inf
    terms = log_binom(n1, l + mu) + log_binom(l + mu, l) + l * mu * lo
    return float(logsumexp(terms))


def log_combo_rhs(n1: int, m1: int, p: float) -> float:
    """log of 2 C(n', m') (1 + (p/(1-p))^m')^n'."""
    _check_p(p)
    return LN2 + log_binom(n1, m1) + n1 * math.log1p(_odds(p) ** m1)


def combo_lhs(n1: int, m1: int, p: float) -> float:
    return math.exp(log_combo_lhs(n1, m1, p))


def combo_rhs(n1: int, m1: int, p: float) -> float:
    return math.exp(log_combo_rhs(n1, m1, p))


def log_lemma8_bound(n1: int, r: int, p: float) -> float:
    """log of 2 (1-p)^C(n',2) [2 C(n',2) (1 + (p/(1-p))^2)^n']^r."""
    _check_p(p)
    if n1 < 2 or r < 0:
        raise BadArgs("need n' >= 2 and r >= 0")
    c2 = n1 * (n1 - 1) / 2
    bracket = LN2 + math.log(c2) + n1 * math.log1p(_odds(p) ** 2)
    return LN2 + c2 * math.log1p(-p) + r * bracket


def lemma8_bound(n1: int, r: int, p: float) -> float:
    return math.exp(log_lemma8_bound(n1, r, p))


# ------------------------------------------------------------ constant-p regime

def epsilon_p(p: float) -> float:
    """Canonical epsilon in (0, p) with 1 + (p/(1-p))^2 < (1-eps)(1-p)^(-1/2).

    Half of the feasible gap, capped at p/2.
    """
    _check_p(p)
    if p >= P0:
        raise NotBelowP0(f"p={p} is not below p0={P0:.6f}")
    gap = 1.0 - (1.0 + _odds(p) ** 2) * math.sqrt(1.0 - p)
    return min(p / 2.0, gap / 2.0)


def _log_indep(n, k, p):
    """log C(n, k) (1-p)^C(k, 2)."""
    return log_binom(n, k) + k * (k - 1) / 2.0 * math.log1p(-p)


def _first_k_below(n: int, p: float, log_threshold: float) -> int:
    k = 1
    while k <= n and _log_indep(n, k, p) >= log_threshold:
        k += 1
    return k


def k_constant(n: int, p: float, eps: Optional[float] = None) -> int:
    """Smallest positive k with C(n,k)(1-p)^C(k,2) < n^(-log_b(1-eps)).

    ``eps`` defaults to :func:`epsilon_p`; pass ``eps=0`` for the plain
    first-moment threshold (the analogue used above p0).
    """
    if n < 2:
        raise BadArgs("need n >= 2")
    if eps is None:
        eps = epsilon_p(p)
    _check_p(p)
    exponent = -math.log1p(-eps) / -math.log1p(-p)
    return _first_k_below(n, p, exponent * math.log(n))


def k_gamma(n: int, gamma: float) -> int:
    """Smallest k >= 1 with C(n,k)(1-p)^C(k,2) < n^(gamma + 1/3), p = n^gamma."""
    if not -1.0 / 3.0 < gamma < 0.0:
        raise BadArgs(f"gamma={gamma} outside (-1/3, 0)")
    p = n ** gamma
    _check_p(p)
    return _first_k_below(n, p, (gamma + 1.0 / 3.0) * math.log(n))


def first_moment_log_terms(n: int, k: int, p: float, r_start: int = 1) -> np.ndarray:
    """log of C(n,k+r) 2(1-p)^C(k+r,2) [2 C(k+r,2)(1+(p/(1-p))^2)^(k+r)]^r for r = r_start..n-k."""
    _check_p(p)
    return _terms_range(n, k, p, r_start, n - k)


def _sum_report(op: str, terms: np.ndarray, r_start: int, params: dict) -> BoundReport:
    if terms.size == 0:
        return BoundReport(op, -math.inf, params, {"argmax_r": None})
    i = int(np.argmax(terms))
    return BoundReport(op, float(logsumexp(terms)), params,
                       {"argmax_r": r_start + i, "max_log_term": float(terms[i])})


_CHUNK = 1 << 20


def _first_moment_report(op: str, n: int, k: int, p: float, r_start: int, params: dict) -> BoundReport:
    """Sum the first-moment terms in chunks so memory stays bounded for huge n.

    The log-term f(r) satisfies f'' <= log(1-p) + 2 log1p(odds^2) + 5/m for
    m = k + r >= 3.  Once that is negative and f is already decreasing, the
    remaining terms are dominated by a geometric series, whose sum is added
    as an upper bound and the loop stops.
    """
    if n - k + 1 - r_start <= _CHUNK:
        return _sum_report(op, first_moment_log_terms(n, k, p, r_start), r_start, params)
    curv = math.log1p(-p) + 2.0 * math.log1p(_odds(p) ** 2)
    total, best, best_r, tail = -math.inf, -math.inf, None, 0.0
    lo, r_end = r_start, n - k
    while lo <= r_end:
        hi = min(lo + _CHUNK - 1, r_end)
        terms = _terms_range(n, k, p, lo, hi)
        total = float(np.logaddexp(total, logsumexp(terms)))
        i = int(np.argmax(terms))
        if terms[i] > best:
            best, best_r = float(terms[i]), lo + i
        m_last = k + hi
        if hi < r_end and terms.size >= 2 and m_last >= 3 and curv + 5.0 / m_last < 0:
            step = float(terms[-1] - terms[-2])
            if step < 0:
                tail = float(terms[-1]) + step - math.log1p(-math.exp(step))
                total = float(np.logaddexp(total, tail))
                break
        lo = hi + 1
    extra = {"argmax_r": best_r, "max_log_term": best}
    if tail:
        extra["truncated_at_r"] = hi
        extra["log_tail_bound"] = tail
    return BoundReport(op, total, params, extra)


def _terms_range(n: int, k: int, p: float, lo: int, hi: int) -> np.ndarray:
    r = np.arange(lo, hi + 1, dtype=float)
    m = k + r
    c2 = m * (m - 1) / 2.0
    with np.errstate(divide="ignore"):
        bracket = LN2 + np.log(c2) + m * math.log1p(_odds(p) ** 2)
        bracket = np.where(r == 0, 0.0, bracket)
    return log_binom(n, m) + LN2 + c2 * math.log1p(-p) + r * bracket


def expected_W_bound(n: int, k: int, p: float) -> BoundReport:
    """First-moment bound on nonempty special subgraphs of order k (sum from r = 1).

    Up to 2^20 terms are summed exactly. Beyond that the sum is taken in
    chunks and, once the terms are provably log-concave and falling, the
    rest is replaced by a geometric upper bound. ``extra['argmax_r']`` says
    where the largest term sits.
    """
    if not 2 <= k < n:
        raise BadArgs("need 2 <= k < n")
    _check_p(p)
    return _first_moment_report("expected_W_bound", n, k, p, 1, {"n": n, "k": k, "p": p})


def expected_Wprime_bound(n: int, k: int, p: float) -> BoundReport:
    """Same sum for order k+1, starting at r = 0 (empty special subgraphs allowed)."""
    if not 2 <= k < n - 1:
        raise BadArgs("need 2 <= k < n - 1")
    _check_p(p)
    return _first_moment_report("expected_Wprime_bound", n, k + 1, p, 0, {"n": n, "k": k, "p": p})


def log_h_i(n: int, k: int, p: float, i: int) -> float:
    if not 2 <= i <= k - 2:
        raise BadArgs(f"h_i needs 2 <= i <= k-2, got i={i}, k={k}")
    _check_p(p)
    return (log_binom(k - 1, i) + log_binom(n - k + 1, k - i - 1) - log_binom(n, k - 1)
            - i * (i - 1) / 2.0 * math.log1p(-p))


def h_i(n: int, k: int, p: float, i: int) -> float:
    return math.exp(log_h_i(n, k, p, i))


def log_kappa_i(n: int, k: int, p: float, i: int) -> float:
    if not 2 <= i <= k - 3:
        raise BadArgs(f"kappa_i needs 2 <= i <= k-3, got i={i}, k={k}")
    _check_p(p)
    return (-i * math.log1p(-p) + 2.0 * math.log(k - i - 1)
            - math.log(i + 1) - math.log(n - 2 * k + i + 3))


def kappa_i(n: int, k: int, p: float, i: int) -> float:
    return math.exp(log_kappa_i(n, k, p, i))


# ------------------------------------------------------------ p0 <= p < 1/2 regime

def _check_upper_regime(p: float):
    if not P0 <= p < 0.5:
        raise BadArgs(f"p={p} outside [p0, 1/2)")


def m_p(p: float, m_max: int = 10**7) -> int:
    """Smallest m > 3 with (1 - 2^-12 p)^(-1/(80 m^2)) > 1 + (p/(1-p))^(m+1)."""
    _check_upper_regime(p)
    shrink = -math.log1p(-BKR_SHRINK * p)
    lo = math.log(_odds(p))
    for m in range(4, m_max + 1):
        if shrink / (80.0 * m * m) > math.log1p(math.exp((m + 1) * lo)):
            return m
    raise ArithmeticError(f"no m_p <= {m_max}")


def k_part2(n: int, p: float) -> int:
    """Smallest k with (1 - 2^-12 p)^(k/(40 m_p^2)) < 1/n^2."""
    _check_upper_regime(p)
    m = m_p(p)
    shrink = -math.log1p(-BKR_SHRINK * p)
    k = math.floor(80.0 * m * m * math.log(n) / shrink) + 1
    while k > 1 and (k - 1) * shrink / (40.0 * m * m) > 2.0 * math.log(n):
        k -= 1
    while k * shrink / (40.0 * m * m) <= 2.0 * math.log(n):
        k += 1
    return k


def expected_W_part2(n: int, p: float, k: Optional[int] = None) -> BoundReport:
    """4 sum_{r>=0} q^(k+r), q = n (1 - 2^-12 p)^(k/(40 m_p^2)), in closed form."""
    _check_upper_regime(p)
    m = m_p(p)
    if k is None:
        k = k_part2(n, p)
    log_q = math.log(n) + k / (40.0 * m * m) * math.log1p(-BKR_SHRINK * p)
    params = {"n": n, "p": p, "k": k, "m_p": m}
    if log_q >= 0.0:
        raise DivergentSum(f"ratio q = exp({log_q:.3g}) >= 1")
    value = math.log(4.0) + k * log_q - math.log(-math.expm1(log_q))
    return BoundReport("expected_W_part2", value, params, {"log_ratio": log_q})


# ------------------------------------------------------------ upper-bound construction

def section5_inequalities(p: float, a: float, c: float) -> tuple[bool, bool, bool]:
    """Truth values of the three constraints on (a_p, c_p)."""
    x2 = _odds(p) ** 2
    e3 = (a + 4.0 * c) / (a * (1.0 - a) * (1.0 + 2.0 * c))
    ineq3 = -0.5 * math.log1p(-p) * e3 < math.log1p(x2)
    e4 = (1.0 - 10.0 * a) / (1.0 - a / 2.0)
    ineq4 = e4 * math.log((1.0 - p) ** 2 + p * p) < math.log1p(-p)
    ineq5 = (1.0 - 4.0 * a) * (1.0 + c) / (1.0 - a / 2.0) < 1.0
    return ineq3, ineq4, ineq5


def check_section5(p: float, a: float, c: float) -> bool:
    if not (P0 < p < 0.5 and 0.0 < a < 0.01 and 0.0 < c < 0.01):
        return False
    return all(section5_inequalities(p, a, c))


def section5_constants(p: float, a_start: float = 0.009, a_min: float = 1e-12) -> tuple[float, float]:
    """First (a, a/100) on the halving grid a = 0.009, 0.0045, ... passing every constraint."""
    if not P0 < p < 0.5:
        raise BadArgs(f"p={p} outside (p0, 1/2)")
    a = a_start
    while a >= a_min:
        c = a / 100.0
        if check_section5(p, a, c):
            return a, c
        a /= 2.0
    raise NoFeasiblePair(f"no feasible (a, c) with c = a/100 for p={p}")


def k_section5(n: float, p: float, a: float, c: float) -> float:
    """k = 2 (1 + c) log_b(n) / (1 - a/2)."""
    return 2.0 * (1.0 + c) * math.log(n) / -math.log1p(-p) / (1.0 - a / 2.0)


# ------------------------------------------------------------ dispatcher

def evaluate(op: str, **kw) -> BoundReport:
    """Evaluate a named quantity as a :class:`BoundReport` (used by the CLI)."""
    scalar = {
        "p0": lambda: p0(),
        "root_sign": lambda: root_sign(kw["p"]),
        "ratio_R": lambda: ratio_R(kw["r"], kw["s"], kw["p"]),
        "epsilon_p": lambda: epsilon_p(kw["p"]),
        "k_constant": lambda: k_constant(kw["n"], kw["p"]),
        "k_gamma": lambda: k_gamma(kw["n"], kw["gamma"]),
        "m_p": lambda: m_p(kw["p"]),
        "k_part2": lambda: k_part2(kw["n"], kw["p"]),
        "k_section5": lambda: k_section5(kw["n"], kw["p"], kw["a"], kw["c"]),
    }
    logged = {
        "combo_lhs": lambda: log_combo_lhs(kw["n"], kw["m"], kw["p"]),
        "combo_rhs": lambda: log_combo_rhs(kw["n"], kw["m"], kw["p"]),
        "lemma8_bound": lambda: log_lemma8_bound(kw["n"], kw["r"], kw["p"]),
        "h_i": lambda: log_h_i(kw["n"], kw["k"], kw["p"], kw["i"]),
        "kappa_i": lambda: log_kappa_i(kw["n"], kw["k"], kw["p"], kw["i"]),
    }
    params = {k: v for k, v in kw.items() if v is not None}
    if op in scalar:
        v = float(scalar[op]())
        log_v = math.log(abs(v)) if v != 0 else -math.inf
        return BoundReport(op, log_v, params, {"value": v})
    if op in logged:
        return BoundReport(op, float(logged[op]()), params)
    if op == "expected_W_bound":
        return expected_W_bound(kw["n"], kw["k"], kw["p"])
    if op == "expected_Wprime_bound":
        return expected_Wprime_bound(kw["n"], kw["k"], kw["p"])
    if op == "expected_W_part2":
        return expected_W_part2(kw["n"], kw["p"], kw.get("k"))
    if op == "section5_constants":
        a, c = section5_constants(kw["p"])
        return BoundReport(op, math.log(a), params, {"a": a, "c": c})
    raise BadArgs(f"unknown op {op!r}")
