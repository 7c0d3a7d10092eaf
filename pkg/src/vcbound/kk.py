"""Kruskal-Katona shadow lower bounds, fractional and exact."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

MAX_ITER = 200
INTEGRAL_TOL = 1e-9


def gen_binomial(alpha: float, k: int) -> float:
    """alpha (alpha - 1) ... (alpha - k + 1) / k! for real alpha."""
    if k < 0:
        raise ValueError("k must be non-negative")
    num = 1.0
    for i in range(k):
        num *= alpha - i
    return num / factorial(k)


def solve_alpha(m: int, k: int) -> float:
    """The alpha >= k - 1 with C(alpha, k) = m, by bisection.

    C(., k) is strictly increasing on [k - 1, inf), zero at the left end, and
    C(k - 1 + m + k, k) > m, so the bracket always contains the root. The
    bracket is halved until it stops shrinking in floating point, which is
    well past a 1e-12 relative tolerance on alpha.
    """
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    lo = float(k - 1)
    hi = float(k - 1 + m + k)
    for _ in range(MAX_ITER):
        mid = (lo + hi) / 2
        if mid <= lo or mid >= hi:
            break
        if gen_binomial(mid, k) < m:
            lo = mid
        else:
            hi = mid
    r = round(hi)
    if comb(r, k) == m and abs(hi - r) < INTEGRAL_TOL * max(1, r):
        return float(r)
    return lo if abs(gen_binomial(lo, k) - m) < abs(gen_binomial(hi, k) - m) else hi


@dataclass(frozen=True)
class KKBound:
    m: int
    k: int
    alpha: float
    bound: Fraction | float

    @property
    def d(self) -> int:
        return self.k - 1

    @property
    def alpha_integral(self) -> bool:
        return isinstance(self.bound, Fraction)

    def as_dict(self) -> dict:
        return {"m": self.m, "k": self.k, "alpha": _fmt(self.alpha), "bound": _fmt(self.bound)}


def _fmt(x: Fraction | float) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if abs(x - round(x)) < INTEGRAL_TOL:
        return str(int(round(x)))
    return repr(x)


def kk_bound(m: int, d: int) -> KKBound:
    """Fractional shadow bound for an m-member (d+1)-uniform family."""
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    alpha = solve_alpha(m, d + 1)
    r = round(alpha)
    if abs(alpha - r) < INTEGRAL_TOL and comb(r, d + 1) == m:
        return KKBound(m, d + 1, float(r), Fraction(m * (d + 1), r - d))
    return KKBound(m, d + 1, alpha, m * (d + 1) / (alpha - d))


def kk_lower_bound(m: int, d: int) -> Fraction | float:
    """Lower bound C(alpha, d) = m (d+1) / (alpha - d) on the d-shadow."""
    return kk_bound(m, d).bound


@dataclass(frozen=True)
class CascadeRep:
    """m = sum C(a_j, j) over j = k, k-1, ..., s with a_k > a_{k-1} > ... >= s >= 1."""

    m: int
    k: int
    terms: tuple[tuple[int, int], ...]  # (a_j, j)

    def total(self) -> int:
        return sum(comb(a, j) for a, j in self.terms)

    def shadow_bound(self) -> int:
        return sum(comb(a, j - 1) for a, j in self.terms)

    def __str__(self) -> str:
        return " + ".join(f"C({a},{j})" for a, j in self.terms)


def cascade_rep(m: int, k: int) -> CascadeRep:
    """Greedy k-cascade representation of m."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    terms = []
    rest = m
    j = k
    while rest > 0 and j >= 1:
        a = _largest_top(rest, j)
        terms.append((a, j))
        rest -= comb(a, j)
        j -= 1
    return CascadeRep(m, k, tuple(terms))


def _largest_top(rest: int, j: int) -> int:
    """Largest a >= j with C(a, j) <= rest."""
    a = max(j, int(solve_alpha(rest, j)) - 1)
    while comb(a + 1, j) <= rest:
        a += 1
    while a > j and comb(a, j) > rest:
        a -= 1
    return a


def cascade_bound(m: int, k: int) -> int:
    """Exact Kruskal-Katona minimum (k-1)-shadow of an m-member k-uniform family."""
    return cascade_rep(m, k).shadow_bound()
