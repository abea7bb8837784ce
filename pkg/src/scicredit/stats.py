"""Hypothesis tests with self-contained tail probabilities.

Student-t and chi-square tails are computed from the regularized incomplete
beta and gamma functions. Both use the usual split: a continued fraction
(modified Lentz) where it converges fast, and a series expansion on the
complementary region. Accuracy target is 1e-9 absolute against direct
numerical integration of the densities for df up to 1e6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

_FPMIN = 1e-300
_EPS = 3e-16
_MAX_ITER = 500


class StatsError(Exception):
    pass


class DegenerateVarianceError(StatsError):
    """Zero variance where the statistic needs a nonzero spread."""


class DegenerateTableError(StatsError):
    """Contingency table with an empty row or column."""


class ConvergenceError(StatsError):
    pass


def _lbeta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(f"incomplete beta did not converge (a={a}, b={b}, x={x})")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = a * math.log(x) + b * math.log1p(-x) - _lbeta(a, b)
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


# The series/fraction split at x = a + 1 needs O(sqrt(a)) terms when x is
# near a; df up to 1e6 means a up to 5e5, so allow ~1e5 iterations.
_MAX_GAMMA_ITER = 100_000


def _gamma_p_series(a: float, x: float) -> float:
    total = 1.0 / a
    term = total
    n = 0
    while n < _MAX_GAMMA_ITER:
        n += 1
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_q_cf(a: float, x: float) -> float:
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_GAMMA_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma fraction did not converge (a={a}, x={x})")


def reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_cf(a, x)


def reg_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_cf(a, x)


def t_tail_two_sided(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("df must be positive")
    if t == 0.0:
        return 1.0
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t))


def t_cdf(t: float, df: float) -> float:
    half = 0.5 * t_tail_two_sided(t, df)
    return 1.0 - half if t > 0 else half


def chi_square_tail(x: float, df: float) -> float:
    """Upper-tail probability P(X >= x) for chi-square with ``df``."""
    if df <= 0:
        raise ValueError("df must be positive")
    if x <= 0:
        return 1.0
    return reg_upper_gamma(df / 2.0, x / 2.0)


def _bisect_quantile(cdf, p: float, lo: float, hi: float) -> float:
    while cdf(hi) < p:
        lo, hi = hi, hi * 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def t_quantile(p: float, df: float) -> float:
    """Inverse CDF of Student's t (bisection; monotone and robust)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -t_quantile(1.0 - p, df)
    return _bisect_quantile(lambda t: t_cdf(t, df), p, 0.0, 2.0)


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    cdf = lambda x: 0.5 * math.erfc(-x / math.sqrt(2.0))
    if p < 0.5:
        return -normal_quantile(1.0 - p)
    return _bisect_quantile(cdf, p, 0.0, 2.0)


class TestKind(Enum):
    WELCH_T = "welch_t"
    POOLED_T = "pooled_t"
    PAIRED_T = "paired_t"
    CHI_SQUARE = "chi_square"


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: float
    p_value: float
    kind: TestKind
    n1: int
    n2: Optional[int] = None

    @property
    def significant(self) -> bool:
        return self.p_value <= 0.05


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def _sample_var(xs: Sequence[float], mean: float) -> float:
    return math.fsum((x - mean) ** 2 for x in xs) / (len(xs) - 1)


def t_test_independent(
    xs: Sequence[float], ys: Sequence[float], variant: str = "welch"
) -> TestResult:
    """Two-sided independent two-sample t-test.

    ``variant="welch"`` (default) uses the unequal-variance statistic with
    Welch–Satterthwaite degrees of freedom; ``variant="pooled"`` assumes a
    common variance with df = n1 + n2 - 2.
    """
    if variant not in ("welch", "pooled"):
        raise ValueError(f"unknown variant {variant!r}")
    n1, n2 = len(xs), len(ys)
    if n1 < 2 or n2 < 2:
        raise StatsError("need at least two observations per sample")
    m1, m2 = _mean(xs), _mean(ys)
    v1, v2 = _sample_var(xs, m1), _sample_var(ys, m2)
    kind = TestKind.WELCH_T if variant == "welch" else TestKind.POOLED_T
    if v1 == 0.0 and v2 == 0.0:
        if m1 == m2:
            return TestResult(0.0, float(n1 + n2 - 2), 1.0, kind, n1, n2)
        raise DegenerateVarianceError("both samples constant with unequal means")
    if variant == "pooled":
        df = float(n1 + n2 - 2)
        pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / df
        se = math.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
    else:
        se2 = v1 / n1 + v2 / n2
        df = se2 * se2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
        se = math.sqrt(se2)
    t = (m1 - m2) / se
    return TestResult(t, df, t_tail_two_sided(t, df), kind, n1, n2)


def t_test_paired(pairs: Sequence[tuple[float, float]]) -> TestResult:
    """Two-sided paired t-test: one-sample t on the differences x - y."""
    n = len(pairs)
    if n < 2:
        raise StatsError("need at least two pairs")
    diffs = [float(x) - float(y) for x, y in pairs]
    mean = _mean(diffs)
    var = _sample_var(diffs, mean)
    if var == 0.0:
        if mean == 0.0:
            return TestResult(0.0, float(n - 1), 1.0, TestKind.PAIRED_T, n, n)
        raise DegenerateVarianceError("constant nonzero differences")
    t = mean / math.sqrt(var / n)
    df = float(n - 1)
    return TestResult(t, df, t_tail_two_sided(t, df), TestKind.PAIRED_T, n, n)


def chi_square(table: Sequence[Sequence[float]]) -> TestResult:
    """Pearson chi-square test of homogeneity over an r x c count table."""
    rows = len(table)
    if rows < 2:
        raise DegenerateTableError("need at least two rows")
    cols = len(table[0])
    if cols < 2:
        raise DegenerateTableError("need at least two columns")
    if any(len(row) != cols for row in table):
        raise ValueError("ragged table")
    if any(cell < 0 for row in table for cell in row):
        raise ValueError("negative cell count")
    row_tot = [math.fsum(row) for row in table]
    col_tot = [math.fsum(table[r][c] for r in range(rows)) for c in range(cols)]
    total = math.fsum(row_tot)
    if any(rt == 0 for rt in row_tot) or any(ct == 0 for ct in col_tot):
        raise DegenerateTableError("zero row or column total")
    stat = 0.0
    for r in range(rows):
        for c in range(cols):
            expected = row_tot[r] * col_tot[c] / total
            diff = table[r][c] - expected
            stat += diff * diff / expected
    df = float((rows - 1) * (cols - 1))
    return TestResult(stat, df, chi_square_tail(stat, df), TestKind.CHI_SQUARE, int(total))


def mean_ci(xs: Sequence[float], level: float = 0.95) -> tuple[float, float]:
    """Two-sided t-distribution confidence interval for the mean."""
    n = len(xs)
    if n < 2:
        raise StatsError("interval undefined for a single observation")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    mean = _mean(xs)
    sd = math.sqrt(_sample_var(xs, mean))
    half = t_quantile(0.5 + level / 2.0, n - 1) * sd / math.sqrt(n)
    return (mean - half, mean + half)


def format_p(p: float) -> str:
    """p at four significant digits for report tables."""
    return f"{p:.4g}"
