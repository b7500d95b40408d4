"""Descriptive and nonparametric statistics for metric-tier comparisons.

Fixed variants: tie-corrected Kruskal-Wallis (chi-square p, with an exact
permutation p in extras for small N), Mann-Whitney with tie- and
continuity-corrected normal approximation plus exact enumeration for
small samples, the Shapiro-Wilk W test per Royston's AS R94
approximation, and Holsti's inter-coder reliability coefficient.
All p values are two-sided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from statistics import NormalDist
from typing import Sequence

_NORMAL = NormalDist()

MW_EXACT_MAX_N = 12
KW_EXACT_MAX_N = 10


class StatsError(Exception):
    pass


@dataclass(frozen=True)
class Sample:
    values: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if any(not math.isfinite(v) for v in self.values):
            raise StatsError("sample %r contains non-finite values" % self.label)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class TestResult:
    statistic_name: str
    statistic: float
    p_value: float
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ReliabilityInput:
    n1: int
    n2: int
    m: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0 or self.m < 0:
            raise StatsError("counts must be non-negative")
        if self.m > min(self.n1, self.n2):
            raise StatsError("agreed count exceeds a coder's decision count")


def _as_values(s) -> tuple[float, ...]:
    if isinstance(s, Sample):
        return s.values
    return tuple(float(v) for v in s)


def descriptive(s) -> dict:
    """Mean, median (midpoint for even n) and sample standard deviation
    (n-1 denominator; 0 with a degenerate flag when n < 2)."""
    values = _as_values(s)
    n = len(values)
    if n == 0:
        raise StatsError("empty sample")
    mean = sum(values) / n
    ordered = sorted(values)
    mid = n // 2
    median = ordered[mid] if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2
    if n < 2:
        return {"mean": mean, "median": median, "std_dev": 0.0, "degenerate": True}
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return {"mean": mean, "median": median, "std_dev": math.sqrt(var),
            "degenerate": False}


def midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _tie_sizes(values: Sequence[float]) -> list[int]:
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [c for c in counts.values() if c > 1]


# ---------------------------------------------------------------------------
# chi-square survival function (upper-tail), via the regularized upper
# incomplete gamma function Q(a, x): series for x < a + 1, Lentz continued
# fraction otherwise. Absolute error well below 1e-10.
# ---------------------------------------------------------------------------

_GAMMA_EPS = 1e-16
_GAMMA_ITMAX = 800


def _gamma_p_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_survival(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if x < 0 or a <= 0:
        raise StatsError("invalid incomplete-gamma arguments")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi_square_survival(x: float, df: int) -> float:
    """P(X >= x) for a chi-square variable with df degrees of freedom."""
    if df < 1:
        raise StatsError("df must be >= 1")
    if x < 0:
        raise StatsError("x must be >= 0")
    return min(1.0, max(0.0, gamma_survival(df / 2.0, x / 2.0)))


# ---------------------------------------------------------------------------
# Kruskal-Wallis
# ---------------------------------------------------------------------------

def _kw_statistic(pooled: Sequence[float], sizes: Sequence[int]) -> tuple[float, float, float, list[float]]:
    """Returns (H, H_c, tie_correction, per-group mean ranks)."""
    n = len(pooled)
    ranks = midranks(pooled)
    h = 0.0
    mean_ranks = []
    start = 0
    for size in sizes:
        r = sum(ranks[start:start + size])
        mean_ranks.append(r / size)
        h += r * r / size
        start += size
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)
    ties = _tie_sizes(pooled)
    correction = 1.0 - sum(t ** 3 - t for t in ties) / (n ** 3 - n)
    h_c = h / correction if correction > 0 else 0.0
    return h, h_c, correction, mean_ranks


def kruskal_wallis(groups: Sequence) -> TestResult:
    """Tie-corrected Kruskal-Wallis H across k >= 2 groups; p from the
    chi-square survival function with k-1 degrees of freedom. For total
    N <= 10 the exact permutation p is reported in extras."""
    samples = [_as_values(g) for g in groups]
    if len(samples) < 2:
        raise StatsError("need at least 2 groups")
    if any(len(s) == 0 for s in samples):
        raise StatsError("empty group")
    sizes = [len(s) for s in samples]
    n = sum(sizes)
    if n < len(samples) + 1:
        raise StatsError("too few observations")
    pooled = [v for s in samples for v in s]
    labels = [g.label if isinstance(g, Sample) else str(i)
              for i, g in enumerate(groups)]
    h, h_c, correction, mean_ranks = _kw_statistic(pooled, sizes)
    extras = {
        "h_uncorrected": h,
        "tie_correction": correction,
        "mean_ranks": dict(zip(labels, mean_ranks)),
        "df": len(samples) - 1,
        "method": "chi-square approximation",
    }
    if correction <= 0:  # every pooled value identical
        return TestResult("H", 0.0, 1.0, extras | {"degenerate": True})
    p = chi_square_survival(h_c, len(samples) - 1)
    if n <= KW_EXACT_MAX_N:
        extras["p_exact"] = _kw_exact_p(pooled, sizes, h_c)
    return TestResult("H", h_c, p, extras)


def _kw_exact_p(pooled: Sequence[float], sizes: Sequence[int],
                observed: float) -> float:
    """Exact permutation p: fraction of group assignments whose tie-
    corrected H reaches the observed value."""
    n = len(pooled)
    indices = tuple(range(n))
    hits = 0
    total = 0

    def assign(remaining: tuple[int, ...], gi: int, chosen: list[int]):
        nonlocal hits, total
        if gi == len(sizes) - 1:
            perm = chosen + list(remaining)
            values = [pooled[i] for i in perm]
            _, h_c, _, _ = _kw_statistic(values, sizes)
            total += 1
            if h_c >= observed - 1e-12:
                hits += 1
            return
        for combo in combinations(remaining, sizes[gi]):
            rest = tuple(i for i in remaining if i not in combo)
            assign(rest, gi + 1, chosen + list(combo))

    assign(indices, 0, [])
    return hits / total


# ---------------------------------------------------------------------------
# Mann-Whitney
# ---------------------------------------------------------------------------

def _u_pair(pooled_ranks: Sequence[float], n_a: int) -> tuple[float, float]:
    r_a = sum(pooled_ranks[:n_a])
    n_b = len(pooled_ranks) - n_a
    u_a = r_a - n_a * (n_a + 1) / 2.0
    u_b = n_a * n_b - u_a
    return u_a, u_b


def mann_whitney(a, b) -> TestResult:
    """Two-sided Mann-Whitney U (the smaller of U_a, U_b). The p value is
    exact by enumeration when n_a + n_b <= 12, otherwise a tie-corrected
    normal approximation with continuity correction."""
    va, vb = _as_values(a), _as_values(b)
    if not va or not vb:
        raise StatsError("both samples must be non-empty")
    n_a, n_b = len(va), len(vb)
    n = n_a + n_b
    pooled = list(va) + list(vb)
    ranks = midranks(pooled)
    u_a, u_b = _u_pair(ranks, n_a)
    u = min(u_a, u_b)

    mu = n_a * n_b / 2.0
    ties = _tie_sizes(pooled)
    tie_term = sum(t ** 3 - t for t in ties) / (n * (n - 1)) if n > 1 else 0.0
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term)
    extras = {"u_a": u_a, "u_b": u_b, "mean_u": mu, "variance": var}
    if var <= 0:
        p_normal = 1.0
        extras["z"] = 0.0
        extras["degenerate"] = True
    else:
        # continuity correction pulls U toward its mean
        z = (u - mu + 0.5) / math.sqrt(var) if u < mu else 0.0
        if u > mu:
            z = (u - mu - 0.5) / math.sqrt(var)
        extras["z"] = z
        p_normal = min(1.0, 2.0 * _NORMAL.cdf(-abs(z)))
    extras["p_normal"] = p_normal

    if n <= MW_EXACT_MAX_N:
        p = _mw_exact_p(pooled, n_a, u)
        extras["p_exact"] = p
        extras["method"] = "exact enumeration"
    else:
        p = p_normal
        extras["method"] = "normal approximation"
    return TestResult("U", u, p, extras)


def _mw_exact_p(pooled: Sequence[float], n_a: int, observed_u: float) -> float:
    """Exact two-sided p: fraction of assignments of pooled values to the
    first group whose min(U_a, U_b) is at most the observed one."""
    ranks = midranks(pooled)
    n = len(pooled)
    hits = 0
    total = 0
    for combo in combinations(range(n), n_a):
        r_a = sum(ranks[i] for i in combo)
        u_a = r_a - n_a * (n_a + 1) / 2.0
        u_b = n_a * (n - n_a) - u_a
        total += 1
        if min(u_a, u_b) <= observed_u + 1e-12:
            hits += 1
    return hits / total


# ---------------------------------------------------------------------------
# Shapiro-Wilk (Royston AS R94 approximation)
# ---------------------------------------------------------------------------

_SW_C1 = (-2.706056, 4.434685, -2.071190, -0.147981, 0.221157, 0.0)
_SW_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)
_SW_C3 = (-0.0006714, 0.0250540, -0.39978, 0.5440)
_SW_C4 = (-0.0020322, 0.0627670, -0.77857, 1.3822)
_SW_C5 = (0.0038915, -0.083751, -0.31082, -1.5861)
_SW_C6 = (0.0030302, -0.082676, -0.4803)


def _polyval(coeffs: Sequence[float], x: float) -> float:
    result = 0.0
    for c in coeffs:
        result = result * x + c
    return result


def shapiro_wilk(s) -> TestResult:
    """Shapiro-Wilk normality test for 3 <= n <= 5000, W statistic and
    approximate p per Royston's AS R94 algorithm."""
    values = _as_values(s)
    n = len(values)
    if n < 3 or n > 5000:
        raise StatsError("Shapiro-Wilk requires 3 <= n <= 5000, got %d" % n)
    x = sorted(values)
    if x[0] == x[-1]:
        raise StatsError("degenerate sample: all values identical")

    n2 = n // 2
    if n == 3:
        a = [math.sqrt(0.5)]
    else:
        # expected normal order statistics for the lower half, most
        # negative first; the polynomial corrections adjust the two
        # outermost coefficients (Royston 1995)
        m = [_NORMAL.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n2 + 1)]
        summ2 = 2.0 * sum(mi * mi for mi in m)
        rsn = 1.0 / math.sqrt(n)
        a1 = _polyval(_SW_C1, rsn) - m[0] / math.sqrt(summ2)
        if n > 5:
            a2 = _polyval(_SW_C2, rsn) - m[1] / math.sqrt(summ2)
            fac = math.sqrt((summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
                            / (1.0 - 2.0 * a1 ** 2 - 2.0 * a2 ** 2))
            a = [a1, a2] + [-mi / fac for mi in m[2:]]
        else:
            fac = math.sqrt((summ2 - 2.0 * m[0] ** 2)
                            / (1.0 - 2.0 * a1 ** 2))
            a = [a1] + [-mi / fac for mi in m[1:]]
    mean = sum(x) / n
    ssx = sum((v - mean) ** 2 for v in x)
    sa = 0.0
    for i in range(n2):
        sa += a[i] * (x[n - 1 - i] - x[i])
    w = sa * sa / ssx
    w = min(w, 1.0)

    if n == 3:
        pi6 = 1.90985931710274
        stqr = 1.04719755119660
        p = pi6 * (math.asin(math.sqrt(w)) - stqr)
        p = min(1.0, max(0.0, p))
        return TestResult("W", w, p, {"n": n})

    y = math.log(1.0 - w)
    if n <= 11:
        gamma = 0.459 * n - 2.273
        if gamma - y <= 0:  # W so small the transform degenerates
            return TestResult("W", w, 0.0, {"n": n, "z": math.inf})
        y = -math.log(gamma - y)
        mu = _polyval(_SW_C3, n)
        sigma = math.exp(_polyval(_SW_C4, n))
    else:
        ln_n = math.log(n)
        mu = _polyval(_SW_C5, ln_n)
        sigma = math.exp(_polyval(_SW_C6, ln_n))
    z = (y - mu) / sigma
    p = min(1.0, max(0.0, 1.0 - _NORMAL.cdf(z)))
    return TestResult("W", w, p, {"n": n, "z": z})


# ---------------------------------------------------------------------------
# Holsti inter-coder reliability
# ---------------------------------------------------------------------------

def holsti(r: ReliabilityInput) -> float:
    """Holsti's coefficient of reliability 2m / (n1 + n2)."""
    if r.n1 + r.n2 == 0:
        raise StatsError("n1 + n2 must be positive")
    return 2.0 * r.m / (r.n1 + r.n2)
