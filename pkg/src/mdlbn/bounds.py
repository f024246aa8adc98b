"""Sample-complexity calculus for MDL structure learning.

Every bound of the form ``(N+1)**K * 2**(-N*r)`` is evaluated as a base-2
logarithm first; the ``log2_*`` functions expose that value directly and the
plain functions exponentiate it (``inf`` on overflow).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InputError
from .scoring import Penalty, penalty_weight

Z = math.sqrt(2.0 * math.log(2.0))
DEFAULT_N_CAP = 10**12


def _exp2(x: float) -> float:
    if x > 1023:
        return math.inf
    return 2.0 ** x


def _log2_add(x: float, y: float) -> float:
    hi, lo = max(x, y), min(x, y)
    if hi == -math.inf:
        return -math.inf
    return hi + math.log2(1.0 + 2.0 ** (lo - hi))


def log2_sanov_bound(n_samples: int, card_u: int, eps: float) -> float:
    return card_u * math.log2(n_samples + 1) - n_samples * eps


def sanov_bound(n_samples: int, card_u: int, eps: float) -> float:
    """(N+1)**|U| * 2**(-N eps): tail bound on D(empirical || target) > eps."""
    if n_samples < 1:
        raise InputError("n_samples must be >= 1")
    if eps < 0:
        raise InputError("eps must be >= 0")
    return _exp2(log2_sanov_bound(n_samples, card_u, eps))


def skew_rate(m: float) -> float:
    return ((1.0 - m) * m / 4.0) ** 2


def log2_skew_bound(n_samples: int, card_u: int, m: float) -> float:
    return card_u * math.log2(n_samples + 1) - n_samples * skew_rate(m)


def skew_bound(n_samples: int, card_u: int, m: float) -> float:
    """(N+1)**|U| * 2**(-N ((1-m) m / 4)**2): probability of a skewed sample."""
    if not 0 < m < 1:
        raise InputError(f"m must lie in (0, 1), got {m!r}")
    return _exp2(log2_skew_bound(n_samples, card_u, m))


def log2_entropy_bound(n_samples: int, card: int, m: float, eps: float) -> float:
    """log2 of the plug-in entropy deviation bound for a ``card``-valued variable.

    Bounds Pr(|H_hat - H| > eps) by (N+1)**card * 2**(-N eps^2 / (3 log2(1/m))).
    """
    return card * math.log2(n_samples + 1) - n_samples * eps * eps / (3.0 * math.log2(1.0 / m))


def entropy_bound(n_samples: int, card: int, m: float, eps: float) -> float:
    if not 0 < eps < 0.25:
        raise InputError(f"eps must lie in (0, 1/4), got {eps!r}")
    if not 0 < m <= 1.0 / card:
        raise InputError(f"m must lie in (0, 1/{card}], got {m!r}")
    return _exp2(log2_entropy_bound(n_samples, card, m, eps))


def _ratio(n: int, p: Penalty) -> float:
    """N / psi(N), infinite where psi(N) = 0."""
    psi = penalty_weight(p, n)
    return math.inf if psi == 0 else n / psi


def ideal_case_n(g: int, eps: float, p: Penalty) -> int:
    """Smallest N with N / psi(N) > g / eps, holding for every larger N too.

    N / psi(N) increases for N >= 3 under every penalty family, so the
    threshold is found by doubling and bisection there and then extended
    downward while the inequality keeps holding.
    """
    if g < 1:
        raise InputError("g must be >= 1")
    if not eps > 0:
        raise InputError("eps must be > 0")
    threshold = g / eps

    def ok(n: int) -> bool:
        return _ratio(n, p) > threshold

    hi = 3
    while not ok(hi):
        hi *= 2
    lo = 3 if hi == 3 else hi // 2 + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    while lo > 1 and ok(lo - 1):
        lo -= 1
    return lo


def f_inverse(y: float, rtol: float = 1e-9) -> float:
    """The x >= 4 with x / log2(x) = y."""
    if not y >= 2:
        raise InputError(f"f_inverse needs y >= 2, got {y!r}")

    def h(x: float) -> float:
        return x / math.log2(x)

    lo, hi = 4.0, 8.0
    while h(hi) < y:
        lo, hi = hi, hi * 2
    while hi - lo > rtol * lo:
        mid = 0.5 * (lo + hi)
        if h(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _lemma_s(a: float, b: float, c: float) -> float:
    return math.sqrt(a + Z * math.sqrt(b) * c)


def lemma37_valid(a: float, b: float, c: float, m: float) -> bool:
    return Z * _lemma_s(a, b, c) < m


def lemma37_e(a: float, b: float, c: float, m: float) -> float | None:
    """Bound on D(R || Q) given the three closeness hypotheses, or ``None``.

    With s = sqrt(a + z sqrt(b) c), returns
    (z sqrt(b) (z/m) s / 2) / (1 - (z/m) s) + a, and ``None`` when z s >= m.
    """
    if min(a, b, c) < 0:
        raise InputError("a, b and c must be non-negative")
    if not 0 < m <= 1:
        raise InputError(f"m must lie in (0, 1], got {m!r}")
    s = _lemma_s(a, b, c)
    if Z * s >= m:
        return None
    ratio = Z / m * s
    return 0.5 * Z * math.sqrt(b) * ratio / (1.0 - ratio) + a


@dataclass(frozen=True)
class Problem:
    """Target characteristics the bounds depend on.

    ``g`` is |G*| - |G_empty|, ``m`` the smallest probability of a full
    assignment under the target, ``card_u`` the number of full assignments.
    """

    n_vars: int
    card_u: int
    m: float
    g: int
    penalty: Penalty

    def __post_init__(self):
        if self.n_vars < 1:
            raise InputError("n_vars must be >= 1")
        if self.card_u < 2 ** self.n_vars:
            raise InputError(f"card_u={self.card_u} is below 2**n_vars")
        if not 0 < self.m <= 1.0 / self.card_u:
            raise InputError(f"m must lie in (0, 1/card_u], got {self.m!r}")
        if self.g < 0:
            raise InputError("g must be >= 0")

    @property
    def c(self) -> float:
        """Skew threshold 2 n log2(1/m)."""
        return 2 * self.n_vars * math.log2(1.0 / self.m)


@dataclass(frozen=True)
class Thm39Report:
    a: float
    b: float
    n_samples: int
    epsilon: float | None
    delta: float
    valid: bool
    violated_conditions: tuple[str, ...] = field(default=())

    CSV_HEADER = "a,b,n,epsilon,delta,valid,violated"

    def csv_row(self) -> str:
        eps = "" if self.epsilon is None else f"{self.epsilon:.12g}"
        return (f"{self.a:.12g},{self.b:.12g},{self.n_samples},{eps},{self.delta:.12g},"
                f"{int(self.valid)},{'|'.join(self.violated_conditions)}")


def log2_thm39_delta(n_samples: int, card_u: int, b: float, m: float) -> float:
    return _log2_add(log2_sanov_bound(n_samples, card_u, b), log2_skew_bound(n_samples, card_u, m))


def thm39_eval(a: float, b: float, n_samples: int, prob: Problem) -> Thm39Report:
    """Evaluate the (epsilon, delta) guarantee for fixed a, b and N."""
    if not (a > 0 and b > 0):
        raise InputError("a and b must be > 0")
    violated = []
    if _ratio(n_samples, prob.penalty) < prob.g / a:
        violated.append("sample_size")
    eps = lemma37_e(a, b, prob.c, prob.m)
    if eps is None:
        violated.append("skewness")
    delta = sanov_bound(n_samples, prob.card_u, b) + skew_bound(n_samples, prob.card_u, prob.m)
    return Thm39Report(a, b, n_samples, eps, delta, not violated, tuple(violated))


class SampleComplexity(NamedTuple):
    n_samples: int
    a: float
    b: float


def _min_n_delta(prob: Problem, b: float, log2_target: float, cap: int) -> int | None:
    """Smallest N <= cap whose delta is within target (delta falls after its peak)."""
    def excess(n: int) -> float:
        return log2_thm39_delta(n, prob.card_u, b, prob.m) - log2_target

    if excess(1) <= 0:
        return 1
    rate = min(b, skew_rate(prob.m))
    lo = max(1, min(cap, int(prob.card_u / (rate * math.log(2))) - 1))
    if excess(cap) > 0:
        return None
    hi = cap
    while lo < hi:
        mid = (lo + hi) // 2
        if excess(mid) <= 0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _min_n_ratio(prob: Problem, a: float, cap: int) -> int | None:
    threshold = prob.g / a

    def ok(n: int) -> bool:
        return _ratio(n, prob.penalty) >= threshold

    if not ok(cap):
        return None
    lo, hi = 3, cap
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    while lo > 1 and ok(lo - 1):
        lo -= 1
    return lo


def sample_complexity(eps_target: float, delta_target: float, prob: Problem,
                      grid: int = 64, n_cap: int = DEFAULT_N_CAP) -> SampleComplexity | None:
    """Smallest N for which some grid point (a, b) certifies (eps, delta).

    ``a`` runs over ``grid`` log-spaced points in [eps * 1e-4, eps] and ``b``
    over [1e-12, 1]. Epsilon depends only on (a, b); for each admissible pair
    the smallest N meeting both the sample-size condition and the delta
    target is found by bisection, and the overall minimum is returned (ties to
    the first pair in grid order). ``None`` if nothing succeeds below ``n_cap``.
    """
    if not 0 < eps_target < 1 or not 0 < delta_target < 1:
        raise InputError("eps_target and delta_target must lie in (0, 1)")
    a_grid = np.geomspace(eps_target * 1e-4, eps_target, grid)
    b_grid = np.geomspace(1e-12, 1.0, grid)
    log2_target = math.log2(delta_target)
    best: SampleComplexity | None = None
    n_delta_cache: dict[float, int | None] = {}
    for a in a_grid.tolist():
        n_ratio = _min_n_ratio(prob, a, n_cap)
        if n_ratio is None:
            continue
        for b in b_grid.tolist():
            eps = lemma37_e(a, b, prob.c, prob.m)
            if eps is None or eps > eps_target:
                continue
            if b not in n_delta_cache:
                n_delta_cache[b] = _min_n_delta(prob, b, log2_target, n_cap)
            n_delta = n_delta_cache[b]
            if n_delta is None:
                continue
            n = max(n_ratio, n_delta)
            if n > 2 and _ratio(n, prob.penalty) < prob.g / a:
                continue
            if best is None or n < best.n_samples:
                best = SampleComplexity(n, a, b)
    return best


def asymptotic_reference(eps: float, delta: float, prob: Problem) -> float:
    """Constant-free order of magnitude of the sample complexity.

    half_log:       F(|U| + log2(1/delta)) (1/eps)^(4/3) (1/m)^2
    polynomial(a):  F(|U| + log2(1/delta)) (1/eps)^(4/(3(1-a))) g^(1/(1-a)) (1/m)^(2/(1-a))

    Only ratios between settings are meaningful.
    """
    if not 0 < eps < 1 or not 0 < delta < 1:
        raise InputError("eps and delta must lie in (0, 1)")
    base = f_inverse(prob.card_u + math.log2(1.0 / delta))
    p = prob.penalty
    if p.kind == "half_log":
        return base * (1.0 / eps) ** (4.0 / 3.0) * (1.0 / prob.m) ** 2
    if p.kind == "polynomial":
        k = 1.0 / (1.0 - p.value)
        return base * (1.0 / eps) ** (4.0 / 3.0 * k) * float(prob.g) ** k * (1.0 / prob.m) ** (2.0 * k)
    raise InputError("asymptotic reference covers half_log and polynomial penalties only")
