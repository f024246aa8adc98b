"""Penalized MDL scoring of structures against data."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .distributions import subset_counts
from .errors import InputError
from .network import BayesNet, Dataset, Structure, param_count


@dataclass(frozen=True)
class Penalty:
    """Per-parameter penalty weight psi(N).

    ``kind`` is ``"constant"`` (psi = c), ``"half_log"`` (psi = log2(N) / 2) or
    ``"polynomial"`` (psi = N**alpha).
    """

    kind: str
    value: float | None = None

    def __post_init__(self):
        if self.kind == "constant":
            if self.value is None or not self.value > 0:
                raise InputError(f"constant penalty needs c > 0, got {self.value!r}")
        elif self.kind == "polynomial":
            if self.value is None or not 0 < self.value < 1:
                raise InputError(f"polynomial penalty needs 0 < alpha < 1, got {self.value!r}")
        elif self.kind == "half_log":
            if self.value is not None:
                raise InputError("half_log penalty takes no parameter")
        else:
            raise InputError(f"unknown penalty kind {self.kind!r}")
        if self.value is not None:
            object.__setattr__(self, "value", float(self.value))

    @classmethod
    def constant(cls, c: float) -> "Penalty":
        return cls("constant", c)

    @classmethod
    def half_log(cls) -> "Penalty":
        return cls("half_log")

    @classmethod
    def polynomial(cls, alpha: float) -> "Penalty":
        return cls("polynomial", alpha)

    @classmethod
    def parse(cls, token: str) -> "Penalty":
        """Parse the flag grammar ``const:<c> | bic | poly:<alpha>``."""
        kind, _, arg = token.partition(":")
        try:
            if kind == "bic" and not arg:
                return cls.half_log()
            if kind == "const" and arg:
                return cls.constant(float(arg))
            if kind == "poly" and arg:
                return cls.polynomial(float(arg))
        except (ValueError, InputError):
            pass
        raise InputError(f"malformed penalty {token!r}; expected const:<c>, bic or poly:<alpha>")

    def token(self) -> str:
        if self.kind == "half_log":
            return "bic"
        prefix = "const" if self.kind == "constant" else "poly"
        return f"{prefix}:{self.value!r}"

    def weight(self, n_samples: int) -> float:
        return penalty_weight(self, n_samples)


def penalty_weight(p: Penalty, n_samples: int) -> float:
    if n_samples < 1:
        raise InputError(f"penalty weight needs N >= 1, got {n_samples}")
    if p.kind == "constant":
        return p.value
    if p.kind == "half_log":
        return 0.5 * math.log2(n_samples)
    return float(n_samples) ** p.value


def _plogp(counts: np.ndarray, n: int) -> np.ndarray:
    c = counts.ravel()
    c = c[c > 0]
    p = c / n
    return p * np.log2(p)


class FamilyEntropies:
    """Cached p*log2(p) terms of empirical marginals, keyed by variable bitmask.

    The log-likelihood of a structure is ``N * fsum`` of the positive terms of
    each family marginal and the negated terms of each parent marginal. Using
    the same cached terms for every structure makes Markov-equivalent
    structures score bit-identically: their shared marginals cancel exactly.
    """

    def __init__(self, data: Dataset):
        if len(data) == 0:
            raise InputError("scoring needs a nonempty dataset")
        self.data = data
        self.n_samples = len(data)
        self._terms: dict[int, np.ndarray] = {0: np.zeros(0)}
        self._sums: dict[int, float] = {0: 0.0}

    def terms(self, mask: int) -> np.ndarray:
        t = self._terms.get(mask)
        if t is None:
            variables = [i for i in range(self.data.schema.n) if mask >> i & 1]
            t = _plogp(subset_counts(self.data, variables), self.n_samples)
            self._terms[mask] = t
        return t

    def neg_entropy(self, mask: int) -> float:
        """sum p*log2(p) over the marginal of ``mask`` (i.e. -H)."""
        s = self._sums.get(mask)
        if s is None:
            s = math.fsum(self.terms(mask))
            self._sums[mask] = s
        return s

    def family_value(self, child: int, parent_mask: int) -> float:
        """-H(child | parents), approximately (plain float difference)."""
        return self.neg_entropy(parent_mask | 1 << child) - self.neg_entropy(parent_mask)

    def log_likelihood_masks(self, parent_masks: Iterable[int]) -> float:
        parts: list[float] = []
        for child, pm in enumerate(parent_masks):
            parts.extend(self.terms(pm | 1 << child))
            parts.extend(-self.terms(pm))
        return self.n_samples * math.fsum(parts)

    def log_likelihood(self, g: Structure) -> float:
        return self.log_likelihood_masks(parent_mask(g))


def parent_mask(g: Structure) -> list[int]:
    return [sum(1 << p for p in ps) for ps in g.parents]


def _check(g: Structure, data: Dataset) -> None:
    if g.schema != data.schema:
        raise InputError("structure and dataset are over different schemas")
    if len(data) == 0:
        raise InputError("scoring needs a nonempty dataset")


def log_likelihood(g: Structure, data: Dataset) -> float:
    """LL of the ML network of ``g``: -N * sum_i H(X_i | parents_i), in bits."""
    _check(g, data)
    return FamilyEntropies(data).log_likelihood(g)


def net_log_likelihood(net: BayesNet, data: Dataset) -> float:
    """Direct sum of log2 P_B(u_j) over the rows; ``-inf`` if any row has P_B = 0."""
    if net.schema != data.schema:
        raise InputError("network and dataset are over different schemas")
    rows = data.rows
    total = np.zeros(len(data))
    with np.errstate(divide="ignore"):
        for i, ps in enumerate(net.structure.parents):
            total += np.log2(net.cpts[i][tuple(rows[:, p] for p in ps) + (rows[:, i],)])
    return float(math.fsum(total))


@dataclass(frozen=True)
class ScoreReport:
    structure: Structure
    log_likelihood: float
    penalty_weight: float
    param_count: int
    score: float

    CSV_HEADER = "structure,ll,psi,params,score"

    def csv_row(self) -> str:
        return (f"{self.structure.edge_string()},{self.log_likelihood:.12g},"
                f"{self.penalty_weight:.12g},{self.param_count},{self.score:.12g}")


def make_report(g: Structure, ll: float, psi: float) -> ScoreReport:
    k = param_count(g)
    return ScoreReport(g, ll, psi, k, ll - k * psi)


def score(g: Structure, data: Dataset, p: Penalty) -> ScoreReport:
    """S = LL(g) - |g| * psi(N). No term for describing the graph itself."""
    _check(g, data)
    return make_report(g, log_likelihood(g, data), penalty_weight(p, len(data)))


class Ordering(enum.Enum):
    G1_BETTER = "g1_better"
    G2_BETTER = "g2_better"
    TIE = "tie"


def compare(g1: Structure, g2: Structure, data: Dataset, p: Penalty) -> Ordering:
    _check(g1, data)
    _check(g2, data)
    cache = FamilyEntropies(data)
    psi = penalty_weight(p, len(data))
    s1 = make_report(g1, cache.log_likelihood(g1), psi).score
    s2 = make_report(g2, cache.log_likelihood(g2), psi).score
    if s1 > s2:
        return Ordering.G1_BETTER
    if s2 > s1:
        return Ordering.G2_BETTER
    return Ordering.TIE
