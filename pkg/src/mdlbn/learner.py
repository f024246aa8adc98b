"""Structure learners: exhaustive argmax, greedy hill climbing, sub-sampled scoring."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dags import DEFAULT_DAG_LIMIT, dag_parent_masks
from .distributions import family_cpt, ml_parameters, subset_counts
from .errors import InputError
from .network import BayesNet, Dataset, Structure
from .rng import generator
from .scoring import FamilyEntropies, Penalty, ScoreReport, make_report, penalty_weight

PILOT_ROWS = 4096


@dataclass(frozen=True)
class LearnResult:
    net: BayesNet
    report: ScoreReport
    candidates_evaluated: int
    mode: str
    per_family_sample_sizes: tuple[int, ...] | None = None

    @property
    def structure(self) -> Structure:
        return self.report.structure


def _structure(schema, masks) -> Structure:
    return Structure(schema, tuple(tuple(p for p in range(schema.n) if m >> p & 1) for m in masks))


def _family_params(schema, child: int, mask: int) -> int:
    q = 1
    for p in range(schema.n):
        if mask >> p & 1:
            q *= schema.cards[p]
    return (schema.cards[child] - 1) * q


class _Scorer:
    """Family-decomposed scoring over one or more entropy caches.

    ``source(child, mask)`` names the cache used for a family; the full-data
    cache is the default. Exact log-likelihoods are ``N * fsum`` over the
    p*log2(p) terms of every family, each taken from its own cache.
    """

    def __init__(self, data: Dataset, penalty: Penalty,
                 source: Callable[[int, int], FamilyEntropies] | None = None):
        self.data = data
        self.schema = data.schema
        self.n_samples = len(data)
        self.psi = penalty_weight(penalty, self.n_samples)
        self.full = FamilyEntropies(data)
        self.source = source or (lambda child, mask: self.full)
        self._local: dict[tuple[int, int], float] = {}

    def local(self, child: int, mask: int) -> float:
        """Approximate family score: N * (-H(child | parents)) - params * psi."""
        key = (child, mask)
        v = self._local.get(key)
        if v is None:
            cache = self.source(child, mask)
            v = (self.n_samples * cache.family_value(child, mask)
                 - _family_params(self.schema, child, mask) * self.psi)
            self._local[key] = v
        return v

    def exact_ll(self, masks) -> float:
        parts: list[float] = []
        for child, pm in enumerate(masks):
            cache = self.source(child, pm)
            parts.extend(cache.terms(pm | 1 << child))
            parts.extend(-cache.terms(pm))
        return self.n_samples * math.fsum(parts)

    def report(self, masks) -> ScoreReport:
        return make_report(_structure(self.schema, masks), self.exact_ll(masks), self.psi)


def _argmax_exhaustive(scorer: _Scorer, limit: int) -> tuple[ScoreReport, int]:
    n = scorer.schema.n
    all_masks = dag_parent_masks(n, limit)
    width = 1 << n
    table = np.full((n, width), -np.inf)
    params = np.zeros((n, width), dtype=np.int64)
    for child in range(n):
        for mask in range(width):
            if not mask >> child & 1:
                table[child, mask] = scorer.local(child, mask)
                params[child, mask] = _family_params(scorer.schema, child, mask)
    cols = np.arange(n)
    approx = table[cols, all_masks].sum(axis=1)
    best = approx.max()
    # float sums of equivalent structures can differ in the last bits; re-score
    # every near-maximal candidate exactly before applying the tie-break
    tol = 1e-9 * (abs(best) + scorer.n_samples + 1.0)
    near = np.flatnonzero(approx >= best - tol)
    chosen = None
    for idx in near.tolist():
        rep = scorer.report(all_masks[idx].tolist())
        key = (rep.score, -rep.param_count)
        if chosen is None or key > chosen[0]:
            chosen = (key, rep)
    return chosen[1], len(all_masks)


def learn_exhaustive(data: Dataset, p: Penalty, limit: int = DEFAULT_DAG_LIMIT) -> LearnResult:
    """Maximize the penalized score over every DAG.

    Ties go to the structure with fewer parameters, then to the earlier one in
    canonical enumeration order.
    """
    if len(data) == 0:
        raise InputError("cannot learn from an empty dataset")
    scorer = _Scorer(data, p)
    rep, count = _argmax_exhaustive(scorer, limit)
    return LearnResult(ml_parameters(rep.structure, data), rep, count, "exhaustive")


def _creates_cycle(masks: list[int], src: int, dst: int) -> bool:
    """Would adding src -> dst close a cycle, i.e. does dst reach src?"""
    n = len(masks)
    children = [0] * n
    for c, m in enumerate(masks):
        for p in range(n):
            if m >> p & 1:
                children[p] |= 1 << c
    seen = 0
    stack = [dst]
    while stack:
        v = stack.pop()
        if v == src:
            return True
        if seen >> v & 1:
            continue
        seen |= 1 << v
        stack.extend(c for c in range(n) if children[v] >> c & 1)
    return False


def _random_dag(n: int, rng: np.random.Generator) -> list[int]:
    order = rng.permutation(n)
    p_edge = min(0.5, 2.0 / n) if n > 1 else 0.0
    masks = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p_edge:
                masks[order[b]] |= 1 << int(order[a])
    return masks


def _hill_climb(scorer: _Scorer, masks: list[int]) -> tuple[list[int], int]:
    n = len(masks)
    evaluated = 1
    tol = 1e-10 * (scorer.n_samples + 1.0)
    while True:
        best_delta, best_move = tol, None
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                if masks[b] >> a & 1:
                    # delete a -> b
                    nb = masks[b] ^ 1 << a
                    delta = scorer.local(b, nb) - scorer.local(b, masks[b])
                    evaluated += 1
                    if delta > best_delta:
                        best_delta, best_move = delta, ((b, nb),)
                    # reverse a -> b
                    trial = list(masks)
                    trial[b] = nb
                    if not _creates_cycle(trial, b, a):
                        na = masks[a] | 1 << b
                        delta += scorer.local(a, na) - scorer.local(a, masks[a])
                        evaluated += 1
                        if delta > best_delta:
                            best_delta, best_move = delta, ((b, nb), (a, na))
                elif not masks[a] >> b & 1 and not _creates_cycle(masks, a, b):
                    nb = masks[b] | 1 << a
                    delta = scorer.local(b, nb) - scorer.local(b, masks[b])
                    evaluated += 1
                    if delta > best_delta:
                        best_delta, best_move = delta, ((b, nb),)
        if best_move is None:
            return masks, evaluated
        masks = list(masks)
        for child, m in best_move:
            masks[child] = m


def learn_greedy(data: Dataset, p: Penalty, restarts: int = 1, seed: int = 0) -> LearnResult:
    """Hill climbing over single-edge additions, deletions and reversals.

    The first climb starts from the empty graph, the remaining ``restarts - 1``
    from random DAGs drawn from ``seed``. Returns the best local optimum.
    """
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    if len(data) == 0:
        raise InputError("cannot learn from an empty dataset")
    n = data.schema.n
    scorer = _Scorer(data, p)
    best = None
    total = 0
    for r in range(restarts):
        start = [0] * n if r == 0 else _random_dag(n, generator(seed, r))
        masks, evaluated = _hill_climb(scorer, start)
        total += evaluated
        rep = scorer.report(masks)
        key = (rep.score, -rep.param_count)
        if best is None or key > best[0]:
            best = (key, rep)
    rep = best[1]
    return LearnResult(ml_parameters(rep.structure, data), rep, total, "greedy")


def family_sample_size(family_card: int, m: float, eps: float, delta: float) -> int:
    """Smallest N with (N+1)**card * 2**(-N eps^2 / (3 log2(1/m))) <= delta.

    The left side rises and then falls in N; the search runs on the falling
    branch, where the condition, once met, stays met.
    """
    if family_card < 2:
        raise InputError("family cardinality must be >= 2")
    if not 0 < eps < 0.25:
        raise InputError(f"eps must lie in (0, 1/4), got {eps!r}")
    if not 0 < delta < 1:
        raise InputError(f"delta must lie in (0, 1), got {delta!r}")
    if not 0 < m <= 1.0 / family_card:
        raise InputError(f"m must lie in (0, 1/{family_card}], got {m!r}")
    rate = eps * eps / (3.0 * math.log2(1.0 / m))
    target = math.log2(delta)

    def excess(n: int) -> float:
        return family_card * math.log2(n + 1) - n * rate - target

    lo = max(1, int(family_card / (rate * math.log(2))) - 1)  # at or before the peak
    if excess(1) <= 0:
        return 1
    hi = max(lo, 2)
    while excess(hi) > 0:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if excess(mid) <= 0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _family_card(schema, child: int, mask: int) -> int:
    card = schema.cards[child]
    for p in range(schema.n):
        if mask >> p & 1:
            card *= schema.cards[p]
    return card


def learn_subsampled(data: Dataset, p: Penalty, eps: float, delta: float, seed: int,
                     m: float | None = None, limit: int = DEFAULT_DAG_LIMIT) -> LearnResult:
    """Exhaustive search where each family entropy comes from its own subsample.

    The subsample for family (X_i, parents) has ``family_sample_size`` rows at
    per-term budget (eps/2n, delta/2n), drawn without replacement and capped
    at N; at the cap the full data are used, so the result then coincides with
    ``learn_exhaustive``. ``m`` is a lower bound on the family probabilities;
    when omitted it is estimated on a pilot subsample.
    """
    if len(data) == 0:
        raise InputError("cannot learn from an empty dataset")
    schema = data.schema
    n_rows = len(data)
    n = schema.n
    if m is not None and not 0 < m < 1:
        raise InputError(f"m must lie in (0, 1), got {m!r}")
    term_eps, term_delta = eps / (2 * n), delta / (2 * n)

    pilot = None
    if m is None:
        size = min(n_rows, PILOT_ROWS)
        idx = np.sort(generator(seed, 0).choice(n_rows, size=size, replace=False))
        pilot = data.take(idx)

    sizes: dict[tuple[int, int], int] = {}
    subsets: dict[tuple[int, int], FamilyEntropies] = {}
    full = FamilyEntropies(data)

    def size_for(child: int, mask: int) -> int:
        key = (child, mask)
        if key not in sizes:
            card = _family_card(schema, child, mask)
            if m is None:
                counts = subset_counts(pilot, [i for i in range(n) if mask >> i & 1] + [child])
                pos = counts[counts > 0]
                m_hat = max(pos.min() / len(pilot), 1.0 / (2 * n_rows))
            else:
                m_hat = m
            m_hat = min(m_hat, 1.0 / card)
            sizes[key] = min(n_rows, family_sample_size(card, m_hat, term_eps, term_delta))
        return sizes[key]

    def source(child: int, mask: int) -> FamilyEntropies:
        k = size_for(child, mask)
        if k >= n_rows:
            return full
        key = (child, mask)
        if key not in subsets:
            rng = generator(seed, 1, child, mask)
            idx = np.sort(rng.choice(n_rows, size=k, replace=False))
            subsets[key] = FamilyEntropies(data.take(idx))
        return subsets[key]

    scorer = _Scorer(data, p, source)
    rep, count = _argmax_exhaustive(scorer, limit)

    masks = [sum(1 << q for q in ps) for ps in rep.structure.parents]
    cpts = []
    for child, ps in enumerate(rep.structure.parents):
        fam = sorted(ps + (child,))
        counts = subset_counts(source(child, masks[child]).data, fam)
        cpts.append(family_cpt(np.moveaxis(counts, fam.index(child), -1)))
    net = BayesNet(rep.structure, tuple(cpts))
    fam_sizes = tuple(size_for(child, masks[child]) for child in range(n))
    return LearnResult(net, rep, count, "subsampled", fam_sizes)


def learn(data: Dataset, p: Penalty, mode: str = "exhaustive", seed: int = 0,
          restarts: int = 5, eps: float = 0.05, delta: float = 0.05) -> LearnResult:
    """Dispatch on ``mode``: ``exhaustive``, ``greedy`` or ``subsampled``."""
    if mode == "exhaustive":
        return learn_exhaustive(data, p)
    if mode == "greedy":
        return learn_greedy(data, p, restarts=restarts, seed=seed)
    if mode == "subsampled":
        return learn_subsampled(data, p, eps, delta, seed)
    raise InputError(f"unknown learner mode {mode!r}")
