"""Monte Carlo harnesses: learning curves, tail-bound checks, minimality probes.

Each (N, trial) pair owns the child stream ``(seed, N, trial)``, so a run is
reproducible point by point and independent of grid composition. All CSV
floats use 12 significant digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import entropy_bound, sanov_bound
from .distributions import empirical, entropy_bits, entropy_distance, net_to_table
from .errors import InputError
from .learner import learn
from .network import BayesNet, Schema, Structure, ancestral_sample, param_count
from .rng import generator, seed_sequence
from .scoring import Penalty

STANDARD_TARGET_SEED = 7


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def random_target(n: int, seed: int, max_parents: int = 2, low: float = 0.2,
                  high: float = 0.8, edge_prob: float = 0.5) -> BayesNet:
    """Random binary network with every conditional P(X=1 | .) in [low, high]."""
    rng = generator(seed)
    schema = Schema.binary(n)
    parents = []
    for i in range(n):
        cand = [j for j in range(i) if rng.random() < edge_prob]
        if len(cand) > max_parents:
            cand = sorted(rng.choice(cand, size=max_parents, replace=False).tolist())
        parents.append(tuple(cand))
    structure = Structure(schema, tuple(parents))
    cpts = []
    for ps in parents:
        p1 = rng.uniform(low, high, size=(2,) * len(ps))
        cpts.append(np.stack([1.0 - p1, p1], axis=-1))
    return BayesNet(structure, tuple(cpts))


def standard_target() -> BayesNet:
    """The 5-node stochastic target used by the curve and consistency runs."""
    return random_target(5, STANDARD_TARGET_SEED)


def chain_target(n: int = 3, p_same: float = 0.8, p_root: float = 0.4) -> BayesNet:
    """Binary chain X0 -> X1 -> ... where each child copies its parent w.p. ``p_same``."""
    schema = Schema.binary(n)
    structure = Structure(schema, tuple(() if i == 0 else (i - 1,) for i in range(n)))
    copy = np.array([[p_same, 1 - p_same], [1 - p_same, p_same]])
    cpts = [np.array([1 - p_root, p_root])] + [copy] * (n - 1)
    return BayesNet(structure, tuple(cpts))


def deterministic_target(n: int = 5) -> BayesNet:
    """Chain with degenerate CPTs: X0 = 1 and every child copies its parent."""
    schema = Schema.binary(n)
    structure = Structure(schema, tuple(() if i == 0 else (i - 1,) for i in range(n)))
    cpts = [np.array([0.0, 1.0])] + [np.eye(2)] * (n - 1)
    return BayesNet(structure, tuple(cpts))


@dataclass(frozen=True)
class CurvePoint:
    n_samples: int
    mean_kl: float
    scaled_error: float
    trials: int
    std_kl: float

    def csv_row(self) -> str:
        return (f"{self.n_samples},{self.trials},{_fmt(self.mean_kl)},"
                f"{_fmt(self.std_kl)},{_fmt(self.scaled_error)}")


CURVE_HEADER = "n,trials,mean_kl,std_kl,scaled_error"
SANOV_HEADER = "n,eps,trials,empirical_freq,analytic_bound"
MINIMALITY_HEADER = "n,trials,smaller,equal,larger"


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    target: BayesNet
    n_grid: tuple[int, ...]
    trials: int
    penalty: Penalty
    seed: int
    learner_mode: str = "exhaustive"
    restarts: int = 5
    eps: float = 0.05
    delta: float = 0.05

    def __post_init__(self):
        grid = tuple(int(x) for x in self.n_grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise InputError("n_grid must be a nonempty strictly increasing list of N >= 1")
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if self.learner_mode not in ("exhaustive", "greedy", "subsampled"):
            raise InputError(f"unknown learner mode {self.learner_mode!r}")
        object.__setattr__(self, "n_grid", grid)


def learned_error(target_table, data, cfg: ExperimentConfig, learner_seed: int) -> float:
    result = learn(data, cfg.penalty, cfg.learner_mode, seed=learner_seed,
                   restarts=cfg.restarts, eps=cfg.eps, delta=cfg.delta)
    return entropy_distance(target_table, net_to_table(result.net))


def learning_curve(cfg: ExperimentConfig) -> list[CurvePoint]:
    """Mean D(target || learned) per sample size, scaled by N / log2(N)."""
    target_table = net_to_table(cfg.target)
    points = []
    for n in cfg.n_grid:
        kls = []
        for t in range(cfg.trials):
            data = ancestral_sample(cfg.target, n, seed_sequence(cfg.seed, n, t))
            learner_seed = int(seed_sequence(cfg.seed, n, t, 1).generate_state(1)[0])
            kls.append(learned_error(target_table, data, cfg, learner_seed))
        mean = math.fsum(kls) / len(kls)
        if math.isinf(mean):
            std = math.inf
        else:
            std = math.sqrt(math.fsum((k - mean) ** 2 for k in kls) / len(kls))
        scaled = mean * n / math.log2(n) if n > 1 else math.nan
        points.append(CurvePoint(n, mean, scaled, cfg.trials, std))
    return points


def curve_csv(points: Sequence[CurvePoint]) -> str:
    return "\n".join([CURVE_HEADER] + [p.csv_row() for p in points]) + "\n"


def plateau_ratio(points: Sequence[CurvePoint]) -> float:
    """max / min scaled error over the upper half of the grid."""
    top = points[len(points) // 2:]
    vals = [p.scaled_error for p in top]
    return max(vals) / min(vals) if min(vals) > 0 else math.inf


@dataclass(frozen=True)
class SanovResult:
    n_samples: int
    eps: float
    trials: int
    empirical_freq: float
    analytic_bound: float

    def csv_row(self) -> str:
        return (f"{self.n_samples},{_fmt(self.eps)},{self.trials},"
                f"{_fmt(self.empirical_freq)},{_fmt(self.analytic_bound)}")


def sanov_mc(target: BayesNet, n_samples: int, eps: float, trials: int, seed: int) -> SanovResult:
    """Frequency of D(empirical || target) > eps next to the analytic tail bound."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    table = net_to_table(target)
    hits = 0
    for t in range(trials):
        data = ancestral_sample(target, n_samples, seed_sequence(seed, n_samples, t))
        if entropy_distance(empirical(data), table) > eps:
            hits += 1
    bound = min(1.0, sanov_bound(n_samples, target.schema.size, eps))
    return SanovResult(n_samples, eps, trials, hits / trials, bound)


def sanov_csv(results: Sequence[SanovResult]) -> str:
    return "\n".join([SANOV_HEADER] + [r.csv_row() for r in results]) + "\n"


def entropy_deviation_mc(probs: Sequence[float], n_samples: int, eps: float, trials: int,
                         seed: int) -> tuple[float, float]:
    """Frequency of |H_hat - H| > eps for the plug-in entropy of one variable.

    Returns ``(empirical_freq, min(1, analytic_bound))`` with the bound taken
    at m = min(probs).
    """
    probs = np.asarray(probs, dtype=float)
    h = entropy_bits(probs)
    hits = 0
    for t in range(trials):
        counts = generator(seed, n_samples, t).multinomial(n_samples, probs)
        if abs(entropy_bits(counts / n_samples) - h) > eps:
            hits += 1
    bound = min(1.0, entropy_bound(n_samples, len(probs), float(probs.min()), eps))
    return hits / trials, bound


@dataclass(frozen=True)
class MinimalityResult:
    n_samples: int
    trials: int
    smaller: int
    equal: int
    larger: int

    def csv_row(self) -> str:
        return f"{self.n_samples},{self.trials},{self.smaller},{self.equal},{self.larger}"


def minimality_probe(target: BayesNet, p: Penalty, n_samples: int, trials: int,
                     seed: int) -> MinimalityResult:
    """Histogram of sign(|G_learned| - |G*|) over exhaustive-learner trials."""
    if trials < 1:
        raise InputError("trials must be >= 1")
    k_star = param_count(target.structure)
    counts = [0, 0, 0]
    for t in range(trials):
        data = ancestral_sample(target, n_samples, seed_sequence(seed, n_samples, t))
        k = learn(data, p, "exhaustive").report.param_count
        counts[(k > k_star) - (k < k_star) + 1] += 1
    return MinimalityResult(n_samples, trials, *counts)


def minimality_csv(results: Sequence[MinimalityResult]) -> str:
    return "\n".join([MINIMALITY_HEADER] + [r.csv_row() for r in results]) + "\n"
