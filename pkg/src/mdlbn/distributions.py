"""Dense joint distributions and the information quantities built on them.

All logarithms are base 2. Tables are flat arrays in mixed-radix order with
variable 0 as the most significant digit, i.e. C order over ``schema.cards``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CapacityError, InputError
from .network import BayesNet, Dataset, Schema, Structure

TABLE_CAPACITY = 2**20
SUM_TOLERANCE = 1e-9


def _check_capacity(schema: Schema, capacity: int) -> None:
    if schema.size > capacity:
        raise CapacityError(f"joint table of {schema.size} cells exceeds capacity {capacity}")


@dataclass(frozen=True, eq=False)
class JointTable:
    schema: Schema
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).ravel()
        if probs.shape[0] != self.schema.size:
            raise InputError(f"table has {probs.shape[0]} entries, schema needs {self.schema.size}")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise InputError("table has negative or non-finite entries")
        if abs(probs.sum() - 1.0) > SUM_TOLERANCE:
            raise InputError(f"table sums to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def as_array(self) -> np.ndarray:
        return self.probs.reshape(self.schema.cards)

    def marginal(self, variables: Iterable[int]) -> np.ndarray:
        """Marginal over ``variables`` (kept in ascending index order)."""
        keep = sorted(set(variables))
        drop = tuple(i for i in range(self.schema.n) if i not in keep)
        return self.as_array().sum(axis=drop) if drop else self.as_array()

    def prob(self, assignment) -> float:
        values = self.schema.check_assignment(assignment)
        return float(self.as_array()[values])


def entropy_bits(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def empirical(data: Dataset, capacity: int = TABLE_CAPACITY) -> JointTable:
    if len(data) == 0:
        raise InputError("empirical distribution of an empty dataset")
    _check_capacity(data.schema, capacity)
    counts = subset_counts(data, range(data.schema.n))
    return JointTable(data.schema, counts.ravel() / len(data))


def subset_counts(data: Dataset, variables: Iterable[int]) -> np.ndarray:
    """Integer counts over the joint values of ``variables`` (ascending order)."""
    keep = sorted(set(variables))
    cards = tuple(data.schema.cards[i] for i in keep)
    if not keep:
        return np.array(len(data), dtype=np.int64)
    codes = np.ravel_multi_index(tuple(data.rows[:, i] for i in keep), cards)
    return np.bincount(codes, minlength=int(np.prod(cards))).reshape(cards)


def net_to_table(net: BayesNet, capacity: int = TABLE_CAPACITY) -> JointTable:
    schema = net.schema
    _check_capacity(schema, capacity)
    joint = np.ones(schema.cards)
    n = schema.n
    for i, ps in enumerate(net.structure.parents):
        # move the CPT axes (parents..., child) onto their schema positions
        axes = list(ps) + [i]
        order = np.argsort(axes)
        cpt = np.transpose(net.cpts[i], order)
        shape = [1] * n
        for ax in axes:
            shape[ax] = schema.cards[ax]
        joint = joint * cpt.reshape(shape)
    return JointTable(schema, joint.ravel())


def _variable_set(table: JointTable, variables) -> set[int]:
    out = set()
    for v in variables:
        idx = table.schema.index(v) if isinstance(v, str) else int(v)
        if not 0 <= idx < table.schema.n:
            raise InputError(f"variable index {idx} out of range")
        out.add(idx)
    return out


def cond_entropy(table: JointTable, targets, given=()) -> float:
    """H(targets | given) in bits, as H(targets + given) - H(given)."""
    t = _variable_set(table, targets)
    g = _variable_set(table, given)
    if t & g:
        raise InputError(f"targets and given overlap on {sorted(t & g)}")
    h_joint = entropy_bits(table.marginal(t | g))
    h_given = entropy_bits(table.marginal(g)) if g else 0.0
    return max(0.0, h_joint - h_given)


def _same_schema(p: JointTable, q: JointTable) -> None:
    if p.schema != q.schema:
        raise InputError("tables are over different schemas")


def entropy_distance(p: JointTable, q: JointTable) -> float:
    """D(p || q) in bits; ``math.inf`` when p puts mass where q has none."""
    _same_schema(p, q)
    pp, qq = p.probs, q.probs
    support = pp > 0
    if np.any(qq[support] == 0):
        return math.inf
    ps, qs = pp[support], qq[support]
    return max(0.0, float(np.sum(ps * (np.log2(ps) - np.log2(qs)))))


def l1_distance(p: JointTable, q: JointTable) -> float:
    _same_schema(p, q)
    return float(np.abs(p.probs - q.probs).sum())


def skewness(table: JointTable) -> tuple[float, float]:
    """(min over all cells, min over positive cells)."""
    probs = table.probs
    return float(probs.min()), float(probs[probs > 0].min())


def family_cpt(counts: np.ndarray) -> np.ndarray:
    """Conditional table from family counts shaped ``(parents..., child)``.

    Parent configurations with zero count get the uniform vector.
    """
    counts = np.asarray(counts, dtype=float)
    totals = counts.sum(axis=-1, keepdims=True)
    r = counts.shape[-1]
    with np.errstate(invalid="ignore", divide="ignore"):
        cpt = np.where(totals > 0, counts / np.where(totals > 0, totals, 1.0), 1.0 / r)
    return cpt


def ml_parameters(g: Structure, data: Dataset) -> BayesNet:
    """Maximum-likelihood parameters of ``g`` (observed conditional frequencies)."""
    if g.schema != data.schema:
        raise InputError("structure and dataset are over different schemas")
    if len(data) == 0:
        raise InputError("ml_parameters needs a nonempty dataset")
    cpts = []
    for i, ps in enumerate(g.parents):
        # subset_counts orders axes by index; the child must end up last
        fam = sorted(ps + (i,))
        counts = subset_counts(data, fam)
        counts = np.moveaxis(counts, fam.index(i), -1)
        cpts.append(family_cpt(counts))
    return BayesNet(g, tuple(cpts))
