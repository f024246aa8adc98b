"""Discrete Bayesian networks: schemas, structures, parameters and data."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .rng import generator

CPT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Schema:
    """Ordered variables with their cardinalities.

    The position of a variable in ``names`` is its index everywhere else in
    the package (parent sets, dataset columns, joint-table axes).
    """

    names: tuple[str, ...]
    cards: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(str(x) for x in self.names))
        object.__setattr__(self, "cards", tuple(int(c) for c in self.cards))
        if len(self.names) != len(self.cards):
            raise InputError("names and cards differ in length")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate variable names in {self.names}")
        for name, card in zip(self.names, self.cards):
            if card < 2:
                raise InputError(f"variable {name!r} has cardinality {card} < 2")

    @classmethod
    def binary(cls, n: int, prefix: str = "X") -> "Schema":
        return cls(tuple(f"{prefix}{i}" for i in range(n)), (2,) * n)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def size(self) -> int:
        """Number of joint assignments, ``prod(cards)``."""
        return int(np.prod(self.cards, dtype=np.int64)) if self.cards else 1

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None

    def check_assignment(self, assignment: Sequence[int]) -> tuple[int, ...]:
        values = tuple(int(v) for v in assignment)
        if len(values) != self.n:
            raise InputError(f"assignment has {len(values)} values, schema has {self.n} variables")
        for name, card, v in zip(self.names, self.cards, values):
            if not 0 <= v < card:
                raise InputError(f"value {v} out of range for {name!r} (cardinality {card})")
        return values


def _topological_order(parents: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    n = len(parents)
    indeg = [len(p) for p in parents]
    children: list[list[int]] = [[] for _ in range(n)]
    for child, ps in enumerate(parents):
        for p in ps:
            children[p].append(child)
    # smallest ready index first, so the order is canonical
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
        ready.sort()
    return tuple(order) if len(order) == n else None


@dataclass(frozen=True)
class Structure:
    """A DAG over a schema, stored as sorted parent tuples per variable."""

    schema: Schema
    parents: tuple[tuple[int, ...], ...]
    order: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.schema.n
        if len(self.parents) != n:
            raise InputError(f"expected {n} parent sets, got {len(self.parents)}")
        cleaned = []
        for child, ps in enumerate(self.parents):
            ps = tuple(int(p) for p in ps)
            if len(set(ps)) != len(ps):
                raise InputError(f"duplicate parents for {self.schema.names[child]!r}")
            for p in ps:
                if not 0 <= p < n:
                    raise InputError(f"parent index {p} out of range")
                if p == child:
                    raise InputError(f"{self.schema.names[child]!r} is its own parent")
            cleaned.append(tuple(sorted(ps)))
        object.__setattr__(self, "parents", tuple(cleaned))
        order = _topological_order(self.parents)
        if order is None:
            raise InputError("parent relation contains a cycle")
        object.__setattr__(self, "order", order)

    @classmethod
    def empty(cls, schema: Schema) -> "Structure":
        return cls(schema, ((),) * schema.n)

    @classmethod
    def from_edges(cls, schema: Schema, edges: Iterable[tuple[int, int]]) -> "Structure":
        ps: list[set[int]] = [set() for _ in range(schema.n)]
        for a, b in edges:
            ps[b].add(a)
        return cls(schema, tuple(tuple(p) for p in ps))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((p, c) for c, ps in enumerate(self.parents) for p in ps))

    def edge_string(self) -> str:
        names = self.schema.names
        return ";".join(f"{names[a]}->{names[b]}" for a, b in self.edges)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.schema.n, self.schema.n), dtype=bool)
        for a, b in self.edges:
            adj[a, b] = True
        return adj


def param_count(structure: Structure) -> int:
    """Independent parameters: sum of (r_i - 1) * q_i over families."""
    cards = structure.schema.cards
    total = 0
    for i, ps in enumerate(structure.parents):
        q = 1
        for p in ps:
            q *= cards[p]
        total += (cards[i] - 1) * q
    return total


def is_substructure(g1: Structure, g2: Structure) -> bool:
    """True iff every edge of ``g1`` is also an edge of ``g2``."""
    if g1.schema != g2.schema:
        raise InputError("structures are over different schemas")
    return all(set(p1) <= set(p2) for p1, p2 in zip(g1.parents, g2.parents))


@dataclass(frozen=True, eq=False)
class BayesNet:
    """Structure plus conditional probability tables.

    ``cpts[i]`` has shape ``(card(p) for p in parents[i]) + (card_i,)``; its last
    axis is the distribution of variable ``i`` for one parent configuration.
    """

    structure: Structure
    cpts: tuple[np.ndarray, ...]
    name: str = "net"

    def __post_init__(self):
        st = self.structure
        if len(self.cpts) != st.schema.n:
            raise InputError(f"expected {st.schema.n} CPTs, got {len(self.cpts)}")
        frozen = []
        for i, cpt in enumerate(self.cpts):
            arr = np.array(cpt, dtype=float)
            shape = tuple(st.schema.cards[p] for p in st.parents[i]) + (st.schema.cards[i],)
            name = st.schema.names[i]
            if arr.shape != shape:
                raise InputError(f"CPT of {name!r} has shape {arr.shape}, expected {shape}")
            if np.any(arr < 0) or not np.all(np.isfinite(arr)):
                raise InputError(f"CPT of {name!r} has negative or non-finite entries")
            sums = arr.sum(axis=-1)
            if np.any(np.abs(sums - 1.0) > CPT_TOLERANCE):
                raise InputError(f"CPT rows of {name!r} do not sum to 1")
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "cpts", tuple(frozen))

    @property
    def schema(self) -> Schema:
        return self.structure.schema

    def allclose(self, other: "BayesNet", atol: float = 1e-12) -> bool:
        return self.structure == other.structure and all(
            np.allclose(a, b, rtol=0.0, atol=atol) for a, b in zip(self.cpts, other.cpts)
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """Complete integer-coded rows; column ``j`` holds variable ``j``."""

    schema: Schema
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64)
        if rows.size == 0:
            rows = rows.reshape(0, self.schema.n)
        if rows.ndim != 2 or rows.shape[1] != self.schema.n:
            raise InputError(f"rows must have shape (N, {self.schema.n}), got {rows.shape}")
        cards = np.asarray(self.schema.cards)
        bad = (rows < 0) | (rows >= cards)
        if bad.any():
            r, c = np.argwhere(bad)[0]
            raise InputError(
                f"row {r}: value {rows[r, c]} out of range for {self.schema.names[c]!r}"
            )
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return self.rows.shape[0]

    def take(self, index: np.ndarray) -> "Dataset":
        return Dataset(self.schema, self.rows[index])

    def equals(self, other: "Dataset") -> bool:
        return self.schema == other.schema and np.array_equal(self.rows, other.rows)


def joint_prob(net: BayesNet, assignment: Sequence[int]) -> float:
    values = net.schema.check_assignment(assignment)
    prob = 1.0
    for i, ps in enumerate(net.structure.parents):
        prob *= float(net.cpts[i][tuple(values[p] for p in ps) + (values[i],)])
    return prob


def ancestral_sample(net: BayesNet, n_rows: int, seed) -> Dataset:
    """Draw ``n_rows`` i.i.d. rows, sampling variables in topological order.

    One uniform draw per (row, variable) is inverted through the cumulative
    CPT row; the uniforms for the whole dataset are drawn up front in a single
    ``(n_rows, n)`` block, so the output depends only on the seed.
    """
    if n_rows < 0:
        raise InputError("n_rows must be non-negative")
    schema = net.schema
    rows = np.zeros((n_rows, schema.n), dtype=np.int64)
    u = generator(seed).random((n_rows, schema.n))
    for i in net.structure.order:
        ps = net.structure.parents[i]
        cum = np.cumsum(net.cpts[i], axis=-1)[..., :-1]
        table = cum.reshape(-1, schema.cards[i] - 1)
        if ps:
            config = np.ravel_multi_index(tuple(rows[:, p] for p in ps),
                                          tuple(schema.cards[p] for p in ps))
        else:
            config = np.zeros(n_rows, dtype=np.int64)
        rows[:, i] = (u[:, i, None] >= table[config]).sum(axis=1)
    return Dataset(schema, rows)
