"""Exhaustive enumeration of labeled DAGs."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import CapacityError
from .network import Schema, Structure

DEFAULT_DAG_LIMIT = 5


def _off_diagonal(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if i != j]


@lru_cache(maxsize=None)
def _parent_masks(n: int) -> np.ndarray:
    """Parent bitmasks of every DAG on ``n`` nodes, shape ``(count, n)``.

    Rows come in lexicographic order of the row-major off-diagonal adjacency
    bits (edge absent sorts before edge present), so the empty graph is first.
    """
    slots = _off_diagonal(n)
    out = [0] * n  # out[v]: bitmask of children of v
    pmask = [0] * n
    found: list[tuple[int, ...]] = []

    def reaches(src: int, dst: int) -> bool:
        seen = 0
        stack = [src]
        while stack:
            v = stack.pop()
            if v == dst:
                return True
            if seen >> v & 1:
                continue
            seen |= 1 << v
            m = out[v]
            while m:
                low = m & -m
                stack.append(low.bit_length() - 1)
                m ^= low
        return False

    def walk(k: int) -> None:
        if k == len(slots):
            found.append(tuple(pmask))
            return
        walk(k + 1)
        i, j = slots[k]
        if not reaches(j, i):
            out[i] |= 1 << j
            pmask[j] |= 1 << i
            walk(k + 1)
            out[i] ^= 1 << j
            pmask[j] ^= 1 << i

    walk(0)
    masks = np.array(found, dtype=np.int64).reshape(len(found), n)
    masks.setflags(write=False)
    return masks


def dag_parent_masks(n: int, limit: int = DEFAULT_DAG_LIMIT) -> np.ndarray:
    if n > limit:
        raise CapacityError(f"DAG enumeration over {n} variables exceeds the limit of {limit}")
    return _parent_masks(n)


@lru_cache(maxsize=16)
def _structures(schema: Schema) -> tuple[Structure, ...]:
    n = schema.n
    return tuple(
        Structure(schema, tuple(tuple(p for p in range(n) if m >> p & 1) for m in row))
        for row in _parent_masks(n).tolist()
    )


def enumerate_dags(schema: Schema, limit: int = DEFAULT_DAG_LIMIT) -> tuple[Structure, ...]:
    """Every labeled DAG over ``schema`` exactly once, in canonical order."""
    if schema.n > limit:
        raise CapacityError(
            f"DAG enumeration over {schema.n} variables exceeds the limit of {limit}"
        )
    return _structures(schema)
