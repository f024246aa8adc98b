"""Independent brute-force oracles used by the tests.

Nothing here calls into the fast paths it checks: counting, products and
sums are done with plain Python loops.
"""
from __future__ import annotations

import itertools
import math


def brute_force_dag_count(n: int) -> int:
    """Count DAGs by filtering every off-diagonal adjacency matrix."""
    slots = [(i, j) for i in range(n) for j in range(n) if i != j]
    count = 0
    for bits in itertools.product((0, 1), repeat=len(slots)):
        adj = {i: [] for i in range(n)}
        for (i, j), b in zip(slots, bits):
            if b:
                adj[i].append(j)
        if _acyclic(adj, n):
            count += 1
    return count


def brute_force_dags(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Edge sets of all DAGs, in lexicographic order of the adjacency bits."""
    slots = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in itertools.product((0, 1), repeat=len(slots)):
        adj = {i: [] for i in range(n)}
        edges = []
        for (i, j), b in zip(slots, bits):
            if b:
                adj[i].append(j)
                edges.append((i, j))
        if _acyclic(adj, n):
            out.append(tuple(sorted(edges)))
    return out


def _acyclic(adj, n) -> bool:
    state = [0] * n

    def visit(v) -> bool:
        if state[v] == 1:
            return False
        if state[v] == 2:
            return True
        state[v] = 1
        for w in adj[v]:
            if not visit(w):
                return False
        state[v] = 2
        return True

    return all(visit(v) for v in range(n))


def direct_log_likelihood(rows, parents, cards) -> float:
    """Sum over rows of log2 P_{G,w}(u), with ML parameters counted by hand."""
    n_vars = len(cards)
    fam_count: dict = {}
    par_count: dict = {}
    for row in rows:
        for i in range(n_vars):
            pa = tuple(row[p] for p in parents[i])
            fam_count[(i, pa, row[i])] = fam_count.get((i, pa, row[i]), 0) + 1
            par_count[(i, pa)] = par_count.get((i, pa), 0) + 1
    total = 0.0
    for row in rows:
        for i in range(n_vars):
            pa = tuple(row[p] for p in parents[i])
            total += math.log2(fam_count[(i, pa, row[i])] / par_count[(i, pa)])
    return total


def kl_bits(p, q) -> float:
    total = 0.0
    for a, b in zip(p, q):
        if a > 0:
            if b == 0:
                return math.inf
            total += a * math.log2(a / b)
    return total


def entropy_bits(p) -> float:
    return -sum(x * math.log2(x) for x in p if x > 0)


def linear_scan_sample_size(card, m, eps, delta) -> int:
    n = 1
    while card * math.log2(n + 1) - n * eps * eps / (3 * math.log2(1 / m)) > math.log2(delta):
        n += 1
    return n
