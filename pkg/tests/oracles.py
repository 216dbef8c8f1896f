"""Brute-force oracles used only by the tests.

These deliberately take the dumbest correct path: explicit cell sets,
dense pair scans, flood fill.  They must stay independent of the streaming
implementations they check.
"""

from __future__ import annotations

from fractions import Fraction

from carpetgaps.acceptance import (  # noqa: F401  (re-exported for tests)
    oracle_cells,
    oracle_flood_components,
    oracle_h_bracket,
    oracle_threshold_classes,
)
from carpetgaps.carpet import DigitSet


def chebyshev_component_distance(comp_a, comp_b, n_pow: int,
                                 m_pow: int) -> Fraction:
    """Min over all cell pairs of max((dX-1)+/n^k, (dY-1)+/m^k)."""
    best = None
    for xa, ya in comp_a:
        for xb, yb in comp_b:
            dx = abs(xa - xb)
            dy = abs(ya - yb)
            val = max((dx - 1) * m_pow if dx > 1 else 0,
                      (dy - 1) * n_pow if dy > 1 else 0)
            if best is None or val < best:
                best = val
    return Fraction(best, n_pow * m_pow)


def brute_gap_sequence(ds: DigitSet, k: int) -> list[tuple[Fraction, int]]:
    """Gap sequence via flood fill + dense Prim MST, exact rationals."""
    comps = oracle_flood_components(oracle_cells(ds, k))
    n_pow = ds.n ** k
    m_pow = ds.m ** k
    count = len(comps)
    if count <= 1:
        return []
    in_tree = [False] * count
    in_tree[0] = True
    dist = [chebyshev_component_distance(comps[0], comps[j], n_pow, m_pow)
            for j in range(count)]
    weights = []
    for _ in range(count - 1):
        best_j = None
        for j in range(count):
            if not in_tree[j] and (best_j is None or dist[j] < dist[best_j]):
                best_j = j
        weights.append(dist[best_j])
        in_tree[best_j] = True
        for j in range(count):
            if not in_tree[j]:
                d = chebyshev_component_distance(comps[best_j], comps[j],
                                                 n_pow, m_pow)
                if d < dist[j]:
                    dist[j] = d
    entries: list[tuple[Fraction, int]] = []
    for w in sorted(weights, reverse=True):
        if entries and entries[-1][0] == w:
            entries[-1] = (w, entries[-1][1] + 1)
        else:
            entries.append((w, 1))
    return entries


def single_linkage_class_count(ds: DigitSet, k: int,
                               delta: Fraction) -> int:
    """h of the level-k grid at threshold delta: merge components whose
    exact set distance is <= delta (non-strict), count classes."""
    comps = oracle_flood_components(oracle_cells(ds, k))
    n_pow = ds.n ** k
    m_pow = ds.m ** k
    parent = list(range(len(comps)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    count = len(comps)
    for a in range(len(comps)):
        for b in range(a + 1, len(comps)):
            if chebyshev_component_distance(comps[a], comps[b], n_pow,
                                            m_pow) <= delta:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
                    count -= 1
    return count
