"""Colored-graph encoding of a character table.

Vertices: one per row, one per column, one per entry and one per distinct
value.  Each entry vertex is joined to its row, its column and its value, so
row/column permutations of the table give isomorphic graphs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Optional

from .cyclo import Cyclotomic, cmp_total, serialize
from .tables import CharacterTable

ROW, COL, ENTRY = 0, 1, 2
VALUE_BASE = 3


@dataclass(frozen=True)
class ColoredGraph:
    n_vertices: int
    colors: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if len(self.colors) != self.n_vertices:
            raise ValueError("one color per vertex required")
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            if not (0 <= a < b < self.n_vertices):
                raise ValueError(f"edge ({a}, {b}) must be ordered and in range")

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for a, b in sorted(self.edges):
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def relabeled(self, perm: list[int]) -> "ColoredGraph":
        """Graph with vertex v renamed perm[v]."""
        colors = [0] * self.n_vertices
        for v, c in enumerate(self.colors):
            colors[perm[v]] = c
        edges = frozenset(tuple(sorted((perm[a], perm[b]))) for a, b in self.edges)
        return ColoredGraph(self.n_vertices, tuple(colors), edges)

    def to_dimacs(self) -> str:
        """``p V E`` header, ``n v color`` and ``e a b`` lines, vertices 1-based."""
        lines = [f"p {self.n_vertices} {len(self.edges)}"]
        lines += [f"n {v + 1} {c}" for v, c in enumerate(self.colors)]
        lines += [f"e {a + 1} {b + 1}" for a, b in sorted(self.edges)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ValueColorMap:
    values: tuple[Cyclotomic, ...]

    def color_of(self, x: Cyclotomic) -> int:
        return VALUE_BASE + self.values.index(x)

    def serialized(self) -> list[str]:
        return [serialize(v) for v in self.values]


def value_map(t: CharacterTable) -> ValueColorMap:
    distinct = set(x for row in t.entries for x in row)
    return ValueColorMap(tuple(sorted(distinct, key=cmp_to_key(cmp_total))))


def build_graph(t: CharacterTable, vmap: Optional[ValueColorMap] = None) -> tuple[ColoredGraph, ValueColorMap]:
    n = t.n
    vmap = vmap or value_map(t)
    rank = {v: r for r, v in enumerate(vmap.values)}
    k = len(vmap.values)
    entry0 = 2 * n
    value0 = entry0 + n * n
    colors = [ROW] * n + [COL] * n + [ENTRY] * (n * n) + [VALUE_BASE + r for r in range(k)]
    edges = set()
    for i in range(n):
        for j in range(n):
            e = entry0 + i * n + j
            edges.add((i, e))
            edges.add((n + j, e))
            edges.add((e, value0 + rank[t.entries[i][j]]))
    return ColoredGraph(value0 + k, tuple(colors), frozenset(edges)), vmap


def decode_graph(g: ColoredGraph, vmap: ValueColorMap) -> list[list[Cyclotomic]]:
    """Recover the table (up to row/column order) from an encoded graph."""
    adj = g.adjacency()
    rows = sorted(v for v in range(g.n_vertices) if g.colors[v] == ROW)
    cols = sorted(v for v in range(g.n_vertices) if g.colors[v] == COL)
    ri = {v: i for i, v in enumerate(rows)}
    ci = {v: j for j, v in enumerate(cols)}
    out: list[list[Optional[Cyclotomic]]] = [[None] * len(cols) for _ in rows]
    for v in range(g.n_vertices):
        if g.colors[v] != ENTRY:
            continue
        r = c = val = None
        for u in adj[v]:
            cu = g.colors[u]
            if cu == ROW:
                r = ri[u]
            elif cu == COL:
                c = ci[u]
            else:
                val = vmap.values[cu - VALUE_BASE]
        out[r][c] = val
    return out  # type: ignore[return-value]
