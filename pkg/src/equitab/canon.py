"""Canonical labeling of vertex-colored graphs and the CTCF1 fingerprint.

The search is the usual individualization-refinement tree: refine the color
partition to an equitable one, individualize each vertex of a target cell in
turn, recurse, and keep the least serialization among the discrete leaves.
Leaves with identical serializations reveal automorphisms, which are used to
skip equivalent branches.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .encode import ColoredGraph, ValueColorMap, build_graph
from .tables import CharacterTable, group_order

FORMAT_TAG = "CTCF1"


class Partition:
    """Ordered partition stored nauty-style.

    ``lab`` lists vertices by position; a cell is identified by the position it
    starts at, which is invariant under relabeling of the input graph.
    """

    __slots__ = ("lab", "pos", "start", "end")

    def __init__(self, lab: list[int], start: list[int], end: dict[int, int]):
        self.lab = lab
        self.pos = [0] * len(lab)
        for i, v in enumerate(lab):
            self.pos[v] = i
        self.start = start
        self.end = end

    @classmethod
    def from_cells(cls, cells: Sequence[Sequence[int]]) -> "Partition":
        lab: list[int] = []
        start: list[int] = []
        end: dict[int, int] = {}
        for cell in cells:
            if not cell:
                raise ValueError("cells must be nonempty")
            s = len(lab)
            lab.extend(cell)
            start.extend([s] * len(cell))
            end[s] = len(lab)
        if sorted(lab) != list(range(len(lab))):
            raise ValueError("cells must partition the vertex set")
        return cls(lab, start, end)

    def copy(self) -> "Partition":
        p = Partition.__new__(Partition)
        p.lab = self.lab[:]
        p.pos = self.pos[:]
        p.start = self.start[:]
        p.end = dict(self.end)
        return p

    def cells(self) -> list[list[int]]:
        return [self.lab[s:self.end[s]] for s in sorted(self.end)]

    def is_discrete(self) -> bool:
        return len(self.end) == len(self.lab)

    def __repr__(self) -> str:
        return "Partition(" + " | ".join(" ".join(map(str, c)) for c in self.cells()) + ")"


def color_partition(g: ColoredGraph) -> Partition:
    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(g.colors):
        by_color.setdefault(c, []).append(v)
    return Partition.from_cells([by_color[c] for c in sorted(by_color)])


def _refine(adj: list[list[int]], P: Partition, splitters: Sequence[int]) -> None:
    """In-place equitable refinement, seeded with the given cell starts."""
    lab, pos, start, end = P.lab, P.pos, P.start, P.end
    queue = deque(splitters)
    queued = set(splitters)
    while queue:
        s = queue.popleft()
        queued.discard(s)
        cnt: dict[int, int] = {}
        for i in range(s, end[s]):
            for u in adj[lab[i]]:
                cnt[u] = cnt.get(u, 0) + 1
        for c in sorted({start[pos[u]] for u in cnt}):
            ce = end[c]
            if ce - c == 1:
                continue
            groups: dict[int, list[int]] = {}
            for v in lab[c:ce]:
                groups.setdefault(cnt.get(v, 0), []).append(v)
            if len(groups) == 1:
                continue
            pieces = []
            i = c
            for k in sorted(groups):
                ps = i
                for v in groups[k]:
                    lab[i] = v
                    pos[v] = i
                    start[i] = ps
                    i += 1
                end[ps] = i
                pieces.append((ps, i - ps))
            if c in queued:
                new = [ps for ps, _ in pieces if ps != c]
            else:
                biggest = max(pieces, key=lambda x: x[1])[0]
                new = [ps for ps, _ in pieces if ps != biggest]
            for ps in new:
                if ps not in queued:
                    queued.add(ps)
                    queue.append(ps)


def refine(g: ColoredGraph, p: Partition, adj: Optional[list[list[int]]] = None) -> Partition:
    """Coarsest equitable refinement of ``p`` (a new partition; ``p`` is untouched)."""
    q = p.copy()
    _refine(adj if adj is not None else g.adjacency(), q, sorted(q.end))
    return q


def _individualize(adj: list[list[int]], P: Partition, v: int) -> Partition:
    Q = P.copy()
    s = Q.start[Q.pos[v]]
    e = Q.end[s]
    u = Q.lab[s]
    i = Q.pos[v]
    Q.lab[s], Q.lab[i] = v, u
    Q.pos[v], Q.pos[u] = s, i
    Q.end[s] = s + 1
    Q.end[s + 1] = e
    for j in range(s + 1, e):
        Q.start[j] = s + 1
    _refine(adj, Q, [s])
    return Q


def _target_cell(P: Partition) -> list[int]:
    best = None
    for s in sorted(P.end):
        size = P.end[s] - s
        if size > 1 and (best is None or size < best[1]):
            best = (s, size)
    s = best[0]
    return sorted(P.lab[s:P.end[s]])


def _edge_line(g: ColoredGraph, pos: list[int]) -> str:
    pairs = sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in g.edges)
    return "E=" + ",".join(f"{a}-{b}" for a, b in pairs)


class _Orbits:
    def __init__(self, n: int, gens: list[list[int]]):
        self.parent = list(range(n))
        for gamma in gens:
            for v, w in enumerate(gamma):
                self.union(v, w)

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class _Frame:
    part: Partition
    path: tuple[int, ...]
    children: list[int]
    next: int = 0
    explored: Optional[list[int]] = None
    orbits: Optional[_Orbits] = None
    orbits_at: int = -1


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    automorphisms: int = 0


def canonical_labeling(g: ColoredGraph, stats: Optional[SearchStats] = None) -> tuple[str, list[int]]:
    """Least edge line over all leaves, with the position of every vertex at that leaf."""
    stats = stats if stats is not None else SearchStats()
    adj = g.adjacency()
    root = refine(g, color_partition(g), adj)
    stats.nodes += 1
    if root.is_discrete():
        stats.leaves += 1
        return _edge_line(g, root.pos), root.pos[:]

    autos: list[list[int]] = []
    seen: dict[bytes, tuple[list[int], tuple[int, ...]]] = {}
    best: Optional[tuple[str, list[int]]] = None
    stack = [_Frame(root, (), _target_cell(root), explored=[])]

    while stack:
        top = stack[-1]
        if top.next >= len(top.children):
            stack.pop()
            continue
        w = top.children[top.next]
        top.next += 1
        if top.explored:
            if top.orbits_at != len(autos):
                gens = [a for a in autos if all(a[v] == v for v in top.path)]
                top.orbits = _Orbits(g.n_vertices, gens)
                top.orbits_at = len(autos)
            rw = top.orbits.find(w)
            if any(top.orbits.find(x) == rw for x in top.explored):
                continue
        top.explored.append(w)
        child = _individualize(adj, top.part, w)
        path = top.path + (w,)
        stats.nodes += 1
        if not child.is_discrete():
            stack.append(_Frame(child, path, _target_cell(child), explored=[]))
            continue

        stats.leaves += 1
        line = _edge_line(g, child.pos)
        key = hashlib.blake2b(line.encode(), digest_size=16).digest()
        prev = seen.get(key)
        if prev is not None:
            other_lab, other_path = prev
            gamma = [0] * g.n_vertices
            for i, v in enumerate(other_lab):
                gamma[v] = child.lab[i]
            if _is_automorphism(g, gamma):
                autos.append(gamma)
                stats.automorphisms += 1
                level = 0
                while level < len(path) and level < len(other_path) and path[level] == other_path[level]:
                    level += 1
                # everything below the divergence point mirrors an explored subtree
                del stack[level + 1:]
                continue
        else:
            seen[key] = (child.lab[:], path)
        if best is None or line < best[0]:
            best = (line, child.pos[:])
    assert best is not None
    return best


def _is_automorphism(g: ColoredGraph, gamma: list[int]) -> bool:
    if any(g.colors[v] != g.colors[gamma[v]] for v in range(g.n_vertices)):
        return False
    edges = g.edges
    return all((min(gamma[a], gamma[b]), max(gamma[a], gamma[b])) in edges for a, b in edges)


def _header(g: ColoredGraph, values: Optional[ValueColorMap]) -> str:
    sizes: dict[int, int] = {}
    for c in g.colors:
        sizes[c] = sizes.get(c, 0) + 1
    colors = ",".join(str(sizes[c]) for c in sorted(sizes))
    vals = "|".join(values.serialized()) if values is not None else ""
    return f"{FORMAT_TAG}\nV={g.n_vertices};colors={colors}\nvalues={vals}\n"


def canonical_form(g: ColoredGraph, values: Optional[ValueColorMap] = None,
                   stats: Optional[SearchStats] = None) -> bytes:
    """CTCF1 bytes: header, value list and the canonically relabeled edge list."""
    line, _ = canonical_labeling(g, stats)
    return (_header(g, values) + line + "\n").encode("utf-8")


def digest(form: bytes) -> str:
    return hashlib.md5(form).hexdigest()


@dataclass(frozen=True)
class HashRecord:
    id: str
    order: int
    n_classes: int
    digest: str

    @property
    def key(self) -> tuple[int, int, str]:
        return (self.order, self.n_classes, self.digest)

    def to_line(self) -> str:
        return f"{self.id}\t{self.order}\t{self.n_classes}\t{self.digest}\n"


def table_canonical_form(t: CharacterTable) -> bytes:
    g, vmap = build_graph(t)
    return canonical_form(g, vmap)


def table_fingerprint(t: CharacterTable) -> HashRecord:
    return HashRecord(t.id, group_order(t), t.n, digest(table_canonical_form(t)))
