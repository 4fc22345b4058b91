"""Simple undirected graphs on dense vertex ids, plus generation, coloring and I/O.

Vertices are the integers ``0..n-1`` and edges are canonical tuples ``(u, v)``
with ``u < v``.  Every type here is immutable once built.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapExceededError, GraphError, ParseError

Edge = tuple[int, int]

MAX_PAIRING_ATTEMPTS = 10_000


def edge(u: int, v: int) -> Edge:
    """Canonical form of the edge ``{u, v}``."""
    if u == v:
        raise GraphError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range or not canonical for n={self.n}")
            if (u, v) in seen:
                raise GraphError(f"parallel edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise GraphError("edges must be sorted; use Graph.from_edges")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from unordered, unsorted pairs.  Duplicates are an error."""
        canon = [edge(int(u), int(v)) for u, v in edges]
        if len(set(canon)) != len(canon):
            dup = next(e for e in canon if canon.count(e) > 1)
            raise GraphError(f"parallel edge {dup}")
        return cls(n, tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and edge(u, v) in self.edge_set

    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges) + [edge(u, v)])

    def relabel(self, mapping: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``mapping[v]``."""
        if sorted(mapping) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of the vertices")
        return Graph.from_edges(self.n, [(mapping[u], mapping[v]) for u, v in self.edges])

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph relabeled to ``0..k-1`` in increasing id order.

        Returns the subgraph and the tuple mapping local ids back to global ids.
        """
        verts = tuple(sorted(set(vertices)))
        local = {v: i for i, v in enumerate(verts)}
        sub = [(local[u], local[v]) for u, v in self.edges if u in local and v in local]
        return Graph(len(verts), tuple(sorted(sub))), verts

    def distances_from(self, source: int, cutoff: int | None = None) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            if cutoff is not None and dist[x] >= cutoff:
                continue
            for y in self.adjacency[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.distances_from(0)) == self.n


# -- common graphs ---------------------------------------------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def perfect_matching(n: int) -> Graph:
    return Graph.from_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


# -- partitions and colorings ----------------------------------------------

@dataclass(frozen=True)
class Partition:
    part_of: tuple[int, ...]
    r: int

    def __post_init__(self):
        if self.r < 0 or (self.part_of and self.r < 1):
            raise GraphError("partition needs at least one part")
        for p in self.part_of:
            if not 0 <= p < self.r:
                raise GraphError(f"part index {p} outside 0..{self.r - 1}")

    @property
    def n(self) -> int:
        return len(self.part_of)

    def parts(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.r)]
        for v, p in enumerate(self.part_of):
            out[p].append(v)
        return out


@dataclass(frozen=True)
class EdgeColoring:
    color_of: dict[Edge, int] = field(hash=False)
    k: int

    def classes(self) -> list[list[Edge]]:
        out: list[list[Edge]] = [[] for _ in range(self.k)]
        for e in sorted(self.color_of):
            out[self.color_of[e]].append(e)
        return out

    def is_proper(self) -> bool:
        seen = set()
        for (u, v), c in self.color_of.items():
            if not 0 <= c < self.k or (u, c) in seen or (v, c) in seen:
                return False
            seen.add((u, c))
            seen.add((v, c))
        return True


# -- random regular graphs -------------------------------------------------

def random_regular(n: int, d: int, seed, *, method: str = "auto",
                   max_attempts: int = MAX_PAIRING_ATTEMPTS) -> Graph:
    """Random simple ``d``-regular graph on ``n`` vertices.

    ``method="pairing"`` is the configuration model: pair all half-edges
    uniformly and reject the whole pairing if it has a loop or a repeated
    edge.  That is exactly uniform over simple graphs but its acceptance rate
    decays like ``exp(-(d*d-1)/4)``, so ``"auto"`` switches to incremental
    pairing (Steger-Wormald, asymptotically uniform) for ``d > 5``.
    """
    if (n * d) % 2:
        raise GraphError(f"n*d must be even (n={n}, d={d})")
    if d < 0 or (d >= n and not (n == 0 and d == 0)):
        raise GraphError(f"no simple {d}-regular graph on {n} vertices (need d < n)")
    if method == "auto":
        method = "pairing" if d <= 5 else "incremental"
    if method not in ("pairing", "incremental"):
        raise ValueError(f"unknown method {method!r}")
    rng = random.Random(seed)
    attempt = _try_pairing if method == "pairing" else _try_incremental
    for _ in range(max_attempts):
        edges = attempt(n, d, rng)
        if edges is not None:
            return Graph(n, tuple(sorted(edges)))
    raise CapExceededError(f"no simple {d}-regular graph on {n} vertices after {max_attempts} attempts")


def _try_pairing(n, d, rng):
    stubs = [v for v in range(n) for _ in range(d)]
    rng.shuffle(stubs)
    edges = set()
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v:
            return None
        e = (u, v) if u < v else (v, u)
        if e in edges:
            return None
        edges.add(e)
    return edges


def _try_incremental(n, d, rng):
    edges = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        rng.shuffle(stubs)
        leftover = []
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            e = (u, v) if u < v else (v, u)
            if u != v and e not in edges:
                edges.add(e)
            else:
                leftover += [u, v]
        if len(leftover) == len(stubs):
            # stuck unless some remaining pair is still addable
            rest = sorted(set(leftover))
            if not any((a, b) not in edges for i, a in enumerate(rest) for b in rest[i + 1:]):
                return None
        stubs = leftover
    return edges


# -- colorings -------------------------------------------------------------

def edge_coloring(G: Graph) -> EdgeColoring:
    """Proper edge coloring with at most ``max_degree + 1`` colors (Misra-Gries)."""
    palette = G.max_degree + 1
    color: dict[Edge, int] = {}
    at: list[dict[int, int]] = [dict() for _ in range(G.n)]  # vertex -> {color: neighbor}

    def free(x):
        for c in range(palette):
            if c not in at[x]:
                return c
        raise AssertionError("no free color; palette too small")

    def set_color(a, b, c):
        color[edge(a, b)] = c
        at[a][c] = b
        at[b][c] = a

    def clear(a, b):
        c = color.pop(edge(a, b))
        del at[a][c]
        del at[b][c]
        return c

    def is_free(x, c):
        return c not in at[x]

    for u, v in G.edges:
        # maximal fan at u starting with v
        fan = [v]
        in_fan = {v}
        grown = True
        while grown:
            grown = False
            last = fan[-1]
            for w in G.adjacency[u]:
                if w in in_fan:
                    continue
                cw = color.get(edge(u, w))
                if cw is not None and is_free(last, cw):
                    fan.append(w)
                    in_fan.add(w)
                    grown = True
                    break
        c = free(u)
        d = free(fan[-1])

        # invert the cd-path starting at u (its first edge is colored d)
        if c != d:
            path = []
            x, col = u, d
            while col in at[x]:
                y = at[x][col]
                path.append((x, y))
                x, col = y, (c if col == d else d)
            old = [clear(a, b) for a, b in path]
            for (a, b), oc in zip(path, old):
                set_color(a, b, c if oc == d else d)

        # shortest fan prefix ending at a vertex where d is free
        w_idx = None
        for i, w in enumerate(fan):
            if i > 0:
                prev_color = color.get(edge(u, w))
                if prev_color is None or not is_free(fan[i - 1], prev_color):
                    break
            if is_free(w, d):
                w_idx = i
                break
        assert w_idx is not None, "Misra-Gries invariant violated"

        # rotate the prefix fan and color (u, fan[w_idx]) with d
        for i in range(w_idx):
            ci = clear(u, fan[i + 1])
            set_color(u, fan[i], ci)
        set_color(u, fan[w_idx], d)

    k = max(color.values(), default=-1) + 1
    return EdgeColoring(color, k)


def distance_two_coloring(G: Graph) -> Partition:
    """Greedy coloring where vertices at distance 1 or 2 get different colors.

    Vertices are scanned in id order and take the smallest feasible color,
    so at most ``max_degree**2 + 1`` colors are used.
    """
    colors = [-1] * G.n
    for v in range(G.n):
        taken = set()
        for w in G.adjacency[v]:
            taken.add(colors[w])
            for x in G.adjacency[w]:
                taken.add(colors[x])
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    return Partition(tuple(colors), max(colors, default=-1) + 1 if G.n else 0)


def line_graph(G: Graph) -> Graph:
    """Vertex ``i`` of the result is ``G.edges[i]``; adjacency means a shared endpoint."""
    incident: list[list[int]] = [[] for _ in range(G.n)]
    for i, (u, v) in enumerate(G.edges):
        incident[u].append(i)
        incident[v].append(i)
    pairs = set()
    for inc in incident:
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                pairs.add((inc[a], inc[b]))
    return Graph(G.m, tuple(sorted(pairs)))


# -- edge-list I/O ---------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: a line ``n`` then one ``u v`` line per edge.

    Blank lines and lines starting with ``#`` are ignored.
    """
    n = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise ParseError("expected vertex count", lineno)
            try:
                n = int(fields[0])
            except ValueError:
                raise ParseError(f"bad vertex count {fields[0]!r}", lineno) from None
            if n < 0:
                raise ParseError("negative vertex count", lineno)
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno) from None
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1} in {line!r}", lineno)
        e = edge(u, v)
        if e in seen:
            raise ParseError(f"parallel edge {e}", lineno)
        seen.add(e)
        edges.append(e)
    if n is None:
        raise ParseError("missing vertex count", None)
    return Graph(n, tuple(sorted(edges)))


def format_graph(G: Graph) -> str:
    return "".join([f"{G.n}\n"] + [f"{u} {v}\n" for u, v in G.edges])


def read_graph(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())


def write_graph(G: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(G))
