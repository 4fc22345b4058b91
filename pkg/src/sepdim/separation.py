"""Permutations, pairwise suitable families and separating embeddings.

A permutation *separates* two vertex-disjoint edges when both endpoints of
one edge come before both endpoints of the other.  A family is pairwise
suitable for a graph when every disjoint edge pair is separated by some
member.  Disjoint pairs are enumerated once per graph in lexicographic order
of ``(edge index, edge index)`` and coverage sets are bitsets over that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, GraphError, SepdimError
from .graph import Edge, Graph

SWEEP_MIN_EDGES = 512


@dataclass(frozen=True)
class Permutation:
    """A total order of ``0..n-1``; ``order[i]`` is the vertex at position ``i``."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order is not a permutation of 0..n-1")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def rank(self) -> tuple[int, ...]:
        rank = [0] * len(self.order)
        for i, v in enumerate(self.order):
            rank[v] = i
        return tuple(rank)

    def reversed(self) -> "Permutation":
        return Permutation(self.order[::-1])


@dataclass(frozen=True)
class PermutationFamily:
    n: int
    members: tuple[Permutation, ...] = ()

    def __post_init__(self):
        members = tuple(m if isinstance(m, Permutation) else Permutation(m) for m in self.members)
        object.__setattr__(self, "members", members)
        for m in members:
            if m.n != self.n:
                raise DimensionMismatchError(f"member over {m.n} vertices in a family over {self.n}")

    @classmethod
    def from_orders(cls, n: int, orders: Iterable[Sequence[int]]) -> "PermutationFamily":
        return cls(n, tuple(Permutation(tuple(o)) for o in orders))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def orders(self) -> list[list[int]]:
        return [list(m.order) for m in self.members]

    def rank_matrix(self) -> np.ndarray:
        """``k x n`` array; row ``i`` holds the ranks under member ``i``."""
        out = np.empty((len(self.members), self.n), dtype=np.int64)
        for i, m in enumerate(self.members):
            out[i, list(m.order)] = np.arange(self.n)
        return out


@dataclass(frozen=True)
class Verdict:
    suitable: bool
    witness: tuple[Edge, Edge] | None = None

    def __bool__(self) -> bool:
        return self.suitable

    def __str__(self) -> str:
        if self.suitable:
            return "SUITABLE"
        (u, v), (x, y) = self.witness
        return f"NOT-SUITABLE e=({u},{v}) f=({x},{y})"


# -- disjoint pair universe ------------------------------------------------

@dataclass(frozen=True)
class PairUniverse:
    """All vertex-disjoint edge pairs ``(i, j)``, ``i < j``, in lexicographic order."""

    edges: tuple[Edge, ...]
    first: np.ndarray
    second: np.ndarray

    def __len__(self) -> int:
        return len(self.first)

    def pair(self, p: int) -> tuple[Edge, Edge]:
        return self.edges[self.first[p]], self.edges[self.second[p]]

    @cached_property
    def index(self) -> np.ndarray:
        """``m x m`` matrix of pair indices, ``-1`` where edges touch."""
        m = len(self.edges)
        idx = np.full((m, m), -1, dtype=np.int64)
        pos = np.arange(len(self.first))
        idx[self.first, self.second] = pos
        idx[self.second, self.first] = pos
        return idx


@lru_cache(maxsize=128)
def disjoint_pairs(G: Graph) -> PairUniverse:
    m = G.m
    if m < 2:
        empty = np.zeros(0, dtype=np.int64)
        return PairUniverse(G.edges, empty, empty)
    ends = np.array(G.edges, dtype=np.int64)
    u, v = ends[:, 0], ends[:, 1]
    touch = ((u[:, None] == u[None, :]) | (u[:, None] == v[None, :])
             | (v[:, None] == u[None, :]) | (v[:, None] == v[None, :]))
    first, second = np.nonzero(np.triu(~touch, 1))
    return PairUniverse(G.edges, first.astype(np.int64), second.astype(np.int64))


def edge_intervals(ranks: np.ndarray, edges: Sequence[Edge]) -> tuple[np.ndarray, np.ndarray]:
    """Rank interval ``[lo, hi]`` of every edge; ``ranks`` may be 1-D or ``k x n``."""
    if not len(edges):
        shape = ranks.shape[:-1] + (0,)
        return np.zeros(shape, dtype=ranks.dtype), np.zeros(shape, dtype=ranks.dtype)
    ends = np.asarray(edges)
    a, b = ranks[..., ends[:, 0]], ranks[..., ends[:, 1]]
    return np.minimum(a, b), np.maximum(a, b)


def _separated(lo, hi, first, second):
    return (hi[..., first] < lo[..., second]) | (hi[..., second] < lo[..., first])


# -- coverage --------------------------------------------------------------

@dataclass(frozen=True)
class CoverageSet:
    """Bitset over the disjoint pairs of a graph; bit ``p`` is pair ``p``."""

    bits: int
    universe: int

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, p: int) -> bool:
        return bool(self.bits >> p & 1)

    def indices(self) -> list[int]:
        out, b, p = [], self.bits, 0
        while b:
            if b & 1:
                out.append(p)
            b >>= 1
            p += 1
        return out

    def __or__(self, other: "CoverageSet") -> "CoverageSet":
        return CoverageSet(self.bits | other.bits, self.universe)

    @property
    def complete(self) -> bool:
        return self.bits == (1 << self.universe) - 1


def bool_to_int(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.astype(bool), bitorder="little").tobytes(), "little")


def separates(sigma: Permutation, e: Edge, f: Edge) -> bool:
    if set(e) & set(f):
        raise GraphError(f"edges {e} and {f} share a vertex; separation needs disjoint edges")
    r = sigma.rank
    e_lo, e_hi = sorted((r[e[0]], r[e[1]]))
    f_lo, f_hi = sorted((r[f[0]], r[f[1]]))
    return e_hi < f_lo or f_hi < e_lo


def coverage(sigma: Permutation, G: Graph, method: str = "auto") -> CoverageSet:
    """Set of disjoint edge pairs of ``G`` separated by ``sigma``.

    ``"scan"`` tests every disjoint pair; ``"sweep"`` sorts edge intervals by
    right end and, for each edge, takes the prefix of intervals ending before
    it starts.  ``"auto"`` sweeps once the graph has more than 512 edges.
    """
    if sigma.n != G.n:
        raise DimensionMismatchError(f"permutation over {sigma.n} vertices, graph over {G.n}")
    universe = disjoint_pairs(G)
    if method == "auto":
        method = "sweep" if G.m > SWEEP_MIN_EDGES else "scan"
    ranks = np.asarray(sigma.rank, dtype=np.int64)
    lo, hi = edge_intervals(ranks, G.edges)
    if method == "scan":
        mask = _separated(lo, hi, universe.first, universe.second)
        return CoverageSet(bool_to_int(mask), len(universe))
    if method != "sweep":
        raise ValueError(f"unknown coverage method {method!r}")
    if not len(universe):
        return CoverageSet(0, 0)
    by_hi = np.argsort(hi, kind="stable")
    counts = np.searchsorted(hi[by_hi], lo, side="left")  # intervals ending strictly before lo[f]
    later = np.repeat(np.arange(G.m), counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    offsets = np.arange(counts.sum()) - np.repeat(starts, counts)
    earlier = by_hi[offsets]
    mask = np.zeros(len(universe), dtype=bool)
    mask[universe.index[earlier, later]] = True
    return CoverageSet(bool_to_int(mask), len(universe))


def is_pairwise_suitable(F: PermutationFamily, G: Graph, chunk: int = 32) -> Verdict:
    """SUITABLE, or NOT-SUITABLE with the first unseparated pair as witness."""
    if F.n != G.n:
        raise DimensionMismatchError(f"family over {F.n} vertices, graph over {G.n}")
    universe = disjoint_pairs(G)
    if not len(universe):
        return Verdict(True)
    ranks = F.rank_matrix()
    open_pairs = np.arange(len(universe))
    for start in range(0, len(F), chunk):
        lo, hi = edge_intervals(ranks[start:start + chunk], G.edges)
        hit = _separated(lo, hi, universe.first[open_pairs], universe.second[open_pairs]).any(axis=0)
        open_pairs = open_pairs[~hit]
        if not len(open_pairs):
            return Verdict(True)
    return Verdict(False, universe.pair(int(open_pairs[0])))


# -- embeddings ------------------------------------------------------------

@dataclass(frozen=True)
class SeparatingEmbedding:
    """Vertex ``v`` sits at the point ``coords[v]`` in ``k``-space."""

    k: int
    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for c in self.coords:
            if len(c) != self.k:
                raise ValueError(f"coordinate vector of length {len(c)} in a {self.k}-dimensional embedding")

    @property
    def n(self) -> int:
        return len(self.coords)

    def axis(self, i: int) -> np.ndarray:
        return np.array([c[i] for c in self.coords])

    def is_tie_free(self) -> bool:
        return all(len(set(self.axis(i).tolist())) == self.n for i in range(self.k))


def family_to_embedding(F: PermutationFamily) -> SeparatingEmbedding:
    if not len(F):
        raise SepdimError("cannot embed an empty family")
    ranks = F.rank_matrix()
    return SeparatingEmbedding(len(F), tuple(tuple(int(x) for x in ranks[:, v]) for v in range(F.n)))


def embedding_to_family(E: SeparatingEmbedding) -> PermutationFamily:
    """One permutation per axis; equal coordinates are ordered by vertex id."""
    members = []
    for i in range(E.k):
        members.append(Permutation(tuple(sorted(range(E.n), key=lambda v: (E.coords[v][i], v)))))
    return PermutationFamily(E.n, tuple(members))


def verify_embedding(E: SeparatingEmbedding, G: Graph) -> Verdict:
    """Every disjoint edge pair must have strictly disjoint intervals on some axis."""
    if E.n != G.n:
        raise DimensionMismatchError(f"embedding of {E.n} vertices, graph over {G.n}")
    universe = disjoint_pairs(G)
    if not len(universe):
        return Verdict(True)
    covered = np.zeros(len(universe), dtype=bool)
    for i in range(E.k):
        lo, hi = edge_intervals(E.axis(i), G.edges)
        covered |= _separated(lo, hi, universe.first, universe.second)
    if covered.all():
        return Verdict(True)
    return Verdict(False, universe.pair(int(np.argmin(covered))))


def short_edges(G: Graph, sigma: Permutation, length: int) -> list[Edge]:
    """Edges whose endpoint ranks differ by at most ``length``."""
    r = sigma.rank
    return [(u, v) for u, v in G.edges if abs(r[u] - r[v]) <= length]


# -- family files ----------------------------------------------------------

def format_family(F: PermutationFamily) -> str:
    return json.dumps({"n": F.n, "permutations": F.orders()}) + "\n"


def parse_family(text: str) -> PermutationFamily:
    try:
        data = json.loads(text)
        return PermutationFamily.from_orders(int(data["n"]), data["permutations"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SepdimError(f"malformed family file: {exc}") from exc


def read_family(path) -> PermutationFamily:
    with open(path, encoding="ascii") as fh:
        return parse_family(fh.read())


def write_family(F: PermutationFamily, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_family(F))
