"""Exact separation dimension of small graphs.

Every permutation is reduced to the set of disjoint edge pairs it separates.
A permutation and its reverse separate the same pairs, so only orders with
``order[0] < order[-1]`` are enumerated.  Identical sets are merged, sets
strictly contained in another are dropped, and the remaining pool is handed
to an iterative-deepening exact set cover.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import CapExceededError
from .graph import Graph
from .separation import (
    Permutation,
    PermutationFamily,
    _separated,
    disjoint_pairs,
    edge_intervals,
    is_pairwise_suitable,
    separates,
)

DEFAULT_CAP = 10
BRUTE_MAX_N = 7
BRUTE_MAX_K = 3
_CHUNK = 40_320


@dataclass
class SearchStats:
    permutations: int = 0
    distinct_sets: int = 0
    candidate_sets: int = 0
    nodes: int = 0


@dataclass(frozen=True)
class SolveResult:
    """``value`` is None when the search proved ``sdim > limit``."""

    value: int | None
    family: PermutationFamily | None
    limit: int | None
    stats: SearchStats = field(compare=False)

    @property
    def exceeded(self) -> bool:
        return self.value is None

    def to_text(self) -> str:
        lines = []
        if self.exceeded:
            lines.append(f"sdim > {self.limit}")
            lines.append("proof: exhausted search")
        else:
            lines.append(f"sdim = {self.value}")
        s = self.stats
        lines.append(f"permutations = {s.permutations}")
        lines.append(f"distinct_sets = {s.distinct_sets}")
        lines.append(f"candidate_sets = {s.candidate_sets}")
        lines.append(f"nodes = {s.nodes}")
        if self.family is not None:
            from .separation import format_family
            lines.append("family = " + format_family(self.family).strip())
        return "\n".join(lines) + "\n"


def _half_permutations(n):
    """Lexicographic permutations of ``0..n-1`` with first element < last element."""
    for p in itertools.permutations(range(n)):
        if n < 2 or p[0] < p[-1]:
            yield p


def coverage_pool(G: Graph, stats: SearchStats | None = None):
    """Distinct coverage bitsets over all permutations of ``G`` (up to reversal).

    Returns ``(sets, reps)``: parallel lists of bitset ints and the first
    permutation, in lexicographic order, realizing each set.
    """
    universe = disjoint_pairs(G)
    edges = G.edges
    seen: dict[bytes, int] = {}
    sets: list[int] = []
    reps: list[tuple[int, ...]] = []
    gen = _half_permutations(G.n)
    total = 0
    while True:
        block = list(itertools.islice(gen, _CHUNK))
        if not block:
            break
        total += len(block)
        orders = np.array(block, dtype=np.int64)
        ranks = np.argsort(orders, axis=1)
        lo, hi = edge_intervals(ranks, edges)
        sep = _separated(lo, hi, universe.first, universe.second)
        packed = np.packbits(sep, axis=1, bitorder="little")
        _, first_idx = np.unique(packed, axis=0, return_index=True)
        for i in sorted(first_idx):
            key = packed[i].tobytes()
            if key not in seen:
                seen[key] = len(sets)
                sets.append(int.from_bytes(key, "little"))
                reps.append(block[i])
    if stats is not None:
        stats.permutations = total
        stats.distinct_sets = len(sets)
    return sets, reps


def drop_dominated(sets: list[int], batch: int = 512) -> list[int]:
    """Indices of sets not strictly contained in another set (input sets are distinct).

    Sets are visited by decreasing size, so any strict superset of a set has
    already been seen.  ``S`` lies inside ``T`` iff ``|S & T| == |S|``; the
    intersection sizes of a batch against everything kept so far (and the
    earlier members of the batch) come from one float32 matrix product.
    """
    if not sets:
        return []
    universe = max(1, max(s.bit_length() for s in sets))
    nbytes = -(-universe // 8)
    order = sorted(range(len(sets)), key=lambda i: (-sets[i].bit_count(), i))
    raw = np.frombuffer(b"".join(sets[i].to_bytes(nbytes, "little") for i in order), dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(len(order), nbytes), axis=1, bitorder="little").astype(np.float32)
    sizes = bits.sum(axis=1)
    kept_rows: list[int] = []
    kept = np.zeros((0, bits.shape[1]), dtype=np.float32)
    for start in range(0, len(order), batch):
        block = bits[start:start + batch]
        size = sizes[start:start + batch, None]
        beaten = (block @ kept.T == size).any(axis=1)
        inner = (block @ block.T == size) & np.tri(len(block), k=-1, dtype=bool)
        beaten |= inner.any(axis=1)
        fresh = np.flatnonzero(~beaten)
        kept_rows.extend(start + fresh)
        kept = np.concatenate([kept, block[fresh]])
    return sorted(order[r] for r in kept_rows)


def _greedy_cover(sets, full):
    chosen, uncovered = [], full
    while uncovered:
        best = max(range(len(sets)), key=lambda i: ((sets[i] & uncovered).bit_count(), -i))
        if not sets[best] & uncovered:
            raise AssertionError("universe not coverable")
        chosen.append(best)
        uncovered &= ~sets[best]
    return chosen


def _to_words(bits: int, words: int) -> np.ndarray:
    return np.frombuffer(bits.to_bytes(8 * words, "little"), dtype="<u8").copy()


def _contained(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[i, j]`` is True when bitset row ``a[i]`` is a subset of ``b[j]``."""
    out = np.ones((len(a), len(b)), dtype=bool)
    for w in range(a.shape[1]):
        aw = a[:, w][:, None]
        out &= (aw & b[:, w][None, :]) == aw
    return out


class _Cover:
    """Depth-limited exact set cover.

    Sets live in a packed ``uint64`` matrix so each node scores every set
    against the uncovered elements in one vectorized pass.  A node at depth
    ``k`` is cut when the ``k`` largest scores cannot add up to the number of
    uncovered elements.  Branches follow the uncovered element with the fewest
    covering sets, skipping sets whose useful part is contained in another
    candidate's.
    """

    def __init__(self, sets, full, stats):
        self.sets = sets
        self.full = full
        self.stats = stats
        universe = full.bit_length()
        self.words = max(1, -(-universe // 64))
        self.matrix = np.stack([_to_words(s, self.words) for s in sets])
        bits = np.unpackbits(self.matrix.view(np.uint8), axis=1, bitorder="little")[:, :universe]
        counts = bits.sum(axis=0)
        self.element_order = sorted(range(universe), key=lambda e: (counts[e], e))
        self.coverers = [np.flatnonzero(bits[:, e]) for e in range(universe)]
        self.failed: dict[int, int] = {}

    def search(self, uncovered, depth, chosen):
        self.stats.nodes += 1
        if not uncovered:
            return list(chosen)
        if depth == 0 or self.failed.get(uncovered, -1) >= depth:
            return None
        need = uncovered.bit_count()
        u = _to_words(uncovered, self.words)
        useful = self.matrix & u
        score = np.bitwise_count(useful).sum(axis=1)
        if depth == 1:
            hit = np.flatnonzero(score == need)
            if len(hit):
                return list(chosen) + [int(hit[0])]
            self.failed[uncovered] = 1
            return None
        top = np.partition(score, len(score) - depth)[-depth:] if depth < len(score) else score
        if top.sum() < need:
            self.failed[uncovered] = depth
            return None
        target = next(e for e in self.element_order if uncovered >> e & 1)
        cand = self.coverers[target]
        cand = cand[np.lexsort((cand, -score[cand]))]
        rows = useful[cand]
        inside = _contained(rows, rows)
        # drop i if some other candidate j covers everything i does (ties: keep the earliest)
        earlier = np.tri(len(cand), k=-1, dtype=bool)
        beaten = (inside & (~inside.T | earlier)).any(axis=1)
        cand = cand[~beaten]
        if depth == 2:
            rest = u & ~self.matrix[cand]
            fits = _contained(rest, self.matrix)
            for i, row in zip(cand, fits):
                hit = np.flatnonzero(row)
                if len(hit):
                    return list(chosen) + [int(i), int(hit[0])]
            self.failed[uncovered] = 2
            return None
        for i in cand:
            chosen.append(int(i))
            found = self.search(uncovered & ~self.sets[i], depth - 1, chosen)
            chosen.pop()
            if found is not None:
                return found
        self.failed[uncovered] = depth
        return None


def sdim_exact(G: Graph, limit: int | None = None, cap: int = DEFAULT_CAP) -> SolveResult:
    """Exact separation dimension with an optimal witness family.

    With ``limit`` set, the search stops after proving that no family of size
    ``<= limit`` exists and returns ``value=None``.
    """
    if G.n > cap:
        raise CapExceededError(f"exact solver is capped at n={cap}, got n={G.n}")
    stats = SearchStats()
    universe = disjoint_pairs(G)
    if not len(universe):
        stats.permutations = factorial(G.n) // 2 if G.n >= 2 else 1
        return SolveResult(0, PermutationFamily(G.n), limit, stats)

    sets, reps = coverage_pool(G, stats)
    full = (1 << len(universe)) - 1
    if limit is not None and limit < 1:
        return SolveResult(None, None, limit, stats)
    if full in sets:
        return _result(G, [sets.index(full)], reps, limit, stats)
    if limit is not None and limit <= 1:
        return SolveResult(None, None, limit, stats)
    keep = drop_dominated(sets)
    stats.candidate_sets = len(keep)
    pool = [sets[i] for i in keep]
    pool_reps = [reps[i] for i in keep]

    greedy = _greedy_cover(pool, full)
    top = len(greedy) if limit is None else min(len(greedy) - 1, limit)
    cover = _Cover(pool, full, stats)
    for k in range(0, top + 1):
        if k == len(greedy):
            break
        found = cover.search(full, k, [])
        if found is not None:
            return _result(G, found, pool_reps, limit, stats)
    if limit is not None and limit < len(greedy):
        return SolveResult(None, None, limit, stats)
    return _result(G, greedy, pool_reps, limit, stats)


def _result(G, chosen, reps, limit, stats):
    orders = sorted(reps[i] for i in chosen)
    family = PermutationFamily.from_orders(G.n, orders)
    assert is_pairwise_suitable(family, G), "solver produced an unsuitable witness"
    return SolveResult(len(orders), family, limit, stats)


def sdim_brute(G: Graph, k: int) -> bool:
    """True iff some ``k`` distinct coverage sets together cover every disjoint pair.

    Deliberately naive, for cross-checking ``sdim_exact``: pure-Python
    separation tests over all ``n!`` permutations and plain enumeration of
    ``k``-subsets, with no pruning.
    """
    if G.n > BRUTE_MAX_N or k > BRUTE_MAX_K:
        raise CapExceededError(f"brute force is limited to n <= {BRUTE_MAX_N}, k <= {BRUTE_MAX_K}")
    pairs = [(e, f) for e, f in itertools.combinations(G.edges, 2) if not set(e) & set(f)]
    if not pairs:
        return True
    distinct = set()
    for order in itertools.permutations(range(G.n)):
        sigma = Permutation(order)
        bits = 0
        for p, (e, f) in enumerate(pairs):
            if separates(sigma, e, f):
                bits |= 1 << p
        distinct.add(bits)
    full = (1 << len(pairs)) - 1
    for combo in itertools.combinations(sorted(distinct), k):
        acc = 0
        for s in combo:
            acc |= s
        if acc == full:
            return True
    return False
