"""Upper-bound constructions with machine-checked output.

The combination step turns a vertex partition into a global family from two
ingredients:

* pair-block rounds: the complete graph on the parts is edge-colored by the
  round-robin schedule; in every color class each matched pair of parts
  contributes one member of its own pair family, blocks concatenated.  This
  separates every disjoint edge pair living inside two parts.
* lifted part orders: each member of a family of part orders is expanded by
  listing every part's vertices in id order.  If the part family realizes every
  ordered triple of parts and separates every two disjoint pairs of parts, this
  handles every pair of edges touching three or four parts.

All constructions re-verify their output with :func:`is_pairwise_suitable`.
"""

from __future__ import annotations

import heapq
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConstructionError, NonConvergenceError
from .graph import Graph, Partition, complete_graph, distance_two_coloring
from .separation import (
    PermutationFamily,
    disjoint_pairs,
    format_family,
    is_pairwise_suitable,
)

log = logging.getLogger(__name__)

PAPER_C1 = 400
PAPER_C2 = 0.5
SCRAMBLE_ROUNDS = 20


# -- LLL partition ---------------------------------------------------------

@dataclass(frozen=True)
class PartitionSpec:
    r: int
    t: int
    max_resamples: int = 100_000
    seed: int | str = 0

    def __post_init__(self):
        if self.r < 1 or self.t < 1:
            raise ValueError("need r >= 1 and t >= 1")


@dataclass(frozen=True)
class PartitionRun:
    partition: Partition
    resamples: int


def moser_tardos(G: Graph, spec: PartitionSpec) -> PartitionRun:
    """Random partition with at most ``spec.t`` neighbors of any vertex per part.

    Bad event ``(v, i)``: more than ``t`` neighbors of ``v`` in part ``i``.  While
    one occurs, the lexicographically least is fixed by re-drawing the parts of
    all neighbors of ``v``.
    """
    rng = random.Random(spec.seed)
    r, t = spec.r, spec.t
    adj = G.adjacency
    part = [rng.randrange(r) for _ in range(G.n)]
    count = [dict() for _ in range(G.n)]
    for v in range(G.n):
        c = count[v]
        for w in adj[v]:
            c[part[w]] = c.get(part[w], 0) + 1
    heap = [(v, i) for v in range(G.n) for i, k in count[v].items() if k > t]
    heapq.heapify(heap)
    resamples = 0
    while heap:
        v, i = heapq.heappop(heap)
        if count[v].get(i, 0) <= t:
            continue
        if resamples >= spec.max_resamples:
            raise NonConvergenceError(f"partition did not converge in {spec.max_resamples} resamples (r={r}, t={t})")
        resamples += 1
        for w in adj[v]:
            old, new = part[w], rng.randrange(r)
            if old == new:
                continue
            part[w] = new
            for x in adj[w]:
                cx = count[x]
                cx[old] -= 1
                cx[new] = cx.get(new, 0) + 1
                if cx[new] > t:
                    heapq.heappush(heap, (x, new))
        if count[v].get(i, 0) > t:
            heapq.heappush(heap, (v, i))
    return PartitionRun(Partition(tuple(part), r), resamples)


def lll_partition(G: Graph, spec: PartitionSpec) -> Partition:
    return moser_tardos(G, spec).partition


def max_part_degree(G: Graph, P: Partition) -> int:
    """Largest number of neighbors any vertex has inside a single part."""
    worst = 0
    for v in range(G.n):
        counts: dict[int, int] = {}
        for w in G.adjacency[v]:
            counts[P.part_of[w]] = counts.get(P.part_of[w], 0) + 1
        worst = max(worst, max(counts.values(), default=0))
    return worst


@dataclass(frozen=True)
class PartitionParams:
    r: int
    t: int
    mean: float
    failure_bound: float
    log2_failure_bound: float


def _log2(x: int):
    """Exact for powers of two (as a Fraction), float otherwise."""
    if x > 0 and x & (x - 1) == 0:
        return Fraction(x.bit_length() - 1)
    return math.log2(x)


def plan_partition_params(max_degree: int, c1=PAPER_C1, c2=PAPER_C2) -> PartitionParams:
    """Part count, per-part cap and the Chernoff failure bound for one bad event.

    ``r = ceil(c1 * D / log2 D)`` and ``t = max(1, floor(c2 * log2 D))``.  The
    per-part neighbor count has mean ``mu = D / r``; with ``1 + delta = t / mu``
    the bound is ``(e**delta / (1 + delta)**(1 + delta)) ** mu``.
    """
    if max_degree < 2:
        raise ValueError("plan_partition_params needs max_degree >= 2")
    lg = _log2(max_degree)
    r = math.ceil(Fraction(c1) * max_degree / lg) if isinstance(lg, Fraction) else math.ceil(c1 * max_degree / lg)
    t = max(1, math.floor(Fraction(c2) * lg) if isinstance(lg, Fraction) else math.floor(c2 * lg))
    mu = Fraction(max_degree, r)
    if t <= mu:
        return PartitionParams(r, t, float(mu), 1.0, 0.0)
    # (1 + delta) * mu == t
    log2_bound = float(t - mu) * math.log2(math.e) - t * math.log2(t / mu)
    return PartitionParams(r, t, float(mu), 2.0 ** log2_bound, log2_bound)


# -- part-level family -----------------------------------------------------

@dataclass(frozen=True)
class PartPermutationFamily:
    """Orders of the parts ``0..r-1``; flags are set only by verification."""

    r: int
    members: tuple[tuple[int, ...], ...]
    scrambling: bool = False
    suitable: bool = False

    def __len__(self) -> int:
        return len(self.members)


def realizes_all_triples(members, r: int) -> bool:
    """Every ordered triple ``(i, k, j)`` of distinct parts appears as ``i < k < j`` in some member."""
    if r < 3:
        return True
    if not members:
        return False
    ranks = np.argsort(np.asarray(members), axis=1)
    less = ranks[:, :, None] < ranks[:, None, :]  # [m, a, b]: a before b
    off = ~np.eye(r, dtype=bool)
    for k in range(r):
        before = less[:, :, k].astype(np.int64)  # i before k
        after = less[:, k, :].astype(np.int64)  # k before j
        hit = before.T @ after > 0
        need = off.copy()
        need[k, :] = need[:, k] = False
        if not hit[need].all():
            return False
    return True


def separates_part_pairs(members, r: int) -> bool:
    """The member orders are pairwise suitable for the complete graph on the parts."""
    return bool(is_pairwise_suitable(PermutationFamily.from_orders(r, members), complete_graph(r)))


def scrambling_part_family(r: int, seed=0, max_rounds: int = SCRAMBLE_ROUNDS) -> PartPermutationFamily:
    if r < 1:
        raise ValueError("need r >= 1")
    if r <= 2:
        return PartPermutationFamily(r, (), scrambling=True, suitable=True)
    rng = random.Random(seed)
    m = math.ceil(12 * math.log2(max(r, 2))) + 4
    for _ in range(max_rounds):
        members = tuple(tuple(rng.sample(range(r), r)) for _ in range(m))
        if realizes_all_triples(members, r) and separates_part_pairs(members, r):
            return PartPermutationFamily(r, members, scrambling=True, suitable=True)
        m += 2
    raise ConstructionError(f"no verified part family for r={r} after {max_rounds} rounds")


# -- combination -----------------------------------------------------------

@dataclass
class ConstructionReport:
    method: str
    family: PermutationFamily
    verified: bool
    breakdown: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.family)

    def to_text(self) -> str:
        lines = [f"method = {self.method}", f"size = {self.size}",
                 f"verified = {'true' if self.verified else 'false'}"]
        lines += [f"breakdown.{k} = {v}" for k, v in self.breakdown.items()]
        lines.append("family = " + format_family(self.family).strip())
        return "\n".join(lines) + "\n"


def round_robin(r: int) -> list[list[tuple[int, int]]]:
    """Proper edge coloring of the complete graph on ``r`` parts by the circle method."""
    if r < 2:
        return []
    slots = list(range(r)) + ([None] if r % 2 else [])
    size = len(slots)
    classes = []
    for _ in range(size - 1):
        pairs = []
        for a in range(size // 2):
            x, y = slots[a], slots[size - 1 - a]
            if x is not None and y is not None:
                pairs.append((min(x, y), max(x, y)))
        classes.append(sorted(pairs))
        slots = [slots[0], slots[-1]] + slots[1:-1]
    return classes


def _pair_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i <= j else (j, i)


def combine_partition_families(G: Graph, P: Partition, pair_families: dict,
                               part_family: PartPermutationFamily,
                               method: str = "combine") -> ConstructionReport:
    """Global family from per-pair families and a part-level family.

    ``pair_families[(i, j)]`` (``i < j``; ``(0, 0)`` when ``r == 1``) is a family
    for ``G.induced(V_i | V_j)``, i.e. over local ids in increasing global-id
    order.  Missing keys mean the empty family.
    """
    if P.n != G.n:
        raise ConstructionError(f"partition covers {P.n} vertices, graph has {G.n}")
    parts = P.parts()
    r = P.r

    for (i, j), fam in sorted(pair_families.items()):
        sub, _ = G.induced(parts[i] + (parts[j] if j != i else []))
        if fam.n != sub.n:
            raise ConstructionError(f"pair family {(i, j)} is over {fam.n} vertices, expected {sub.n}")
        verdict = is_pairwise_suitable(fam, sub)
        if not verdict:
            raise ConstructionError(f"pair family {(i, j)} is not suitable for its subgraph: {verdict}")

    if r <= 1:
        fam = pair_families.get((0, 0), PermutationFamily(G.n))
        report = ConstructionReport(method, fam, False, {"parts": r, "color_classes": 0, "pair_family_max": len(fam),
                                                         "pair_block_rounds": len(fam), "part_family": 0})
        return _finish(G, report)

    if part_family.r != r:
        raise ConstructionError(f"part family is over {part_family.r} parts, partition has {r}")
    if not (part_family.scrambling and part_family.suitable):
        raise ConstructionError("part family has not been verified")

    classes = round_robin(r)
    hmax = max((len(f) for f in pair_families.values()), default=0)
    orders = []
    for cls in classes:
        matched = {p for pair in cls for p in pair}
        for u in range(hmax):
            order = []
            for i, j in cls:
                verts = sorted(parts[i] + parts[j])
                fam = pair_families.get((i, j))
                if fam is not None and len(fam):
                    order += [verts[x] for x in fam.members[u % len(fam)].order]
                else:
                    order += verts
            for p in range(r):
                if p not in matched:
                    order += parts[p]
            orders.append(order)
    for pi in part_family.members:
        orders.append([v for p in pi for v in parts[p]])

    family = PermutationFamily.from_orders(G.n, orders)
    report = ConstructionReport(method, family, False, {
        "parts": r,
        "color_classes": len(classes),
        "pair_family_max": hmax,
        "pair_block_rounds": len(classes) * hmax,
        "part_family": len(part_family),
    })
    return _finish(G, report)


def _finish(G, report):
    verdict = is_pairwise_suitable(report.family, G)
    if not verdict:
        raise ConstructionError(f"combined family failed verification (bug): {verdict}")
    report.verified = True
    return report


# -- concrete constructions ------------------------------------------------

def _matching_family(sub: Graph) -> PermutationFamily:
    """One permutation laying matched edges side by side; empty if nothing to separate."""
    if not len(disjoint_pairs(sub)):
        return PermutationFamily(sub.n)
    if sub.max_degree > 1:
        raise ConstructionError("pair union is not a matching")
    order = [v for e in sub.edges for v in e]
    covered = set(order)
    order += [v for v in range(sub.n) if v not in covered]
    return PermutationFamily.from_orders(sub.n, [order])


def _pair_keys(r):
    return [(0, 0)] if r == 1 else [(i, j) for i in range(r) for j in range(i + 1, r)]


def construct_distance_two(G: Graph, seed=0) -> ConstructionReport:
    """Distance-two coloring; any two color classes induce a matching."""
    P = distance_two_coloring(G)
    if P.r == 0:
        return ConstructionReport("dist2", PermutationFamily(0), True, {"parts": 0})
    parts = P.parts()
    pair_families = {}
    for i, j in _pair_keys(P.r):
        sub, _ = G.induced(parts[i] + (parts[j] if j != i else []))
        fam = _matching_family(sub)
        if len(fam):
            pair_families[(i, j)] = fam
    part_family = scrambling_part_family(P.r, seed=f"{seed}/parts")
    return combine_partition_families(G, P, pair_families, part_family, method="dist2")


@dataclass(frozen=True)
class RecursionConfig:
    """Parameters of the recursive construction.

    The defaults ``c1=400`` and ``c2=0.5`` are the asymptotic constants; at
    desk scale something like ``c1=4, c2=1`` is needed for the recursion to
    actually split the graph.
    """

    base_cutoff: int = 8
    c1: float = PAPER_C1
    c2: float = PAPER_C2
    seed: int | str = 0
    resample_factor: int = 50
    # on non-convergence, grow r by retry_growth and try again (0 = propagate)
    retries: int = 0
    retry_growth: float = 1.5


def construct_bounded_degree(G: Graph, cfg: RecursionConfig = RecursionConfig()) -> ConstructionReport:
    report = _construct(G, cfg, cfg.seed)
    report.method = "recursive"
    return report


def _construct(G, cfg, seed):
    delta = G.max_degree
    if delta <= cfg.base_cutoff:
        report = construct_distance_two(G, seed=seed)
        report.breakdown["depth"] = 1
        return report
    lg = math.log2(delta)
    r = math.ceil(cfg.c1 * delta / lg)
    t = max(1, math.floor(cfg.c2 * lg))
    if 2 * t >= delta or r >= G.n:
        log.info("partition (r=%d, t=%d) does not reduce degree %d on %d vertices; using distance-two base",
                 r, t, delta, G.n)
        report = construct_distance_two(G, seed=seed)
        report.breakdown["depth"] = 1
        return report
    for attempt in range(cfg.retries + 1):
        spec = PartitionSpec(r, t, max_resamples=cfg.resample_factor * max(G.n, 1), seed=f"{seed}/lll/{attempt}")
        try:
            run = moser_tardos(G, spec)
            break
        except NonConvergenceError:
            if attempt == cfg.retries:
                raise
            log.info("partition with r=%d, t=%d did not converge; retrying with more parts", r, t)
            r = math.ceil(r * cfg.retry_growth)
    parts = run.partition.parts()
    pair_families = {}
    depth = 0
    for i, j in _pair_keys(r):
        sub, _ = G.induced(parts[i] + parts[j])
        if not len(disjoint_pairs(sub)):
            continue
        if sub.max_degree > 2 * t:
            raise ConstructionError("pair union exceeds the degree cap (bug)")
        child = _construct(sub, cfg, f"{seed}/{i}-{j}")
        depth = max(depth, child.breakdown.get("depth", 1))
        pair_families[(i, j)] = child.family
    part_family = scrambling_part_family(r, seed=f"{seed}/parts")
    report = combine_partition_families(G, run.partition, pair_families, part_family, method="recursive")
    report.breakdown.update({"depth": depth + 1, "cap": t, "resamples": run.resamples})
    return report


# -- closed forms ----------------------------------------------------------

def log_star(x) -> int:
    """Iterated base-2 logarithm: applications of log2 until the value is <= 1."""
    count = 0
    while x > 1:
        x = math.log2(x)
        count += 1
    return count


def _ceil_loglog(N: int) -> int:
    """``ceil(log2(log2(N)))`` for integer ``N >= 2``, computed exactly."""
    k = 0
    while N > 2 ** (2 ** k):
        k += 1
    return k


def upper_bound_formula(d: int) -> int:
    """Best closed-form upper bound on the separation dimension at max degree ``d``.

    Minimum of ``2**(9*log*(d)) * d`` and ``(4d-4)(ceil(log log(2d-2)) + 3) + 1``
    (the latter for ``d > 1``); ``1`` when ``d == 1``.
    """
    if d < 1:
        raise ValueError("upper_bound_formula needs d >= 1")
    if d == 1:
        return 1
    iterated = 2 ** (9 * log_star(d)) * d
    small = (4 * d - 4) * (_ceil_loglog(2 * d - 2) + 3) + 1
    return min(iterated, small)

