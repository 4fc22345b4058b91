"""Machine-checkable steps of the counting argument behind the ceil(d/2) lower bound.

The argument needs a d-regular graph whose small vertex sets span few edges.
Under that hypothesis, any single permutation has few short edges (endpoint
ranks close together).  So a small family leaves many edges long in every
member, and some color class of a proper edge coloring holds many long edges.
Long edges crossing a common point of a permutation are never separated by
it, so a small family cannot separate every pair of them.  Each piece is
exposed here with its own audit data.  :func:`certified_lower_bound` only
reports a bound when every hypothesis has been checked.

Rounding is fixed throughout: short threshold ``floor(delta*eps*n)``, block
size ``floor(eps*n)``, block overlap ``floor(delta*floor(eps*n))``, group bound
``ceil(1/(delta*eps))``, and a strict size inequality.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapExceededError, CertificateError, GraphError
from .exact import sdim_exact
from .graph import Edge, Graph, edge_coloring
from .separation import Permutation, PermutationFamily, separates, short_edges

EXPANSION_CAP = 14


def _exact(x) -> Fraction:
    """Read a user-supplied float as the decimal it was written as."""
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def short_threshold(n: int, delta, eps) -> int:
    return _floor_frac(_exact(delta) * _exact(eps) * n)


# -- expansion -------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionCertificate:
    n: int
    delta: float
    eps: float
    mode: str
    max_size: int
    checked_sets: int
    holds: bool
    witness: tuple[int, ...] | None = None
    witness_edges: int | None = None

    @property
    def exhaustive(self) -> bool:
        return self.mode == "exhaustive"

    def to_text(self) -> str:
        lines = [
            f"expansion.mode = {self.mode}",
            f"expansion.delta = {self.delta}",
            f"expansion.eps = {self.eps}",
            f"expansion.max_size = {self.max_size}",
            f"expansion.checked_sets = {self.checked_sets}",
            f"expansion.verdict = {'holds' if self.holds else 'violated'}",
        ]
        if self.witness is not None:
            lines.append(f"expansion.witness = {' '.join(map(str, self.witness))} ({self.witness_edges} edges)")
        return "\n".join(lines) + "\n"


def verify_expansion(G: Graph, delta, eps, mode: str = "exhaustive", *, cap: int = EXPANSION_CAP,
                     samples: int = 1000, seed=0) -> ExpansionCertificate:
    """Check that every vertex set of size ``2..floor(eps*n)`` spans at most ``(1+delta)|S|`` edges.

    Exhaustive mode walks all such sets in lexicographic order and stops at
    the first violation.  Sampled mode draws ``samples`` random sets and can
    only ever produce a non-exhaustive certificate.
    """
    d, e = _exact(delta), _exact(eps)
    if not (d > 0 and 0 < e <= 1):
        raise ValueError("need delta > 0 and 0 < eps <= 1")
    max_size = _floor_frac(e * G.n)
    masks = [0] * G.n
    for u, v in G.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    allowed = [_floor_frac((1 + d) * s) for s in range(max_size + 1)]

    if mode == "sampled":
        rng = random.Random(seed)
        checked = 0
        if max_size >= 2:
            for _ in range(samples):
                S = sorted(rng.sample(range(G.n), rng.randint(2, max_size)))
                checked += 1
                inside = _internal_edges(S, masks)
                if inside > allowed[len(S)]:
                    return ExpansionCertificate(G.n, delta, eps, mode, max_size, checked, False, tuple(S), inside)
        return ExpansionCertificate(G.n, delta, eps, mode, max_size, checked, True)

    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if max_size > cap:
        raise CapExceededError(f"exhaustive expansion check capped at floor(eps*n) <= {cap}, got {max_size}")

    checked = 0
    chosen: list[int] = []

    def walk(start, mask, inside):
        nonlocal checked
        for v in range(start, G.n):
            gained = (masks[v] & mask).bit_count()
            chosen.append(v)
            total = inside + gained
            size = len(chosen)
            if size >= 2:
                checked += 1
                if total > allowed[size]:
                    return total
            if size < max_size:
                found = walk(v + 1, mask | 1 << v, total)
                if found is not None:
                    return found
            chosen.pop()
        return None

    bad = walk(0, 0, 0) if max_size >= 2 else None
    if bad is not None:
        return ExpansionCertificate(G.n, delta, eps, mode, max_size, checked, False, tuple(chosen), bad)
    return ExpansionCertificate(G.n, delta, eps, mode, max_size, checked, True)


def _internal_edges(S, masks):
    mask = 0
    for v in S:
        mask |= 1 << v
    return sum((masks[v] & mask).bit_count() for v in S) // 2


# -- short edges -----------------------------------------------------------

@dataclass(frozen=True)
class ShortEdgeReport:
    threshold: int
    count: int
    bound: Fraction
    holds: bool
    block_size: int
    overlap: int
    blocks: tuple[tuple[int, int], ...]
    short_edges_in_blocks: bool


def overlapping_blocks(n: int, size: int, overlap: int) -> list[tuple[int, int]]:
    """Half-open rank windows ``[start, start+size)`` stepping by ``size - overlap``, covering ``0..n-1``."""
    if size <= 0 or n == 0:
        return []
    step = max(1, size - overlap)
    blocks, start = [], 0
    while True:
        blocks.append((start, min(start + size, n)))
        if start + size >= n:
            return blocks
        start += step


def short_edge_count_bound(G: Graph, sigma: Permutation, delta, eps,
                           cert: ExpansionCertificate) -> ShortEdgeReport:
    """Count short edges of ``sigma`` against ``((1+delta)/(1-delta)) * n``.

    Needs an exhaustive, holding expansion certificate for the same graph
    size and parameters.
    """
    d, e = _exact(delta), _exact(eps)
    if not cert.exhaustive or not cert.holds:
        raise CertificateError("short-edge bound needs an exhaustive expansion certificate that holds")
    if cert.n != G.n or _exact(cert.delta) != d or _exact(cert.eps) != e:
        raise CertificateError("expansion certificate was issued for different parameters")
    if not 0 < d < 1:
        raise CertificateError("short-edge bound needs 0 < delta < 1")
    n = G.n
    threshold = short_threshold(n, d, e)
    short = short_edges(G, sigma, threshold)
    bound = (1 + d) / (1 - d) * n
    size = _floor_frac(e * n)
    overlap = _floor_frac(d * size)
    blocks = overlapping_blocks(n, size, overlap)
    rank = sigma.rank
    inside = all(
        any(lo <= min(rank[u], rank[v]) and max(rank[u], rank[v]) < hi for lo, hi in blocks)
        for u, v in short
    )
    return ShortEdgeReport(threshold, len(short), bound, len(short) <= bound, size, overlap,
                           tuple(blocks), inside)


# -- long edges and the matching -------------------------------------------

@dataclass(frozen=True)
class LongMatching:
    edges: tuple[Edge, ...]
    color: int | None
    long_edges: tuple[Edge, ...]
    threshold: int
    required: Fraction
    meets_required: bool


def long_matching(G: Graph, F: PermutationFamily, delta, eps) -> LongMatching:
    """Color class of a proper edge coloring holding the most edges that are long in every member."""
    if not len(F):
        raise ValueError("long_matching needs a nonempty family")
    threshold = short_threshold(G.n, delta, eps)
    short: set[Edge] = set()
    for sigma in F:
        short.update(short_edges(G, sigma, threshold))
    long = tuple(e for e in G.edges if e not in short)
    long_set = set(long)
    coloring = edge_coloring(G)
    best, best_color = [], None
    for c, cls in enumerate(coloring.classes()):
        here = [e for e in cls if e in long_set]
        if best_color is None or len(here) > len(best):
            best, best_color = here, c
    required = Fraction(G.n, 4 * (G.max_degree + 1))
    return LongMatching(tuple(best), best_color, long, threshold, required, len(best) >= required)


@dataclass(frozen=True)
class SeparationGraph:
    """Graph on a matching ``L``: two edges adjacent iff ``sigma`` separates them.

    ``points`` are ranks chosen greedily so that every edge spans one of
    them (rank interval ``(lo, hi]`` contains the point), and ``group_of[i]``
    names the point assigned to edge ``i``.  Edges spanning the same point
    are never separated, so the groups form a proper coloring.
    """

    vertices: tuple[Edge, ...]
    adjacent: frozenset[tuple[int, int]]
    points: tuple[int, ...]
    group_of: tuple[int, ...]

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.points]
        for i, g in enumerate(self.group_of):
            out[g].append(i)
        return out

    def groups_independent(self) -> bool:
        return not any(self.group_of[i] == self.group_of[j] for i, j in self.adjacent)

    def as_graph(self) -> Graph:
        return Graph(len(self.vertices), tuple(sorted(self.adjacent)))


def separation_graph(L, sigma: Permutation) -> SeparationGraph:
    L = tuple(sorted(L))
    used: set[int] = set()
    for u, v in L:
        if u in used or v in used:
            raise GraphError("separation_graph needs a matching")
        used.update((u, v))
    adjacent = frozenset((i, j) for i in range(len(L)) for j in range(i + 1, len(L))
                         if separates(sigma, L[i], L[j]))
    rank = sigma.rank
    spans = [tuple(sorted((rank[u], rank[v]))) for u, v in L]
    # greedy stabbing by right end: optimal, and consecutive points are farther apart than any short edge
    points: list[int] = []
    group_of = [0] * len(L)
    for i in sorted(range(len(L)), key=lambda i: (spans[i][1], i)):
        lo, hi = spans[i]
        if not points or not lo < points[-1] <= hi:
            points.append(hi)
        group_of[i] = len(points) - 1
    return SeparationGraph(L, adjacent, tuple(points), tuple(group_of))


def group_bound(delta, eps) -> int:
    return math.ceil(1 / (_exact(delta) * _exact(eps)))


# -- the certificate -------------------------------------------------------

@dataclass
class LowerBoundCertificate:
    n: int
    d: int
    delta: float
    eps: float
    size_threshold: float
    hypotheses: list[tuple[str, str, str]] = field(default_factory=list)
    implied_bound: int | None = None
    expansion: ExpansionCertificate | None = None

    @property
    def established(self) -> bool:
        return self.implied_bound is not None

    @property
    def reason(self) -> str:
        if self.established:
            return f"sdim >= {self.implied_bound}"
        name, _, detail = next(h for h in self.hypotheses if h[1] != "holds")
        return f"not established: {detail}"

    def to_text(self) -> str:
        lines = [f"n = {self.n}", f"d = {self.d}", f"delta = {self.delta}", f"eps = {self.eps}",
                 f"size_threshold = {self.size_threshold:.6g}"]
        for name, status, detail in self.hypotheses:
            lines.append(f"hypothesis.{name} = {status} ({detail})")
        if self.expansion is not None:
            lines.append(self.expansion.to_text().rstrip("\n"))
        lines.append(f"result = {self.reason}")
        return "\n".join(lines) + "\n"


def size_threshold(d: int, delta, eps) -> float:
    return 4 * (d + 1) * float(1 / (_exact(delta) * _exact(eps))) ** (d / 2)


def exceeds_size_threshold(n: int, d: int, delta, eps) -> bool:
    """``n > 4(d+1) (1/(delta*eps))**(d/2)``, decided in exact arithmetic."""
    x = 1 / (_exact(delta) * _exact(eps))
    lhs = Fraction(n, 4 * (d + 1))
    return lhs > 0 and lhs * lhs > x ** d


def delta_small_enough(d: int, delta) -> bool:
    """``((d-1)/2) (1+delta)/(1-delta) <= (2d-1)/4`` with ``0 < delta < 1``."""
    x = _exact(delta)
    if not 0 < x < 1:
        return False
    return Fraction(d - 1, 2) * (1 + x) / (1 - x) <= Fraction(2 * d - 1, 4)


def certified_lower_bound(G: Graph, delta, eps, *, cap: int = EXPANSION_CAP) -> LowerBoundCertificate:
    """Report ``sdim(G) >= ceil(d/2)`` only if every hypothesis is verified.

    Hypotheses, in order: the graph is d-regular with ``d >= 3``; ``n`` exceeds the
    size threshold; ``delta`` is small enough for the counting step; the
    exhaustive expansion check holds.  The expansion check only runs when
    the first three hold.
    """
    d = G.max_degree
    cert = LowerBoundCertificate(G.n, d, delta, eps, size_threshold(d, delta, eps))
    hyp = cert.hypotheses

    if not G.is_regular():
        hyp.append(("regular", "fails", "graph is not regular"))
    elif d < 3:
        hyp.append(("regular", "fails", "d >= 3 required"))
    else:
        hyp.append(("regular", "holds", f"{d}-regular"))

    if exceeds_size_threshold(G.n, d, delta, eps):
        hyp.append(("size", "holds", f"n > {cert.size_threshold:.6g}"))
    else:
        hyp.append(("size", "fails", "size hypothesis"))

    if delta_small_enough(d, delta):
        hyp.append(("delta", "holds", "((d-1)/2)(1+delta)/(1-delta) <= d/2 - 1/4"))
    else:
        hyp.append(("delta", "fails", "delta condition"))

    if all(status == "holds" for _, status, _ in hyp):
        try:
            exp = verify_expansion(G, delta, eps, "exhaustive", cap=cap)
        except CapExceededError as exc:
            hyp.append(("expansion", "fails", f"expansion hypothesis ({exc})"))
        else:
            cert.expansion = exp
            hyp.append(("expansion", "holds" if exp.holds else "fails",
                        "exhaustive check" if exp.holds else "expansion hypothesis"))
    else:
        hyp.append(("expansion", "skipped", "earlier hypothesis failed"))

    if all(status == "holds" for _, status, _ in hyp):
        cert.implied_bound = -(-d // 2)
    return cert


def exhaustive_lower_bound(G: Graph, k: int) -> bool:
    """True iff exhaustive search proves that no family of ``k`` permutations is suitable."""
    return sdim_exact(G, limit=k).exceeded
