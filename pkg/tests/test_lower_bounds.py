import itertools
import random
from fractions import Fraction

import pytest

from sepdim.errors import CapExceededError, CertificateError, GraphError
from sepdim.graph import Graph, complete_graph, cycle_graph, empty_graph, perfect_matching, random_regular
from sepdim.lower_bounds import (
    certified_lower_bound,
    delta_small_enough,
    exceeds_size_threshold,
    exhaustive_lower_bound,
    group_bound,
    long_matching,
    overlapping_blocks,
    separation_graph,
    short_edge_count_bound,
    short_threshold,
    size_threshold,
    verify_expansion,
)
from sepdim.separation import Permutation, PermutationFamily


def naive_expansion(G, delta, eps):
    limit = int(Fraction(str(eps)) * G.n)
    edges = set(G.edges)
    for s in range(2, limit + 1):
        for S in itertools.combinations(range(G.n), s):
            inside = sum(1 for e in itertools.combinations(S, 2) if e in edges)
            if inside > (1 + Fraction(str(delta))) * s:
                return False
    return True


def test_expansion_k4_holds():
    cert = verify_expansion(complete_graph(4), 0.5, 0.5)
    assert cert.holds and cert.exhaustive
    assert cert.checked_sets == 6


def test_expansion_k6_violated_by_four_clique():
    cert = verify_expansion(complete_graph(6), 0.4, 0.7)
    assert not cert.holds
    assert len(cert.witness) == 4 and cert.witness_edges == 6
    assert "violated" in cert.to_text()


@pytest.mark.parametrize("seed", range(4))
def test_expansion_matches_naive_recount(seed):
    G = random_regular(14, 3, seed)
    for delta, eps in [(0.5, 0.3), (0.2, 0.5), (0.01, 0.4)]:
        assert verify_expansion(G, delta, eps).holds == naive_expansion(G, delta, eps)


def test_expansion_cap_and_sampled():
    G = random_regular(40, 3, 0)
    with pytest.raises(CapExceededError):
        verify_expansion(G, 0.5, 0.5)
    cert = verify_expansion(G, 0.5, 0.5, "sampled", samples=200, seed=1)
    assert cert.mode == "sampled" and not cert.exhaustive
    with pytest.raises(ValueError):
        verify_expansion(G, 0.5, 0.0)


def test_short_threshold_is_exact():
    # 0.1 * 0.3 * 100 is 3.0000000000000004 in floats
    assert short_threshold(100, 0.1, 0.3) == 3
    assert short_threshold(8, 0.5, 0.5) == 2


def test_short_edges_cycle_example():
    C8 = cycle_graph(8)
    cert = verify_expansion(C8, 0.5, 0.5)
    assert cert.holds
    rep = short_edge_count_bound(C8, Permutation.identity(8), 0.5, 0.5, cert)
    assert rep.threshold == 2 and rep.count == 7
    assert rep.bound == 24 and rep.holds


def test_short_edges_edgeless():
    G = empty_graph(6)
    cert = verify_expansion(G, 0.5, 0.5)
    rep = short_edge_count_bound(G, Permutation.identity(6), 0.5, 0.5, cert)
    assert rep.count == 0 and rep.holds


def test_short_edges_needs_a_sound_certificate():
    G = cycle_graph(8)
    sampled = verify_expansion(G, 0.5, 0.5, "sampled")
    with pytest.raises(CertificateError):
        short_edge_count_bound(G, Permutation.identity(8), 0.5, 0.5, sampled)
    cert = verify_expansion(G, 0.5, 0.5)
    with pytest.raises(CertificateError):
        short_edge_count_bound(G, Permutation.identity(8), 0.25, 0.5, cert)
    bad = verify_expansion(complete_graph(6), 0.4, 0.7)
    with pytest.raises(CertificateError):
        short_edge_count_bound(complete_graph(6), Permutation.identity(6), 0.4, 0.7, bad)


def test_short_edge_bound_on_random_orders():
    rng = random.Random(3)
    for seed in range(3):
        G = random_regular(20, 3, seed)
        cert = verify_expansion(G, 0.5, 0.3)
        if not cert.holds:
            continue
        for _ in range(200):
            order = list(range(20))
            rng.shuffle(order)
            rep = short_edge_count_bound(G, Permutation(order), 0.5, 0.3, cert)
            assert rep.holds


def test_overlapping_blocks_cover_everything():
    blocks = overlapping_blocks(20, 6, 2)
    covered = set()
    for lo, hi in blocks:
        assert hi - lo <= 6
        covered.update(range(lo, hi))
    assert covered == set(range(20))


def test_long_matching_cycle_wrap_edge():
    C8 = cycle_graph(8)
    lm = long_matching(C8, PermutationFamily.from_orders(8, [range(8)]), 0.5, 0.5)
    assert lm.long_edges == ((0, 7),)
    assert (0, 7) in lm.edges


def test_long_matching_all_short():
    M = perfect_matching(6)
    lm = long_matching(M, PermutationFamily.from_orders(6, [range(6)]), 0.5, 0.5)
    assert lm.long_edges == () and lm.edges == ()


def test_long_matching_is_a_matching():
    G = random_regular(20, 3, 0)
    rng = random.Random(1)
    orders = []
    for _ in range(3):
        o = list(range(20))
        rng.shuffle(o)
        orders.append(o)
    lm = long_matching(G, PermutationFamily.from_orders(20, orders), 0.3, 0.3)
    used = [v for e in lm.edges for v in e]
    assert len(used) == len(set(used))
    assert set(lm.edges) <= set(lm.long_edges)
    with pytest.raises(ValueError):
        long_matching(G, PermutationFamily(20), 0.3, 0.3)


def test_separation_graph_examples():
    sigma = Permutation.identity(4)
    H = separation_graph([(0, 1), (2, 3)], sigma)
    assert H.adjacent == {(0, 1)}
    H = separation_graph([(0, 3), (1, 2)], sigma)
    assert H.adjacent == frozenset()
    with pytest.raises(GraphError):
        separation_graph([(0, 1), (1, 2)], sigma)


def test_separation_graph_groups():
    rng = random.Random(0)
    for _ in range(100):
        n = 30
        delta, eps = 0.5, 0.4
        thr = short_threshold(n, delta, eps)
        verts = list(range(n))
        rng.shuffle(verts)
        L = [tuple(sorted(verts[i:i + 2])) for i in range(0, n, 2)]
        order = list(range(n))
        rng.shuffle(order)
        sigma = Permutation(order)
        long = [e for e in L if abs(sigma.rank[e[0]] - sigma.rank[e[1]]) > thr]
        H = separation_graph(long, sigma)
        assert H.groups_independent()
        assert len(H.points) <= group_bound(delta, eps)


def test_size_threshold_arithmetic():
    assert size_threshold(3, 0.2, 0.01) == pytest.approx(16 * 500 ** 1.5)
    # 16 * 500**1.5 = 178885.438...
    assert exceeds_size_threshold(178886, 3, 0.2, 0.01)
    assert not exceeds_size_threshold(178885, 3, 0.2, 0.01)


def test_delta_condition():
    assert delta_small_enough(3, Fraction(1, 9))
    assert not delta_small_enough(3, 0.2)
    assert not delta_small_enough(3, 1.0)


def test_certificate_never_claims_at_desk_scale():
    for seed in range(3):
        cert = certified_lower_bound(random_regular(20, 3, seed), 0.1, 0.3)
        assert not cert.established
        assert cert.reason == "not established: size hypothesis"
    cert = certified_lower_bound(cycle_graph(9), 0.1, 0.3)
    assert cert.reason == "not established: d >= 3 required"
    cert = certified_lower_bound(Graph.from_edges(4, [(0, 1), (1, 2)]), 0.1, 0.3)
    assert cert.reason == "not established: graph is not regular"
    assert "result = not established" in cert.to_text()


def test_certificate_fires_only_when_everything_holds():
    # a graph with no edges inside small sets satisfies expansion; size is met with a huge eps*delta
    G = perfect_matching(100)
    cert = certified_lower_bound(G, 0.5, 0.1)
    assert not cert.established


def test_exhaustive_lower_bound_examples():
    assert exhaustive_lower_bound(complete_graph(4), 2)
    assert exhaustive_lower_bound(Graph.from_edges(4, [(0, 1), (2, 3)]), 0)
    assert not exhaustive_lower_bound(cycle_graph(4), 2)


def test_random_four_regular_ten_vertices_needs_two():
    from sepdim.exact import sdim_exact
    assert sdim_exact(random_regular(10, 4, 0), limit=1).exceeded
