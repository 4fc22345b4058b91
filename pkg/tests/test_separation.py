import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from sepdim.errors import DimensionMismatchError, GraphError, SepdimError
from sepdim.graph import Graph, complete_graph, cycle_graph, empty_graph, path_graph, random_regular
from sepdim.separation import (
    Permutation,
    PermutationFamily,
    SeparatingEmbedding,
    coverage,
    disjoint_pairs,
    embedding_to_family,
    family_to_embedding,
    is_pairwise_suitable,
    parse_family,
    read_family,
    separates,
    short_edges,
    verify_embedding,
    write_family,
)

TWO_K2 = Graph.from_edges(4, [(0, 1), (2, 3)])
ID4 = Permutation.identity(4)


def naive_coverage(sigma, G):
    pairs = [(e, f) for e, f in itertools.combinations(G.edges, 2) if not set(e) & set(f)]
    return {p for p, (e, f) in enumerate(pairs) if separates(sigma, e, f)}


def test_separates_examples():
    assert separates(ID4, (0, 1), (2, 3))
    assert not separates(ID4, (0, 2), (1, 3))
    assert not separates(ID4, (0, 3), (1, 2))
    with pytest.raises(GraphError):
        separates(ID4, (0, 1), (1, 2))


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    p = Permutation((2, 0, 1))
    assert p.rank == (1, 2, 0)
    assert p.reversed().order == (1, 0, 2)


def test_k4_every_permutation_covers_one_pair():
    K4 = complete_graph(4)
    assert len(disjoint_pairs(K4)) == 3
    for order in itertools.permutations(range(4)):
        assert len(coverage(Permutation(order), K4)) == 1


def test_path_has_no_disjoint_pairs():
    assert len(coverage(Permutation.identity(3), path_graph(3))) == 0


def test_two_k2_coverage_counts():
    sizes = [len(coverage(Permutation(o), TWO_K2)) for o in itertools.permutations(range(4))]
    assert set(sizes) <= {0, 1}
    # {0,1} entirely before {2,3} or after it: 2 * 2! * 2! orders
    assert sum(sizes) == 8
    assert sizes.count(0) == 16


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(4, 40))
def test_scan_and_sweep_agree(seed, n):
    import random
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    G = Graph.from_edges(n, rng.sample(pairs, rng.randint(0, min(len(pairs), 120))))
    order = list(range(n))
    rng.shuffle(order)
    sigma = Permutation(order)
    scan = coverage(sigma, G, "scan")
    assert scan == coverage(sigma, G, "sweep")
    assert set(scan.indices()) == naive_coverage(sigma, G)


def test_coverage_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        coverage(Permutation.identity(3), TWO_K2)


def test_suitability_examples():
    assert is_pairwise_suitable(PermutationFamily.from_orders(4, [(0, 1, 2, 3)]), TWO_K2)
    C4 = cycle_graph(4)
    assert is_pairwise_suitable(PermutationFamily.from_orders(4, [(0, 1, 2, 3), (1, 2, 3, 0)]), C4)
    assert is_pairwise_suitable(PermutationFamily(0), empty_graph(0))
    assert str(is_pairwise_suitable(PermutationFamily(3), empty_graph(3))) == "SUITABLE"


def test_k4_pairs_of_permutations_never_suffice():
    K4 = complete_graph(4)
    perms = list(itertools.permutations(range(4)))
    for a, b in itertools.combinations_with_replacement(perms, 2):
        verdict = is_pairwise_suitable(PermutationFamily.from_orders(4, [a, b]), K4)
        assert not verdict
        e, f = verdict.witness
        assert not set(e) & set(f)
        assert not any(separates(Permutation(o), e, f) for o in (a, b))


def test_verdict_text():
    verdict = is_pairwise_suitable(PermutationFamily(4), TWO_K2)
    assert str(verdict) == "NOT-SUITABLE e=(0,1) f=(2,3)"


def test_suitability_matches_coverage_union():
    G = random_regular(30, 4, 2)
    import random
    rng = random.Random(5)
    for k in (1, 5, 40):
        orders = []
        for _ in range(k):
            o = list(range(30))
            rng.shuffle(o)
            orders.append(o)
        F = PermutationFamily.from_orders(30, orders)
        union = 0
        for sigma in F:
            union |= coverage(sigma, G).bits
        full = (1 << len(disjoint_pairs(G))) - 1
        assert bool(is_pairwise_suitable(F, G)) == (union == full)
        assert bool(is_pairwise_suitable(F, G, chunk=3)) == (union == full)


def test_embedding_examples():
    F = PermutationFamily.from_orders(3, [(0, 1, 2)])
    assert family_to_embedding(F).coords == ((0,), (1,), (2,))
    flat = SeparatingEmbedding(1, ((0,), (0,), (0,)))
    assert embedding_to_family(flat).members[0].order == (0, 1, 2)
    assert not flat.is_tie_free()
    with pytest.raises(SepdimError):
        family_to_embedding(PermutationFamily(3))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.permutations(range(n)), min_size=1, max_size=4))))
def test_embedding_round_trip(data):
    n, orders = data
    F = PermutationFamily.from_orders(n, orders)
    E = family_to_embedding(F)
    assert E.is_tie_free()
    assert embedding_to_family(E) == F


def test_verify_embedding():
    C4 = cycle_graph(4)
    F = PermutationFamily.from_orders(4, [(0, 1, 2, 3), (1, 2, 3, 0)])
    assert verify_embedding(family_to_embedding(F), C4)
    assert verify_embedding(SeparatingEmbedding(1, ((0,), (1,), (2,), (3,))), TWO_K2)
    assert verify_embedding(SeparatingEmbedding(0, ((),) * 3), empty_graph(3))
    K4 = complete_graph(4)
    for a, b in itertools.product(itertools.permutations(range(4)), repeat=2):
        E = family_to_embedding(PermutationFamily.from_orders(4, [a, b]))
        assert not verify_embedding(E, K4)


def test_tied_coordinates_do_not_separate():
    E = SeparatingEmbedding(1, ((0,), (1,), (1,), (2,)))
    assert not verify_embedding(E, TWO_K2)


def test_short_edges_examples():
    P5 = path_graph(5)
    assert short_edges(P5, Permutation.identity(5), 1) == list(P5.edges)
    assert short_edges(P5, Permutation.identity(5), 0) == []
    assert short_edges(cycle_graph(4), ID4, 1) == [(0, 1), (1, 2), (2, 3)]


def test_family_file_round_trip(tmp_path):
    F = PermutationFamily.from_orders(4, [(0, 1, 2, 3), (3, 1, 0, 2)])
    write_family(F, tmp_path / "f.json")
    assert read_family(tmp_path / "f.json") == F
    assert json.loads((tmp_path / "f.json").read_text())["n"] == 4


@pytest.mark.parametrize("text", ["{}", "[1]", '{"n": 3, "permutations": [[0, 1]]}', "nope"])
def test_family_parse_errors(text):
    with pytest.raises(SepdimError):
        parse_family(text)
