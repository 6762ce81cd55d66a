import itertools
from fractions import Fraction

import pytest

from hyperzero.balance import is_strictly_balanced
from hyperzero.construct import (
    ConstructionError,
    DensityTarget,
    InfeasibleDensity,
    SearchCapExceeded,
    construct_circular,
    construct_strictly_balanced,
    construct_tree,
    lift_arity,
    search_strictly_balanced_graph,
)
from hyperzero.hypercore import components, is_tree, make_hypergraph


def test_trees():
    assert construct_tree(3, 1).edges == ((0, 1, 2),)
    T = construct_tree(3, 2)
    assert T.edges == ((0, 1, 2), (2, 3, 4)) and T.density() == Fraction(2, 5)
    P = construct_tree(2, 3)
    assert P.density() == Fraction(3, 4) and is_tree(P)
    with pytest.raises(ConstructionError):
        construct_tree(3, 0)


def test_circular_examples():
    assert construct_circular(3, 3, 6).edges == ((0, 1, 2), (2, 3, 4), (0, 4, 5))
    assert construct_circular(3, 3, 5).edges == ((0, 1, 2), (2, 3, 4), (0, 3, 4))
    with pytest.raises(ConstructionError):
        construct_circular(3, 2, 3)
    with pytest.raises(ConstructionError):
        construct_circular(2, 3, 3)


def _overlaps(G):
    E = G.edges
    return [len(set(E[i]) & set(E[(i + 1) % len(E)])) for i in range(len(E))]


@pytest.mark.parametrize("s", [3, 4, 5])
def test_circular_structure(s):
    for m in range(3, 12):
        for n in range(m, (s - 1) * m + 1):
            r = (s - 1) * m - n
            if not 0 <= r <= m - 1:
                continue
            G = construct_circular(s, m, n)
            assert (G.v, G.e) == (n, m)
            ov = _overlaps(G)
            if (s, m, n) == (3, 3, 4):
                # 4-vertex circle: edges 1 and 2 also meet across the wrap
                assert ov == [2, 2, 2] and is_strictly_balanced(G).strictly_balanced
                continue
            assert set(ov) <= {1, 2} and ov.count(2) == r
            assert len(components(G)) == 1


def test_lift_examples():
    L = lift_arity(make_hypergraph(2, 2, [[0, 1]]))
    assert L.arity == 3 and L.v == 4 and L.edges == ((0, 1, 2), (0, 2, 3))
    L = lift_arity(make_hypergraph(3, 3, [[0, 1, 2]]))
    assert (L.arity, L.v, L.e) == (4, 6, 2)
    with pytest.raises(ConstructionError):
        lift_arity(make_hypergraph(2, 4, [[0, 1], [2, 3]]))


def test_lift_preserves_density():
    G = construct_circular(3, 4, 7)
    L = lift_arity(G)
    assert L.density() == G.density() and L.arity == 4
    assert is_strictly_balanced(L).strictly_balanced


def test_dispatcher_examples():
    assert construct_strictly_balanced(DensityTarget(3, Fraction(2, 5))).edges == ((0, 1, 2), (2, 3, 4))
    G = construct_strictly_balanced(DensityTarget(4, Fraction(3, 5)))
    assert G.arity == 4 and G.density() == Fraction(3, 5) and G.v == 10
    assert construct_strictly_balanced(DensityTarget(3, Fraction(1, 3))).e == 1
    with pytest.raises(InfeasibleDensity) as exc:
        construct_strictly_balanced(DensityTarget(3, Fraction(3, 10)))
    assert "3/10" in str(exc.value)


def test_graph_search_branch():
    G = construct_strictly_balanced(DensityTarget(2, Fraction(3, 2)))
    assert G.density() == Fraction(3, 2)
    with pytest.raises(SearchCapExceeded):
        construct_strictly_balanced(DensityTarget(2, Fraction(7, 2)), max_search_vertices=6)


def test_graph_search_first_in_order():
    # K4 is the only strictly balanced graph of density 3/2 on 4 vertices
    G = search_strictly_balanced_graph(Fraction(3, 2), 4)
    assert G.edges == tuple(itertools.combinations(range(4), 2))


def test_feasibility():
    assert DensityTarget(3, Fraction(1, 2)).feasible
    assert DensityTarget(3, Fraction(3, 7)).feasible  # tree with k=3
    assert not DensityTarget(3, Fraction(2, 5) + Fraction(1, 100)).feasible
    assert DensityTarget(4, Fraction(2, 7)).tree_edges == 2
