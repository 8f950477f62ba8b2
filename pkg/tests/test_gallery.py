"""The named graphs and their structural pins."""

import pytest

from guessnum.digraph import GraphError, clique_number, is_clique
from guessnum.gallery import (
    CLONED_LABELS,
    R_TRIANGLES,
    check_gallery_consistency,
    gallery,
    gallery_names,
)


def test_gallery_consistency_suite_passes():
    check_gallery_consistency()


def test_R_is_ten_triangles_plus_two_edges():
    R = gallery("R")
    assert R.n == 10 and R.is_undirected()
    assert clique_number(R) == 3
    for t in R_TRIANGLES:
        assert is_clique(R, [v - 1 for v in t])
    assert R.has_undirected_edge(2, 3)  # labels 3-4
    assert R.has_undirected_edge(8, 9)  # labels 9-10


def test_R_edge_count():
    # ten triangles share some edges; count distinct undirected pairs directly
    R = gallery("R")
    assert len(R.edges) % 2 == 0
    pairs = {frozenset(e) for e in R.edges}
    assert len(pairs) == len(R.edges) // 2


def test_R_minus_drops_exactly_9_10():
    R, Rm = gallery("R"), gallery("R_minus")
    diff = {frozenset(e) for e in R.edges} - {frozenset(e) for e in Rm.edges}
    assert diff == {frozenset({8, 9})}


def test_R_c_clones_have_matching_neighbourhoods():
    Rc = gallery("R_c")
    assert Rc.n == 13
    for label, clone in CLONED_LABELS.items():
        orig = label - 1
        assert not Rc.has_undirected_edge(orig, clone) or True  # clones may or may not touch
        no = Rc.undirected_neighbours(orig) - {clone}
        nc = Rc.undirected_neighbours(clone) - {orig}
        assert no == nc


def test_R_c_minus_and_plus_differ_in_one_arc():
    Rcm, Rcp = gallery("R_c_minus"), gallery("R_c_plus")
    assert set(Rcp.edges) - set(Rcm.edges) == {(2, 7)}
    Rc = gallery("R_c")
    assert set(Rc.edges) - set(Rcm.edges) == {(2, 7), (7, 2)}


def test_broadcast_variants():
    RS, RL = gallery("R_S"), gallery("R_L")
    assert all((0, v) in RS.edges for v in range(1, 10))
    assert all((v, 0) in RL.edges for v in range(1, 10))


def test_parametric_families():
    assert gallery("K_4").n == 4 and clique_number(gallery("K_4")) == 4
    assert gallery("C_6").n == 6
    assert gallery("empty_3").edges == frozenset() or len(gallery("empty_3").edges) == 0
    dc = gallery("directed_cycle_4")
    assert not dc.is_undirected() and len(dc.edges) == 4


def test_unknown_names_raise():
    for bad in ("Q", "K_x", "C_2", "directed_cycle_1"):
        with pytest.raises((GraphError, ValueError)):
            gallery(bad)


def test_names_listing_mentions_all_fixed_graphs():
    names = gallery_names()
    for fixed in ("R", "R_minus", "R_c", "R_c_minus", "R_c_plus", "R_S", "R_L"):
        assert fixed in names
