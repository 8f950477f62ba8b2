"""Named graphs used throughout the package.

The ten-vertex undirected graph R and its relatives are the central objects:
R is the union of ten triangles plus two extra undirected edges; R_minus
drops the edge {9,10}; R_c clones vertices 8, 9, 10; R_c_minus removes the
undirected edge {3,8} from R_c; R_c_plus restores it in one direction only;
R_S / R_L make vertex 1 a broadcast source / sink.

Vertex labels: the literature numbers vertices 1..10 with clones written
8', 9', 10'.  Internally everything is 0-based: label v becomes index v-1,
and the clones 8', 9', 10' become indices 10, 11, 12.
"""

from __future__ import annotations

from itertools import combinations
from typing import List

from .digraph import Digraph, GraphError, add_broadcast_edges, blowup, is_clique

#: the ten triangles of R, in 1-based labels
R_TRIANGLES = [
    (1, 2, 3),
    (1, 4, 5),
    (1, 6, 7),
    (2, 3, 9),
    (2, 7, 10),
    (3, 8, 9),
    (4, 5, 10),
    (4, 8, 10),
    (5, 6, 9),
    (6, 7, 8),
]

#: extra undirected edges of R beyond the triangles (1-based)
R_EXTRA_EDGES = [(3, 4), (9, 10)]

#: clone index mapping: 1-based label -> internal index (primes at 10,11,12)
CLONED_LABELS = {8: 10, 9: 11, 10: 12}


def _undirected(n: int, pairs) -> Digraph:
    edges = []
    for u, v in pairs:
        edges.append((u, v))
        edges.append((v, u))
    return Digraph(n, edges)


def _build_r(with_9_10: bool) -> Digraph:
    pairs = set()
    for t in R_TRIANGLES:
        for a, b in combinations(t, 2):
            pairs.add((a - 1, b - 1))
    extra = R_EXTRA_EDGES if with_9_10 else R_EXTRA_EDGES[:1]
    for a, b in extra:
        pairs.add((a - 1, b - 1))
    return _undirected(10, pairs)


def _build_rc() -> Digraph:
    G, _ = blowup(_build_r(True), [1] * 7 + [2, 2, 2])
    # blowup's class-major order puts the clone of label v right after v;
    # relabel so the three clones come last: blowup vertices 7,8 (copies of
    # label 8) -> 7,10; 9,10 (label 9) -> 8,11; 11,12 (label 10) -> 9,12
    perm = [0, 1, 2, 3, 4, 5, 6, 7, 10, 8, 11, 9, 12]
    return Digraph(13, ((perm[u], perm[v]) for u, v in G.edges))


def _named_families(name: str) -> Digraph:
    kind, _, num = name.partition("_")
    n = int(num)
    if n < 0:
        raise GraphError(f"negative order in gallery name {name!r}")
    if kind == "K":
        return _undirected(n, combinations(range(n), 2))
    if kind == "C":
        if n < 3:
            raise GraphError("cycles need at least 3 vertices")
        return _undirected(n, ((i, (i + 1) % n) for i in range(n)))
    if kind == "empty":
        return Digraph(n, [])
    raise GraphError(f"unknown gallery name {name!r}")


def gallery(name: str) -> Digraph:
    """Look up a named graph.

    Accepted names: K_n, C_n, empty_n, directed_cycle_n, R, R_minus, R_c,
    R_c_minus, R_c_plus, R_S, R_L.
    """
    if name == "R":
        return _build_r(True)
    if name == "R_minus":
        return _build_r(False)
    if name == "R_c":
        return _build_rc()
    if name == "R_c_minus":
        Rc = _build_rc()
        return Digraph(13, Rc.edges - {(2, 7), (7, 2)})
    if name == "R_c_plus":
        Rcm = gallery("R_c_minus")
        return Digraph(13, set(Rcm.edges) | {(2, 7)})
    if name == "R_S":
        return add_broadcast_edges(_build_r(True), 0, "superman")
    if name == "R_L":
        return add_broadcast_edges(_build_r(True), 0, "luthor")
    if name.startswith("directed_cycle_"):
        n = int(name[len("directed_cycle_") :])
        if n < 2:
            raise GraphError("directed cycles need at least 2 vertices")
        return Digraph(n, (((i, (i + 1) % n)) for i in range(n)))
    if name.partition("_")[0] in ("K", "C", "empty") and name.partition("_")[2].isdigit():
        return _named_families(name)
    raise GraphError(f"unknown gallery name {name!r}")


def gallery_names() -> List[str]:
    """The fixed named graphs plus the parametric family patterns."""
    return [
        "R",
        "R_minus",
        "R_c",
        "R_c_minus",
        "R_c_plus",
        "R_S",
        "R_L",
        "K_<n>",
        "C_<n>",
        "empty_<n>",
        "directed_cycle_<n>",
    ]


def check_gallery_consistency() -> None:
    """Structural sanity checks pinning down the transcription of R.

    Raises GraphError on any failure.  Checks: R is a 10-vertex undirected
    graph with clique number 3 containing every listed triangle and the two
    extra edges, and vertex 9 sees at least {2,3,5,6,8,10}; R_c has 13
    vertices and each clone's neighbourhood matches its original.
    """
    R = gallery("R")
    if R.n != 10 or not R.is_undirected():
        raise GraphError("R must be undirected on 10 vertices")
    from .digraph import clique_number

    if clique_number(R) != 3:
        raise GraphError("R must have clique number 3")
    for t in R_TRIANGLES:
        if not is_clique(R, [v - 1 for v in t]):
            raise GraphError(f"triangle {t} missing from R")
    for a, b in [(9, 10), (3, 8)]:
        if not R.has_undirected_edge(a - 1, b - 1):
            raise GraphError(f"edge {{{a},{b}}} missing from R")
    needed = {v - 1 for v in (2, 3, 5, 6, 8, 10)}
    if not needed <= R.undirected_neighbours(8):
        raise GraphError("vertex 9 lacks required neighbours")
    Rc = gallery("R_c")
    if Rc.n != 13:
        raise GraphError("R_c must have 13 vertices")
    for label, clone in CLONED_LABELS.items():
        orig = label - 1
        expect = Rc.undirected_neighbours(orig) - {clone}
        got = Rc.undirected_neighbours(clone) - {orig}
        if expect != got:
            raise GraphError(f"clone of vertex {label} has wrong neighbourhood")
