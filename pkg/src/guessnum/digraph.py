"""Loopless digraphs and the constructions used throughout the package.

Vertices are labelled 0..n-1.  Undirected edges are represented as the pair
of directed edges (u,v) and (v,u).  All values are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

Edge = Tuple[int, int]


class GraphError(ValueError):
    pass


class Digraph:
    """Immutable loopless directed graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "_in", "_out", "_und")

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise GraphError("negative vertex count")
        es = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in es:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        object.__setattr__ if False else None
        self.n = n
        self.edges = es
        ins: List[Set[int]] = [set() for _ in range(n)]
        outs: List[Set[int]] = [set() for _ in range(n)]
        for u, v in es:
            outs[u].add(v)
            ins[v].add(u)
        self._in = tuple(frozenset(s) for s in ins)
        self._out = tuple(frozenset(s) for s in outs)
        self._und = tuple(
            frozenset(v for v in self._out[u] if u in self._out[v]) for u in range(n)
        )

    # -- basic queries ----------------------------------------------------

    def in_neighbours(self, v: int) -> FrozenSet[int]:
        self._check_vertex(v)
        return self._in[v]

    def out_neighbours(self, v: int) -> FrozenSet[int]:
        self._check_vertex(v)
        return self._out[v]

    def undirected_neighbours(self, v: int) -> FrozenSet[int]:
        """Vertices joined to v by an undirected edge (both directions)."""
        self._check_vertex(v)
        return self._und[v]

    def has_undirected_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges and (v, u) in self.edges

    def is_undirected(self) -> bool:
        return all((v, u) in self.edges for u, v in self.edges)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"vertex {v} out of range for n={self.n}")

    # -- equality / hashing ----------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Digraph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Digraph(n={self.n}, m={len(self.edges)})"


def neighbourhoods(G: Digraph, v: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """(in-neighbourhood, out-neighbourhood) of v."""
    return G.in_neighbours(v), G.out_neighbours(v)


# -- constructions --------------------------------------------------------


class BlowupLabel:
    """Bijection between blowup vertices and (original vertex, copy index).

    Copy ordering is class-major: all copies of vertex 0 first, then vertex 1,
    and so on, so strategies referencing blowup vertices are stable.
    """

    def __init__(self, multiplicities: Sequence[int]):
        self.multiplicities = tuple(int(t) for t in multiplicities)
        self._start = []
        acc = 0
        for t in self.multiplicities:
            self._start.append(acc)
            acc += t
        self.total = acc

    def index(self, v: int, copy: int) -> int:
        if not (0 <= copy < self.multiplicities[v]):
            raise GraphError(f"copy {copy} out of range for vertex {v}")
        return self._start[v] + copy

    def original(self, i: int) -> Tuple[int, int]:
        if not (0 <= i < self.total):
            raise GraphError(f"blowup vertex {i} out of range")
        for v, s in enumerate(self._start):
            if s <= i < s + self.multiplicities[v]:
                return v, i - s
        raise AssertionError("unreachable")


def blowup(G: Digraph, multiplicities: Sequence[int]) -> Tuple[Digraph, BlowupLabel]:
    """Blow each vertex v up into multiplicities[v] copies (no intra-class edges)."""
    if len(multiplicities) != G.n:
        raise GraphError("multiplicity list length must equal vertex count")
    if any(t < 1 for t in multiplicities):
        raise GraphError("multiplicities must be >= 1")
    lab = BlowupLabel(multiplicities)
    edges = []
    for u, v in G.edges:
        for i in range(multiplicities[u]):
            for j in range(multiplicities[v]):
                edges.append((lab.index(u, i), lab.index(v, j)))
    return Digraph(lab.total, edges), lab


def uniform_blowup(G: Digraph, t: int) -> Tuple[Digraph, BlowupLabel]:
    return blowup(G, [t] * G.n)


def reverse(G: Digraph) -> Digraph:
    return Digraph(G.n, ((v, u) for u, v in G.edges))


def induced_subgraph(G: Digraph, S: Iterable[int]) -> Digraph:
    """Induced subgraph with vertices relabelled 0..|S|-1 preserving order."""
    S = sorted(set(S))
    for v in S:
        G._check_vertex(v)
    pos = {v: i for i, v in enumerate(S)}
    edges = [(pos[u], pos[v]) for u, v in G.edges if u in pos and v in pos]
    return Digraph(len(S), edges)


def add_broadcast_edges(G: Digraph, v: int, mode: str) -> Digraph:
    """Make v a superman vertex (out-edges to all) or a luthor vertex (in-edges)."""
    G._check_vertex(v)
    if mode not in ("superman", "luthor"):
        raise GraphError(f"unknown mode {mode!r}")
    extra = []
    for u in range(G.n):
        if u == v:
            continue
        e = (v, u) if mode == "superman" else (u, v)
        if e not in G.edges:
            extra.append(e)
    return Digraph(G.n, list(G.edges) + extra)


def relabel(G: Digraph, perm: Sequence[int]) -> Digraph:
    """Apply the vertex relabelling v -> perm[v]."""
    if sorted(perm) != list(range(G.n)):
        raise GraphError("relabelling must be a permutation")
    return Digraph(G.n, ((perm[u], perm[v]) for u, v in G.edges))


# -- clique enumeration ---------------------------------------------------


def enumerate_cliques(G: Digraph, maximal_only: bool = True) -> List[FrozenSet[int]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), or all nonempty cliques.

    Cliques use undirected adjacency: every pair joined in both directions.
    Output is sorted lexicographically by sorted vertex list, each clique once.
    """
    adj = [G.undirected_neighbours(v) for v in range(G.n)]
    maximal: List[FrozenSet[int]] = []

    def expand(clique: Set[int], cand: Set[int], excl: Set[int]) -> None:
        if not cand and not excl:
            maximal.append(frozenset(clique))
            return
        pivot = max(cand | excl, key=lambda u: len(cand & adj[u]))
        for v in sorted(cand - adj[pivot]):
            expand(clique | {v}, cand & adj[v], excl & adj[v])
            cand.discard(v)
            excl.add(v)

    if G.n:
        expand(set(), set(range(G.n)), set())
    if maximal_only:
        return sorted(maximal, key=lambda c: sorted(c))
    seen: Set[FrozenSet[int]] = set()
    for m in maximal:
        ms = sorted(m)
        for k in range(1, len(ms) + 1):
            for sub in combinations(ms, k):
                seen.add(frozenset(sub))
    return sorted(seen, key=lambda c: sorted(c))


def clique_number(G: Digraph) -> int:
    if G.n == 0:
        return 0
    return max(len(c) for c in enumerate_cliques(G, maximal_only=True))


def independence_number(G: Digraph) -> int:
    """Size of a maximum set with no undirected edge inside (exhaustive with pruning)."""
    adj = [G.undirected_neighbours(v) for v in range(G.n)]
    best = 0

    def grow(chosen: int, cand: List[int]) -> None:
        nonlocal best
        if chosen + len(cand) <= best:
            return
        if not cand:
            best = max(best, chosen)
            return
        v = cand[0]
        grow(chosen + 1, [u for u in cand[1:] if u not in adj[v]])
        grow(chosen, cand[1:])

    grow(0, list(range(G.n)))
    return best


def is_clique(G: Digraph, verts: Iterable[int]) -> bool:
    vs = sorted(set(verts))
    return all(G.has_undirected_edge(u, v) for u, v in combinations(vs, 2))
