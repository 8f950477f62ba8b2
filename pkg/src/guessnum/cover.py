"""Fractional and integral clique covers.

kappa_f(G) is the minimum total weight of a fractional clique cover,
computed as an exact LP over the maximal cliques (any weight on a
non-maximal clique can be moved to a maximal superset, so the optimum is
unchanged).  A regular cover (every vertex covered with weight exactly 1)
synthesizes a linear guessing strategy on the d-fold blowup, where d is the
lcm of the weight denominators; this yields the lower bound
gn(G) >= |V(G)| - kappa_f(G).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict, FrozenSet, List, Tuple

from .digraph import Digraph, GraphError, clique_number, enumerate_cliques, is_clique
from .lp import LinProgram, solve
from .rat import Q, fmt, rat


class CoverError(ValueError):
    pass


@dataclass
class FractionalCover:
    """Weighted cliques of a graph; weights are exact rationals in [0,1]."""

    graph: Digraph
    weights: List[Tuple[FrozenSet[int], object]]

    def total_weight(self):
        return sum((Q(w) for _, w in self.weights), Q(0))

    def coverage(self, v: int):
        return sum((Q(w) for k, w in self.weights if v in k), Q(0))

    def is_feasible(self) -> bool:
        return all(self.coverage(v) >= 1 for v in range(self.graph.n))

    def is_regular(self) -> bool:
        return all(self.coverage(v) == 1 for v in range(self.graph.n))

    def validate(self) -> None:
        for k, w in self.weights:
            if not is_clique(self.graph, k):
                raise CoverError(f"{sorted(k)} is not a clique")
            if not (0 <= Q(w) <= 1):
                raise CoverError(f"weight {fmt(w)} outside [0,1]")
        if not self.is_feasible():
            v = next(v for v in range(self.graph.n) if self.coverage(v) < 1)
            raise CoverError(f"vertex {v} covered with weight {fmt(self.coverage(v))} < 1")

    def to_text(self) -> str:
        lines = []
        for k, w in self.weights:
            lines.append(f"{fmt(w)}: {','.join(map(str, sorted(k)))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, graph: Digraph, text: str) -> "FractionalCover":
        weights = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                w, _, vs = line.partition(":")
                clique = frozenset(int(x) for x in vs.split(","))
                weights.append((clique, rat(w)))
            except ValueError as e:
                raise CoverError(f"line {lineno}: {e}") from e
        return cls(graph, weights)


def _require_undirected(G: Digraph) -> None:
    if not G.is_undirected():
        raise CoverError("clique covers are defined for undirected graphs only")


def fractional_clique_cover_number(G: Digraph):
    """Exact kappa_f(G) and an optimal cover over maximal cliques.

    Returns (kappa_f, FractionalCover).  Asserts the clique-number lower
    bound kappa_f >= |V|/omega.
    """
    _require_undirected(G)
    if G.n == 0:
        raise CoverError("kappa_f undefined on the empty graph")
    cliques = enumerate_cliques(G, maximal_only=True)
    lp = LinProgram(len(cliques), sense="min")
    lp.set_objective({j: 1 for j in range(len(cliques))})
    lp.set_nonneg(range(len(cliques)))
    for v in range(G.n):
        row = {j: 1 for j, k in enumerate(cliques) if v in k}
        lp.add_constraint(f"cover:{v}", row, ">=", 1)
    out = solve(lp, mode="exact")
    if out.status != "optimal":
        raise CoverError(f"cover LP {out.status}")
    weights = [
        (cliques[j], out.primal[j]) for j in range(len(cliques)) if out.primal[j] != 0
    ]
    cover = FractionalCover(G, weights)
    cover.validate()
    kf = out.value
    assert kf * clique_number(G) >= G.n, "clique-number lower bound violated"
    return kf, cover


def regularize_cover(G: Digraph, cover: FractionalCover) -> FractionalCover:
    """Redistribute weight until every vertex is covered with weight exactly 1.

    For an over-covered vertex v (lowest index first), pick the positive-weight
    clique k1 containing v that is lexicographically smallest; lower w(k1) to
    max(0, 1 - coverage of v by the other cliques) and move the removed weight
    to k1 \\ {v}.  Total weight is preserved exactly at every step.
    """
    cover.validate()
    w: Dict[FrozenSet[int], object] = {}
    for k, wt in cover.weights:
        w[k] = w.get(k, Q(0)) + Q(wt)

    def coverage(v):
        return sum((wt for k, wt in w.items() if v in k), Q(0))

    v = 0
    while v < G.n:
        c = coverage(v)
        if c == 1:
            v += 1
            continue
        candidates = sorted(
            (k for k, wt in w.items() if v in k and wt > 0), key=lambda k: sorted(k)
        )
        k1 = candidates[0]
        others = c - w[k1]
        new_w = max(Q(0), Q(1) - others)
        moved = w[k1] - new_w
        w[k1] = new_w
        k1p = k1 - {v}
        if k1p:
            w[k1p] = w.get(k1p, Q(0)) + moved
        elif moved != 0:
            # dropping the last vertex of a singleton clique discards the
            # weight; that would change the total, so it cannot happen for a
            # vertex over-covered by other cliques (others >= 1 => new_w = 0
            # only when the singleton's weight was pure excess)
            raise CoverError("cannot regularize: excess weight on a singleton")
        if w[k1] == 0:
            del w[k1]
    out = FractionalCover(G, sorted(w.items(), key=lambda kw: sorted(kw[0])))
    assert out.is_regular()
    assert out.total_weight() == cover.total_weight()
    return out


def minimum_clique_cover(G: Digraph, cap: int = 13) -> int:
    """Minimum number of vertex-disjoint cliques partitioning V (exact search)."""
    _require_undirected(G)
    if G.n > cap:
        raise CoverError(f"minimum clique cover capped at {cap} vertices")
    if G.n == 0:
        return 0
    maximal = enumerate_cliques(G, maximal_only=True)
    best = G.n + 1

    def cover(remaining: FrozenSet[int], used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if not remaining:
            best = used
            return
        v = min(remaining)
        # cliques through v, restricted to remaining vertices, largest first
        options = sorted(
            {k & remaining for k in maximal if v in k}, key=len, reverse=True
        )
        for k in options:
            cover(remaining - k, used + 1)

    cover(frozenset(range(G.n)), 0)
    return best


def fcc_lower_bound(G: Digraph):
    """|V(G)| - kappa_f(G): a certified lower bound on the guessing number."""
    kf, _ = fractional_clique_cover_number(G)
    return Q(G.n) - kf


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def cover_to_linear_strategy(G: Digraph, cover: FractionalCover):
    """Turn a regular cover into a congruence strategy on a uniform blowup.

    Returns (t, LinearStrategy): with d the lcm of the weight denominators,
    clique k receives d*w(k) rows on the blowup G(d), each row an all-ones
    sum constraint over one fresh copy of every member vertex.  Regularity
    means each blowup vertex is used exactly once, so the rows have disjoint
    supports and rank d*kappa_f.
    """
    from .digraph import uniform_blowup
    from .strategy import LinearStrategy

    if not cover.is_regular():
        raise CoverError("strategy synthesis needs a regular cover")
    d = 1
    for _, w in cover.weights:
        d = _lcm(d, int(Q(w).denominator))
    H, lab = uniform_blowup(G, d)
    next_copy = [0] * G.n
    rows = []
    for k, w in sorted(cover.weights, key=lambda kw: sorted(kw[0])):
        copies = int(Q(w) * d)
        for _ in range(copies):
            row = {}
            for v in sorted(k):
                row[lab.index(v, next_copy[v])] = 1
                next_copy[v] += 1
            rows.append(row)
    assert all(next_copy[v] == d for v in range(G.n))
    return d, LinearStrategy(graph=H, s=3, rows=rows, blowup_t=d, base_graph=G)
