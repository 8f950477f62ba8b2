"""Linear guessing strategies and the brute-force oracle.

A linear strategy over a prime alphabet s is a system of congruences
sum_v c_v a_v = 0 (mod s).  It is playable when every player v can derive a
rule for a_v from rows whose combined support lies in {v} union in(v); the
win probability is s^(-rank) with rank taken over the field with s elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .digraph import Digraph, GraphError, uniform_blowup
from .rat import Q, rat


class StrategyError(ValueError):
    pass


def _is_prime(s: int) -> bool:
    if s < 2:
        return False
    i = 2
    while i * i <= s:
        if s % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# modular linear algebra
# ---------------------------------------------------------------------------


def _row_reduce(rows: List[List[int]], s: int) -> Tuple[List[List[int]], List[int]]:
    """Row-echelon form mod prime s; returns (reduced rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] % s), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], s - 2, s)
        M[r] = [(x * inv) % s for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] % s:
                f = M[i][c]
                M[i] = [(x - f * y) % s for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def matrix_rank_mod(rows: List[List[int]], s: int) -> int:
    return len(_row_reduce(rows, s)[0])


# ---------------------------------------------------------------------------
# linear strategies
# ---------------------------------------------------------------------------


@dataclass
class Derivation:
    """Row multipliers lambda giving player v a guessing rule.

    lambda . M is supported on {v} union in(v) with a nonzero coefficient
    at v; combined_row is that product reduced mod s.
    """

    vertex: int
    multipliers: List[int]
    combined_row: Dict[int, int]


@dataclass
class LinearStrategy:
    """Congruence rows over Z_s on the vertices of a host graph.

    The host may be a uniform blowup of a base graph, in which case
    blowup_t and base_graph record the construction for bound reporting.
    """

    graph: Digraph
    s: int
    rows: List[Dict[int, int]]
    blowup_t: int = 1
    base_graph: Optional[Digraph] = None

    def __post_init__(self):
        if not _is_prime(self.s):
            raise StrategyError(f"modulus {self.s} is not prime")
        clean = []
        for row in self.rows:
            for v in row:
                self.graph._check_vertex(v)
            r = {v: c % self.s for v, c in row.items() if c % self.s}
            clean.append(r)
        self.rows = clean

    def dense_rows(self) -> List[List[int]]:
        n = self.graph.n
        return [[row.get(v, 0) for v in range(n)] for row in self.rows]

    def rank(self) -> int:
        if not self.rows:
            return 0
        return matrix_rank_mod(self.dense_rows(), self.s)


def validate_playable(G: Digraph, strat: LinearStrategy) -> List[Derivation]:
    """A Derivation for every vertex, or StrategyError naming the first failure.

    For vertex v we solve, over the field with s elements, for multipliers
    lambda with (lambda M)_u = 0 for every u outside {v} union in(v) and
    (lambda M)_v != 0.  The search parametrizes the left-kernel of the
    forbidden columns in row-echelon form and returns the first basis
    combination that hits v, which is deterministic.
    """
    if strat.graph != G:
        raise StrategyError("strategy host graph mismatch")
    s = strat.s
    M = strat.dense_rows()
    if not M:
        raise StrategyError("empty strategy is unplayable")
    m, n = len(M), G.n
    out = []
    for v in range(n):
        allowed = {v} | set(G.in_neighbours(v))
        forbidden = [u for u in range(n) if u not in allowed]
        # left-kernel of M restricted to forbidden columns: solve x A = 0
        # where A = M[:, forbidden]; i.e. kernel of A^T
        AT = [[M[i][u] for i in range(m)] for u in forbidden]
        red, pivots = _row_reduce(AT, s) if AT else ([], [])
        free = [c for c in range(m) if c not in pivots]
        basis = []
        for f in free:
            lam = [0] * m
            lam[f] = 1
            for r_i, c in enumerate(pivots):
                lam[c] = (-red[r_i][f]) % s
            basis.append(lam)
        if not AT:
            basis = [[1 if i == j else 0 for i in range(m)] for j in range(m)]
        chosen = None
        for lam in basis:
            coeff_v = sum(lam[i] * M[i][v] for i in range(m)) % s
            if coeff_v:
                chosen = lam
                break
        if chosen is None:
            raise StrategyError(f"vertex {v} has no derivation: strategy unplayable")
        combined = {
            u: sum(chosen[i] * M[i][u] for i in range(m)) % s for u in range(n)
        }
        combined = {u: c for u, c in combined.items() if c}
        assert set(combined) <= allowed and combined.get(v)
        out.append(Derivation(v, chosen, combined))
    return out


def win_probability(strat: LinearStrategy):
    """s^(-rank): the winning assignments are the homogeneous solutions."""
    validate_playable(strat.graph, strat)
    return Q(1, strat.s ** strat.rank())


def gn_lower_bound(G: Digraph, strat: LinearStrategy):
    """(t n - rank)/t: certified lower bound on the asymptotic guessing number.

    G is the base graph; the strategy lives on its uniform t-blowup.
    """
    t = strat.blowup_t
    if strat.graph.n != t * G.n:
        raise StrategyError("strategy host is not the declared blowup of G")
    validate_playable(strat.graph, strat)
    return Q(t * G.n - strat.rank(), t)


# ---------------------------------------------------------------------------
# builtin strategies
# ---------------------------------------------------------------------------

#: the four congruence rows of the 13-vertex cloned-graph strategy, mod 3,
#: on internal labels (clones of 8,9,10 at indices 10,11,12)
RC_ROWS = [
    {0: 1, 1: 1, 2: 2, 3: 1, 4: 2, 5: 1, 6: 2},
    {1: 1, 4: 1, 7: 1, 10: 1, 8: 1, 12: 1},
    {2: 1, 5: 1, 7: 1, 11: 1, 9: 1, 12: 1},
    {3: 1, 6: 1, 10: 1, 8: 1, 11: 1, 9: 1},
]


def _shift_rows(rows, mapping) -> List[Dict[int, int]]:
    return [{mapping[v]: c for v, c in row.items()} for row in rows]


def _r_blowup4() -> LinearStrategy:
    from .gallery import gallery

    R = gallery("R")
    H, lab = uniform_blowup(R, 4)

    def ix(v, copy):  # v is a 1-based label, copy in 'abcd'
        return lab.index(v - 1, "abcd".index(copy))

    cliques = [
        [("1", "a"), ("2", "a"), ("3", "a")],
        [("1", "b"), ("4", "a"), ("5", "a")],
        [("1", "c"), ("6", "a"), ("7", "a")],
        [("2", "b"), ("3", "b"), ("9", "a")],
        [("2", "c"), ("3", "c"), ("9", "b")],
        [("4", "b"), ("5", "b"), ("10", "a")],
        [("4", "c"), ("5", "c"), ("10", "b")],
        [("6", "b"), ("7", "b"), ("8", "a")],
        [("6", "c"), ("7", "c"), ("8", "b")],
    ]
    rows = [{ix(int(v), c): 1 for v, c in k} for k in cliques]
    # the remaining 13 vertices form a copy of the cloned graph: labels
    # 1..7 -> d-copies, (8,8') -> (8_c, 8_d), (9,9') -> (9_c, 9_d),
    # (10,10') -> (10_c, 10_d)
    mapping = {v: ix(v + 1, "d") for v in range(7)}
    mapping.update(
        {7: ix(8, "c"), 10: ix(8, "d"), 8: ix(9, "c"), 11: ix(9, "d"),
         9: ix(10, "c"), 12: ix(10, "d")}
    )
    rows += _shift_rows(RC_ROWS, mapping)
    return LinearStrategy(graph=H, s=3, rows=rows, blowup_t=4, base_graph=R)


def _rcminus_blowup6() -> LinearStrategy:
    from .gallery import gallery

    B = gallery("R_c_minus")
    H, lab = uniform_blowup(B, 6)
    label_to_internal = {str(v): v - 1 for v in range(1, 11)}
    label_to_internal.update({"8'": 10, "9'": 11, "10'": 12})

    def ix(label, copy):
        return lab.index(label_to_internal[label], "abcdef".index(copy))

    cliques = [
        [("1", "a"), ("2", "a"), ("3", "a")],
        [("1", "b"), ("2", "b"), ("7", "a")],
        [("1", "c"), ("3", "b"), ("4", "a")],
        [("2", "c"), ("3", "c"), ("9'", "a")],
        [("4", "b"), ("5", "a"), ("10'", "a")],
        [("4", "c"), ("5", "b"), ("10'", "b")],
        [("5", "c"), ("6", "a"), ("9'", "b")],
        [("6", "b"), ("7", "b"), ("8", "a")],
        [("6", "c"), ("7", "c"), ("8", "b")],
        [("8", "c"), ("9'", "c"), ("10'", "c")],
        [("8", "d"), ("9'", "d"), ("10'", "d")],
        [("8", "e"), ("9'", "e"), ("10'", "e")],
        [("8", "f"), ("9'", "f"), ("10'", "f")],
    ]
    rows = [{ix(v, c): 1 for v, c in k} for k in cliques]
    # three embedded copies of the cloned graph; in each, the clone pair
    # (8, 8') is played by two copies of the 8' class (whose neighbourhood
    # is intact after removing the {3,8} edge)
    for copies in ("d", "e", "f"):
        d = copies
        pair = {"d": ("a", "b"), "e": ("c", "d"), "f": ("e", "f")}[d]
        mapping = {v: ix(str(v + 1), d) for v in range(7)}
        mapping.update(
            {
                7: ix("8'", pair[0]),
                10: ix("8'", pair[1]),
                8: ix("9", pair[0]),
                11: ix("9", pair[1]),
                9: ix("10", pair[0]),
                12: ix("10", pair[1]),
            }
        )
        rows += _shift_rows(RC_ROWS, mapping)
    return LinearStrategy(graph=H, s=3, rows=rows, blowup_t=6, base_graph=B)


def builtin_strategy(name: str, n: Optional[int] = None) -> LinearStrategy:
    """Builtin strategies: kn_sum (requires n), rc, r_blowup4, rcminus_blowup6."""
    from .gallery import gallery

    if name == "kn_sum":
        if n is None:
            raise StrategyError("kn_sum needs the clique size n")
        G = gallery(f"K_{n}")
        return LinearStrategy(graph=G, s=3, rows=[{v: 1 for v in range(n)}])
    if name == "rc":
        G = gallery("R_c")
        return LinearStrategy(graph=G, s=3, rows=[dict(r) for r in RC_ROWS])
    if name == "r_blowup4":
        return _r_blowup4()
    if name == "rcminus_blowup6":
        return _rcminus_blowup6()
    raise StrategyError(f"unknown builtin strategy {name!r}")


def clique_sum_strategy(G: Digraph, clique: Sequence[int], s: int = 3) -> LinearStrategy:
    """The complete-graph strategy on one clique: members assume a zero sum."""
    from .digraph import is_clique

    if not is_clique(G, clique):
        raise StrategyError(f"{sorted(clique)} is not a clique")
    return LinearStrategy(graph=G, s=s, rows=[{v: 1 for v in clique}])


# ---------------------------------------------------------------------------
# strategy files
# ---------------------------------------------------------------------------


def strategy_to_text(strat: LinearStrategy) -> str:
    """Serialize: header s=<prime>, optional blowup=<t>, then `v:c` rows.

    Vertex labels in files are 1-based (internal index + 1).
    """
    lines = [f"s={strat.s}"]
    if strat.blowup_t != 1:
        lines.append(f"blowup={strat.blowup_t}")
    for row in strat.rows:
        lines.append(" ".join(f"{v + 1}:{c}" for v, c in sorted(row.items())))
    return "\n".join(lines) + "\n"


def strategy_from_text(G: Digraph, text: str, blowup_t: Optional[int] = None) -> LinearStrategy:
    """Parse a strategy file against base graph G.

    When the file (or the caller) declares blowup=t, rows address the
    uniform t-blowup of G in class-major order.
    """
    s = None
    t = blowup_t
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("s="):
            s = int(line[2:])
            continue
        if line.startswith("blowup="):
            t = int(line[len("blowup=") :])
            continue
        row = {}
        try:
            for tok in line.split():
                v, _, c = tok.partition(":")
                row[int(v) - 1] = int(c)
        except ValueError as e:
            raise StrategyError(f"line {lineno}: {e}") from e
        rows.append(row)
    if s is None:
        raise StrategyError("strategy file missing s=<prime> header")
    t = t or 1
    host = G if t == 1 else uniform_blowup(G, t)[0]
    return LinearStrategy(graph=host, s=s, rows=rows, blowup_t=t, base_graph=G)


# ---------------------------------------------------------------------------
# pure strategy tables and the brute-force oracle
# ---------------------------------------------------------------------------


@dataclass
class PureStrategyTable:
    """Per-vertex guess tables indexed by in-neighbour value tuples.

    In-neighbour tuples are ordered by ascending vertex index.
    """

    graph: Digraph
    s: int
    tables: List[Dict[Tuple[int, ...], int]]


def tables_from_derivations(strat: LinearStrategy, derivations: List[Derivation]) -> PureStrategyTable:
    """Turn playable-strategy derivations into explicit guess tables."""
    G, s = strat.graph, strat.s
    tables = []
    for v in range(G.n):
        ins = sorted(G.in_neighbours(v))
        combined = derivations[v].combined_row
        inv = pow(combined[v], s - 2, s)
        table = {}
        for vals in product(range(s), repeat=len(ins)):
            seen = dict(zip(ins, vals))
            guess = (-inv * sum(c * seen[u] for u, c in combined.items() if u != v)) % s
            table[vals] = guess
        tables.append(table)
    return PureStrategyTable(G, s, tables)


def count_fixed_points(G: Digraph, s: int, F: PureStrategyTable, budget: int = 1 << 20) -> int:
    """Exact number of assignments on which every player guesses correctly."""
    if s ** G.n > budget:
        raise StrategyError(f"assignment space {s}^{G.n} exceeds budget {budget}")
    ins = [sorted(G.in_neighbours(v)) for v in range(G.n)]
    count = 0
    for a in product(range(s), repeat=G.n):
        if all(
            F.tables[v][tuple(a[u] for u in ins[v])] == a[v] for v in range(G.n)
        ):
            count += 1
    return count


def brute_force_gn(G: Digraph, s: int, budget: int = 1 << 22):
    """Exact guessing number by exhausting all pure strategy profiles.

    Returns (gn over the s-alphabet as an exact rational log, max fixed
    points).  The strategy space has size prod_v s^(s^indeg(v)); budget
    caps that product.
    """
    space = 1
    for v in range(G.n):
        per_vertex = s ** (s ** len(G.in_neighbours(v)))
        space *= per_vertex
        if space > budget:
            raise StrategyError(
                f"strategy space blows up at vertex {v} (indeg {len(G.in_neighbours(v))})"
            )
    ins = [sorted(G.in_neighbours(v)) for v in range(G.n)]
    assignments = list(product(range(s), repeat=G.n))
    # per vertex, enumerate every guess function as a tuple over input tuples
    inputs = [list(product(range(s), repeat=len(ins[v]))) for v in range(G.n)]
    per_vertex_tables = [
        [dict(zip(inputs[v], guesses)) for guesses in product(range(s), repeat=len(inputs[v]))]
        for v in range(G.n)
    ]
    best = 0
    for choice in product(*per_vertex_tables):
        cnt = 0
        for a in assignments:
            if all(choice[v][tuple(a[u] for u in ins[v])] == a[v] for v in range(G.n)):
                cnt += 1
        if cnt > best:
            best = cnt
    # gn = n + log_s(best / s^n) = log_s(best); exact when best is a power of s
    k = 0
    b = best
    while b % s == 0:
        b //= s
        k += 1
    if b != 1:
        raise StrategyError(f"maximum fixed-point count {best} is not a power of {s}")
    return Q(k), best
