"""Independent test oracles, deliberately naive.

These re-derive package results from first principles (full inequality
families, exhaustive enumeration) so the optimized implementations are
checked against something they share no code with.
"""

from itertools import combinations

from guessnum.digraph import Digraph
from guessnum.rat import Q


def naive_shannon_constraints(G: Digraph):
    """Every instantiation of the unreduced entropy-polytope families.

    Yields (coeff-by-mask, rel, rhs) rows: H(empty)=0; monotonicity over all
    subset pairs; submodularity H(AC)+H(BC) >= H(ABC)+H(C) over all subset
    triples; per-vertex unit capacity; and the in-neighbourhood functional
    equalities.  No reduction, no deduplication beyond skipping the
    trivially-zero rows.
    """
    n = G.n
    N = 1 << n
    yield ({0: 1}, "=", 0)
    for v in range(n):
        yield ({1 << v: 1}, "<=", 1)
    for B in range(N):
        A = B
        while True:  # all subsets A of B
            A = (A - 1) & B
            if A == B:
                break
            row = {A: 1, B: -1}
            if A != B:
                yield (row, "<=", 0)
            if A == 0:
                break
    for A in range(N):
        for B in range(N):
            for C in range(N):
                Y, Z = A | C, B | C
                row = {}
                for m, c in ((Y, 1), (Z, 1), (Y | Z, -1), (C, -1)):
                    row[m] = row.get(m, 0) + c
                row = {m: c for m, c in row.items() if c}
                if row:
                    # H(Y)+H(Z)-H(YZ)-H(C) >= 0, i.e. -row <= 0 form
                    yield ({m: -c for m, c in row.items()}, "<=", 0)
    for v in range(n):
        g = 0
        for u in G.in_neighbours(v):
            g |= 1 << u
        yield ({g | (1 << v): 1, g: -1}, "=", 0)


def point_satisfies_naive_constraints(G: Digraph, point) -> bool:
    """Exact check of a mask-indexed entropy point against every naive row."""
    for row, rel, rhs in naive_shannon_constraints(G):
        s = sum(Q(c) * Q(point[m]) for m, c in row.items())
        ok = s <= rhs if rel == "<=" else s == rhs
        if not ok:
            return False
    return True


def all_undirected_graphs_up_to_iso(n: int):
    """Every undirected graph on exactly n vertices, one per isomorphism class."""
    from guessnum.search import find_isomorphism

    pairs = list(combinations(range(n), 2))
    reps = []
    for bits in range(1 << len(pairs)):
        edges = []
        for i, (u, v) in enumerate(pairs):
            if (bits >> i) & 1:
                edges += [(u, v), (v, u)]
        G = Digraph(n, edges)
        if not any(find_isomorphism(G, H) is not None for H in reps):
            reps.append(G)
    return reps


def brute_force_with_tables(G: Digraph, s: int):
    """(max fixed points, argmax guess tables), by exhausting all profiles."""
    from itertools import product

    ins = [sorted(G.in_neighbours(v)) for v in range(G.n)]
    assignments = list(product(range(s), repeat=G.n))
    inputs = [list(product(range(s), repeat=len(ins[v]))) for v in range(G.n)]
    tabsets = [
        [dict(zip(inputs[v], gs)) for gs in product(range(s), repeat=len(inputs[v]))]
        for v in range(G.n)
    ]
    best, arg = -1, None
    for choice in product(*tabsets):
        cnt = sum(
            1
            for a in assignments
            if all(choice[v][tuple(a[u] for u in ins[v])] == a[v] for v in range(G.n))
        )
        if cnt > best:
            best, arg = cnt, choice
    return best, arg


def lifted_blowup_fixed_points(G: Digraph, s: int, tables) -> int:
    """Fixed points of playing `tables` independently on each copy of G(2).

    The 2-fold uniform blowup in class-major order has copies (v,0), (v,1);
    each copy consults only the same-index copies of v's in-neighbours, so
    the fixed-point count is the square of the base count.
    """
    from itertools import product

    from guessnum.digraph import uniform_blowup

    H, lab = uniform_blowup(G, 2)
    ins_base = [sorted(G.in_neighbours(v)) for v in range(G.n)]
    count = 0
    for a in product(range(s), repeat=H.n):
        ok = True
        for v in range(G.n):
            for c in (0, 1):
                vals = tuple(a[lab.index(u, c)] for u in ins_base[v])
                if tables[v][vals] != a[lab.index(v, c)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def all_digraphs(n: int):
    """Every labelled loop-free digraph on n vertices."""
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    out = []
    for bits in range(1 << len(arcs)):
        out.append(Digraph(n, [a for i, a in enumerate(arcs) if (bits >> i) & 1]))
    return out
