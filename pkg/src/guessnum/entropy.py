"""Entropy-polytope upper bounds on the guessing number.

The Shannon bound is the LP maximum of H(V) over vectors indexed by vertex
subsets, subject to the reduced elemental constraint set:

* H(empty) = 0 and H({v}) <= 1 per vertex,
* H(Y) <= H(V) for every Y with |Y| = n-1,
* submodularity on subset pairs differing in one element each
  (n(n-1)2^(n-3) rows),
* functional rows H({v} union in(v)) = H(in(v)) per vertex.

Non-Shannon bounds tighten this LP with instantiations of four-set-variable
inequalities (Zhang-Yeung, Ingleton, or a file-loaded set) added by a
cutting-plane loop.  Graph automorphisms are exploited by merging the LP
variables of masks in the same orbit, which leaves the optimum unchanged.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .digraph import Digraph
from .lp import EQ, DualCertificate, LinProgram, LPError, extract_certificate, solve
from .rat import Q, fmt, rat


class EntropyError(Exception):
    pass


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------


def automorphisms(G: Digraph, cap: int = 13) -> List[Tuple[int, ...]]:
    """The full automorphism group, by backtracking with neighbourhood pruning."""
    if G.n > cap:
        raise EntropyError(f"automorphism search capped at {cap} vertices")
    n = G.n
    out_adj = [G.out_neighbours(v) for v in range(n)]
    in_adj = [G.in_neighbours(v) for v in range(n)]
    sig = [(len(in_adj[v]), len(out_adj[v])) for v in range(n)]
    perms: List[Tuple[int, ...]] = []
    perm = [-1] * n
    used = [False] * n

    def extend(v: int) -> None:
        if v == n:
            perms.append(tuple(perm))
            return
        for w in range(n):
            if used[w] or sig[w] != sig[v]:
                continue
            ok = True
            for u in range(v):
                if ((u in in_adj[v]) != (perm[u] in in_adj[w])) or (
                    (u in out_adj[v]) != (perm[u] in out_adj[w])
                ):
                    ok = False
                    break
            if ok:
                perm[v] = w
                used[w] = True
                extend(v + 1)
                used[w] = False
                perm[v] = -1

    extend(0)
    return perms


def _orbit_representatives(n: int, autos: Sequence[Tuple[int, ...]]) -> np.ndarray:
    """rep[mask] = minimum of the mask's orbit under the group (vectorized)."""
    N = 1 << n
    masks = np.arange(N, dtype=np.int64)
    rep = masks.copy()
    for p in autos:
        img = np.zeros(N, dtype=np.int64)
        for i in range(n):
            img |= ((masks >> i) & 1) << p[i]
        rep = np.minimum(rep, img)
    return rep


# ---------------------------------------------------------------------------
# the Shannon LP
# ---------------------------------------------------------------------------


@dataclass
class ShannonSystem:
    """A Shannon LP with its mask-to-column mapping.

    Without symmetry reduction colof is the identity on masks; with it,
    automorphism-orbit masks share one column.  Row identifiers name the
    first generating row in a fixed enumeration order, so rebuilding the
    system for the same graph reproduces them exactly.
    """

    graph: Digraph
    lp: LinProgram
    colof: np.ndarray  # mask -> variable column
    n_masks: int

    @property
    def objective_col(self) -> int:
        return int(self.colof[self.n_masks - 1])


def _shannon_row_stream(G: Digraph):
    """Yield (ident, mask-coeff dict, rel, rhs) in a fixed order."""
    n = G.n
    full = (1 << n) - 1
    yield ("empty", {0: 1}, EQ, 0)
    for v in range(n):
        yield (f"unit:{v}", {1 << v: 1}, "<=", 1)
    for v in range(n):
        yield (f"mono:{v}", {full ^ (1 << v): 1, full: -1}, "<=", 0)
    for u in range(n):
        for v in range(u + 1, n):
            rest = [w for w in range(n) if w != u and w != v]
            for k in range(1 << max(n - 2, 0)):
                W = 0
                for i, w in enumerate(rest):
                    if (k >> i) & 1:
                        W |= 1 << w
                Y = W | (1 << u)
                Z = W | (1 << v)
                # H(Y)+H(Z) >= H(YuZ)+H(YnZ), written as <= 0
                yield (f"sub:{u},{v},{W}", {Y: -1, Z: -1, Y | Z: 1, W: 1}, "<=", 0)
    for v in range(n):
        g = 0
        for u in G.in_neighbours(v):
            g |= 1 << u
        yield (f"func:{v}", {g | (1 << v): 1, g: -1}, EQ, 0)


def build_shannon_lp(G: Digraph, symmetry: bool = False) -> ShannonSystem:
    """The Shannon bound LP; with symmetry=True, orbit masks share a column."""
    if G.n < 1:
        raise EntropyError("need at least one vertex")
    n = G.n
    N = 1 << n
    if symmetry:
        rep = _orbit_representatives(n, automorphisms(G))
        uniq = np.unique(rep)
        col = -np.ones(N, dtype=np.int64)
        col[uniq] = np.arange(len(uniq))
        colof = col[rep]
        nv = len(uniq)
    else:
        colof = np.arange(N, dtype=np.int64)
        nv = N
    lp = LinProgram(nv, sense="max")
    lp.set_objective({int(colof[N - 1]): 1})
    lp.set_nonneg(range(nv))
    seen: Dict[tuple, str] = {}
    for ident, coeffs, rel, rhs in _shannon_row_stream(G):
        row: Dict[int, int] = {}
        for mask, c in coeffs.items():
            j = int(colof[mask])
            row[j] = row.get(j, 0) + c
        row = {j: c for j, c in row.items() if c}
        if not row:
            continue
        key = (rel, rhs, tuple(sorted(row.items())))
        if key in seen:
            continue
        seen[key] = ident
        lp.add_constraint(ident, row, rel, rhs)
    return ShannonSystem(G, lp, colof, N)


# ---------------------------------------------------------------------------
# bound reports
# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    value: Optional[object]  # exact rational, None when only floats available
    value_float: Optional[float]
    method: str
    certified: bool
    converged: bool = True
    iterations: int = 0
    cuts_added: int = 0
    certificate: Optional[DualCertificate] = None
    trace: List[object] = field(default_factory=list)
    policy: Optional["Policy"] = None

    def to_text(self) -> str:
        lines = [
            f"method {self.method}",
            f"value {fmt(self.value) if self.value is not None else 'none'}",
            f"value_float {self.value_float}",
            f"certified {self.certified}",
            f"converged {self.converged}",
            f"iterations {self.iterations}",
            f"cuts {self.cuts_added}",
        ]
        if self.policy is not None:
            lines.append(
                f"policy max_subset_size={self.policy.max_subset_size} "
                f"max_cuts_per_round={self.policy.max_cuts_per_round} "
                f"max_rounds={self.policy.max_rounds}"
            )
        return "\n".join(lines) + "\n"


def _solve_system(system: ShannonSystem, mode: str) -> Tuple[object, Optional[list], Optional[DualCertificate]]:
    out = solve(system.lp, mode=mode)
    if out.status != "optimal":
        raise EntropyError(f"Shannon-type LP reported {out.status}")
    if mode == "float":
        return out.value_float, None, None
    cert = extract_certificate(system.lp, out)
    return out.value, out.primal, cert


def shannon_bound(G: Digraph, mode: str = "exact", symmetry: bool = True) -> BoundReport:
    """Sh(G), the Shannon-LP upper bound on the guessing number."""
    system = build_shannon_lp(G, symmetry=symmetry)
    if mode == "float":
        v, _, _ = _solve_system(system, "float")
        return BoundReport(None, v, "shannon-lp", certified=False)
    v, _, cert = _solve_system(system, "exact")
    return BoundReport(v, float(v), "shannon-lp", certified=True, certificate=cert)


# ---------------------------------------------------------------------------
# four-set-variable inequalities
# ---------------------------------------------------------------------------

_SLOTS = "ABCD"


@dataclass(frozen=True)
class FourVarInequality:
    """sum of coeff * H(union of slot sets) >= 0 over set variables A,B,C,D."""

    name: str
    terms: Tuple[Tuple[object, frozenset], ...]  # (rational coeff, slot subset)

    def __post_init__(self):
        slotsets = [s for _, s in self.terms]
        if len(set(slotsets)) != len(slotsets):
            raise EntropyError(f"{self.name}: duplicate slot sets")
        for _, s in self.terms:
            if not s or not s <= set(_SLOTS):
                raise EntropyError(f"{self.name}: bad slot set {s}")
        coeffs = [Q(c) for c, _ in self.terms]
        if not any(c > 0 for c in coeffs) or not any(c < 0 for c in coeffs):
            raise EntropyError(f"{self.name}: needs mixed coefficient signs")

    def to_line(self) -> str:
        parts = [
            f"{fmt(c)} {''.join(sorted(s))}"
            for c, s in sorted(self.terms, key=lambda t: (len(t[1]), sorted(t[1])))
        ]
        return f"{self.name}: {'; '.join(parts)} >= 0"

    def symmetric_in(self, x: str, y: str) -> bool:
        """True when swapping slots x and y maps the term set to itself."""
        swapped = {}
        for c, s in self.terms:
            t = frozenset(y if z == x else x if z == y else z for z in s)
            swapped[t] = Q(c)
        return swapped == {s: Q(c) for c, s in self.terms}


_ZY_TERMS = [
    (-2, "A"), (-2, "B"), (-1, "C"), (3, "AB"), (3, "AC"), (1, "AD"),
    (3, "BC"), (1, "BD"), (-1, "CD"), (-4, "ABC"), (-1, "ABD"),
]
_INGLETON_TERMS = [
    (-1, "A"), (-1, "B"), (1, "AB"), (1, "AC"), (1, "AD"),
    (1, "BC"), (1, "BD"), (-1, "CD"), (-1, "ABC"), (-1, "ABD"),
]


def _mk(name, terms) -> FourVarInequality:
    return FourVarInequality(
        name, tuple((Q(c), frozenset(slots)) for c, slots in terms)
    )


def builtin_inequalities(name: str) -> List[FourVarInequality]:
    if name == "zhang_yeung":
        return [_mk("ZY", _ZY_TERMS)]
    if name == "ingleton":
        return [_mk("Ingleton", _INGLETON_TERMS)]
    raise EntropyError(f"unknown inequality set {name!r}")


def parse_inequalities(text: str) -> List[FourVarInequality]:
    """Parse the line format `NAME: coeff SLOTS; ... >= 0` (# comments)."""
    out = []
    names = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            name, _, rest = line.partition(":")
            name = name.strip()
            body, _, tail = rest.rpartition(">=")
            if tail.strip() != "0":
                raise ValueError("inequality must end with '>= 0'")
            terms = []
            for part in body.strip().rstrip(";").split(";"):
                coeff, _, slots = part.strip().rpartition(" ")
                terms.append((rat(coeff.strip()), frozenset(slots.strip())))
            ineq = FourVarInequality(name, tuple(terms))
        except (ValueError, EntropyError) as e:
            raise EntropyError(f"line {lineno}: {e}") from e
        if name in names:
            raise EntropyError(f"line {lineno}: duplicate inequality name {name!r}")
        names.add(name)
        out.append(ineq)
    return out


def load_inequalities(path) -> List[FourVarInequality]:
    with open(path) as fh:
        return parse_inequalities(fh.read())


def add_inequalities(a: FourVarInequality, b: FourVarInequality, name: str) -> FourVarInequality:
    """Term-wise sum of two inequalities (zero terms dropped)."""
    acc: Dict[frozenset, object] = {}
    for ineq in (a, b):
        for c, s in ineq.terms:
            acc[s] = acc.get(s, Q(0)) + Q(c)
    return FourVarInequality(name, tuple((c, s) for s, c in acc.items() if c != 0))


def instantiate(
    ineq: FourVarInequality, A: int, B: int, C: int, D: int
) -> Tuple[str, Dict[int, object]]:
    """One LP row: coefficient c on the variable H(union of chosen masks).

    Returns (identifier, mask -> coefficient); coincident unions merge.  The
    row asserts sum >= 0.  An all-zero row (e.g. all masks empty) comes back
    with an empty dict and should be skipped.
    """
    chosen = {"A": A, "B": B, "C": C, "D": D}
    row: Dict[int, object] = {}
    for c, slots in ineq.terms:
        mask = 0
        for s in slots:
            mask |= chosen[s]
        row[mask] = row.get(mask, Q(0)) + Q(c)
    row = {m: c for m, c in row.items() if c != 0}
    row.pop(0, None)  # H(empty) = 0
    return f"{ineq.name}@{A},{B},{C},{D}", row


def parse_cut_ident(ident: str) -> Tuple[str, Tuple[int, int, int, int]]:
    name, _, masks = ident.rpartition("@")
    if not name:
        raise EntropyError(f"not a cut identifier: {ident!r}")
    parts = masks.split(",")
    if len(parts) != 4:
        raise EntropyError(f"malformed cut identifier: {ident!r}")
    return name, tuple(int(p) for p in parts)


# ---------------------------------------------------------------------------
# separation
# ---------------------------------------------------------------------------


@dataclass
class Policy:
    """Separation enumeration policy for the cutting-plane loop.

    max_subset_size = None means "no cap": escalate all the way to |V| if
    separation keeps coming up empty (any prefix of the escalation still
    yields a valid upper bound, so tighter caps trade tightness for time).
    """

    max_subset_size: Optional[int] = None
    max_cuts_per_round: int = 32
    max_rounds: int = 60
    start_subset_size: int = 2
    violation_eps: float = 1e-9
    time_budget: Optional[float] = None  # wall-clock seconds; None = unlimited


def _candidate_masks(n: int, max_size: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pop += (masks >> i) & 1
    return masks[pop <= max_size]


class SeparationTimeout(Exception):
    """Raised when a separation pass overruns its wall-clock deadline."""


def separation(
    point: np.ndarray,
    ineqs: Sequence[FourVarInequality],
    n: int,
    max_subset_size: int,
    autos: Optional[Sequence[Tuple[int, ...]]] = None,
    eps: float = 1e-9,
    limit: int = 32,
    deadline: Optional[float] = None,
) -> List[Tuple[str, FourVarInequality, Tuple[int, int, int, int], float]]:
    """Violated instantiations of the given inequalities at a float point.

    point is indexed by mask (length 2^n).  Enumeration: slot masks of
    popcount <= max_subset_size, slot A restricted to orbit minima when an
    automorphism group is supplied (sound whenever the point is orbit
    invariant, which holds for symmetry-reduced LP solutions), and B >= A /
    D >= C under detected slot transpositions.  Candidates are returned in
    deterministic lexicographic (ineq, A, B, C, D) order, at most `limit`.
    """
    cand = _candidate_masks(n, max_subset_size)
    h = np.asarray(point, dtype=np.float64)
    if autos and len(autos) > 1:
        rep = _orbit_representatives(n, autos)
        a_masks = cand[rep[cand] == cand]
    else:
        a_masks = cand
    # C|D union values, shared across all (A,B) pairs
    cd_union = cand[:, None] | cand[None, :]
    h_cd = h[cd_union]
    found: List[Tuple[str, FourVarInequality, Tuple[int, int, int, int], float]] = []
    for ineq in ineqs:
        sym_ab = ineq.symmetric_in("A", "B")
        sym_cd = ineq.symmetric_in("C", "D")
        t_ab, t_c, t_d, t_cd = [], [], [], []
        for c, s in ineq.terms:
            fc = float(Q(c))
            has_c, has_d = "C" in s, "D" in s
            bucket = (
                t_cd if has_c and has_d else t_c if has_c else t_d if has_d else t_ab
            )
            bucket.append((fc, s))
        for A in a_masks:
            if deadline is not None and time.monotonic() > deadline:
                if found:
                    return found
                raise SeparationTimeout()
            A = int(A)
            b_masks = cand[cand >= A] if sym_ab else cand
            for B in b_masks:
                B = int(B)
                const = 0.0
                for fc, s in t_ab:
                    m = (A if "A" in s else 0) | (B if "B" in s else 0)
                    const += fc * h[m]
                Fc = np.zeros(len(cand))
                for fc, s in t_c:
                    base = (A if "A" in s else 0) | (B if "B" in s else 0)
                    Fc += fc * h[base | cand]
                Gd = np.zeros(len(cand))
                for fc, s in t_d:
                    base = (A if "A" in s else 0) | (B if "B" in s else 0)
                    Gd += fc * h[base | cand]
                grid = const + Fc[:, None] + Gd[None, :]
                for fc, s in t_cd:
                    base = (A if "A" in s else 0) | (B if "B" in s else 0)
                    if base == 0:
                        grid += fc * h_cd
                    else:
                        grid += fc * h[base | cd_union]
                if sym_cd:
                    grid = np.triu(grid) + np.tril(np.full_like(grid, np.inf), -1)
                viol = np.argwhere(grid < -eps)
                for ci, di in viol:
                    CD = (int(cand[ci]), int(cand[di]))
                    ident, _ = instantiate(ineq, A, B, CD[0], CD[1])
                    found.append((ident, ineq, (A, B, CD[0], CD[1]), float(grid[ci, di])))
                    if len(found) >= limit:
                        return found
    return found


# ---------------------------------------------------------------------------
# cutting-plane loop
# ---------------------------------------------------------------------------


def _reduced_row(system: ShannonSystem, row_by_mask: Dict[int, object]) -> Dict[int, object]:
    out: Dict[int, object] = {}
    for mask, c in row_by_mask.items():
        j = int(system.colof[mask])
        out[j] = out.get(j, Q(0)) + Q(c)
    return {j: c for j, c in out.items() if c != 0}


def _expand_primal(system: ShannonSystem, primal) -> np.ndarray:
    h = np.empty(system.n_masks, dtype=np.float64)
    for mask in range(system.n_masks):
        h[mask] = float(primal[int(system.colof[mask])])
    return h


def cutting_plane_bound(
    G: Digraph,
    ineqs: Sequence[FourVarInequality],
    policy: Optional[Policy] = None,
    mode: str = "exact",
    symmetry: bool = True,
    stop_at_lower=None,
) -> BoundReport:
    """Tighten the Shannon LP with violated inequality instantiations.

    Every iterate is a valid upper bound (each added cut is a true
    inequality), so a budget-exhausted run still reports a usable value,
    flagged converged=False.  The subset-size cap escalates from
    policy.start_subset_size to policy.max_subset_size as separation dries
    up at each level.

    stop_at_lower, when given, must be the value of a point known to satisfy
    every instantiation of the supplied inequalities (e.g. the entropy
    vector of a linear strategy, since these inequalities hold for linearly
    representable vectors).  Such a point stays feasible no matter which
    cuts are added, so the cut LP can never drop below it; reaching it means
    the loop has converged to the true bound and may stop early.
    """
    policy = policy or Policy()
    system = build_shannon_lp(G, symmetry=symmetry)
    autos = automorphisms(G) if symmetry else None
    method = "cutting-plane:" + "+".join(i.name for i in ineqs)
    trace: List[object] = []
    cuts_added = 0
    size_max = policy.max_subset_size if policy.max_subset_size is not None else G.n
    size_cap = min(policy.start_subset_size, size_max)
    rounds = 0
    value = None
    cert = None
    converged = False
    t_start = time.monotonic()
    while rounds < policy.max_rounds:
        if (
            policy.time_budget is not None
            and rounds > 0
            and time.monotonic() - t_start > policy.time_budget
        ):
            break
        rounds += 1
        if mode != "exact":
            raise EntropyError("cutting-plane loop requires exact mode")
        value, primal, cert = _solve_system(system, "exact")
        trace.append(value)
        if stop_at_lower is not None and value <= Q(stop_at_lower):
            assert value == Q(stop_at_lower), "cut LP fell below a feasible witness"
            converged = True
            break
        h = _expand_primal(system, primal)
        deadline = (
            t_start + policy.time_budget if policy.time_budget is not None else None
        )
        try:
            while True:
                cuts = separation(
                    h,
                    ineqs,
                    G.n,
                    size_cap,
                    autos=autos,
                    eps=policy.violation_eps,
                    limit=policy.max_cuts_per_round,
                    deadline=deadline,
                )
                if cuts:
                    break
                if size_cap >= size_max:
                    converged = True
                    break
                size_cap += 1
        except SeparationTimeout:
            break
        if converged:
            break
        added = 0
        for ident, ineq, (A, B, C, D), _ in cuts:
            ident2, row_by_mask = instantiate(ineq, A, B, C, D)
            assert ident2 == ident
            # exact confirmation that the candidate is really violated
            lhs = sum(Q(c) * Q(primal[int(system.colof[m])]) for m, c in row_by_mask.items())
            if lhs >= 0:
                continue
            row = _reduced_row(system, row_by_mask)
            if not row or ident in system.lp._idents:
                continue
            system.lp.add_constraint(ident, row, ">=", 0)
            added += 1
        if added == 0:
            # every float candidate failed exact confirmation: noise-level
            # violations only; escalate as if separation had found nothing
            if size_cap >= size_max:
                converged = True
                break
            size_cap += 1
        cuts_added += added
    assert all(a >= b for a, b in zip(trace, trace[1:])), "objective must not increase"
    return BoundReport(
        value,
        float(value),
        method,
        certified=True,
        converged=converged,
        iterations=rounds,
        cuts_added=cuts_added,
        certificate=cert,
        trace=trace,
        policy=policy,
    )


# ---------------------------------------------------------------------------
# feasible points from covers
# ---------------------------------------------------------------------------


def fcc_feasible_point(G: Digraph, cover) -> Dict[int, object]:
    """h(S) = sum_k w(k) min(|S cap k|, |k|-1), for a regular cover.

    Feasible for the Shannon LP; h(V) = n - kappa_f when the cover is
    optimal.
    """
    if not cover.is_regular():
        raise EntropyError("feasible-point construction needs a regular cover")
    n = G.n
    km = [(sum(1 << v for v in k), len(k), Q(w)) for k, w in cover.weights]
    point: Dict[int, object] = {}
    for S in range(1 << n):
        h = Q(0)
        for kmask, ksize, w in km:
            inter = bin(S & kmask).count("1")
            h += w * min(inter, ksize - 1)
        point[S] = h
    return point


def check_point_feasible(G: Digraph, point: Dict[int, object]) -> object:
    """Exact feasibility of a mask-indexed point in the full Shannon LP.

    Returns the objective value h(V); raises EntropyError when infeasible.
    """
    for ident, coeffs, rel, rhs in _shannon_row_stream(G):
        s = sum(Q(c) * Q(point[m]) for m, c in coeffs.items())
        ok = s <= rhs if rel == "<=" else s == rhs
        if not ok:
            raise EntropyError(f"point violates {ident}: {fmt(s)} {rel} {rhs}")
    return Q(point[(1 << G.n) - 1])


def is_point_optimal(G: Digraph, point: Dict[int, object]) -> bool:
    """The tight-constraint optimality test.

    Keeps only the constraints tight at the point, re-solves, and reports
    whether the restricted optimum still equals h(V).  Dropping constraints
    can only raise the maximum, so equality certifies optimality for the
    full LP.  An unbounded restricted LP means the point is not optimal.
    """
    hv = check_point_feasible(G, point)
    lp = LinProgram(1 << G.n, sense="max")
    lp.set_objective({(1 << G.n) - 1: 1})
    lp.set_nonneg(range(1 << G.n))
    for ident, coeffs, rel, rhs in _shannon_row_stream(G):
        s = sum(Q(c) * Q(point[m]) for m, c in coeffs.items())
        if rel == EQ or s == rhs:
            lp.add_constraint(ident, coeffs, rel, rhs)
    out = solve(lp, mode="exact")
    if out.status == "unbounded":
        return False
    if out.status != "optimal":
        raise EntropyError(f"restricted LP reported {out.status}")
    return out.value == hv
