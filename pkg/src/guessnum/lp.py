"""Exact rational linear programming with dual certificates.

Two solving paths share one contract:

* a dense two-phase simplex with Bland's rule, entirely in rational
  arithmetic (used for small programs and as the fallback of last resort);
* a float triage path (scipy/HiGHS) whose primal and dual solutions are
  rationalized and then re-verified exactly.

Whatever the path, an outcome reported as exact has been checked in exact
arithmetic: primal feasibility, dual feasibility, and primal objective ==
dual objective.  Certificates are verifiable independently of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .rat import Q, fmt, from_float, rat

LE, EQ, GE = "<=", "=", ">="


class LPError(Exception):
    pass


class CertificateError(LPError):
    """Raised for structurally invalid certificates (bad id, bad sign)."""


@dataclass(frozen=True)
class Constraint:
    ident: str
    coeffs: Dict[int, object]  # var index -> rational (or int) coefficient
    rel: str
    rhs: object

    def oriented(self, sense: str = "max") -> Tuple[Dict[int, object], object]:
        """The row oriented for bound proofs: '<=' for max programs, '>=' for min.

        An equality row is returned as written.
        """
        flip = GE if sense == "max" else LE
        if self.rel == flip:
            return {j: -Q(c) for j, c in self.coeffs.items()}, -Q(self.rhs)
        return self.coeffs, self.rhs


class LinProgram:
    """max/min of a sparse linear objective under sparse linear constraints.

    Variables are free by default; indices listed in `nonneg` are constrained
    to be >= 0 (without a named row).  Constraint identifiers are caller-chosen
    stable strings, unique within the program.
    """

    def __init__(self, n_vars: int, sense: str = "max"):
        if sense not in ("max", "min"):
            raise LPError(f"bad sense {sense!r}")
        self.n_vars = n_vars
        self.sense = sense
        self.objective: Dict[int, object] = {}
        self.constraints: List[Constraint] = []
        self.nonneg: set = set()
        self._idents: set = set()

    def set_objective(self, coeffs: Dict[int, object]) -> None:
        self._check_idx(coeffs)
        self.objective = dict(coeffs)

    def add_constraint(self, ident: str, coeffs: Dict[int, object], rel: str, rhs) -> None:
        if rel not in (LE, EQ, GE):
            raise LPError(f"bad relation {rel!r}")
        if ident in self._idents:
            raise LPError(f"duplicate constraint identifier {ident!r}")
        self._check_idx(coeffs)
        self._idents.add(ident)
        self.constraints.append(Constraint(ident, dict(coeffs), rel, rhs))

    def set_nonneg(self, indices) -> None:
        for j in indices:
            if not (0 <= j < self.n_vars):
                raise LPError(f"variable index {j} out of range")
        self.nonneg = set(indices)

    def constraint(self, ident: str) -> Constraint:
        for c in self.constraints:
            if c.ident == ident:
                return c
        raise LPError(f"unknown constraint identifier {ident!r}")

    def _check_idx(self, coeffs) -> None:
        for j in coeffs:
            if not (0 <= j < self.n_vars):
                raise LPError(f"variable index {j} out of range (n_vars={self.n_vars})")


@dataclass
class LPOutcome:
    status: str  # optimal | infeasible | unbounded
    value: Optional[object] = None  # exact rational objective (None unless optimal+exact)
    primal: Optional[List[object]] = None
    dual: Optional[Dict[str, object]] = None  # ident -> multiplier for the '<='-oriented row
    certified: bool = False
    value_float: Optional[float] = None
    pivots: int = 0


@dataclass
class DualCertificate:
    """Nonnegative multipliers proving objective <= bound (max) / >= bound (min)."""

    bound: object
    multipliers: List[Tuple[str, object]] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"bound {fmt(self.bound)}"]
        for ident, m in self.multipliers:
            lines.append(f"{ident} {fmt(m)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DualCertificate":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("bound "):
            raise CertificateError("certificate must start with a 'bound p/q' header")
        bound = rat(lines[0][len("bound ") :])
        mults = []
        for ln in lines[1:]:
            ident, _, m = ln.rpartition(" ")
            if not ident:
                raise CertificateError(f"malformed certificate line {ln!r}")
            mults.append((ident, rat(m)))
        return cls(bound, mults)


# ---------------------------------------------------------------------------
# exact verification (independent of any solver)
# ---------------------------------------------------------------------------


def check_primal(lp: LinProgram, x: Sequence[object]) -> object:
    """Verify x satisfies every constraint exactly; return its objective value."""
    if len(x) != lp.n_vars:
        raise LPError("primal vector has wrong length")
    for j in lp.nonneg:
        if x[j] < 0:
            raise LPError(f"variable {j} negative")
    for con in lp.constraints:
        s = sum(Q(c) * x[j] for j, c in con.coeffs.items())
        r = Q(con.rhs)
        ok = s <= r if con.rel == LE else s >= r if con.rel == GE else s == r
        if not ok:
            raise LPError(f"constraint {con.ident!r} violated: {fmt(s)} {con.rel} {fmt(r)}")
    return sum(Q(c) * x[j] for j, c in lp.objective.items())


def check_dual(lp: LinProgram, y: Dict[str, object]) -> object:
    """Verify multipliers y are dual feasible; return the implied bound.

    Multipliers apply to each constraint in its bound-proof orientation
    ('<=' rows for max programs, '>=' rows for min) and must be >= 0 for
    inequalities (free for equalities).  The weighted combination must
    dominate the objective: sum_i y_i a_ij == c_j for free variables, and
    >= c_j (max) / <= c_j (min) for nonnegative ones, so that the combined
    right-hand side bounds the objective over the feasible set.
    """
    colsum: Dict[int, object] = {}
    bound = Q(0)
    byid = {c.ident: c for c in lp.constraints}
    for ident, m in y.items():
        if ident not in byid:
            raise CertificateError(f"unknown constraint identifier {ident!r}")
        con = byid[ident]
        m = Q(m)
        if con.rel != EQ and m < 0:
            raise CertificateError(f"negative multiplier on inequality {ident!r}")
        if m == 0:
            continue
        coeffs, rhs = con.oriented(lp.sense)
        for j, c in coeffs.items():
            colsum[j] = colsum.get(j, Q(0)) + m * Q(c)
        bound += m * Q(rhs)
    sgn = 1 if lp.sense == "max" else -1
    for j in range(lp.n_vars):
        s = colsum.get(j, Q(0))
        c = Q(lp.objective.get(j, 0))
        if j in lp.nonneg:
            if sgn * (s - c) < 0:
                raise LPError(f"dual infeasible at variable {j}: {fmt(s)} vs {fmt(c)}")
        elif s != c:
            raise LPError(f"dual infeasible at free variable {j}: {fmt(s)} != {fmt(c)}")
    return bound


def verify_certificate(lp: LinProgram, cert: DualCertificate) -> bool:
    """True iff the certificate proves objective <= bound (max) / >= bound (min).

    Uses exact arithmetic only; never calls a solver.  Structural defects
    (unknown identifier, negative multiplier on an inequality) raise
    CertificateError; a merely insufficient bound returns False.
    """
    try:
        implied = check_dual(lp, dict(cert.multipliers))
    except CertificateError:
        raise
    except LPError:
        return False
    if lp.sense == "max":
        return implied <= Q(cert.bound)
    return implied >= Q(cert.bound)


def extract_certificate(lp: LinProgram, outcome: LPOutcome) -> DualCertificate:
    if outcome.status != "optimal" or not outcome.certified or outcome.dual is None:
        raise LPError("certificates require a certified optimal outcome")
    mults = [(ident, m) for ident, m in outcome.dual.items() if m != 0]
    cert = DualCertificate(outcome.value, mults)
    assert verify_certificate(lp, cert)
    return cert


# ---------------------------------------------------------------------------
# exact two-phase simplex, Bland's rule
# ---------------------------------------------------------------------------


def _simplex_exact(lp: LinProgram, max_pivots: int = 2_000_000) -> LPOutcome:
    """Dense rational two-phase simplex.  Intended for small programs."""
    # Standard form: max c'x, Ax = b, x >= 0.  Free variables are split.
    n = lp.n_vars
    split = [j for j in range(n) if j not in lp.nonneg]
    pos = {j: j for j in range(n)}
    neg = {j: n + i for i, j in enumerate(split)}
    nx = n + len(split)

    sgn_obj = 1 if lp.sense == "max" else -1
    rows: List[Dict[int, object]] = []
    rhs: List[object] = []
    kinds: List[str] = []
    idents: List[str] = []
    for con in lp.constraints:
        coeffs, b = con.oriented("max") if con.rel != EQ else (con.coeffs, con.rhs)
        d: Dict[int, object] = {}
        for j, c in coeffs.items():
            c = Q(c)
            d[pos[j]] = d.get(pos[j], Q(0)) + c
            if j in neg:
                d[neg[j]] = d.get(neg[j], Q(0)) - c
        rows.append(d)
        rhs.append(Q(b))
        kinds.append(EQ if con.rel == EQ else LE)
        idents.append(con.ident)

    m = len(rows)
    slack = {}
    col = nx
    for i, k in enumerate(kinds):
        if k == LE:
            slack[i] = col
            col += 1
    art = {}
    for i in range(m):
        art[i] = col
        col += 1
    ncols = col

    # tableau rows: m constraint rows + objective row; columns 0..ncols-1 + rhs
    T = []
    for i in range(m):
        row = [Q(0)] * (ncols + 1)
        for j, c in rows[i].items():
            row[j] = Q(c)
        if i in slack:
            row[slack[i]] = Q(1)
        row[art[i]] = Q(1)
        row[ncols] = Q(rhs[i])
        if row[ncols] < 0:
            row = [-v for v in row]
            row[art[i]] = Q(1)  # artificial stays +1 after the sign flip
        T.append(row)

    basis = [art[i] for i in range(m)]
    pivots = 0

    def pivot(r: int, c: int) -> None:
        nonlocal pivots
        pivots += 1
        piv = T[r][c]
        T[r] = [v / piv for v in T[r]]
        for i in range(len(T)):
            if i != r and T[i][c] != 0:
                f = T[i][c]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        basis[r] = c

    def run_phase(cost: List[object], allowed) -> str:
        # objective row: reduced costs for max(cost'x)
        z = [Q(0)] * (ncols + 1)
        for j, c in enumerate(cost):
            z[j] = -Q(c)
        T.append(z)
        try:
            for r in range(m):
                j = basis[r]
                if T[m][j] != 0:
                    f = T[m][j]
                    T[m] = [a - f * b for a, b in zip(T[m], T[r])]
            while True:
                enter = None
                for j in allowed:
                    if T[m][j] < 0:
                        enter = j  # Bland: smallest index
                        break
                if enter is None:
                    return "optimal"
                leave = None
                best = None
                for i in range(m):
                    a = T[i][enter]
                    if a > 0:
                        ratio = T[i][ncols] / a
                        if best is None or ratio < best or (
                            ratio == best and basis[i] < basis[leave]
                        ):
                            best = ratio
                            leave = i
                if leave is None:
                    return "unbounded"
                if pivots >= max_pivots:
                    raise LPError("pivot budget exceeded")
                pivot(leave, enter)
        finally:
            pass

    # phase 1: maximize -sum(artificials)
    cost1 = [Q(0)] * ncols
    for i in range(m):
        cost1[art[i]] = Q(-1)
    allowed1 = list(range(ncols))
    st = run_phase(cost1, allowed1)
    assert st == "optimal"  # phase 1 is bounded
    if T[m][ncols] != 0:
        return LPOutcome(status="infeasible", certified=True, pivots=pivots)
    T.pop()
    # drive remaining artificials out of the basis where possible
    for r in range(m):
        if basis[r] in art.values() and T[r][ncols] == 0:
            for j in range(nx):
                if T[r][j] != 0:
                    pivot(r, j)
                    break

    cost2 = [Q(0)] * ncols
    for j, c in lp.objective.items():
        c = sgn_obj * Q(c)
        cost2[pos[j]] += c
        if j in neg:
            cost2[neg[j]] -= c
    allowed2 = [j for j in range(ncols) if j not in art.values() or j in basis]
    allowed2 = [j for j in range(ncols) if j not in set(art.values())]
    st = run_phase(cost2, allowed2)
    if st == "unbounded":
        return LPOutcome(status="unbounded", certified=True, pivots=pivots)

    xs = [Q(0)] * ncols
    for r in range(m):
        xs[basis[r]] = T[r][ncols]
    x = []
    for j in range(n):
        v = xs[pos[j]]
        if j in neg:
            v = v - xs[neg[j]]
        x.append(v)

    # duals: the phase-2 reduced cost of row i's artificial column is the
    # internal multiplier; equality rows flip sign with the objective sense
    y: Dict[str, object] = {}
    for i, con in enumerate(lp.constraints):
        rc = T[m][art[i]]
        yi = rc if con.rel != EQ else sgn_obj * rc
        if yi != 0:
            y[idents[i]] = yi
    T.pop()

    value = check_primal(lp, x)
    implied = check_dual(lp, y)
    if implied != value:
        raise LPError(
            f"simplex produced inconsistent duals: {fmt(implied)} != {fmt(value)}"
        )
    return LPOutcome(
        status="optimal",
        value=value,
        primal=x,
        dual=y,
        certified=True,
        value_float=float(value),
        pivots=pivots,
    )


# ---------------------------------------------------------------------------
# float triage (scipy/HiGHS) + exact confirmation
# ---------------------------------------------------------------------------

_DEN_LADDER = (10**4, 10**6, 10**9, 10**12)


def _scipy_arrays(lp: LinProgram):
    import numpy as np
    from scipy.sparse import csr_matrix

    ub_rows, ub_rhs, ub_ids = [], [], []
    eq_rows, eq_rhs, eq_ids = [], [], []
    for con in lp.constraints:
        if con.rel == EQ:
            eq_rows.append(con.coeffs)
            eq_rhs.append(float(Q(con.rhs)))
            eq_ids.append(con.ident)
        else:
            coeffs, r = con.oriented("max")
            ub_rows.append(coeffs)
            ub_rhs.append(float(Q(r)))
            ub_ids.append(con.ident)

    def mk(rws):
        data, ri, ci = [], [], []
        for i, d in enumerate(rws):
            for j, c in d.items():
                ri.append(i)
                ci.append(j)
                data.append(float(Q(c)))
        return csr_matrix((data, (ri, ci)), shape=(len(rws), lp.n_vars))

    c = np.zeros(lp.n_vars)
    s = -1.0 if lp.sense == "max" else 1.0
    for j, v in lp.objective.items():
        c[j] = s * float(Q(v))
    bounds = [(0, None) if j in lp.nonneg else (None, None) for j in range(lp.n_vars)]
    return c, mk(ub_rows), np.array(ub_rhs), ub_ids, mk(eq_rows), np.array(eq_rhs), eq_ids, bounds


def _solve_float(lp: LinProgram):
    from scipy.optimize import linprog

    c, A, b, ub_ids, Ae, be, eq_ids, bounds = _scipy_arrays(lp)
    methods = ["highs-ipm", "highs"] if len(lp.constraints) > 5000 else ["highs", "highs-ipm"]
    res = None
    for method in methods:
        res = linprog(
            c,
            A_ub=A if A.shape[0] else None,
            b_ub=b if A.shape[0] else None,
            A_eq=Ae if Ae.shape[0] else None,
            b_eq=be if Ae.shape[0] else None,
            bounds=bounds,
            method=method,
        )
        if res.status in (0, 2, 3):
            break
    return res, ub_ids, eq_ids


def _rationalize_outcome(lp: LinProgram, res, ub_ids, eq_ids) -> Optional[LPOutcome]:
    """Round the float primal/dual to rationals and verify exactly."""
    primal = None
    pval = None
    for md in _DEN_LADDER:
        x = [from_float(float(v), md) for v in res.x]
        try:
            pval = check_primal(lp, x)
        except LPError:
            continue
        primal = x
        break
    if primal is None:
        return None

    # scipy marginals refer to its internal min-problem; the sign mapping to
    # our bound-proof orientation depends on sense and row type, so try the
    # plausible sign combinations and let exact verification arbitrate
    y_ub = list(getattr(res.ineqlin, "marginals", []))
    y_eq = list(getattr(res.eqlin, "marginals", []))
    dual = None
    for md in _DEN_LADDER:
        for s_ub, s_eq in ((-1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (1.0, -1.0)):
            y: Dict[str, object] = {}
            for ident, v in zip(ub_ids, y_ub):
                m = from_float(s_ub * float(v), md)
                if m != 0:
                    y[ident] = m
            for ident, v in zip(eq_ids, y_eq):
                m = from_float(s_eq * float(v), md)
                if m != 0:
                    y[ident] = m
            if any(m < 0 for ident, m in y.items() if lp.constraint(ident).rel != EQ):
                continue
            try:
                dval = check_dual(lp, y)
            except (LPError, CertificateError):
                continue
            if dval == pval:
                dual = y
                break
        if dual is not None:
            break
    if dual is None:
        return None
    return LPOutcome(
        status="optimal",
        value=pval,
        primal=primal,
        dual=dual,
        certified=True,
        value_float=float(pval),
    )


def _dyadic(v: float):
    """Exact rational value of a float (binary fractions convert losslessly)."""
    from fractions import Fraction

    f = Fraction(v)
    return Q(f.numerator, f.denominator)


def _snap(v, md: int):
    from fractions import Fraction

    f = Fraction(int(v.numerator), int(v.denominator)).limit_denominator(md)
    return Q(f.numerator, f.denominator)


def _refinement_core(
    lp: LinProgram, c_extra=None, b_extra=None, rounds: int = 3, time_limit: float = 300.0
):
    """High-precision rational primal/dual via float solve + iterative refinement.

    Works on the max-oriented standard form.  c_extra / b_extra optionally
    perturb the objective (per variable) and the inequality right-hand sides
    (per '<='-oriented row); perturbed solves are used to steer degenerate
    programs toward a unique (hence rational, snappable) vertex while all
    final verification happens against the unperturbed program.

    Returns (ub_rows, eq_rows, x, yub, yeq) with exact (dyadic-accumulated)
    rationals, or None when the float solver fails.
    """
    import numpy as np
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    sgn = 1 if lp.sense == "max" else -1
    cmax: Dict[int, object] = {j: sgn * Q(c) for j, c in lp.objective.items()}
    ub, eqs = [], []
    for con in lp.constraints:
        if con.rel == EQ:
            eqs.append((con.ident, con.coeffs, Q(con.rhs)))
        else:
            coeffs, r = con.oriented("max")
            ub.append((con.ident, coeffs, Q(r)))
    n = lp.n_vars
    if c_extra is not None:
        cmax = dict(cmax)
        for j, v in enumerate(c_extra):
            if v:
                cmax[j] = cmax.get(j, Q(0)) + v
    if b_extra is not None:
        ub = [(ident, d, r + b_extra[i]) for i, (ident, d, r) in enumerate(ub)]

    def mk(rws):
        data, ri, ci = [], [], []
        for i, (_, d, _) in enumerate(rws):
            for j, c in d.items():
                ri.append(i)
                ci.append(j)
                data.append(float(Q(c)))
        return csr_matrix((data, (ri, ci)), shape=(len(rws), n))

    A, Ae = mk(ub), mk(eqs)
    cvec = np.zeros(n)
    for j, v in cmax.items():
        cvec[j] = -float(v)
    bounds = [(0, None) if j in lp.nonneg else (None, None) for j in range(n)]
    method = "highs-ipm" if len(lp.constraints) > 5000 else "highs"
    res = linprog(
        cvec,
        A_ub=A if A.shape[0] else None,
        b_ub=np.array([float(r) for _, _, r in ub]) if ub else None,
        A_eq=Ae if Ae.shape[0] else None,
        b_eq=np.array([float(r) for _, _, r in eqs]) if eqs else None,
        bounds=bounds,
        method=method,
        options={"time_limit": time_limit},
    )
    if res.status != 0:
        return None
    x = [_dyadic(float(v)) for v in res.x]
    yub = [_dyadic(-float(v)) for v in res.ineqlin.marginals] if ub else []
    yeq = [_dyadic(-float(v)) for v in res.eqlin.marginals] if eqs else []
    cap = 1e4
    for _ in range(rounds):
        rb_ub = [r - sum(Q(c) * x[j] for j, c in d.items()) for _, d, r in ub]
        rb_eq = [r - sum(Q(c) * x[j] for j, c in d.items()) for _, d, r in eqs]
        colsum: Dict[int, object] = {}
        for rows, ys in ((ub, yub), (eqs, yeq)):
            for (_, d, _), yv in zip(rows, ys):
                if yv != 0:
                    for j, c in d.items():
                        colsum[j] = colsum.get(j, Q(0)) + yv * Q(c)
        rc = [cmax.get(j, Q(0)) - colsum.get(j, Q(0)) for j in range(n)]
        viol_p = [max(Q(0), -r) for r in rb_ub] + [abs(r) for r in rb_eq]
        viol_p += [max(Q(0), -x[j]) for j in lp.nonneg]
        viol_d = [max(Q(0), rc[j]) if j in lp.nonneg else abs(rc[j]) for j in range(n)]
        viol_d += [max(Q(0), -v) for v in yub]
        if max(viol_p, default=Q(0)) == 0 and max(viol_d, default=Q(0)) == 0:
            break

        def scl(viol):
            worst = max(viol, default=Q(0))
            s = Q(1)
            while worst * s < Q(1, 2) and s < Q(2) ** 120:
                s *= 2
            return s

        dp, dd = scl(viol_p), scl(viol_d)
        cor = linprog(
            -np.clip([float(dd * v) for v in rc], -cap, cap),
            A_ub=A if A.shape[0] else None,
            b_ub=np.clip([float(dp * v) for v in rb_ub], -cap, cap) if ub else None,
            A_eq=Ae if Ae.shape[0] else None,
            b_eq=np.array([float(dp * v) for v in rb_eq]) if eqs else None,
            bounds=[
                (max(-float(dp * x[j]), -cap), cap) if j in lp.nonneg else (-cap, cap)
                for j in range(n)
            ],
            method=method,
            options={"time_limit": time_limit},
        )
        if cor.status != 0:
            break
        for j in range(n):
            x[j] += _dyadic(float(cor.x[j])) / dp
        if ub:
            for i, v in enumerate(cor.ineqlin.marginals):
                yub[i] += _dyadic(-float(v)) / dd
        if eqs:
            for i, v in enumerate(cor.eqlin.marginals):
                yeq[i] += _dyadic(-float(v)) / dd
    return ub, eqs, x, yub, yeq


def _snap_primal(lp: LinProgram, x):
    for md in _DEN_LADDER:
        xr = [_snap(v, md) for v in x]
        try:
            return xr, check_primal(lp, xr)
        except LPError:
            continue
    return None


def _snap_dual(lp: LinProgram, ub, eqs, yub, yeq):
    sgn = 1 if lp.sense == "max" else -1
    for md in _DEN_LADDER:
        y: Dict[str, object] = {}
        ok = True
        for (ident, _, _), v in zip(ub, yub):
            m = _snap(v, md)
            if m < 0:
                ok = False
                break
            if m != 0:
                y[ident] = m
        if not ok:
            continue
        for (ident, _, _), v in zip(eqs, yeq):
            m = sgn * _snap(v, md)
            if m != 0:
                y[ident] = m
        try:
            return y, check_dual(lp, y)
        except (LPError, CertificateError):
            continue
    return None


def _refinement_outcome(lp: LinProgram) -> Optional[LPOutcome]:
    """Exact optimum via refinement, with lexicographic-perturbation recovery.

    A degenerate program's float solution may approach the (irrational)
    analytic centre of the optimal face; refining the original program then
    never snaps.  In that case the primal is recovered from an objective-
    perturbed solve and the dual from a rhs-perturbed solve: for small
    enough perturbations the perturbed optima lie on the original optimal
    faces, and exact cross-verification against the unperturbed program
    (strong-duality equality) confirms the recovery or rejects the step.
    """
    core = _refinement_core(lp)
    if core is None:
        return None
    ub, eqs, x, yub, yeq = core
    p = _snap_primal(lp, x)
    d = _snap_dual(lp, ub, eqs, yub, yeq)
    if p is not None and d is not None and p[1] == d[1]:
        xr, pval = p
        y, _ = d
        return LPOutcome(
            status="optimal", value=pval, primal=xr, dual=y,
            certified=True, value_float=float(pval),
        )
    n = lp.n_vars
    sgn = 1 if lp.sense == "max" else -1
    n_ub = sum(1 for con in lp.constraints if con.rel != EQ)
    for k in (20, 28, 36):
        eps = Q(1, 2 ** k)
        # perturbed solves deliver a unique vertex directly; snap the raw
        # solution without correction rounds (corrections would chase the
        # perturbed optimum, not the original one)
        c_extra = [sgn * eps * (((j * 2654435761) % 97) + 1) for j in range(n)]
        core = _refinement_core(lp, c_extra=c_extra, rounds=0)
        if core is not None:
            cand = _snap_primal(lp, core[2])
            if cand is not None:
                p = cand
        if p is not None and d is not None and p[1] == d[1]:
            break
        b_extra = [eps * (((i * 40503) % 89) + 1) for i in range(n_ub)]
        core = _refinement_core(lp, b_extra=b_extra, rounds=0)
        if core is not None:
            cand = _snap_dual(lp, ub, eqs, core[3], core[4])
            if cand is not None:
                d = cand
        if p is not None and d is not None and p[1] == d[1]:
            break
    if p is not None and d is not None and p[1] == d[1]:
        xr, pval = p
        y, _ = d
        return LPOutcome(
            status="optimal", value=pval, primal=xr, dual=y,
            certified=True, value_float=float(pval),
        )
    return None

_EXACT_FALLBACK_CELLS = 3_000_000  # rows*vars cap for the dense exact simplex


def solve(lp: LinProgram, mode: str = "exact") -> LPOutcome:
    """Solve the program.

    exact: returns an exactly-verified rational optimum with valid primal and
    dual (strong duality holds with exact equality), or an exact
    infeasible/unbounded status.  float: fast approximate value, flagged
    non-certified.
    """
    if mode not in ("exact", "float"):
        raise LPError(f"unknown mode {mode!r}")

    if mode == "float":
        res, _, _ = _solve_float(lp)
        if res.status == 2:
            return LPOutcome(status="infeasible")
        if res.status == 3:
            return LPOutcome(status="unbounded")
        if res.status != 0:
            raise LPError(f"float solver failed: {res.message}")
        v = -res.fun if lp.sense == "max" else res.fun
        return LPOutcome(status="optimal", value_float=v, certified=False)

    small = len(lp.constraints) * max(lp.n_vars, 1) <= _EXACT_FALLBACK_CELLS

    try:
        res, ub_ids, eq_ids = _solve_float(lp)
    except Exception:
        res = None
    if res is not None and res.status == 0:
        out = _rationalize_outcome(lp, res, ub_ids, eq_ids)
        if out is None:
            out = _refinement_outcome(lp)
        if out is not None:
            return out
    if res is not None and res.status in (2, 3) and not small:
        # trust but flag: exact confirmation impossible at this size
        return LPOutcome(status="infeasible" if res.status == 2 else "unbounded")

    if not small:
        raise LPError(
            "float triage could not be confirmed exactly and the program is too "
            "large for the dense exact simplex"
        )
    return _simplex_exact(lp)
