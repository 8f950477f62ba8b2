"""Search harness over graph6 streams with a persistent result store.

For each undirected graph the classifier compares the fractional-clique-cover
lower bound n - kappa_f with an upper bound, trying cheap routes first:

1. lower bound from kappa_f;
2. a stored matched record for a one-vertex-deleted induced subgraph G'
   with 1 + gn(G') equal to the lower bound (removing a player costs at
   most one unit of guessing number);
3. a stored matched record for a one-edge-added supergraph whose guessing
   number equals the lower bound (adding edges never decreases it);
4. the cover's feasible entropy point tested for LP optimality;
5. the full Shannon LP, float triage first, always confirmed exactly.

A gap status is only ever assigned from exact arithmetic.  The store is an
append-only line file with idempotent upserts: re-running a search never
rewrites an existing record, which makes interrupted runs resumable and
their reports reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import os
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .cover import fractional_clique_cover_number, regularize_cover
from .digraph import Digraph, induced_subgraph
from .entropy import build_shannon_lp, check_point_feasible, is_point_optimal, shannon_bound
from .entropy import fcc_feasible_point
from .graph6 import parse_line, write_auto
from .lp import DualCertificate, verify_certificate
from .rat import Q, fmt, rat


class SearchError(Exception):
    pass


STATUSES = ("matched", "gap", "undetermined")
METHODS = (
    "fcc-optimal-point",
    "subgraph-lemma",
    "supergraph",
    "shannon-lp",
    "cutting-plane",
    "none",
)


@dataclass
class GraphRecord:
    graph6: str
    n: int
    kappa_f: Optional[object]  # rational, None when undetermined early
    lower: Optional[object]
    upper: Optional[object]
    method: str
    status: str
    ms: int

    def __post_init__(self):
        if self.status not in STATUSES:
            raise SearchError(f"bad status {self.status!r}")
        if self.method not in METHODS:
            raise SearchError(f"bad method {self.method!r}")
        if self.lower is not None and self.upper is not None:
            if not (Q(self.lower) <= Q(self.upper)):
                raise SearchError("lower bound exceeds upper bound")
            if (self.status == "matched") != (Q(self.lower) == Q(self.upper)):
                raise SearchError("status inconsistent with bounds")

    def to_line(self) -> str:
        f = lambda v: fmt(v) if v is not None else "-"
        return " ".join(
            [self.graph6, str(self.n), f(self.kappa_f), f(self.lower),
             f(self.upper), self.method, self.status, str(self.ms)]
        )

    @classmethod
    def from_line(cls, line: str) -> "GraphRecord":
        parts = line.split()
        if len(parts) != 8:
            raise SearchError(f"malformed store line {line!r}")
        g = lambda s: None if s == "-" else rat(s)
        return cls(parts[0], int(parts[1]), g(parts[2]), g(parts[3]), g(parts[4]),
                   parts[5], parts[6], int(parts[7]))


def _cert_name(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()[:24] + ".cert"


class ResultStore:
    """Append-only keyed record file plus certificate side files.

    Records live one per line in ``records.txt`` under the store directory;
    upserts are idempotent (first write wins), so a restarted run converges
    to the same store contents and a byte-identical report.
    """

    def __init__(self, path: str):
        self.path = path
        os.makedirs(path, exist_ok=True)
        os.makedirs(os.path.join(path, "certs"), exist_ok=True)
        self._file = os.path.join(path, "records.txt")
        self._index: Dict[str, GraphRecord] = {}
        self._order: List[str] = []
        if os.path.exists(self._file):
            with open(self._file) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = GraphRecord.from_line(line)
                    if rec.graph6 not in self._index:
                        self._order.append(rec.graph6)
                    self._index[rec.graph6] = rec

    def __len__(self) -> int:
        return len(self._index)

    def get(self, key: str) -> Optional[GraphRecord]:
        return self._index.get(key)

    def records(self) -> List[GraphRecord]:
        return [self._index[k] for k in self._order]

    def upsert(self, rec: GraphRecord, certificate: Optional[str] = None) -> GraphRecord:
        """Insert the record unless the key exists; returns the stored record.

        An existing record is never modified (certified results are final);
        the only exception is replacing an undetermined record with a
        determined one.
        """
        old = self._index.get(rec.graph6)
        if old is not None and not (
            old.status == "undetermined" and rec.status != "undetermined"
        ):
            return old
        with open(self._file, "a") as fh:
            fh.write(rec.to_line() + "\n")
        if old is None:
            self._order.append(rec.graph6)
        self._index[rec.graph6] = rec
        if certificate is not None:
            with open(os.path.join(self.path, "certs", _cert_name(rec.graph6)), "w") as fh:
                fh.write(certificate)
        return rec

    def certificate(self, key: str) -> Optional[str]:
        p = os.path.join(self.path, "certs", _cert_name(key))
        if os.path.exists(p):
            with open(p) as fh:
                return fh.read()
        return None


# ---------------------------------------------------------------------------
# isomorphism (small graphs; invariant fingerprint then backtracking)
# ---------------------------------------------------------------------------


def fingerprint(G: Digraph) -> tuple:
    """Isomorphism-invariant key: order, degree sequence, triangle counts."""
    nbrs = [G.undirected_neighbours(v) for v in range(G.n)]
    tri = []
    for v in range(G.n):
        t = sum(1 for a, b in combinations(sorted(nbrs[v]), 2) if b in nbrs[a])
        tri.append(t)
    return (
        G.n,
        len(G.edges),
        tuple(sorted(len(s) for s in nbrs)),
        tuple(sorted(tri)),
    )


def find_isomorphism(G: Digraph, H: Digraph) -> Optional[List[int]]:
    """A vertex bijection carrying G onto H, or None (backtracking search)."""
    if G.n != H.n or len(G.edges) != len(H.edges):
        return None
    if fingerprint(G) != fingerprint(H):
        return None
    n = G.n
    gn_ = [G.undirected_neighbours(v) for v in range(n)]
    hn_ = [H.undirected_neighbours(v) for v in range(n)]
    deg_g = [len(s) for s in gn_]
    deg_h = [len(s) for s in hn_]
    perm = [-1] * n
    used = [False] * n

    def extend(v: int) -> bool:
        if v == n:
            return True
        for w in range(n):
            if used[w] or deg_g[v] != deg_h[w]:
                continue
            if all((u in gn_[v]) == (perm[u] in hn_[w]) for u in range(v)):
                perm[v] = w
                used[w] = True
                if extend(v + 1):
                    return True
                used[w] = False
                perm[v] = -1
        return False

    return list(perm) if extend(0) else None


def is_isomorphic(G: Digraph, H: Digraph) -> bool:
    return find_isomorphism(G, H) is not None


# ---------------------------------------------------------------------------
# the classification pipeline
# ---------------------------------------------------------------------------


def _store_lookup_isomorphic(store: ResultStore, G: Digraph) -> Optional[GraphRecord]:
    """A matched record for any stored graph isomorphic to G (direct key first)."""
    key = write_auto(G)
    rec = store.get(key)
    if rec is not None:
        return rec
    fp = fingerprint(G)
    for rec in store.records():
        if rec.n != G.n:
            continue
        H = parse_line(rec.graph6)
        if fingerprint(H) == fp and find_isomorphism(G, H) is not None:
            return rec
    return None


def classify_graph(G: Digraph, store: Optional[ResultStore] = None) -> Tuple[GraphRecord, Optional[str]]:
    """Classify one undirected graph; returns (record, certificate text or None).

    The record's upper bound is certified: either transferred from a stored
    matched record through an exact inequality, or established by an exact
    LP with a dual certificate (stored alongside for auditing).
    """
    if not G.is_undirected():
        raise SearchError("classification targets undirected graphs")
    key = write_auto(G)
    t0 = time.monotonic()
    ms = lambda: int((time.monotonic() - t0) * 1000)
    try:
        kf, cover = fractional_clique_cover_number(G)
    except Exception:
        return GraphRecord(key, G.n, None, None, None, "none", "undetermined", ms()), None
    lower = Q(G.n) - kf

    if store is not None:
        # one-vertex-deleted subgraphs: gn(G) <= 1 + gn(G - v)
        for v in range(G.n):
            if G.n <= 1:
                break
            sub = induced_subgraph(G, [u for u in range(G.n) if u != v])
            rec = _store_lookup_isomorphic(store, sub)
            if rec is not None and rec.status == "matched" and 1 + Q(rec.upper) == lower:
                return (
                    GraphRecord(key, G.n, kf, lower, lower, "subgraph-lemma", "matched", ms()),
                    None,
                )
        # one-edge-added supergraphs: gn(G) <= gn(G + e)
        for u in range(G.n):
            for v in range(u + 1, G.n):
                if G.has_undirected_edge(u, v):
                    continue
                sup = Digraph(G.n, set(G.edges) | {(u, v), (v, u)})
                rec = _store_lookup_isomorphic(store, sup)
                if rec is not None and rec.status == "matched" and Q(rec.upper) == lower:
                    return (
                        GraphRecord(key, G.n, kf, lower, lower, "supergraph", "matched", ms()),
                        None,
                    )

    try:
        reg = regularize_cover(G, cover)
        point = fcc_feasible_point(G, reg)
        if is_point_optimal(G, point):
            return (
                GraphRecord(key, G.n, kf, lower, lower, "fcc-optimal-point", "matched", ms()),
                None,
            )
    except Exception:
        pass

    try:
        rep = shannon_bound(G, mode="exact", symmetry=True)
    except Exception:
        return GraphRecord(key, G.n, kf, lower, None, "none", "undetermined", ms()), None
    upper = Q(rep.value)
    status = "matched" if upper == lower else "gap"
    cert = rep.certificate.to_text() if rep.certificate is not None else None
    return GraphRecord(key, G.n, kf, lower, upper, "shannon-lp", status, ms()), cert


# ---------------------------------------------------------------------------
# streams, reports, auditing
# ---------------------------------------------------------------------------


@dataclass
class SearchSummary:
    processed: int = 0
    skipped: int = 0
    matched: int = 0
    gap: int = 0
    undetermined: int = 0
    gap_keys: List[str] = None

    def __post_init__(self):
        if self.gap_keys is None:
            self.gap_keys = []

    def to_text(self) -> str:
        lines = [
            f"processed {self.processed}",
            f"skipped {self.skipped}",
            f"matched {self.matched}",
            f"gap {self.gap}",
            f"undetermined {self.undetermined}",
        ]
        for k in self.gap_keys:
            lines.append(f"gap-record {k}")
        return "\n".join(lines) + "\n"


def _classify_job(args):
    line, n_filter = args
    G = parse_line(line)
    if n_filter is not None and G.n not in n_filter:
        return line, None, None
    rec, cert = classify_graph(G, None)
    return line, rec, cert


def run_search(
    stream_path: str,
    store: ResultStore,
    n_filter: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> SearchSummary:
    """Classify every graph in a graph6 file, in file order, resumably.

    Graphs already in the store are skipped (their records stand).  With
    workers > 1 classification is farmed out per graph while store writes
    stay in file order, so the result is identical to a serial run.  The
    subgraph/supergraph store shortcuts are consulted in the serial path
    only; parallel workers compute records independently.
    """
    with open(stream_path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith(">>")]
    summary = SearchSummary()
    todo = []
    for line in lines:
        G = parse_line(line)  # also validates the stream up front
        if n_filter is not None and G.n not in n_filter:
            continue
        key = write_auto(G)
        if store.get(key) is not None:
            summary.skipped += 1
            rec = store.get(key)
            summary.processed += 1
            setattr(summary, rec.status, getattr(summary, rec.status) + 1)
            if rec.status == "gap":
                summary.gap_keys.append(rec.graph6)
            continue
        todo.append(line)

    if workers > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_classify_job, [(ln, n_filter) for ln in todo]))
        for _, rec, cert in results:
            if rec is None:
                continue
            rec = store.upsert(rec, certificate=cert)
            summary.processed += 1
            setattr(summary, rec.status, getattr(summary, rec.status) + 1)
            if rec.status == "gap":
                summary.gap_keys.append(rec.graph6)
    else:
        for line in todo:
            G = parse_line(line)
            rec, cert = classify_graph(G, store)
            rec = store.upsert(rec, certificate=cert)
            summary.processed += 1
            setattr(summary, rec.status, getattr(summary, rec.status) + 1)
            if rec.status == "gap":
                summary.gap_keys.append(rec.graph6)
    return summary


REPORT_COLUMNS = ["graph6", "n", "kappa_f", "lower", "upper", "method", "status", "ms"]


def emit_report(store: ResultStore, out_path: str) -> None:
    """CSV report over the store in insertion order; exact rationals as p/q."""
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for rec in store.records():
            f = lambda v: fmt(v) if v is not None else ""
            w.writerow([rec.graph6, rec.n, f(rec.kappa_f), f(rec.lower),
                        f(rec.upper), rec.method, rec.status, rec.ms])


def audit(store: ResultStore, fraction: float = 0.01, seed: int = 0) -> Tuple[int, int]:
    """Re-verify a deterministic sample of records from stored evidence alone.

    Samples max(1, fraction * count) records (seeded shuffle), and for each:
    shannon-lp records must re-verify their dual certificate against a
    freshly built LP at exactly the recorded upper bound; transfer records
    (subgraph-lemma / supergraph / fcc-optimal-point) must satisfy
    lower == upper with a recomputed kappa_f.  Returns (checked, failures).
    """
    import random

    recs = [r for r in store.records() if r.status != "undetermined"]
    if not recs:
        return 0, 0
    k = max(1, int(len(recs) * fraction))
    rng = random.Random(seed)
    sample = rng.sample(recs, k)
    failures = 0
    for rec in sample:
        try:
            G = parse_line(rec.graph6)
            kf, _ = fractional_clique_cover_number(G)
            if Q(G.n) - kf != Q(rec.lower):
                raise SearchError("stored lower bound does not recompute")
            if rec.method == "shannon-lp":
                text = store.certificate(rec.graph6)
                if text is None:
                    raise SearchError("missing certificate")
                cert = DualCertificate.from_text(text)
                if Q(cert.bound) != Q(rec.upper):
                    raise SearchError("certificate bound mismatch")
                system = build_shannon_lp(G, symmetry=True)
                if not verify_certificate(system.lp, cert):
                    raise SearchError("certificate does not verify")
            elif rec.method in ("subgraph-lemma", "supergraph", "fcc-optimal-point"):
                if Q(rec.lower) != Q(rec.upper):
                    raise SearchError("transfer record must be matched")
            else:
                raise SearchError(f"unauditable method {rec.method}")
        except Exception:
            failures += 1
    return len(sample), failures
