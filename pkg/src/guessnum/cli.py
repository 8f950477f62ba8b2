"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 budget/limit
exhausted, 4 verification failure.
"""

from __future__ import annotations

import sys

import click

from .cover import CoverError, FractionalCover, fractional_clique_cover_number, regularize_cover
from .digraph import Digraph, GraphError
from .entropy import (
    EntropyError,
    Policy,
    build_shannon_lp,
    builtin_inequalities,
    cutting_plane_bound,
    instantiate,
    load_inequalities,
    parse_cut_ident,
    shannon_bound,
)
from .gallery import gallery, gallery_names
from .graph6 import FormatError, parse_line
from .lp import CertificateError, DualCertificate, LPError, verify_certificate
from .rat import Q, fmt, rat
from .search import ResultStore, SearchError, emit_report, run_search
from .strategy import (
    StrategyError,
    brute_force_gn,
    builtin_strategy,
    gn_lower_bound,
    strategy_from_text,
    validate_playable,
    win_probability,
)

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


class CliError(click.ClickException):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.exit_code = code


def _load_graph(spec: str) -> Digraph:
    try:
        if spec.startswith("gallery:"):
            return gallery(spec[len("gallery:") :])
        return parse_line(spec)
    except (GraphError, FormatError, ValueError) as e:
        raise CliError(f"cannot parse graph {spec!r}: {e}", EXIT_PARSE)


@click.group()
def cli():
    """Exact bounds on guessing numbers of digraphs."""


@cli.command()
@click.argument("graph")
@click.option("--method", type=click.Choice(["shannon", "ingleton", "zy", "dfz"]), default="shannon")
@click.option("--ineq-file", type=click.Path(exists=True), default=None)
@click.option("--exact/--float", "exact", default=True)
@click.option("--max-subset-size", type=int, default=None)
@click.option("--max-cuts", type=int, default=32)
@click.option("--time-limit", type=float, default=None)
@click.option("--certificate", "cert_out", type=click.Path(), default=None)
def bounds(graph, method, ineq_file, exact, max_subset_size, max_cuts, time_limit, cert_out):
    """Entropy-polytope upper bound on the guessing number of GRAPH."""
    G = _load_graph(graph)
    try:
        if method == "shannon":
            rep = shannon_bound(G, mode="exact" if exact else "float")
        else:
            if not exact:
                raise CliError("cutting-plane bounds require exact mode", EXIT_USAGE)
            if method == "dfz":
                if ineq_file is None:
                    raise CliError("--method dfz needs --ineq-file", EXIT_USAGE)
                ineqs = load_inequalities(ineq_file)
            else:
                ineqs = builtin_inequalities("zhang_yeung" if method == "zy" else "ingleton")
            policy = Policy(
                max_subset_size=max_subset_size,
                max_cuts_per_round=max_cuts,
                time_budget=time_limit,
            )
            # the fcc cover synthesizes a linear strategy, whose entropy
            # vector satisfies every supported inequality; its value is a
            # floor the cut LP cannot cross, allowing early convergence
            stop = None
            if G.is_undirected():
                kf, _ = fractional_clique_cover_number(G)
                stop = Q(G.n) - kf
            rep = cutting_plane_bound(G, ineqs, policy=policy, stop_at_lower=stop)
    except (EntropyError, LPError) as e:
        raise CliError(str(e), EXIT_PARSE)
    click.echo(rep.to_text(), nl=False)
    if cert_out and rep.certificate is not None:
        with open(cert_out, "w") as fh:
            fh.write(rep.certificate.to_text())
        click.echo(f"certificate {cert_out}")
    if not rep.converged:
        sys.exit(EXIT_BUDGET)


@cli.command()
@click.argument("graph")
@click.option("--cover-out", type=click.Path(), default=None)
def fcc(graph, cover_out):
    """Fractional clique cover number and the induced lower bound."""
    G = _load_graph(graph)
    try:
        kf, cover = fractional_clique_cover_number(G)
        reg = regularize_cover(G, cover)
    except CoverError as e:
        raise CliError(str(e), EXIT_PARSE)
    click.echo(f"kappa_f {fmt(kf)}")
    click.echo(f"lower_bound {fmt(Q(G.n) - kf)}")
    if cover_out:
        with open(cover_out, "w") as fh:
            fh.write(reg.to_text())
        click.echo(f"cover {cover_out}")


@cli.command("verify-strategy")
@click.argument("graph")
@click.option("--builtin", "builtin_name", default=None)
@click.option("--strategy", "strategy_file", type=click.Path(exists=True), default=None)
@click.option("--blowup", type=int, default=None)
def verify_strategy(graph, builtin_name, strategy_file, blowup):
    """Check a linear strategy is playable on GRAPH; print its guarantees."""
    if (builtin_name is None) == (strategy_file is None):
        raise CliError("exactly one of --builtin / --strategy is required", EXIT_USAGE)
    G = _load_graph(graph)
    try:
        if builtin_name is not None:
            from .digraph import uniform_blowup
            from .strategy import LinearStrategy

            ref = builtin_strategy(builtin_name)
            t = blowup or ref.blowup_t
            host = G if t == 1 else uniform_blowup(G, t)[0]
            strat = LinearStrategy(
                graph=host, s=ref.s, rows=[dict(r) for r in ref.rows],
                blowup_t=t, base_graph=G,
            )
        else:
            with open(strategy_file) as fh:
                strat = strategy_from_text(G, fh.read(), blowup_t=blowup)
        validate_playable(strat.graph, strat)
    except StrategyError as e:
        click.echo(f"playable false ({e})")
        sys.exit(EXIT_VERIFY)
    click.echo("playable true")
    click.echo(f"rank {strat.rank()}")
    click.echo(f"win_probability {fmt(win_probability(strat))}")
    click.echo(f"gn_lower_bound {fmt(gn_lower_bound(G, strat))}")


@cli.command()
@click.argument("graph")
@click.option("--alphabet", "s", type=int, required=True)
@click.option("--budget", type=int, default=1 << 22)
def brute(graph, s, budget):
    """Exact guessing number by exhaustive strategy search (tiny graphs)."""
    G = _load_graph(graph)
    try:
        gn, best = brute_force_gn(G, s, budget=budget)
    except StrategyError as e:
        raise CliError(str(e), EXIT_BUDGET)
    click.echo(f"gn {fmt(gn)}")
    click.echo(f"max_fixed_points {best}")


@cli.command()
@click.argument("stream", type=click.Path(exists=True))
@click.option("--store", "store_dir", type=click.Path(), required=True)
@click.option("--report", "report_out", type=click.Path(), default=None)
@click.option("--workers", type=int, default=1)
def search(stream, store_dir, report_out, workers):
    """Classify every graph in a graph6 file against the stored corpus."""
    try:
        store = ResultStore(store_dir)
        summary = run_search(stream, store, workers=workers)
    except (SearchError, FormatError) as e:
        raise CliError(str(e), EXIT_PARSE)
    click.echo(summary.to_text(), nl=False)
    if report_out:
        emit_report(store, report_out)
        click.echo(f"report {report_out}")


@cli.command()
@click.argument("graph")
@click.option("--bound", required=True)
@click.option("--certificate", "cert_file", type=click.Path(exists=True), required=True)
@click.option("--ineq-file", type=click.Path(exists=True), default=None)
def certify(graph, bound, cert_file, ineq_file):
    """Re-verify a stored dual certificate without running any solver.

    Rebuilds the reduced entropy LP for GRAPH, re-instantiates any cut rows
    named in the certificate, and checks in exact arithmetic that the
    multipliers prove the claimed bound.
    """
    G = _load_graph(graph)
    try:
        target = rat(bound)
        with open(cert_file) as fh:
            cert = DualCertificate.from_text(fh.read())
    except (ValueError, CertificateError) as e:
        raise CliError(str(e), EXIT_PARSE)
    system = build_shannon_lp(G, symmetry=True)
    byname = {i.name: i for i in builtin_inequalities("ingleton") + builtin_inequalities("zhang_yeung")}
    if ineq_file:
        for ineq in load_inequalities(ineq_file):
            byname[ineq.name] = ineq
    try:
        for ident, _ in cert.multipliers:
            if ident in system.lp._idents:
                continue
            name, (A, B, C, D) = parse_cut_ident(ident)
            if name not in byname:
                raise CliError(f"certificate references unknown inequality {name!r}", EXIT_PARSE)
            ident2, row_by_mask = instantiate(byname[name], A, B, C, D)
            assert ident2 == ident
            row = {}
            for mask, c in row_by_mask.items():
                j = int(system.colof[mask])
                row[j] = row.get(j, Q(0)) + Q(c)
            row = {j: c for j, c in row.items() if c != 0}
            system.lp.add_constraint(ident, row, ">=", 0)
        ok = verify_certificate(system.lp, cert) and Q(cert.bound) == target
    except (EntropyError, CertificateError) as e:
        raise CliError(str(e), EXIT_PARSE)
    if not ok:
        click.echo("certificate INVALID for the claimed bound")
        sys.exit(EXIT_VERIFY)
    click.echo(f"certificate valid: objective <= {fmt(target)}")


@cli.command("gallery")
@click.option("--list", "do_list", is_flag=True)
def gallery_cmd(do_list):
    """List the named graphs."""
    if do_list:
        for name in gallery_names():
            click.echo(name)
    else:
        raise CliError("nothing to do (try --list)", EXIT_USAGE)


def main():
    try:
        cli.main(standalone_mode=False)
    except CliError as e:
        click.echo(f"error: {e.message}", err=True)
        sys.exit(e.exit_code)
    except click.UsageError as e:
        click.echo(f"usage error: {e.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as e:
        click.echo(f"error: {e.format_message()}", err=True)
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
