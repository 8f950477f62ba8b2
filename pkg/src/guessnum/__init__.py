"""Exact lower and upper bounds on guessing numbers of digraphs.

Lower bounds come from fractional clique covers turned into linear
strategies on blowups; upper bounds from entropy-polytope linear programs
(the Shannon bound and cutting-plane tightenings by Zhang-Yeung, Ingleton,
or file-loaded inequality sets).  Every certified value is backed by exact
rational arithmetic and an independently verifiable dual certificate.
"""

from .cover import (
    CoverError,
    FractionalCover,
    cover_to_linear_strategy,
    fcc_lower_bound,
    fractional_clique_cover_number,
    minimum_clique_cover,
    regularize_cover,
)
from .digraph import (
    BlowupLabel,
    Digraph,
    GraphError,
    add_broadcast_edges,
    blowup,
    clique_number,
    enumerate_cliques,
    independence_number,
    induced_subgraph,
    is_clique,
    reverse,
    uniform_blowup,
)
from .entropy import (
    BoundReport,
    EntropyError,
    FourVarInequality,
    Policy,
    ShannonSystem,
    automorphisms,
    build_shannon_lp,
    builtin_inequalities,
    check_point_feasible,
    cutting_plane_bound,
    fcc_feasible_point,
    instantiate,
    is_point_optimal,
    load_inequalities,
    parse_cut_ident,
    parse_inequalities,
    separation,
    shannon_bound,
)
from .gallery import check_gallery_consistency, gallery, gallery_names
from .graph6 import FormatError, parse_line, read_file, write_auto
from .lp import (
    CertificateError,
    Constraint,
    DualCertificate,
    LinProgram,
    LPError,
    LPOutcome,
    check_dual,
    check_primal,
    extract_certificate,
    solve,
    verify_certificate,
)
from .rat import Q, fmt, rat
from .search import (
    GraphRecord,
    ResultStore,
    SearchError,
    audit,
    classify_graph,
    emit_report,
    find_isomorphism,
    fingerprint,
    is_isomorphic,
    run_search,
)
from .strategy import (
    Derivation,
    LinearStrategy,
    PureStrategyTable,
    StrategyError,
    brute_force_gn,
    builtin_strategy,
    clique_sum_strategy,
    count_fixed_points,
    gn_lower_bound,
    matrix_rank_mod,
    strategy_from_text,
    strategy_to_text,
    tables_from_derivations,
    validate_playable,
    win_probability,
)

__version__ = "1.0.0"
