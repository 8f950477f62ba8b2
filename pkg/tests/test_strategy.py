"""Linear guessing strategies, playability, and the brute-force oracle."""

import pytest

from guessnum.digraph import Digraph
from guessnum.gallery import gallery
from guessnum.rat import Q
from guessnum.strategy import (
    RC_ROWS,
    LinearStrategy,
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


def test_rank_mod_small_matrices():
    assert matrix_rank_mod([[1, 2], [2, 4]], 5) == 1
    assert matrix_rank_mod([[1, 2], [2, 4]], 3) == 1  # second row is 2x the first mod 3
    assert matrix_rank_mod([[1, 2], [2, 5]], 3) == 2  # determinant 1
    assert matrix_rank_mod([[1, 0], [0, 1], [1, 1]], 2) == 2
    assert matrix_rank_mod([], 3) == 0


def test_rank_mod_matches_known_identity():
    rows = [[(i == j) for j in range(4)] for i in range(4)]
    assert matrix_rank_mod(rows, 7) == 4


def test_strategy_requires_prime_alphabet():
    G = gallery("K_3")
    with pytest.raises(StrategyError):
        LinearStrategy(graph=G, s=4, rows=[{0: 1, 1: 1, 2: 1}])


def test_clique_sum_strategy_on_k3():
    G = gallery("K_3")
    strat = clique_sum_strategy(G, [0, 1, 2], s=3)
    validate_playable(G, strat)
    assert win_probability(strat) == Q(1, 3)
    assert gn_lower_bound(G, strat) == Q(2)


def test_rc_builtin_playable_rank_4():
    strat = builtin_strategy("rc")
    G = gallery("R_c")
    derivs = validate_playable(G, strat)
    assert len(derivs) == 13
    assert strat.rank() == 4
    assert win_probability(strat) == Q(1, 81)
    assert gn_lower_bound(G, strat) == Q(9)


def test_rc_on_rc_plus_avoids_removed_channel():
    # on the one-directed-edge variant, player 3 (index 2) must derive its
    # congruence without consulting vertex 8 (index 7), whose channel to it
    # was removed and restored only one-way
    G = gallery("R_c_plus")
    strat = LinearStrategy(graph=G, s=3, rows=[dict(r) for r in RC_ROWS])
    derivs = validate_playable(G, strat)
    assert derivs[2].combined_row.get(7, 0) == 0
    assert gn_lower_bound(G, strat) == Q(9)


def test_rc_not_playable_on_rc_minus():
    G = gallery("R_c_minus")
    strat = LinearStrategy(graph=G, s=3, rows=[dict(r) for r in RC_ROWS])
    with pytest.raises(StrategyError):
        validate_playable(G, strat)


def test_r_blowup4_rank_13():
    strat = builtin_strategy("r_blowup4")
    validate_playable(strat.graph, strat)
    assert strat.blowup_t == 4
    assert strat.rank() == 13
    assert win_probability(strat) == Q(1, 3**13)
    assert gn_lower_bound(gallery("R"), strat) == Q(27, 4)


def test_rcminus_blowup6_rank_25():
    strat = builtin_strategy("rcminus_blowup6")
    validate_playable(strat.graph, strat)
    assert strat.blowup_t == 6
    assert strat.rank() == 25
    assert win_probability(strat) == Q(1, 3**25)
    assert gn_lower_bound(gallery("R_c_minus"), strat) == Q(53, 6)


def test_strategy_file_round_trip():
    strat = builtin_strategy("rc")
    text = strategy_to_text(strat)
    assert text.startswith("s=3")
    back = strategy_from_text(gallery("R_c"), text)
    assert back.rows == strat.rows
    assert back.s == 3
    validate_playable(back.graph, back)


def test_strategy_file_blowup_header():
    strat = builtin_strategy("r_blowup4")
    text = strategy_to_text(strat)
    assert "blowup=4" in text
    back = strategy_from_text(gallery("R"), text)
    assert back.blowup_t == 4
    assert back.rank() == 13


def test_strategy_file_rejects_missing_header():
    with pytest.raises(StrategyError):
        strategy_from_text(gallery("K_3"), "1:1 2:1\n")


def test_tables_realize_win_probability():
    G = gallery("K_3")
    strat = clique_sum_strategy(G, [0, 1, 2], s=3)
    derivs = validate_playable(G, strat)
    tables = tables_from_derivations(strat, derivs)
    fixed = count_fixed_points(G, 3, tables)
    # 27 assignments, win probability 1/3 -> 9 winning assignments
    assert fixed == 9


def test_brute_force_known_values():
    assert brute_force_gn(gallery("K_2"), 2)[0] == Q(1)
    assert brute_force_gn(gallery("K_3"), 2)[0] == Q(2)
    assert brute_force_gn(gallery("directed_cycle_3"), 2)[0] == Q(1)
    assert brute_force_gn(gallery("empty_3"), 2)[0] == Q(0)


def test_brute_force_budget_guard():
    with pytest.raises(StrategyError):
        brute_force_gn(gallery("K_5"), 3, budget=1000)
