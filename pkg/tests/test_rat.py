"""Exact rational helpers."""

import pytest

from guessnum.rat import Q, fmt, from_float, rat


def test_rat_parses_fractions_and_integers():
    assert rat("5/2") == Q(5, 2)
    assert rat("7") == Q(7)
    assert rat("-3/4") == Q(-3, 4)
    assert rat(" 10/3 ") == Q(10, 3)


def test_rat_rejects_garbage():
    for bad in ("", "a/b", "1/0", "1.5.2"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            rat(bad)


def test_fmt_round_trips():
    for v in (Q(0), Q(5, 2), Q(-7), Q(114, 17), Q(1212, 181)):
        assert rat(fmt(v)) == v


def test_fmt_integers_have_no_slash():
    assert fmt(Q(4)) == "4"
    assert fmt(Q(8, 2)) == "4"


def test_from_float_recovers_simple_fractions():
    assert from_float(0.5, 100) == Q(1, 2)
    assert from_float(2 / 3, 10**6) == Q(2, 3)
    assert from_float(6.705882352941177, 10**6) == Q(114, 17)


def test_exact_arithmetic_has_no_drift():
    acc = Q(0)
    for _ in range(300):
        acc += Q(1, 3)
    assert acc == Q(100)
