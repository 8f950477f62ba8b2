"""graph6 / digraph6 serialization."""

import pytest

from guessnum.digraph import Digraph
from guessnum.graph6 import (
    FormatError,
    parse_digraph6,
    parse_graph6,
    parse_line,
    read_file,
    write_auto,
    write_digraph6,
    write_graph6,
)


def undirected(n, pairs):
    return Digraph(n, [(u, v) for u, v in pairs] + [(v, u) for u, v in pairs])


def test_k3_encodes_to_Bw():
    K3 = undirected(3, [(0, 1), (0, 2), (1, 2)])
    assert write_graph6(K3) == "Bw"
    assert parse_graph6("Bw") == K3


def test_round_trip_undirected():
    for n, pairs in [
        (1, []),
        (5, [(i, (i + 1) % 5) for i in range(5)]),
        (7, [(0, 3), (2, 6), (1, 4), (4, 5)]),
    ]:
        G = undirected(n, pairs)
        assert parse_graph6(write_graph6(G)) == G


def test_round_trip_directed():
    G = Digraph(4, [(0, 1), (1, 2), (3, 1), (2, 0)])
    line = write_digraph6(G)
    assert line.startswith("&")
    assert parse_digraph6(line) == G


def test_write_auto_picks_format():
    und = undirected(3, [(0, 1)])
    assert not write_auto(und).startswith("&")
    dire = Digraph(3, [(0, 1)])
    assert write_auto(dire).startswith("&")
    assert parse_line(write_auto(dire)) == dire


def test_graph6_refuses_directed_graphs():
    with pytest.raises(FormatError):
        write_graph6(Digraph(3, [(0, 1)]))


def test_parse_rejects_malformed_lines():
    for bad in ("", "B", "Bwx", "\x1f"):
        with pytest.raises(FormatError):
            parse_graph6(bad)


def test_read_file_reports_line_numbers(tmp_path):
    p = tmp_path / "c.g6"
    p.write_text("Bw\nBLOWN\n")
    with pytest.raises(FormatError, match="2"):
        list(read_file(str(p)))


def test_read_file_yields_in_order(tmp_path):
    g1 = undirected(3, [(0, 1), (1, 2), (0, 2)])
    g2 = undirected(4, [(0, 1)])
    p = tmp_path / "c.g6"
    p.write_text(write_auto(g1) + "\n" + write_auto(g2) + "\n")
    assert list(read_file(str(p))) == [g1, g2]
