"""graph6 / digraph6 text I/O.

Follows the published byte layout: 6-bit chunks offset by 63, upper-triangle
column order for graph6, row-major full adjacency matrix for digraph6 (with
leading '&').  One graph per line, ASCII, no blank lines.
"""

from __future__ import annotations

from typing import Iterable, List

from .digraph import Digraph


class FormatError(ValueError):
    pass


def _encode_n(n: int) -> str:
    if n < 0:
        raise FormatError("negative order")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise FormatError("order too large for graph6")


def _decode_n(s: str) -> tuple:
    if not s:
        raise FormatError("empty graph6 line")
    if s[0] != "~":
        return ord(s[0]) - 63, 1
    if len(s) >= 2 and s[1] != "~":
        if len(s) < 4:
            raise FormatError("truncated order field")
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        return n, 4
    if len(s) < 8:
        raise FormatError("truncated order field")
    n = 0
    for ch in s[2:8]:
        n = (n << 6) | (ord(ch) - 63)
    return n, 8


def _pack_bits(bits: List[int]) -> str:
    while len(bits) % 6:
        bits.append(0)
    out = []
    for i in range(0, len(bits), 6):
        v = 0
        for b in bits[i : i + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def _unpack_bits(s: str, count: int) -> List[int]:
    bits: List[int] = []
    for ch in s:
        v = ord(ch) - 63
        if not (0 <= v <= 63):
            raise FormatError(f"invalid graph6 byte {ch!r}")
        bits.extend((v >> k) & 1 for k in (5, 4, 3, 2, 1, 0))
    if len(bits) < count:
        raise FormatError("line too short for declared order")
    if len(bits) - count >= 6:
        raise FormatError("line too long for declared order")
    if any(bits[count:]):
        raise FormatError("nonzero padding bits")
    return bits[:count]


def write_graph6(G: Digraph) -> str:
    """Canonical graph6 encoding; requires an undirected graph."""
    if not G.is_undirected():
        raise FormatError("graph6 cannot encode a directed graph; use digraph6")
    n = G.n
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append(1 if (u, v) in G.edges else 0)
    return _encode_n(n) + _pack_bits(bits)


def parse_graph6(text: str) -> Digraph:
    s = text.strip()
    if s.startswith("&"):
        raise FormatError("digraph6 line passed to parse_graph6")
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    n, off = _decode_n(s)
    bits = _unpack_bits(s[off:], n * (n - 1) // 2)
    edges = []
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                edges.append((u, v))
                edges.append((v, u))
            i += 1
    return Digraph(n, edges)


def write_digraph6(G: Digraph) -> str:
    n = G.n
    bits = []
    for u in range(n):
        for v in range(n):
            bits.append(1 if (u, v) in G.edges else 0)
    return "&" + _encode_n(n) + _pack_bits(bits)


def parse_digraph6(text: str) -> Digraph:
    s = text.strip()
    if s.startswith(">>digraph6<<"):
        s = s[len(">>digraph6<<") :]
    if not s.startswith("&"):
        raise FormatError("digraph6 line must start with '&'")
    s = s[1:]
    n, off = _decode_n(s)
    bits = _unpack_bits(s[off:], n * n)
    edges = []
    i = 0
    for u in range(n):
        for v in range(n):
            if bits[i]:
                if u == v:
                    raise FormatError(f"loop at vertex {u} not allowed")
                edges.append((u, v))
            i += 1
    return Digraph(n, edges)


def parse_line(text: str) -> Digraph:
    """Parse either format, dispatching on the leading '&'."""
    s = text.strip()
    if s.startswith("&") or s.startswith(">>digraph6<<"):
        return parse_digraph6(s)
    return parse_graph6(s)


def write_auto(G: Digraph) -> str:
    """graph6 when undirected, digraph6 otherwise."""
    return write_graph6(G) if G.is_undirected() else write_digraph6(G)


def read_file(path) -> Iterable[Digraph]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                raise FormatError(f"{path}:{lineno}: blank line")
            try:
                yield parse_line(line)
            except FormatError as e:
                raise FormatError(f"{path}:{lineno}: {e}") from e
