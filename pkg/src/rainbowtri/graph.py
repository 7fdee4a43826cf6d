"""Edge-3-colored simple graphs.

Vertices are the dense integers ``0..n-1``. Each color keeps one adjacency
bit-row per vertex, stored as a Python ``int`` so neighborhood intersection is
a single ``&`` followed by ``int.bit_count``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import DuplicatePair, ParseError, SelfLoop, VertexOutOfRange


class Color(IntEnum):
    RED = 1
    GREEN = 2
    BLUE = 3

    @property
    def letter(self) -> str:
        return "rgb"[self - 1]

    @classmethod
    def parse(cls, token: str) -> "Color":
        try:
            return _LETTERS[token.lower()]
        except KeyError:
            raise ValueError(f"unknown color {token!r}") from None


_LETTERS = {"r": Color.RED, "g": Color.GREEN, "b": Color.BLUE}

RED, GREEN, BLUE = Color.RED, Color.GREEN, Color.BLUE


class ColoredEdge(NamedTuple):
    u: int
    v: int
    color: Color


def iter_bits(row: int) -> Iterator[int]:
    """Yield the set positions of a bit-row in increasing order."""
    while row:
        low = row & -row
        yield low.bit_length() - 1
        row ^= low


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    """Immutable simple graph whose edges each carry one of three colors.

    Build instances with :func:`build_graph`; the constructor trusts its input.
    """

    n: int
    edges: tuple[ColoredEdge, ...]
    adj: dict[Color, tuple[int, ...]] = field(repr=False)
    _colors: dict[tuple[int, int], Color] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def color(self, u: int, v: int) -> Color | None:
        """Color of the edge ``{u, v}``, or ``None`` when it is absent."""
        if u > v:
            u, v = v, u
        return self._colors.get((u, v))

    def check_vertex(self, *vs: int) -> None:
        for v in vs:
            if not 0 <= v < self.n:
                raise VertexOutOfRange(v, self.n)

    def edges_of(self, c: Color) -> list[tuple[int, int]]:
        return [(e.u, e.v) for e in self.edges if e.color == c]

    def color_matrix(self):
        """Dense ``n x n`` int8 matrix of color codes (0 = no edge)."""
        import numpy as np

        m = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v, c in self.edges:
            m[u, v] = m[v, u] = int(c)
        return m


def build_graph(n: int, edges: Iterable[Sequence]) -> ColoredGraph:
    """Validate an edge list and build the graph with canonical ``u < v`` edges.

    Each edge is ``(u, v, color)`` where color is a :class:`Color` or one of the
    letters ``r``, ``g``, ``b``.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    colors: dict[tuple[int, int], Color] = {}
    for u, v, c in edges:
        if not isinstance(c, Color):
            c = Color.parse(c) if isinstance(c, str) else Color(c)
        for w in (u, v):
            if not 0 <= w < n:
                raise VertexOutOfRange(w, n)
        if u == v:
            raise SelfLoop(u)
        key = (u, v) if u < v else (v, u)
        if key in colors:
            raise DuplicatePair(*key)
        colors[key] = c

    rows = {c: [0] * n for c in Color}
    for (u, v), c in colors.items():
        rows[c][u] |= 1 << v
        rows[c][v] |= 1 << u
    canonical = tuple(ColoredEdge(u, v, c) for (u, v), c in sorted(colors.items()))
    return ColoredGraph(
        n=n,
        edges=canonical,
        adj={c: tuple(r) for c, r in rows.items()},
        _colors=colors,
    )


def color_counts(g: ColoredGraph) -> tuple[int, int, int]:
    """Return ``(R, G, B)``, the number of edges of each color."""
    counts = {c: 0 for c in Color}
    for e in g.edges:
        counts[e.color] += 1
    return counts[RED], counts[GREEN], counts[BLUE]


def neighbors(g: ColoredGraph, x: int, c: Color) -> int:
    """Bit-row of the ``c``-colored neighbors of ``x``."""
    g.check_vertex(x)
    return g.adj[c][x]


def neighbor_list(g: ColoredGraph, x: int, c: Color) -> list[int]:
    return list(iter_bits(neighbors(g, x, c)))


def relabel(g: ColoredGraph, perm: Sequence[int]) -> ColoredGraph:
    """Image of ``g`` under the vertex bijection ``v -> perm[v]``."""
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of range(n)")
    return build_graph(g.n, [(perm[u], perm[v], c) for u, v, c in g.edges])


# --- text edge-list format -------------------------------------------------


def parse_edge_list(text: str | bytes) -> ColoredGraph:
    """Parse the edge-list format: ``n`` on the first line, then ``u v c``.

    ``#`` starts a comment and blank lines are skipped.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n: int | None = None
    edges: list[tuple[int, int, Color]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise ParseError(lineno, f"expected vertex count, got {line!r}")
            try:
                n = int(parts[0])
            except ValueError:
                raise ParseError(lineno, f"invalid vertex count {parts[0]!r}") from None
            if n < 0:
                raise ParseError(lineno, "vertex count must be non-negative")
            continue
        if len(parts) != 3:
            raise ParseError(lineno, f"expected 'u v c', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"invalid vertex id in {line!r}") from None
        try:
            c = Color.parse(parts[2])
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        edges.append((u, v, c))
    if n is None:
        raise ParseError(0, "missing vertex count")
    return build_graph(n, edges)


def serialize_edge_list(g: ColoredGraph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v} {c.letter}" for u, v, c in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str) -> ColoredGraph:
    """Read an edge-list file; ``"-"`` reads standard input."""
    if path == "-":
        import sys

        return parse_edge_list(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


# --- generators ------------------------------------------------------------

UNIFORM_BIAS = (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))


def parse_bias(text: str) -> tuple[Fraction, Fraction, Fraction]:
    """Parse ``"r,g,b"`` weights such as ``"1/3,1/3,1/3"`` or ``"0.5,0.3,0.2"``."""
    parts = [Fraction(p.strip()) for p in text.split(",")]
    if len(parts) != 3 or any(p < 0 for p in parts) or sum(parts) != 1:
        raise ValueError(f"color bias must be three non-negative weights summing to 1, got {text!r}")
    return parts[0], parts[1], parts[2]


def random_colored_graph(
    n: int,
    p: float,
    seed: int,
    bias: Sequence[Fraction | float] = UNIFORM_BIAS,
) -> ColoredGraph:
    """G(n, p) with each present edge colored independently by ``bias``."""
    if not 0 <= p <= 1:
        raise ValueError(f"edge density must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    weights = [float(b) for b in bias]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, rng.choices(tuple(Color), weights=weights)[0]))
    return build_graph(n, edges)


def k4_proper() -> ColoredGraph:
    """K4 with its three perfect matchings colored red, green and blue."""
    return build_graph(
        4,
        [(0, 1, RED), (2, 3, RED), (0, 2, GREEN), (1, 3, GREEN), (0, 3, BLUE), (1, 2, BLUE)],
    )


def rainbow_triangle() -> ColoredGraph:
    return build_graph(3, [(0, 1, RED), (1, 2, BLUE), (0, 2, GREEN)])
