"""Rainbow-triangle enumeration, counting and the ``T^2 <= 2RGB`` check."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import combinations, permutations
from typing import NamedTuple

from .errors import InstanceTooLarge
from .graph import BLUE, GREEN, RED, ColoredGraph, color_counts, iter_bits

ORACLE_MAX_N = 2000


class RainbowTriangle(NamedTuple):
    """A rainbow triangle keyed by roles.

    ``v_r`` is opposite the red edge, ``v_g`` opposite the green edge and
    ``v_b`` opposite the blue edge, so ``(v_r, v_g, v_b)`` is in order.
    """

    v_r: int
    v_g: int
    v_b: int

    @property
    def red_edge(self) -> tuple[int, int]:
        return _pair(self.v_g, self.v_b)


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def is_rainbow_in_order(g: ColoredGraph, x: int, y: int, z: int) -> bool:
    """True iff ``{x,y}`` is blue, ``{y,z}`` is red and ``{x,z}`` is green."""
    g.check_vertex(x, y, z)
    return g.color(x, y) is BLUE and g.color(y, z) is RED and g.color(x, z) is GREEN


def enumerate_rainbow_triangles(g: ColoredGraph) -> list[RainbowTriangle]:
    """All rainbow triangles, sorted by ``(v_r, v_g, v_b)``.

    Each triangle has exactly one blue edge ``{v_r, v_g}``, so scanning blue
    edges visits each triangle once.
    """
    red, green = g.adj[RED], g.adj[GREEN]
    out = []
    for a, b in g.edges_of(BLUE):
        # a = v_r: v_b is a green neighbor of a and a red neighbor of b
        for c in iter_bits(green[a] & red[b]):
            out.append(RainbowTriangle(a, b, c))
        for c in iter_bits(red[a] & green[b]):
            out.append(RainbowTriangle(b, a, c))
    out.sort()
    return out


def count_rainbow_triangles_fast(g: ColoredGraph) -> int:
    red, green = g.adj[RED], g.adj[GREEN]
    total = 0
    for a, b in g.edges_of(BLUE):
        total += (red[a] & green[b]).bit_count() + (green[a] & red[b]).bit_count()
    return total


def count_rainbow_triangles_oracle(g: ColoredGraph, max_n: int = ORACLE_MAX_N) -> int:
    """Brute force over all vertex triples and their six orderings."""
    if g.n > max_n:
        raise InstanceTooLarge(f"oracle limited to n <= {max_n}, got n={g.n}")
    color = g.color
    total = 0
    for tri in combinations(range(g.n), 3):
        i, j, k = tri
        if color(i, j) is None or color(j, k) is None or color(i, k) is None:
            continue
        hits = sum(
            1
            for x, y, z in permutations(tri)
            if color(x, y) is BLUE and color(y, z) is RED and color(x, z) is GREEN
        )
        if hits > 1:
            raise AssertionError(f"triangle {tri} has {hits} in-order role assignments")
        total += hits
    return total


@dataclass(frozen=True)
class BoundReport:
    T: int
    R: int
    G: int
    B: int
    lhs: int
    rhs: int
    holds: bool
    ratio: Fraction

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "R": self.R,
            "G": self.G,
            "B": self.B,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "ratio": decimal_string(self.ratio),
            "ratio_rational": f"{self.ratio.numerator}/{self.ratio.denominator}",
        }


def bound_ratio(T: int, R: int, G: int, B: int) -> Fraction:
    """``T^2 / 2RGB`` with the convention that an empty right side gives 0."""
    rhs = 2 * R * G * B
    if rhs == 0:
        # T > 0 forces R, G, B > 0, so rhs == 0 implies T == 0
        return Fraction(0)
    return Fraction(T * T, rhs)


def verify_bound(g: ColoredGraph) -> BoundReport:
    T = count_rainbow_triangles_fast(g)
    R, G, B = color_counts(g)
    lhs, rhs = T * T, 2 * R * G * B
    return BoundReport(T, R, G, B, lhs, rhs, lhs <= rhs, bound_ratio(T, R, G, B))


def decimal_string(q: Fraction, digits: int = 20) -> str:
    """Decimal rendering of a rational, rounded to ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d.normalize(), "f")
