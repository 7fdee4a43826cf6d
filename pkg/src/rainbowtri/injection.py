"""The injection ``f_x : S_x -> T_x`` and its inverse.

For a context vertex ``x``:

* ``S_x`` holds tuples ``(x1, x2, y, z, z1, z2)`` with ``(x, x1, x2)`` and
  ``(z, z1, z2)`` in order, ``{x, y}`` blue and ``z`` in ``{x, y}``.
* ``T_x`` holds tuples ``(a, b1, b2, ell)`` with ``a`` a green neighbor of
  ``x``, ``b1`` and ``b2`` blue neighbors of ``x``, and ``ell`` a red edge.

The color of ``{a, b1}`` in an image tuple (green, blue or red) records which
of the three cases produced it, which is what makes the map invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .counting import is_rainbow_in_order
from .errors import NotInDomain, NotInImage
from .graph import BLUE, GREEN, RED, Color, ColoredGraph, iter_bits


class SxTuple(NamedTuple):
    x1: int
    x2: int
    y: int
    z: int
    z1: int
    z2: int


class TxTuple(NamedTuple):
    a: int
    b1: int
    b2: int
    ell: tuple[int, int]


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _in_order_at(g: ColoredGraph, x: int) -> list[tuple[int, int]]:
    """Pairs ``(y, z)`` such that ``(x, y, z)`` forms a rainbow triangle in order."""
    red, green = g.adj[RED], g.adj[GREEN]
    out = []
    for y in iter_bits(g.adj[BLUE][x]):
        out.extend((y, z) for z in iter_bits(green[x] & red[y]))
    return out


def in_S(g: ColoredGraph, x: int, s: SxTuple) -> bool:
    x1, x2, y, z, z1, z2 = s
    g.check_vertex(x, *s)
    return (
        is_rainbow_in_order(g, x, x1, x2)
        and is_rainbow_in_order(g, z, z1, z2)
        and g.color(x, y) is BLUE
        and z in (x, y)
    )


def in_T(g: ColoredGraph, x: int, t: TxTuple) -> bool:
    a, b1, b2, ell = t
    c1, c2 = ell
    g.check_vertex(x, a, b1, b2, c1, c2)
    return (
        g.color(x, a) is GREEN
        and g.color(x, b1) is BLUE
        and g.color(x, b2) is BLUE
        and g.color(c1, c2) is RED
    )


def enumerate_S(g: ColoredGraph, x: int) -> list[SxTuple]:
    g.check_vertex(x)
    at_x = _in_order_at(g, x)
    if not at_x:
        return []
    out = []
    for y in iter_bits(g.adj[BLUE][x]):
        tails = [(x, zz) for zz in at_x] + [(y, zz) for zz in _in_order_at(g, y)]
        for x1, x2 in at_x:
            out.extend(SxTuple(x1, x2, y, z, z1, z2) for z, (z1, z2) in tails)
    out.sort()
    return out


def enumerate_T(g: ColoredGraph, x: int) -> list[TxTuple]:
    g.check_vertex(x)
    greens = list(iter_bits(g.adj[GREEN][x]))
    blues = list(iter_bits(g.adj[BLUE][x]))
    reds = g.edges_of(RED)
    return [TxTuple(a, b1, b2, ell) for a in greens for b1 in blues for b2 in blues for ell in reds]


def injection_case(g: ColoredGraph, x: int, s: SxTuple) -> int:
    """Which of the three defining cases applies to ``s`` (1, 2 or 3)."""
    _, _, y, z, z1, z2 = s
    if z == y and is_rainbow_in_order(g, x, z1, z2):
        return 1
    if z == y and is_rainbow_in_order(g, x, z2, z1):
        return 2
    return 3


def apply_injection(g: ColoredGraph, x: int, s: SxTuple) -> TxTuple:
    if not in_S(g, x, s):
        raise NotInDomain(f"{tuple(s)} is not in S_{x}")
    x1, x2, y, z, z1, z2 = s
    case = injection_case(g, x, s)
    if case == 1:
        return TxTuple(z2, z, z1, _pair(x1, x2))
    if case == 2:
        return TxTuple(z1, z, z2, _pair(x1, x2))
    return TxTuple(x2, x1, y, _pair(z1, z2))


def _order_in(g: ColoredGraph, x: int, ell: tuple[int, int]) -> tuple[int, int] | None:
    """The ordering ``(c1, c2)`` of ``ell`` with ``(x, c1, c2)`` in order, if any.

    At most one ordering qualifies since ``{x, c1}`` must be blue and
    ``{x, c2}`` green.
    """
    c1, c2 = ell
    if is_rainbow_in_order(g, x, c1, c2):
        return c1, c2
    if is_rainbow_in_order(g, x, c2, c1):
        return c2, c1
    return None


def invert_injection(g: ColoredGraph, x: int, t: TxTuple) -> SxTuple:
    """Reconstruct the unique preimage of ``t``; raise :class:`NotInImage` if none."""
    if not in_T(g, x, t):
        raise NotInDomain(f"{tuple(t)} is not in T_{x}")
    a, b1, b2, ell = t
    tag = g.color(a, b1)
    if tag is None:
        raise NotInImage(f"{{{a}, {b1}}} is not an edge")

    if tag is GREEN or tag is BLUE:
        cs = _order_in(g, x, ell)
        if cs is None:
            raise NotInImage(f"{ell} does not close an in-order triangle at {x}")
        if tag is GREEN:
            s = SxTuple(cs[0], cs[1], b1, b1, b2, a)
        else:
            s = SxTuple(cs[0], cs[1], b1, b1, a, b2)
    else:
        y = b2
        z = x if _order_in(g, x, ell) is not None else y
        zs = _order_in(g, z, ell)
        if zs is None:
            raise NotInImage(f"{ell} does not close an in-order triangle at {z}")
        s = SxTuple(b1, a, y, z, zs[0], zs[1])

    if not in_S(g, x, s) or apply_injection(g, x, s) != t:
        raise NotInImage(f"{tuple(t)} has no preimage in S_{x}")
    return s


@dataclass(frozen=True)
class InjectionReport:
    x: int
    s_size: int
    t_size: int
    well_defined: bool
    injective: bool
    roundtrip_ok: bool

    @property
    def ok(self) -> bool:
        return self.well_defined and self.injective and self.roundtrip_ok

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "s_size": self.s_size,
            "t_size": self.t_size,
            "well_defined": self.well_defined,
            "injective": self.injective,
            "roundtrip_ok": self.roundtrip_ok,
        }


def t_size(g: ColoredGraph, x: int) -> int:
    """``|T_x|`` without materializing the product."""
    g.check_vertex(x)
    blue = g.adj[BLUE][x].bit_count()
    n_red = sum(1 for e in g.edges if e.color is RED)
    return g.adj[GREEN][x].bit_count() * blue * blue * n_red


def injection_mapping(g: ColoredGraph, x: int) -> list[tuple[SxTuple, TxTuple]]:
    return [(s, apply_injection(g, x, s)) for s in enumerate_S(g, x)]


def verify_injection(g: ColoredGraph, x: int) -> InjectionReport:
    """Map all of ``S_x`` and check membership, collisions and both round trips."""
    domain = enumerate_S(g, x)
    well_defined = injective = roundtrip = True
    seen: dict[TxTuple, SxTuple] = {}
    for s in domain:
        t = apply_injection(g, x, s)
        if not in_T(g, x, t):
            well_defined = False
        if t in seen:
            injective = False
        seen[t] = s
        try:
            back = invert_injection(g, x, t)
        except (NotInImage, NotInDomain):
            roundtrip = False
            continue
        if back != s or apply_injection(g, x, back) != t:
            roundtrip = False
    return InjectionReport(x, len(domain), t_size(g, x), well_defined, injective, roundtrip)


# --- vectorized form -------------------------------------------------------


def apply_injection_batch(colors: np.ndarray, x, x1, x2, y, z, z1, z2):
    """Apply ``f_x`` elementwise to arrays of ``S_x`` coordinates.

    ``colors`` is the matrix from :meth:`ColoredGraph.color_matrix`. Inputs are
    assumed to lie in the domain. Returns ``(a, b1, b2, ell_lo, ell_hi)``.
    """
    R, G, B = int(Color.RED), int(Color.GREEN), int(Color.BLUE)

    def in_order(p, q, r):
        return (colors[p, q] == B) & (colors[q, r] == R) & (colors[p, r] == G)

    case1 = (z == y) & in_order(x, z1, z2)
    case2 = (z == y) & ~case1 & in_order(x, z2, z1)
    case3 = ~(case1 | case2)

    a = np.where(case1, z2, np.where(case2, z1, x2))
    b1 = np.where(case3, x1, z)
    b2 = np.where(case1, z1, np.where(case2, z2, y))
    p = np.where(case3, z1, x1)
    q = np.where(case3, z2, x2)
    return a, b1, b2, np.minimum(p, q), np.maximum(p, q)
