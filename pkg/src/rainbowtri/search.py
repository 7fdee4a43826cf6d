"""Search for colored graphs maximizing ``T^2 / 2RGB``."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .counting import BoundReport, bound_ratio, decimal_string, verify_bound
from .entropy import DEFAULT_SUPPORT_CAP, AuditLedger, audit_proof
from .errors import InstanceTooLarge, NoRainbowTriangle
from .graph import UNIFORM_BIAS, Color, ColoredGraph, build_graph, random_colored_graph, serialize_edge_list

EXHAUSTIVE_MAX_N = 5


@dataclass
class SearchResult:
    best_ratio: Fraction
    best_instances: list[ColoredGraph]
    instances_examined: int
    method: str
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "seed": self.seed,
            "params": self.params,
            "instances_examined": self.instances_examined,
            "best_ratio": decimal_string(self.best_ratio),
            "best_ratio_rational": f"{self.best_ratio.numerator}/{self.best_ratio.denominator}",
            "best_instances": [serialize_edge_list(g) for g in self.best_instances],
        }


class BoundViolation(AssertionError):
    """A searched instance exceeded ratio 1, which would contradict T^2 <= 2RGB."""


def _check_ratio(ratio: Fraction, g: ColoredGraph | None = None) -> None:
    if ratio > 1:
        detail = f"\n{serialize_edge_list(g)}" if g is not None else ""
        raise BoundViolation(f"ratio {ratio} exceeds 1{detail}")


# --- exhaustive ------------------------------------------------------------


def _scan_block(codes: np.ndarray, triples: np.ndarray):
    """Counts ``(T, R, G, B)`` for a block of assignments (one row per graph)."""
    R = (codes == 1).sum(axis=1)
    G = (codes == 2).sum(axis=1)
    B = (codes == 3).sum(axis=1)
    c = codes[:, triples]  # (rows, n_triples, 3)
    # with codes in 0..3, product 6 forces the colors {1, 2, 3}
    rainbow = c.prod(axis=2) == 6
    T = rainbow.sum(axis=1)
    return T, R, G, B


def exhaustive_search(n: int, threads: int = 1, block_bits: int = 16) -> SearchResult:
    """Try every assignment of {absent, red, green, blue} to the vertex pairs of K_n.

    Maximizers are reported as distinct edge sets; isomorphic copies are kept.
    """
    if n > EXHAUSTIVE_MAX_N:
        raise InstanceTooLarge(f"exhaustive search limited to n <= {EXHAUSTIVE_MAX_N}, got n={n}")
    if n < 0:
        raise ValueError("n must be non-negative")
    pairs = list(combinations(range(n), 2))
    index = {p: k for k, p in enumerate(pairs)}
    triples = np.asarray(
        [[index[(i, j)], index[(j, k)], index[(i, k)]] for i, j, k in combinations(range(n), 3)],
        dtype=np.int64,
    ).reshape(-1, 3)
    m = len(pairs)
    total = 4**m
    block = 4 ** min(m, block_bits // 2)
    digits = 4 ** np.arange(m, dtype=np.int64)

    def run(start: int):
        ids = np.arange(start, min(start + block, total), dtype=np.int64)
        codes = (ids[:, None] // digits[None, :]) % 4
        if len(triples):
            T, R, G, B = _scan_block(codes, triples)
        else:
            T = np.zeros(len(ids), dtype=np.int64)
            R, G, B = ((codes == c).sum(axis=1) for c in (1, 2, 3))
        profiles = {}
        for key in set(zip(T.tolist(), R.tolist(), G.tolist(), B.tolist())):
            profiles[key] = bound_ratio(*key)
        best = max(profiles.values())
        winners = [p for p, r in profiles.items() if r == best]
        mask = np.zeros(len(ids), dtype=bool)
        for t, r, g, b in winners:
            mask |= (T == t) & (R == r) & (G == g) & (B == b)
        return best, profiles, ids[mask].tolist()

    starts = range(0, total, block)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]

    best = max(p[0] for p in parts)
    for _, profiles, _ in parts:
        for key, ratio in profiles.items():
            _check_ratio(ratio)
    winners = sorted(i for b, _, ids in parts if b == best for i in ids)
    instances = [_decode(i, n, pairs) for i in winners]
    for g in instances:
        if verify_bound(g).ratio != best:
            raise AssertionError("maximizer failed re-verification")
    return SearchResult(best, instances, total, "exhaustive", None, {"n": n})


def _decode(code: int, n: int, pairs: Sequence[tuple[int, int]]) -> ColoredGraph:
    edges = []
    for u, v in pairs:
        c = code % 4
        code //= 4
        if c:
            edges.append((u, v, Color(c)))
    return build_graph(n, edges)


# --- hill climbing ---------------------------------------------------------


def hill_climb(
    n: int,
    p: float,
    color_bias: Sequence[Fraction] = UNIFORM_BIAS,
    steps: int = 1000,
    seed: int = 0,
) -> SearchResult:
    """Local search from a seeded random graph, accepting non-decreasing moves.

    A move picks a uniformly random vertex pair: an absent pair gets an edge
    of a bias-drawn color; a present edge is deleted or recolored with equal
    probability.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if len(color_bias) != 3 or sum(Fraction(b) for b in color_bias) != 1:
        raise ValueError("color bias must be three weights summing to 1")
    if n < 2:
        raise ValueError(f"hill climbing needs n >= 2, got {n}")

    rng = random.Random(seed)
    start = random_colored_graph(n, p, seed=rng.randrange(2**63), bias=color_bias)
    colors = {(e.u, e.v): e.color for e in start.edges}
    pairs = list(combinations(range(n), 2))
    weights = [float(b) for b in color_bias]

    current = verify_bound(start)
    _check_ratio(current.ratio, start)
    best_ratio = current.ratio
    best = {tuple(sorted(colors.items()))}
    examined = 1

    for _ in range(steps):
        pair = pairs[rng.randrange(len(pairs))]
        old = colors.get(pair)
        if old is None:
            new = rng.choices(tuple(Color), weights=weights)[0]
        elif rng.random() < 0.5:
            new = None
        else:
            new = rng.choice([c for c in Color if c is not old])
        _set(colors, pair, new)
        g = build_graph(n, [(u, v, c) for (u, v), c in colors.items()])
        report = verify_bound(g)
        examined += 1
        _check_ratio(report.ratio, g)
        if report.ratio >= current.ratio:
            current = report
            key = tuple(sorted(colors.items()))
            if report.ratio > best_ratio:
                best_ratio, best = report.ratio, {key}
            elif report.ratio == best_ratio:
                best.add(key)
        else:
            _set(colors, pair, old)

    instances = [build_graph(n, [(u, v, c) for (u, v), c in key]) for key in sorted(best)]
    for g in instances:
        if verify_bound(g).ratio != best_ratio:
            raise AssertionError("hill-climb instance failed re-verification")
    params = {"n": n, "p": p, "bias": [str(Fraction(b)) for b in color_bias], "steps": steps}
    return SearchResult(best_ratio, instances, examined, "hill-climb", seed, params)


def _set(colors: dict, pair, color) -> None:
    if color is None:
        colors.pop(pair, None)
    else:
        colors[pair] = color


# --- tightness -------------------------------------------------------------


@dataclass
class TightnessReport:
    bound: BoundReport
    ledger: AuditLedger

    @property
    def slacks(self) -> dict[str, float]:
        return {s.id: s.slack for s in self.ledger.steps if s.relation == "<="}

    @property
    def total_slack(self) -> float:
        """Slack of the final comparison, which the intermediate slacks add up to."""
        return self.ledger.step("M").slack

    def to_dict(self) -> dict:
        return {
            "bound": self.bound.to_dict(),
            "total_slack_bits": self.total_slack,
            "slacks": self.slacks,
            "ledger": self.ledger.to_dict(),
        }


def tightness_report(g: ColoredGraph, support_cap: int = DEFAULT_SUPPORT_CAP) -> TightnessReport:
    bound = verify_bound(g)
    if bound.T == 0:
        raise NoRainbowTriangle()
    return TightnessReport(bound, audit_proof(g, support_cap=support_cap))
