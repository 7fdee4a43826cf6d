"""Exact joint distribution of the sampled triangle variables and the entropy audit.

The sampling scheme:

* ``delta`` is a uniformly random rainbow triangle with roles ``(v_r, v_g, v_b)``;
* ``u`` is a uniform blue neighbor of ``v_r``, drawn independently of the rest
  of the triangle given ``v_r``, and ``L_b = {v_r, u}``;
* ``(delta_prime, u_prime)`` is an independent copy of ``(delta, u)``
  conditioned on ``{v'_r, u'} = L_b`` as a set.

Probabilities are exact: the distribution stores one integer weight per
outcome over a shared integer total, so every marginal is an exact rational.
Only the final ``log2`` in :func:`entropy` is floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Hashable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from .counting import RainbowTriangle, enumerate_rainbow_triangles
from .errors import NoRainbowTriangle, SupportTooLarge
from .graph import BLUE, ColoredGraph, color_counts, iter_bits
from .injection import SxTuple, apply_injection, apply_injection_batch

DEFAULT_SUPPORT_CAP = 10**6
TOL = 1e-9
_INT64_SAFE = 2**62


class Outcome(NamedTuple):
    delta: RainbowTriangle
    u: int
    delta_prime: RainbowTriangle
    u_prime: int


@dataclass(frozen=True)
class DerivedVariable:
    """A named function of the outcome.

    ``column`` is an optional vectorized form returning one integer code per
    support point (equal codes iff equal values); variables without it are
    evaluated through ``projection``.
    """

    name: str
    projection: Callable[[Outcome], Hashable]
    column: Callable[["FiniteDistribution"], np.ndarray] | None = field(default=None, compare=False)


VarSpec = Union[str, DerivedVariable]


class FiniteDistribution:
    """Exact pmf over :class:`Outcome` for one graph.

    Support point ``k`` pairs the ``(delta, u)`` draw ``first[k]`` with the
    resampled draw ``second[k]``; its probability is ``weights[k] / total``.
    """

    def __init__(self, graph, triangles, pair_tri, pair_u, first, second, weights, total):
        self.graph: ColoredGraph = graph
        self.triangles: list[RainbowTriangle] = triangles
        self.pair_tri = pair_tri
        self.pair_u = pair_u
        self.first = first
        self.second = second
        self.weights = weights
        self.total: int = total
        self._columns: dict[str, np.ndarray] = {}
        self._entropies: dict[frozenset, float] = {}
        self._image = None
        self._variables = _standard_variables(graph)

    def __len__(self) -> int:
        return len(self.first)

    def outcomes(self) -> Iterator[Outcome]:
        tris, pt, pu = self.triangles, self.pair_tri, self.pair_u
        for i, j in zip(self.first.tolist(), self.second.tolist()):
            yield Outcome(tris[pt[i]], int(pu[i]), tris[pt[j]], int(pu[j]))

    @property
    def pmf(self) -> dict[Outcome, Fraction]:
        return {o: Fraction(int(w), self.total) for o, w in zip(self.outcomes(), self.weights)}

    def variable(self, spec: VarSpec) -> DerivedVariable:
        if isinstance(spec, DerivedVariable):
            return spec
        try:
            return self._variables[spec]
        except KeyError:
            raise KeyError(f"unknown variable {spec!r}; known: {sorted(self._variables)}") from None

    def column(self, spec: VarSpec) -> np.ndarray:
        var = self.variable(spec)
        col = self._columns.get(var.name)
        if col is None:
            if var.column is not None:
                col = var.column(self)
            else:
                index: dict = {}
                col = np.fromiter(
                    (index.setdefault(var.projection(o), len(index)) for o in self.outcomes()),
                    dtype=np.int64,
                    count=len(self),
                )
            self._columns[var.name] = col
        return col

    def codes(self, specs: Sequence[VarSpec]) -> np.ndarray:
        """Dense joint codes in ``0..k-1`` for the tuple of variables."""
        if not specs:
            return np.zeros(len(self), dtype=np.int64)
        code = None
        for spec in specs:
            col = self.column(spec)
            if code is None:
                _, code = np.unique(col, return_inverse=True)
            else:
                _, code = np.unique(code * (int(col.max()) + 1) + col, return_inverse=True)
        return code.astype(np.int64)

    def group_weights(self, specs: Sequence[VarSpec]) -> tuple[np.ndarray, np.ndarray]:
        """Integer weight of every value of the joint variable, plus the codes used."""
        code = self.codes(specs)
        k = int(code.max()) + 1 if len(code) else 0
        if self.weights.dtype == np.int64:
            # total < 2**62, so int64 partial sums are exact
            sums = np.zeros(k, dtype=np.int64)
            np.add.at(sums, code, self.weights)
            exact_total = int(sums.sum())
        else:
            order = np.argsort(code, kind="stable")
            sorted_code = code[order]
            starts = np.flatnonzero(np.r_[True, sorted_code[1:] != sorted_code[:-1]])
            sums = np.add.reduceat(self.weights[order], starts)
            exact_total = sum(sums.tolist())
        if exact_total != self.total:
            raise AssertionError("marginal weights do not sum to the total")
        return sums, code

    def marginal(self, specs: Sequence[VarSpec]) -> dict[tuple, Fraction]:
        """Exact marginal pmf of the joint variable ``specs`` keyed by value tuples."""
        vars_ = [self.variable(s) for s in specs]
        acc: dict[tuple, int] = {}
        for o, w in zip(self.outcomes(), self.weights.tolist()):
            key = tuple(v.projection(o) for v in vars_)
            acc[key] = acc.get(key, 0) + w
        return {k: Fraction(w, self.total) for k, w in acc.items()}

    def image_columns(self):
        """Coordinates of ``f_{v_r}(v_g, v_b, u, v'_r, v'_g, v'_b)`` per support point."""
        if self._image is None:
            t = np.asarray([tuple(tr) for tr in self.triangles], dtype=np.int64).reshape(-1, 3)
            tri1, tri2 = self.pair_tri[self.first], self.pair_tri[self.second]
            self._image = apply_injection_batch(
                self.graph.color_matrix(),
                t[tri1, 0], t[tri1, 1], t[tri1, 2], self.pair_u[self.first],
                t[tri2, 0], t[tri2, 1], t[tri2, 2],
            )
        return self._image


# --- variables -------------------------------------------------------------


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _role_column(which: str, role: int):
    def col(d: FiniteDistribution) -> np.ndarray:
        tri = d.pair_tri[d.first if which == "first" else d.second]
        roles = np.asarray([t[role] for t in d.triangles], dtype=np.int64)
        return roles[tri]

    return col


def _image_of(g: ColoredGraph, o: Outcome):
    d, dp = o.delta, o.delta_prime
    return apply_injection(g, d.v_r, SxTuple(d.v_g, d.v_b, o.u, dp.v_r, dp.v_g, dp.v_b))


def _standard_variables(g: ColoredGraph) -> dict[str, DerivedVariable]:
    n = max(g.n, 1)

    def pair_code(a, b):
        return np.minimum(a, b) * n + np.maximum(a, b)

    def image_col(k):
        def col(d):
            img = d.image_columns()
            return pair_code(img[3], img[4]) if k == 3 else img[k]

        return col

    role = {"v_r": 0, "v_g": 1, "v_b": 2}
    vs = [
        DerivedVariable("delta", lambda o: o.delta, lambda d: d.pair_tri[d.first]),
        DerivedVariable("u", lambda o: o.u, lambda d: d.pair_u[d.first]),
        DerivedVariable("delta_prime", lambda o: o.delta_prime, lambda d: d.pair_tri[d.second]),
        DerivedVariable("u_prime", lambda o: o.u_prime, lambda d: d.pair_u[d.second]),
        DerivedVariable(
            "l_r",
            lambda o: o.delta.red_edge,
            lambda d: pair_code(d.column("v_g"), d.column("v_b")),
        ),
        DerivedVariable(
            "L_b",
            lambda o: _pair(o.delta.v_r, o.u),
            lambda d: pair_code(d.column("v_r"), d.column("u")),
        ),
        DerivedVariable("w", lambda o: _image_of(g, o).a, image_col(0)),
        DerivedVariable("s1", lambda o: _image_of(g, o).b1, image_col(1)),
        DerivedVariable("s2", lambda o: _image_of(g, o).b2, image_col(2)),
        DerivedVariable("L_r", lambda o: _image_of(g, o).ell, image_col(3)),
    ]
    for name, k in role.items():
        vs.append(DerivedVariable(name, lambda o, k=k: o.delta[k], _role_column("first", k)))
        vs.append(
            DerivedVariable(name + "'", lambda o, k=k: o.delta_prime[k], _role_column("second", k))
        )
    return {v.name: v for v in vs}


# --- construction ----------------------------------------------------------


def support_size(g: ColoredGraph) -> int:
    """Number of outcomes :func:`build_joint` would produce, computed without building."""
    blue = g.adj[BLUE]
    per_edge: dict[tuple[int, int], int] = {}
    for tri in enumerate_rainbow_triangles(g):
        for w in iter_bits(blue[tri.v_r]):
            e = _pair(tri.v_r, w)
            per_edge[e] = per_edge.get(e, 0) + 1
    return sum(c * c for c in per_edge.values())


def build_joint(g: ColoredGraph, support_cap: int = DEFAULT_SUPPORT_CAP) -> FiniteDistribution:
    """Exact joint law of ``(delta, u, delta_prime, u_prime)``.

    ``P(delta, u) = 1 / (T * deg_blue(v_r))``; the resampled pair is drawn from
    the same law conditioned on producing the same blue edge ``L_b``.
    """
    triangles = enumerate_rainbow_triangles(g)
    if not triangles:
        raise NoRainbowTriangle()
    blue = g.adj[BLUE]

    pair_tri: list[int] = []
    pair_u: list[int] = []
    by_edge: dict[tuple[int, int], list[int]] = {}
    for ti, tri in enumerate(triangles):
        # v_g is always a blue neighbor of v_r, so this loop is never empty
        for w in iter_bits(blue[tri.v_r]):
            by_edge.setdefault(_pair(tri.v_r, w), []).append(len(pair_tri))
            pair_tri.append(ti)
            pair_u.append(w)

    size = sum(len(idx) ** 2 for idx in by_edge.values())
    if size > support_cap:
        raise SupportTooLarge(f"joint support has {size} outcomes, cap is {support_cap}")

    # P(delta, u) = a_i / (T * L) with a_i = L / deg_blue(v_r)
    degs = [blue[triangles[t].v_r].bit_count() for t in pair_tri]
    L = reduce(math.lcm, set(degs), 1)
    a = [L // d for d in degs]
    edge_mass = {e: sum(a[i] for i in idx) for e, idx in by_edge.items()}
    lam = reduce(math.lcm, set(edge_mass.values()), 1)

    firsts, seconds, weights = [], [], []
    for e, idx in sorted(by_edge.items()):
        k = len(idx)
        arr = np.asarray(idx, dtype=np.int64)
        firsts.append(np.repeat(arr, k))
        seconds.append(np.tile(arr, k))
        ae = np.asarray([a[i] for i in idx], dtype=object)
        weights.append((np.multiply.outer(ae, ae) * (lam // edge_mass[e])).ravel())
    weight_arr = np.concatenate(weights)
    total = len(triangles) * L * lam

    common = reduce(math.gcd, set(weight_arr.tolist()), total)
    if common > 1:
        weight_arr = weight_arr // common
        total //= common
    if total < _INT64_SAFE:
        weight_arr = weight_arr.astype(np.int64)
    if sum(weight_arr.tolist()) != total:
        raise AssertionError("joint weights do not sum to the total")

    return FiniteDistribution(
        g,
        triangles,
        np.asarray(pair_tri, dtype=np.int64),
        np.asarray(pair_u, dtype=np.int64),
        np.concatenate(firsts),
        np.concatenate(seconds),
        weight_arr,
        total,
    )


# --- information measures ----------------------------------------------------


def _names(dist: FiniteDistribution, specs: Sequence[VarSpec]) -> list[DerivedVariable]:
    seen: dict[str, DerivedVariable] = {}
    for s in specs:
        v = dist.variable(s)
        seen.setdefault(v.name, v)
    return list(seen.values())


def entropy_of_weights(weights, total: int) -> float:
    """``-sum p log2 p`` for ``p = weight / total`` with exact integer weights."""
    log_total = math.log2(total)
    if isinstance(weights, np.ndarray) and weights.dtype == np.int64:
        w = weights[weights > 0].astype(np.float64)
        return float(np.sum((w / total) * (log_total - np.log2(w))))
    h = 0.0
    for w in weights:
        if w:
            h += (w / total) * (log_total - math.log2(w))
    return h


def entropy(dist: FiniteDistribution, vars: Sequence[VarSpec]) -> float:
    """Joint Shannon entropy in bits of the listed variables."""
    vs = _names(dist, vars)
    key = frozenset(v.name for v in vs)
    cached = dist._entropies.get(key)
    if cached is None:
        if not vs:
            cached = 0.0
        else:
            sums, _ = dist.group_weights(vs)
            cached = entropy_of_weights(sums, dist.total)
        dist._entropies[key] = cached
    return cached


def conditional_entropy(dist: FiniteDistribution, X: Sequence[VarSpec], Y: Sequence[VarSpec]) -> float:
    """``H(X | Y) = H(X, Y) - H(Y)``."""
    return entropy(dist, list(X) + list(Y)) - entropy(dist, Y)


def conditional_mutual_information(dist, X, Y, Z) -> float:
    X, Y, Z = list(X), list(Y), list(Z)
    return entropy(dist, X + Z) + entropy(dist, Y + Z) - entropy(dist, X + Y + Z) - entropy(dist, Z)


def check_conditional_independence(dist: FiniteDistribution, X, Y, Z) -> bool:
    """Exact test of ``P(x, y | z) = P(x | z) P(y | z)`` over the whole support of Z."""
    X, Y, Z = list(X), list(Y), list(Z)
    w_z, c_z = dist.group_weights(Z)
    w_xz, c_xz = dist.group_weights(X + Z)
    w_yz, c_yz = dist.group_weights(Y + Z)
    w_xyz, c_xyz = dist.group_weights(X + Y + Z)

    # one representative support point per (x, y, z) value
    _, rep = np.unique(c_xyz, return_index=True)
    z_of, xz_of, yz_of = c_z[rep].tolist(), c_xz[rep].tolist(), c_yz[rep].tolist()
    wz, wxz, wyz = w_z.tolist(), w_xz.tolist(), w_yz.tolist()
    for wxyz, z, xz, yz in zip(w_xyz.tolist(), z_of, xz_of, yz_of):
        if wxyz * wz[z] != wxz[xz] * wyz[yz]:
            return False

    # pairs (x, y) with P(x|z) P(y|z) > 0 but P(x, y, z) = 0 break independence
    _, rep_xz = np.unique(c_xz, return_index=True)
    _, rep_yz = np.unique(c_yz, return_index=True)
    nx = np.bincount(c_z[rep_xz], minlength=len(wz))
    ny = np.bincount(c_z[rep_yz], minlength=len(wz))
    return int((nx * ny).sum()) == len(rep)


# --- audit -----------------------------------------------------------------


@dataclass(frozen=True)
class AuditStep:
    id: str
    description: str
    relation: str
    lhs_bits: float
    rhs_bits: float
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "relation": self.relation,
            "lhs_bits": self.lhs_bits,
            "rhs_bits": self.rhs_bits,
            "slack": self.slack,
            "pass": self.passed,
        }


@dataclass
class AuditLedger:
    steps: list[AuditStep]
    n: int
    R: int
    G: int
    B: int
    T: int
    tol: float = TOL

    @property
    def overall(self) -> bool:
        return all(s.passed for s in self.steps)

    def step(self, step_id: str) -> AuditStep:
        for s in self.steps:
            if s.id == step_id:
                return s
        raise KeyError(step_id)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "R": self.R,
            "G": self.G,
            "B": self.B,
            "T": self.T,
            "overall": self.overall,
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "description", "relation", "lhs_bits", "rhs_bits", "slack", "pass"])
        for s in self.steps:
            writer.writerow(
                [s.id, s.description, s.relation, repr(s.lhs_bits), repr(s.rhs_bits), repr(s.slack), s.passed]
            )
        return buf.getvalue()


def _eq(step_id, desc, lhs, rhs, tol):
    return AuditStep(step_id, desc, "=", lhs, rhs, rhs - lhs, abs(lhs - rhs) <= tol)


def _le(step_id, desc, lhs, rhs, tol):
    return AuditStep(step_id, desc, "<=", lhs, rhs, rhs - lhs, lhs <= rhs + tol)


def audit_proof(
    g: ColoredGraph,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    tol: float = TOL,
    dist: FiniteDistribution | None = None,
) -> AuditLedger:
    """Evaluate every entropy identity and inequality in the ``T^2 <= 2RGB`` argument."""
    d = dist if dist is not None else build_joint(g, support_cap)
    T = len(d.triangles)
    R, G, B = color_counts(g)

    def H(*vs):
        return entropy(d, vs)

    def Hc(xs, ys):
        return conditional_entropy(d, xs, ys)

    D, Dp, u, Lb, vr = "delta", "delta_prime", "u", "L_b", "v_r"
    h_d = H(D)
    h_du = H(D, u)
    h_lb = H(Lb)
    h_d_lb = Hc([D], [Lb])
    h_dp_lb = Hc([Dp], [Lb])
    h_u_vr = Hc([u], [vr])
    h_img_vr = Hc(["w", "s1", "s2", "L_r"], [vr])
    h_vrw = H(vr, "w")
    h_Lr = H("L_r")

    steps = [
        _eq("A", "H(Δ|L_b) = H(Δ'|L_b)", h_d_lb, h_dp_lb, tol),
        _eq("B", "H(Δ,u) = H(L_b) + H(Δ|L_b)", h_du, h_lb + h_d_lb, tol),
        _eq("C", "H(Δ,u) = H(Δ) + H(u|Δ)", h_du, h_d + Hc([u], [D]), tol),
        _eq("D", "H(u|Δ) = H(u|v_r)", Hc([u], [D]), h_u_vr, tol),
        _eq("E", "H(Δ) = H(Δ'|L_b) + H(L_b) - H(u|v_r)", h_d, h_dp_lb + h_lb - h_u_vr, tol),
        _eq(
            "F.1",
            "2H(Δ) = H(Δ,Δ'|L_b) + 2H(L_b) - 2H(u|v_r)",
            2 * h_d,
            Hc([D, Dp], [Lb]) + 2 * h_lb - 2 * h_u_vr,
            tol,
        ),
        _eq("F.2", "2H(Δ) = H(Δ,u,Δ') + H(L_b) - 2H(u|v_r)", 2 * h_d, H(D, u, Dp) + h_lb - 2 * h_u_vr, tol),
        _eq("G.1", "H(v_g,v_b,u,Δ'|v_r) = H(w,s_1,s_2,L_r|v_r)", Hc(["v_g", "v_b", u, Dp], [vr]), h_img_vr, tol),
        _eq(
            "G.2",
            "2H(Δ) = H(w,s_1,s_2,L_r|v_r) + H(v_r) + H(L_b) - 2H(u|v_r)",
            2 * h_d,
            h_img_vr + H(vr) + h_lb - 2 * h_u_vr,
            tol,
        ),
        _le(
            "H",
            "H(w,s_1,s_2,L_r|v_r) <= H(w|v_r) + H(s_1|v_r) + H(s_2|v_r) + H(L_r|v_r)",
            h_img_vr,
            Hc(["w"], [vr]) + Hc(["s1"], [vr]) + Hc(["s2"], [vr]) + Hc(["L_r"], [vr]),
            tol,
        ),
        _le("I.1", "H(s_1|v_r) <= H(u|v_r)", Hc(["s1"], [vr]), h_u_vr, tol),
        _le("I.2", "H(s_2|v_r) <= H(u|v_r)", Hc(["s2"], [vr]), h_u_vr, tol),
        _le("J", "H(L_r|v_r) <= H(L_r)", Hc(["L_r"], [vr]), h_Lr, tol),
        _le("K", "2H(Δ) <= H(v_r,w) + H(L_r) + H(L_b)", 2 * h_d, h_vrw + h_Lr + h_lb, tol),
        _le("L.1", "H(v_r,w) <= log2(2G)", h_vrw, math.log2(2 * G), tol),
        _le("L.2", "H(L_r) <= log2(R)", h_Lr, math.log2(R), tol),
        _le("L.3", "H(L_b) <= log2(B)", h_lb, math.log2(B), tol),
        _le("M", "log2(T^2) <= log2(2RGB)", math.log2(T * T), math.log2(2 * R * G * B), tol),
        _eq("U", "H(Δ) = log2(T)", h_d, math.log2(T), tol),
    ]
    for step_id, desc, X, Y, Z in (
        ("CI.1", "Δ and Δ' independent given L_b", [D], [Dp], [Lb]),
        ("CI.2", "u and l_r independent given v_r", [u], ["l_r"], [vr]),
    ):
        cmi = conditional_mutual_information(d, X, Y, Z)
        steps.append(AuditStep(step_id, desc, "indep", cmi, 0.0, -cmi, check_conditional_independence(d, X, Y, Z)))
    return AuditLedger(steps, g.n, R, G, B, T, tol)
