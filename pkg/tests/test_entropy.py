import csv
import io
import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbowtri.entropy import (
    TOL,
    DerivedVariable,
    audit_proof,
    build_joint,
    check_conditional_independence,
    conditional_entropy,
    entropy,
    support_size,
)
from rainbowtri.errors import NoRainbowTriangle, SupportTooLarge
from rainbowtri.graph import BLUE, GREEN, RED, build_graph, relabel

from . import suites
from .conftest import colored_graphs
from .test_counting import brute_force_triangles


def brute_joint(g):
    """Joint pmf straight from the sampling definition, in Fractions."""
    tris = brute_force_triangles(g)
    T = len(tris)
    first = {}
    for t in tris:
        blue = [w for w in range(g.n) if g.color(t.v_r, w) is BLUE]
        for w in blue:
            first[(t, w)] = Fraction(1, T * len(blue))
    edge_mass = {}
    for (t, w), p in first.items():
        e = frozenset((t.v_r, w))
        edge_mass[e] = edge_mass.get(e, 0) + p
    joint = {}
    for (t, w), p in first.items():
        for (t2, w2), p2 in first.items():
            e = frozenset((t.v_r, w))
            if frozenset((t2.v_r, w2)) == e:
                joint[(t, w, t2, w2)] = p * p2 / edge_mass[e]
    return joint


def brute_entropy(joint, fn):
    marg = {}
    for o, p in joint.items():
        k = fn(o)
        marg[k] = marg.get(k, 0) + p
    assert sum(marg.values()) == 1
    return -sum(float(p) * math.log2(p.numerator / p.denominator) for p in marg.values())


def two_disjoint_triangles():
    return build_graph(6, [(0, 1, RED), (1, 2, BLUE), (0, 2, GREEN), (3, 4, RED), (4, 5, BLUE), (3, 5, GREEN)])


def test_single_triangle(triangle):
    d = build_joint(triangle)
    pmf = d.pmf
    assert len(pmf) == 1
    (o, p), = pmf.items()
    assert p == 1
    assert o.delta == o.delta_prime and o.u == o.u_prime == o.delta.v_g


def test_k4_joint(k4):
    d = build_joint(k4)
    pmf = d.pmf
    assert pmf == {tuple(k): v for k, v in brute_joint(k4).items()}
    # each blue edge is the L_b of two (triangle, u) draws, so 2 edges x 2 x 2
    assert len(pmf) == 8
    assert sum(pmf.values()) == 1
    assert all(p == Fraction(1, 8) for p in pmf.values())
    assert entropy(d, ["delta"]) == pytest.approx(2.0, abs=TOL)
    assert conditional_entropy(d, ["u"], ["v_r"]) == pytest.approx(0.0, abs=TOL)


def test_no_triangles():
    g = build_graph(3, [(0, 1, RED), (1, 2, RED), (0, 2, BLUE)])
    with pytest.raises(NoRainbowTriangle):
        build_joint(g)
    with pytest.raises(NoRainbowTriangle):
        audit_proof(g)


def test_support_cap(k4):
    assert support_size(k4) == 8
    with pytest.raises(SupportTooLarge):
        build_joint(k4, support_cap=7)


@settings(max_examples=60)
@given(colored_graphs(min_n=3, max_n=7))
def test_joint_matches_definition(g):
    if not brute_force_triangles(g):
        return
    d = build_joint(g)
    pmf = d.pmf
    assert pmf == {tuple(k): v for k, v in brute_joint(g).items()}
    assert sum(pmf.values()) == 1
    assert all(p > 0 for p in pmf.values())
    for o in pmf:
        assert g.color(o.delta.v_r, o.u) is BLUE
        assert g.color(o.delta_prime.v_r, o.u_prime) is BLUE
        assert {o.delta.v_r, o.u} == {o.delta_prime.v_r, o.u_prime}
    max_blue = max(g.adj[BLUE][t.v_r].bit_count() for t in d.triangles)
    assert len(pmf) == support_size(g) <= (len(d.triangles) * max_blue) ** 2


def test_entropy_against_fraction_oracle():
    projections = {
        ("delta",): lambda o: o[0],
        ("u", "v_r"): lambda o: (o[1], o[0].v_r),
        ("L_b",): lambda o: frozenset((o[0].v_r, o[1])),
        ("delta", "delta_prime"): lambda o: (o[0], o[2]),
        ("v_r'", "u_prime"): lambda o: (o[2].v_r, o[3]),
        ("l_r",): lambda o: frozenset((o[0].v_g, o[0].v_b)),
    }
    for k in range(25):
        g = suites.generate(7 + k % 5, 0.7, seed=300 + k)
        if not brute_force_triangles(g):
            continue
        d = build_joint(g)
        joint = brute_joint(g)
        for names, fn in projections.items():
            assert entropy(d, list(names)) == pytest.approx(brute_entropy(joint, fn), abs=1e-12)


def test_marginals_sum_to_one():
    g = suites.generate(9, 0.8, seed=11)
    d = build_joint(g)
    for names in (["delta"], ["L_b"], ["w", "s1"], ["v_r", "u", "delta_prime"], []):
        assert sum(d.marginal(names).values()) == 1
        sums, _ = d.group_weights(names)
        assert sum(int(s) for s in sums) == d.total


def test_custom_projection_matches_column():
    g = suites.generate(9, 0.8, seed=12)
    d = build_joint(g)
    custom = DerivedVariable("red_edge_custom", lambda o: o.delta.red_edge)
    assert entropy(d, [custom]) == pytest.approx(entropy(d, ["l_r"]), abs=1e-12)
    image = DerivedVariable(
        "image_custom",
        lambda o: tuple(d.variable(v).projection(o) for v in ("w", "s1", "s2", "L_r")),
    )
    assert entropy(d, [image, "v_r"]) == pytest.approx(entropy(d, ["w", "s1", "s2", "L_r", "v_r"]), abs=1e-12)


def test_trivial_entropies(triangle):
    d = build_joint(triangle)
    assert entropy(d, ["delta"]) == 0
    g = suites.generate(9, 0.8, seed=13)
    d = build_joint(g)
    const = DerivedVariable("const", lambda o: 0)
    assert entropy(d, [const]) == 0
    assert entropy(d, []) == 0
    for v in ("delta", "L_b", "w"):
        assert conditional_entropy(d, [v], [v]) == pytest.approx(0, abs=TOL)


def brute_ci(joint, fx, fy, fz):
    pz, pxz, pyz, pxyz = {}, {}, {}, {}
    for o, p in joint.items():
        x, y, z = fx(o), fy(o), fz(o)
        pz[z] = pz.get(z, 0) + p
        pxz[x, z] = pxz.get((x, z), 0) + p
        pyz[y, z] = pyz.get((y, z), 0) + p
        pxyz[x, y, z] = pxyz.get((x, y, z), 0) + p
    for x, z in pxz:
        for y, z2 in pyz:
            if z2 == z and pxyz.get((x, y, z), 0) * pz[z] != pxz[x, z] * pyz[y, z]:
                return False
    return True


def test_conditional_independence_against_oracle():
    cases = [
        (["delta"], ["delta_prime"], ["L_b"], lambda o: o[0], lambda o: o[2], lambda o: frozenset((o[0].v_r, o[1]))),
        (["u"], ["l_r"], ["v_r"], lambda o: o[1], lambda o: frozenset((o[0].v_g, o[0].v_b)), lambda o: o[0].v_r),
        (["delta"], ["delta_prime"], [], lambda o: o[0], lambda o: o[2], lambda o: ()),
        (["u"], ["v_b"], [], lambda o: o[1], lambda o: o[0].v_b, lambda o: ()),
        (["u"], ["u_prime"], ["v_r"], lambda o: o[1], lambda o: o[3], lambda o: o[0].v_r),
    ]
    seen = {True: 0, False: 0}
    for k in range(20):
        g = suites.generate(8, 0.75, seed=400 + k)
        if not brute_force_triangles(g):
            continue
        d = build_joint(g)
        joint = brute_joint(g)
        for X, Y, Z, fx, fy, fz in cases:
            expected = brute_ci(joint, fx, fy, fz)
            assert check_conditional_independence(d, X, Y, Z) == expected
            seen[expected] += 1
    assert seen[True] and seen[False]


def test_independence_needs_conditioning():
    d = build_joint(two_disjoint_triangles())
    assert check_conditional_independence(d, ["delta"], ["delta_prime"], ["L_b"])
    assert not check_conditional_independence(d, ["delta"], ["delta_prime"], [])


def test_audit_k4_tight(k4):
    ledger = audit_proof(k4)
    assert ledger.overall
    for s in ledger.steps:
        if s.relation == "<=":
            assert abs(s.slack) <= TOL, s


def test_audit_single_triangle(triangle):
    ledger = audit_proof(triangle)
    assert ledger.overall
    assert ledger.step("M").slack == pytest.approx(1.0, abs=TOL)
    assert ledger.step("L.1").slack == pytest.approx(1.0, abs=TOL)


def test_audit_two_triangles():
    ledger = audit_proof(two_disjoint_triangles())
    assert ledger.overall
    assert ledger.step("U").lhs_bits == pytest.approx(1.0, abs=TOL)


def test_audit_random_instances():
    checked = 0
    for k in range(100):
        g = suites.generate(5 + k % 8, (0.5, 0.7, 0.9)[k % 3], seed=600 + k, bias=suites.BIASES[k % 3])
        if not brute_force_triangles(g):
            continue
        ledger = audit_proof(g)
        assert ledger.overall, [s for s in ledger.steps if not s.passed]
        assert abs(ledger.step("U").lhs_bits - math.log2(ledger.T)) <= TOL
        checked += 1
    assert checked >= 50


@settings(max_examples=30)
@given(colored_graphs(min_n=3, max_n=8), st.randoms(use_true_random=False))
def test_relabel_invariance(g, rnd):
    if not brute_force_triangles(g):
        return
    perm = list(range(g.n))
    rnd.shuffle(perm)
    a, b = audit_proof(g), audit_proof(relabel(g, perm))
    for sa, sb in zip(a.steps, b.steps):
        assert sa.id == sb.id
        assert sa.lhs_bits == pytest.approx(sb.lhs_bits, abs=TOL)
        assert sa.rhs_bits == pytest.approx(sb.rhs_bits, abs=TOL)
        assert sa.passed and sb.passed


def test_ledger_serialization(k4):
    ledger = audit_proof(k4)
    d = json.loads(json.dumps(ledger.to_dict()))
    assert (d["n"], d["R"], d["G"], d["B"], d["T"]) == (4, 2, 2, 2, 4)
    assert d["overall"] is True
    assert set(d["steps"][0]) == {"id", "description", "relation", "lhs_bits", "rhs_bits", "slack", "pass"}
    rows = list(csv.DictReader(io.StringIO(ledger.to_csv())))
    assert [r["id"] for r in rows] == [s["id"] for s in d["steps"]]
    ids = [s["id"] for s in d["steps"]]
    for step in "ABCDEHJKM":
        assert step in ids
    assert {"CI.1", "CI.2", "G.1", "I.1", "I.2", "L.1", "L.2", "L.3"} <= set(ids)
