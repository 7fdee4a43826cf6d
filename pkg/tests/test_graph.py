import pytest
from hypothesis import given

from rainbowtri.errors import DuplicatePair, ParseError, SelfLoop, VertexOutOfRange
from rainbowtri.graph import (
    BLUE,
    GREEN,
    RED,
    Color,
    build_graph,
    color_counts,
    iter_bits,
    neighbor_list,
    neighbors,
    parse_edge_list,
    relabel,
    serialize_edge_list,
)

from .conftest import colored_graphs


def test_build_triangle(triangle):
    assert len(triangle.edges) == 3
    assert triangle.n == 3


def test_build_k4(k4):
    assert len(k4.edges) == 6


def test_edges_are_canonical():
    g = build_graph(3, [(2, 0, "g"), (1, 0, "r")])
    assert [tuple(e) for e in g.edges] == [(0, 1, RED), (0, 2, GREEN)]


def test_self_loop():
    with pytest.raises(SelfLoop):
        build_graph(2, [(0, 0, RED)])


@pytest.mark.parametrize("second", [(1, 0, RED), (0, 1, BLUE)])
def test_duplicate_pair(second):
    with pytest.raises(DuplicatePair):
        build_graph(2, [(0, 1, RED), second])


def test_vertex_out_of_range():
    with pytest.raises(VertexOutOfRange):
        build_graph(2, [(0, 2, RED)])


def test_color_counts(triangle, k4):
    assert color_counts(triangle) == (1, 1, 1)
    assert color_counts(k4) == (2, 2, 2)
    assert color_counts(build_graph(5, [])) == (0, 0, 0)


def test_neighbors(k4, triangle):
    assert neighbor_list(k4, 0, BLUE) == [3]
    assert neighbor_list(triangle, 1, BLUE) == [2]
    g = build_graph(4, [(0, 1, RED)])
    assert all(neighbors(g, 3, c) == 0 for c in Color)
    with pytest.raises(VertexOutOfRange):
        neighbors(g, 4, RED)


def test_parse_rainbow_triangle(triangle):
    assert parse_edge_list("3\n0 1 r\n1 2 b\n0 2 g\n") == triangle
    assert parse_edge_list(b"# header\n\n3\n0 1 R  # red\n1 2 B\n0 2 G\n") == triangle


@pytest.mark.parametrize(
    "text, line",
    [
        ("2\n0 1 x\n", 2),
        ("2\n0 1\n", 2),
        ("two\n", 1),
        ("2\n0 a r\n", 2),
        ("", 0),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_edge_list(text)
    assert exc.value.line == line


def test_parse_propagates_build_errors():
    with pytest.raises(SelfLoop):
        parse_edge_list("2\n1 1 r\n")
    with pytest.raises(DuplicatePair):
        parse_edge_list("2\n0 1 r\n1 0 g\n")


def test_isolated_vertices_survive_round_trip():
    g = build_graph(6, [(0, 1, RED)])
    assert parse_edge_list(serialize_edge_list(g)).n == 6


def test_serialize_sorted():
    text = serialize_edge_list(parse_edge_list("3\n1 2 b\n0 2 g\n0 1 r\n"))
    assert text == "3\n0 1 r\n0 2 g\n1 2 b\n"


@given(colored_graphs(max_n=10))
def test_round_trip(g):
    text = serialize_edge_list(g)
    back = parse_edge_list(text)
    assert back == g
    assert serialize_edge_list(back) == text


@given(colored_graphs(max_n=10))
def test_adjacency_symmetric_and_degree_sums(g):
    counts = dict(zip(Color, color_counts(g)))
    for c in Color:
        total = 0
        for x in range(g.n):
            row = neighbors(g, x, c)
            total += row.bit_count()
            for y in iter_bits(row):
                assert neighbors(g, y, c) >> x & 1
                assert g.color(x, y) is c
        assert total == 2 * counts[c]
    assert sum(counts.values()) == len(g.edges)


def test_relabel_rejects_non_permutation(k4):
    with pytest.raises(ValueError):
        relabel(k4, [0, 0, 1, 2])
