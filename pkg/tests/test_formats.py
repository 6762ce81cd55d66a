import pytest
from hypothesis import given

from conftest import hypergraphs
from hyperzero.construct import construct_circular
from hyperzero.formats import FormatError, format_hypergraph, format_rooted, parse_hypergraph, parse_rooted


def test_single_edge():
    G = parse_hypergraph(b"3 3 1\n0 1 2\n")
    assert G.edges == ((0, 1, 2),)


def test_repeated_vertex_line():
    with pytest.raises(FormatError) as exc:
        parse_hypergraph("3 3 1\n0 1 1\n")
    assert exc.value.line == 2 and "repeated vertex" in str(exc.value)


@pytest.mark.parametrize(
    "text, line",
    [
        ("3 3 1\n0 1 2", 2),
        ("3 3\n0 1 2\n", 1),
        ("3 3 1\n0  1 2\n", 2),
        ("3 3 1\n0 2 1\n", 2),
        ("3 3 1\n0 1 02\n", 2),
        ("3 3 2\n0 1 2\n", 3),
        ("3 3 1\n0 1 2\n0 1 2\n", 3),
        ("3 3 1\n0 1 3\n", 2),
        ("3 4 2\n0 1 2\n0 1 2\n", 3),
    ],
)
def test_malformed(text, line):
    with pytest.raises(FormatError) as exc:
        parse_hypergraph(text)
    assert exc.value.line == line


def test_circular_round_trip():
    G = construct_circular(3, 3, 5)
    text = format_hypergraph(G)
    assert parse_hypergraph(text) == G
    assert format_hypergraph(parse_hypergraph(text)) == text


@given(hypergraphs())
def test_round_trip(G):
    text = format_hypergraph(G)
    assert format_hypergraph(parse_hypergraph(text)) == text


def test_rooted():
    G, roots = parse_rooted("3 3 1\n0 1 2\nroots: 0 1\n")
    assert roots == (0, 1)
    assert format_rooted(G, roots) == "3 3 1\n0 1 2\nroots: 0 1\n"
    with pytest.raises(FormatError):
        parse_rooted("3 3 1\n0 1 2\n")
