"""Graph topologies, labeling, traversal, and the edge-list file format."""

import numpy as np
import pytest

from cvcluster import graphs
from cvcluster.errors import InvalidGraphError, InvalidSizeError


def test_chain_shape():
    g = graphs.chain(5)
    assert g.vertices == (1, 2, 3, 4, 5)
    assert g.neighborhood(1) == (2,)
    assert g.neighborhood(3) == (2, 4)
    assert g.degree(5) == 1
    assert graphs.chain(1).n_vertices == 1
    with pytest.raises(InvalidSizeError):
        graphs.chain(0)


def test_star_hub_and_leaves():
    g = graphs.star(4)
    assert g.n_vertices == 5
    assert g.neighborhood(0) == (1, 2, 3, 4)
    assert all(g.degree(v) == 1 for v in (1, 2, 3, 4))


def test_ring_closes():
    g = graphs.ring(6)
    assert g.degree(1) == 2
    assert g.neighborhood(1) == (2, 6)
    with pytest.raises(InvalidSizeError):
        graphs.ring(2)


def test_ring_star_default_alternation():
    g = graphs.ring_star(8)
    assert g.neighborhood(0) == (2, 4, 6, 8)
    assert g.degree(2) == 3  # two ring bonds plus the spoke
    assert g.degree(1) == 2


def test_ring_star_odd_ring_needs_explicit_spokes():
    with pytest.raises(InvalidGraphError):
        graphs.ring_star(7)
    g = graphs.ring_star(7, spokes=(1, 3, 5))
    assert g.neighborhood(0) == (1, 3, 5)


def test_ring_star_spoke_validation():
    with pytest.raises(InvalidGraphError):
        graphs.ring_star(6, spokes=())
    with pytest.raises(InvalidGraphError):
        graphs.ring_star(6, spokes=(7,))


def test_grid_adjacency():
    g = graphs.grid(3, 3)
    assert g.n_vertices == 9
    assert g.neighborhood(5) == (2, 4, 6, 8)
    assert g.neighborhood(1) == (2, 4)
    assert len(g.edges) == 12


def test_mode_labels_follow_sorted_vertices():
    """Vertex labels map onto 1-based register modes in sorted order."""
    g = graphs.star(2)  # vertices 0, 1, 2
    assert g.mode_of(0) == 1
    assert g.mode_of(2) == 3
    assert g.vertex_of(1) == 0
    with pytest.raises(InvalidGraphError):
        g.mode_of(9)
    with pytest.raises(InvalidGraphError):
        g.vertex_of(4)


def test_from_edges_rejects_loops():
    with pytest.raises(InvalidGraphError):
        graphs.from_edges([(1, 1)])


def test_shortest_path_and_connectivity():
    g = graphs.grid(3, 3)
    path = g.shortest_path(1, 9)
    assert len(path) == 5
    assert path[0] == 1 and path[-1] == 9
    assert g.is_connected()
    disconnected = graphs.from_edges([(1, 2), (3, 4)])
    assert not disconnected.is_connected()
    assert disconnected.shortest_path(1, 4) is None


def test_random_connected_graph_is_connected():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(2, 25))
        g = graphs.random_connected_graph(n, float(rng.uniform(0.0, 0.3)), rng)
        assert g.n_vertices == n
        assert g.is_connected()
        assert all(isinstance(v, int) for v in g.vertices)


def test_random_graph_density_extremes():
    rng = np.random.default_rng(1)
    empty = graphs.random_graph(6, 0.0, rng)
    full = graphs.random_graph(6, 1.0, rng)
    assert len(empty.edges) == 0
    assert len(full.edges) == 15


# ---------------------------------------------------------------------------
# edge-list files
# ---------------------------------------------------------------------------

GOOD = """\
# a comment line
vertices 4
1 2
2 3   # trailing comment
3 4
"""


def test_parse_edge_list_accepts_comments_and_blanks():
    g = graphs.parse_edge_list(GOOD, source="good.txt")
    assert g.vertices == (1, 2, 3, 4)
    assert len(g.edges) == 3


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("1 2\n", "expected 'vertices N' header"),
        ("vertices x\n", "vertex count must be an integer"),
        ("vertices 0\n", "vertex count must be positive"),
        ("vertices 3\n1 2 3\n", "expected edge 'a b'"),
        ("vertices 3\n1 b\n", "edge endpoints must be integers"),
        ("vertices 3\n1 4\n", "outside 1..3"),
        ("vertices 3\n2 2\n", "loop edge"),
        ("vertices 3\n1 2\n2 1\n", "duplicate edge"),
        ("# only comments\n", "missing 'vertices N' header"),
    ],
)
def test_parse_edge_list_rejects(text, fragment):
    with pytest.raises(InvalidGraphError) as err:
        graphs.parse_edge_list(text, source="bad.txt")
    assert fragment in str(err.value)
    assert "bad.txt" in str(err.value)


def test_load_edge_list_round_trip(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("vertices 3\n1 2\n2 3\n")
    g = graphs.load_edge_list(p)
    assert g.neighborhood(2) == (1, 3)
