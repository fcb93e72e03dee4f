"""Plain undirected graphs: topologies, BFS paths, and an edge-list file format.

Vertices are integer labels (any values; generators below use 1..n for
chains/rings and 0 for a hub).  When a graph is turned into a register the
i-th smallest vertex becomes mode i (1-based) — see
:func:`cvcluster.protocols.build_graph_state`.

The on-disk format is line oriented::

    # comment
    vertices 5
    1 2
    2 3

with a mandatory ``vertices N`` header and one ``a b`` edge per line, labels
in 1..N, no loops, no duplicate edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InvalidGraphError, InvalidSizeError


def _norm_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph."""

    vertices: tuple[int, ...]
    edges: frozenset  # of (a, b) tuples with a < b

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def neighborhood(self, a: int) -> tuple[int, ...]:
        if a not in self.vertices:
            raise InvalidGraphError(f"vertex {a} not in graph")
        out = []
        for u, v in self.edges:
            if u == a:
                out.append(v)
            elif v == a:
                out.append(u)
        return tuple(sorted(out))

    def degree(self, a: int) -> int:
        return len(self.neighborhood(a))

    def mode_of(self, v: int) -> int:
        """1-based register mode index of a vertex (sorted-label order)."""
        try:
            return self.vertices.index(v) + 1
        except ValueError:
            raise InvalidGraphError(f"vertex {v} not in graph") from None

    def vertex_of(self, mode: int) -> int:
        if not 1 <= mode <= len(self.vertices):
            raise InvalidGraphError(f"mode {mode} outside 1..{len(self.vertices)}")
        return self.vertices[mode - 1]

    def shortest_path(self, a: int, b: int):
        """Lexicographically smallest shortest path from a to b, or None.

        Among all shortest paths, the vertex sequence that compares smallest
        is returned (greedy choice of the smallest next vertex that still
        lies on some shortest path).  ``None`` means not connected.
        """
        if a not in self.vertices or b not in self.vertices:
            raise InvalidGraphError("path endpoints must be vertices")
        dist = self._bfs_dist(b)
        if a not in dist:
            return None
        path = [a]
        cur = a
        while cur != b:
            cur = min(v for v in self.neighborhood(cur) if dist.get(v, -1) == dist[cur] - 1)
            path.append(cur)
        return path

    def _bfs_dist(self, src: int) -> dict[int, int]:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in self.neighborhood(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self._bfs_dist(self.vertices[0])) == len(self.vertices)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def from_edges(edges, vertices=None) -> Graph:
    """Build a graph from an edge iterable, rejecting loops and duplicates."""
    seen = set()
    verts = set(vertices) if vertices is not None else set()
    for a, b in edges:
        if a == b:
            raise InvalidGraphError(f"loop edge {a}-{b}")
        e = _norm_edge(a, b)
        if e in seen:
            raise InvalidGraphError(f"duplicate edge {a}-{b}")
        seen.add(e)
        verts.update(e)
    if not verts:
        raise InvalidSizeError("graph needs at least one vertex")
    return Graph(tuple(sorted(verts)), frozenset(seen))


def chain(n: int) -> Graph:
    """Path graph on vertices 1..n."""
    if n < 1:
        raise InvalidSizeError(f"chain needs n >= 1, got {n}")
    if n == 1:
        return Graph((1,), frozenset())
    return from_edges([(i, i + 1) for i in range(1, n)])


def star(leaves: int) -> Graph:
    """Hub-and-leaves graph: center 0 adjacent to leaves 1..m."""
    if leaves < 1:
        raise InvalidSizeError(f"star needs at least one leaf, got {leaves}")
    return from_edges([(0, j) for j in range(1, leaves + 1)])


def ring(n: int) -> Graph:
    if n < 3:
        raise InvalidSizeError(f"ring needs n >= 3, got {n}")
    return from_edges([(i, i + 1) for i in range(1, n)] + [(1, n)])


def ring_star(ring_size: int, spokes=None) -> Graph:
    """Ring 1..ring_size plus hub 0 attached to ``spokes``.

    Default spokes are the even-numbered ring vertices (the alternating
    attachment pattern, the one whose feed-forward recipe stays solvable); that
    default needs an even ring.  Pass an explicit vertex iterable for other
    attachment patterns.
    """
    if ring_size < 3:
        raise InvalidSizeError(f"ring needs at least 3 vertices, got {ring_size}")
    if spokes is None:
        if ring_size % 2:
            raise InvalidGraphError(
                "alternating spokes need an even ring size; pass spokes explicitly"
            )
        spokes = range(2, ring_size + 1, 2)
    spokes = sorted(set(spokes))
    if not spokes:
        raise InvalidGraphError("hub needs at least one spoke")
    for s in spokes:
        if not 1 <= s <= ring_size:
            raise InvalidGraphError(f"spoke {s} outside ring 1..{ring_size}")
    base = [(i, i + 1) for i in range(1, ring_size)] + [(1, ring_size)]
    return from_edges(base + [(0, s) for s in spokes])


def grid(rows: int, cols: int) -> Graph:
    """Row-major lattice, vertices 1..rows*cols."""
    if rows < 1 or cols < 1:
        raise InvalidSizeError("grid needs positive dimensions")
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j + 1
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    if not edges:
        return Graph((1,), frozenset())
    return from_edges(edges)


def random_graph(n: int, p: float, rng) -> Graph:
    """Erdos-Renyi style simple graph on 1..n (``rng``: numpy Generator)."""
    edges = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < p]
    return from_edges(edges, vertices=range(1, n + 1))


def random_connected_graph(n: int, p: float, rng) -> Graph:
    """Random graph made connected by threading a random spanning path first."""
    order = [int(v) for v in rng.permutation(range(1, n + 1))]
    edges = {_norm_edge(order[i], order[i + 1]) for i in range(n - 1)}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if rng.random() < p:
                edges.add((a, b))
    return from_edges(sorted(edges), vertices=range(1, n + 1))


# ---------------------------------------------------------------------------
# Edge-list files
# ---------------------------------------------------------------------------


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    """Parse the ``vertices N`` + ``a b`` line format; see module docstring."""
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "vertices" or len(parts) != 2:
                raise InvalidGraphError(f"{source}:{lineno}: expected 'vertices N' header")
            try:
                n = int(parts[1])
            except ValueError:
                raise InvalidGraphError(f"{source}:{lineno}: vertex count must be an integer") from None
            if n < 1:
                raise InvalidGraphError(f"{source}:{lineno}: vertex count must be positive")
            continue
        if len(parts) != 2:
            raise InvalidGraphError(f"{source}:{lineno}: expected edge 'a b'")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise InvalidGraphError(f"{source}:{lineno}: edge endpoints must be integers") from None
        if not (1 <= a <= n and 1 <= b <= n):
            raise InvalidGraphError(f"{source}:{lineno}: edge {a}-{b} outside 1..{n}")
        if a == b:
            raise InvalidGraphError(f"{source}:{lineno}: loop edge {a}-{b}")
        e = _norm_edge(a, b)
        if e in seen:
            raise InvalidGraphError(f"{source}:{lineno}: duplicate edge {a}-{b}")
        seen.add(e)
        edges.append(e)
    if n is None:
        raise InvalidGraphError(f"{source}: missing 'vertices N' header")
    return Graph(tuple(range(1, n + 1)), frozenset(edges))


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), source=str(path))
