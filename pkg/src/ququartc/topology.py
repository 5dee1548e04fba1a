"""Device mesh, slot-level interaction graph and the error-aware distance.

The mesh is the physical chip: ceil(sqrt(n)) rows of nearest-neighbour
coupled devices, last row possibly short. Expanding every radix-4 device
into two slots yields the interaction graph, where two adjacent ququarts
form a 4-clique of logical positions. Distances are shortest paths under
edge weights -ln(fidelity of the SWAP that crosses the edge), so moving
within a ququart is much cheaper than hopping between devices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import gates

Node = tuple[int, int]  # (device, slot)


@dataclass(frozen=True)
class Mesh:
    rows: int
    cols: int
    n_devices: int
    edges: tuple[tuple[int, int], ...]

    def neighbors(self, device: int) -> list[int]:
        out = [b for a, b in self.edges if a == device]
        out += [a for a, b in self.edges if b == device]
        return sorted(out)


def mesh_for(n_devices: int) -> Mesh:
    """Row-major grid of ceil(sqrt(n)) x ceil(n / rows) with a ragged last row."""
    if n_devices < 1:
        raise ValueError("need at least one device")
    rows = math.isqrt(n_devices)
    if rows * rows < n_devices:
        rows += 1
    cols = math.ceil(n_devices / rows)
    edges = []
    for dev in range(n_devices):
        r, c = divmod(dev, cols)
        if c + 1 < cols and dev + 1 < n_devices and (dev + 1) // cols == r:
            edges.append((dev, dev + 1))
        if dev + cols < n_devices:
            edges.append((dev, dev + cols))
    return Mesh(rows, cols, n_devices, tuple(edges))


class InteractionGraph:
    """Immutable slot-level connectivity with precomputed adjacency."""

    def __init__(self, mesh: Mesh, radixes: tuple[int, ...],
                 nodes: tuple[Node, ...], edges: tuple[tuple[Node, Node], ...]):
        self.mesh = mesh
        self.radixes = radixes
        self.nodes = nodes
        self.edges = edges
        self._adj: dict[Node, list[Node]] = {n: [] for n in nodes}
        for a, b in edges:
            self._adj[a].append(b)
            self._adj[b].append(a)
        for n in nodes:
            self._adj[n].sort()
        self._edge_set = frozenset(edges) | frozenset((b, a) for a, b in edges)

    def neighbors(self, node: Node) -> list[Node]:
        return self._adj[node]

    def adjacent(self, a: Node, b: Node) -> bool:
        return (a, b) in self._edge_set

    def to_json(self) -> dict:
        return {
            "nodes": [list(n) for n in self.nodes],
            "edges": [[list(a), list(b)] for a, b in self.edges],
        }


def expand(mesh: Mesh, radixes: tuple[int, ...] | int) -> InteractionGraph:
    """Slot-level graph: intra-device edge per ququart, all slot pairs across
    each mesh edge."""
    if isinstance(radixes, int):
        radixes = (radixes,) * mesh.n_devices
    if len(radixes) != mesh.n_devices:
        raise ValueError("one radix per device required")
    nodes: list[Node] = []
    for dev, radix in enumerate(radixes):
        nodes.append((dev, 0))
        if radix == gates.QUQUART:
            nodes.append((dev, 1))
    edges: list[tuple[Node, Node]] = []
    for dev, radix in enumerate(radixes):
        if radix == gates.QUQUART:
            edges.append(((dev, 0), (dev, 1)))
    for a, b in mesh.edges:
        for sa in range(radixes[a] // 2):
            for sb in range(radixes[b] // 2):
                edges.append(((a, sa), (b, sb)))
    return InteractionGraph(mesh, tuple(radixes), tuple(nodes), tuple(edges))


def _swap_cost(graph: InteractionGraph, a: Node, b: Node) -> float:
    """-ln fidelity of the SWAP that would move a qubit across edge (a, b)."""
    if a[0] == b[0]:
        name = "SWAP^in"
    elif graph.radixes[a[0]] == gates.QUBIT and graph.radixes[b[0]] == gates.QUBIT:
        name = "SWAP_2"
    elif gates.QUBIT in (graph.radixes[a[0]], graph.radixes[b[0]]):
        quart_slot = a[1] if graph.radixes[a[0]] == gates.QUQUART else b[1]
        name = f"SWAP^{{q{quart_slot}}}"
    else:
        sa, sb = sorted((a[1], b[1]))
        name = f"SWAP^{{{sa}{sb}}}"
    return -math.log(gates.fidelity_of(name))


class DistanceTable:
    """All-pairs shortest-path costs over the interaction graph."""

    def __init__(self, graph: InteractionGraph):
        nodes = graph.nodes
        index = {n: i for i, n in enumerate(nodes)}
        n = len(nodes)
        inf = math.inf
        dist = [[0.0 if i == j else inf for j in range(n)] for i in range(n)]
        for a, b in graph.edges:
            w = _swap_cost(graph, a, b)
            i, j = index[a], index[b]
            dist[i][j] = dist[j][i] = min(dist[i][j], w)
        for k in range(n):
            dk = dist[k]
            for i in range(n):
                dik = dist[i][k]
                if dik == inf:
                    continue
                row = dist[i]
                for j in range(n):
                    alt = dik + dk[j]
                    if alt < row[j]:
                        row[j] = alt
        if any(math.isinf(x) for row in dist for x in row):
            raise ValueError("interaction graph is disconnected")
        self._index = index
        self._dist = dist

    def __call__(self, a: Node, b: Node) -> float:
        return self._dist[self._index[a]][self._index[b]]


def distance_table(graph: InteractionGraph) -> DistanceTable:
    return DistanceTable(graph)


def eccentricity(mesh: Mesh) -> list[int]:
    """Hop eccentricity of every device (used to pick the centre seed)."""
    n = mesh.n_devices
    adj = {d: mesh.neighbors(d) for d in range(n)}
    ecc = []
    for src in range(n):
        seen = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in seen:
                        seen[v] = seen[u] + 1
                        nxt.append(v)
            frontier = nxt
        if len(seen) != n:
            raise ValueError("mesh is disconnected")
        ecc.append(max(seen.values()))
    return ecc
