"""Graph container, random generators, dominating sets and hop expansion.

Nodes are integers 0..n-1.  Undirected edges are stored once in canonical
(i < j) order; the adjacency structure is symmetric.  A graph may carry
per-node 2D positions in the unit square (geometric graphs, sensor layouts).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class GraphFormatError(ValueError):
    """An edge-list file could not be parsed."""


class HopPlanInfeasibleError(ValueError):
    """No hop count brings the greedy dominating set within the budget."""


GENERATOR_KINDS = (
    "erdos-renyi",
    "random-geometric",
    "community",
    "grid2d",
    "small-world",
    "cycle",
    "complete",
)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted graph.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : ndarray of shape (E, 2)
        Node index pairs.  For undirected graphs each pair is stored once;
        orientation of the input pairs does not matter.
    weights : ndarray of shape (E,), optional
        Positive edge weights.  Defaults to all ones.
    directed : bool
        Directed edges (i, j) mean i -> j.  Generators only produce
        undirected graphs.
    positions : ndarray of shape (n, 2), optional
        Node coordinates in the unit square.
    """

    n: int
    edges: np.ndarray
    weights: np.ndarray | None = None
    directed: bool = False
    positions: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be nonnegative")
        e = np.array(self.edges, dtype=np.int64, copy=True).reshape(-1, 2)
        w = self.weights
        if w is None:
            w = np.ones(e.shape[0])
        w = np.array(w, dtype=np.float64, copy=True).reshape(-1)
        if w.shape[0] != e.shape[0]:
            raise ValueError("weights length does not match edge count")
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ValueError("edge weights must be positive and finite")
        if not self.directed and e.size:
            flip = e[:, 0] > e[:, 1]
            e[flip] = e[flip][:, ::-1]
        order = np.lexsort((e[:, 1], e[:, 0]))
        e = e[order]
        w = w[order]
        if e.shape[0] > 1 and np.any(np.all(e[1:] == e[:-1], axis=1)):
            raise ValueError("duplicate edges are not allowed")
        e.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "weights", w)
        if self.positions is not None:
            pos = np.array(self.positions, dtype=np.float64, copy=True)
            if pos.shape != (self.n, 2):
                raise ValueError("positions must have shape (n, 2)")
            if pos.size and (pos.min() < 0.0 or pos.max() > 1.0):
                raise ValueError("positions must lie in the unit square")
            pos.setflags(write=False)
            object.__setattr__(self, "positions", pos)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    @cached_property
    def _structure(self) -> sp.csr_matrix:
        """Unweighted adjacency, symmetric when undirected."""
        i, j = self.edges[:, 0], self.edges[:, 1]
        data = np.ones(self.num_edges)
        a = sp.coo_matrix((data, (i, j)), shape=(self.n, self.n))
        if not self.directed:
            a = a + a.T
        return a.tocsr()

    @cached_property
    def in_neighbor_lists(self) -> tuple[np.ndarray, ...]:
        """Sorted open in-neighborhoods (symmetric neighborhoods if undirected)."""
        csc = self._structure.tocsc()
        return tuple(
            np.sort(csc.indices[csc.indptr[v]:csc.indptr[v + 1]]).astype(np.int64)
            for v in range(self.n)
        )

    @cached_property
    def closed_adjacency(self) -> sp.csr_matrix:
        """Row i is the indicator of the closed in-neighborhood of i."""
        a = self._structure.T.tolil() if self.directed else self._structure.tolil()
        a.setdiag(1.0)
        return a.tocsr()

    @cached_property
    def degrees(self) -> np.ndarray:
        """Unweighted in-degree per node (plain degree if undirected)."""
        return np.asarray([len(nb) for nb in self.in_neighbor_lists], dtype=np.int64)

    @cached_property
    def weighted_degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        i, j = self.edges[:, 0], self.edges[:, 1]
        np.add.at(d, i, self.weights)
        if not self.directed:
            np.add.at(d, j, self.weights)
        return d

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}


def closed_in_neighborhood(graph: Graph, i: int) -> np.ndarray:
    """Sorted node indices of the closed in-neighborhood of ``i`` (includes i)."""
    if not 0 <= i < graph.n:
        raise ValueError(f"node {i} out of range for graph with n={graph.n}")
    nb = graph.in_neighbor_lists[i]
    return np.union1d(nb, [i]).astype(np.int64)


def connected_components(graph: Graph) -> np.ndarray:
    """Component label per node (weak components if directed)."""
    if graph.n == 0:
        return np.zeros(0, dtype=np.int64)
    _, labels = csgraph.connected_components(graph._structure, directed=graph.directed,
                                             connection="weak")
    return labels.astype(np.int64)


def bfs_distances(graph: Graph, sources) -> np.ndarray:
    """Hop distances from each source to all nodes, -1 where unreachable."""
    sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    if sources.size == 0:
        return np.zeros((0, graph.n), dtype=np.int64)
    d = csgraph.dijkstra(graph._structure, directed=graph.directed,
                         indices=sources, unweighted=True)
    out = np.where(np.isfinite(d), d, -1).astype(np.int64)
    return out


def greedy_dominating_set(graph: Graph) -> np.ndarray:
    """Greedy dominating set, in selection order.

    Repeatedly adds the highest-degree node having no closed neighbor already
    selected (ties broken toward the lowest index).  If that pool empties while
    some node is still undominated, the highest-degree undominated node is
    added instead.  Every node ends up with a selected node in its closed
    in-neighborhood.
    """
    n = graph.n
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    deg = graph.degrees.astype(np.float64)
    dominated = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)  # has a closed neighbor in the set
    chosen: list[int] = []
    while not dominated.all():
        pool = ~blocked
        if not pool.any():
            pool = ~dominated
        # argmax returns the first maximum, which is the lowest index
        v = int(np.argmax(np.where(pool, deg, -1.0)))
        chosen.append(v)
        nb_in = graph.in_neighbor_lists[v]
        dominated[nb_in] = True
        dominated[v] = True
        if graph.directed:
            out_nb = graph._structure.indices[
                graph._structure.indptr[v]:graph._structure.indptr[v + 1]]
            blocked[out_nb] = True
        else:
            blocked[nb_in] = True
        blocked[v] = True
    return np.asarray(chosen, dtype=np.int64)


def _grow_reach(reach: sp.csr_matrix, structure: sp.csr_matrix) -> sp.csr_matrix:
    """One more hop of cumulative reachability (walks of length 1..p+1)."""
    nxt = (reach @ structure) + structure
    nxt.data[:] = 1.0
    nxt = (nxt + reach).tocsr()
    nxt.data[:] = 1.0
    nxt.eliminate_zeros()
    return nxt


def _reach_to_graph(graph: Graph, reach: sp.csr_matrix) -> Graph:
    r = reach.tocoo()
    mask = r.row != r.col
    i, j = r.row[mask], r.col[mask]
    if not graph.directed:
        keep = i < j
        i, j = i[keep], j[keep]
    e = np.column_stack([i, j]).astype(np.int64)
    return Graph(graph.n, e, directed=graph.directed, positions=graph.positions)


def p_hop_graph(graph: Graph, p: int) -> Graph:
    """Graph connecting nodes joined by a walk of length 1..p; weights all one."""
    if p < 1:
        raise ValueError("hop count p must be >= 1")
    reach = graph._structure.copy().tocsr()
    reach.data[:] = 1.0
    for _ in range(p - 1):
        reach = _grow_reach(reach, graph._structure)
    return _reach_to_graph(graph, reach)


def _minimal_hop_search(graph: Graph, m: int):
    """Smallest p with |greedy dominating set of the p-hop graph| <= m.

    Returns (p, dominating set, p-hop graph).  Saturation of the reachability
    structure bounds the search: past the largest component diameter nothing
    changes, so the budget is infeasible once growth stops.
    """
    if m < 1:
        raise ValueError("budget m must be >= 1")
    reach = graph._structure.copy().tocsr()
    reach.data[:] = 1.0
    p = 1
    while True:
        hop = _reach_to_graph(graph, reach)
        dom = greedy_dominating_set(hop)
        if dom.size <= m:
            return p, dom, hop
        nxt = _grow_reach(reach, graph._structure)
        if nxt.nnz == reach.nnz:
            raise HopPlanInfeasibleError(
                f"dominating set has {dom.size} nodes at saturation, budget is {m}")
        reach = nxt
        p += 1


def minimal_hop_plan(graph: Graph, m: int) -> tuple[int, np.ndarray]:
    """Smallest hop count whose greedy dominating set fits the budget m."""
    p, dom, _ = _minimal_hop_search(graph, m)
    return p, dom


# ---------------------------------------------------------------------------
# generators

def _canonical_pairs(i, j):
    e = np.column_stack([np.minimum(i, j), np.maximum(i, j)]).astype(np.int64)
    e = np.unique(e, axis=0)
    return e


def _erdos_renyi(params, rng):
    n, p_e = int(params["n"]), float(params["p_e"])
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.size) < p_e
    return Graph(n, np.column_stack([iu[mask], ju[mask]]))


def geometric_graph_from_positions(positions: np.ndarray, radius: float,
                                   weighted: bool = False) -> Graph:
    """Connect points closer than ``radius``; optional weights exp(-distance)."""
    pos = np.asarray(positions, dtype=np.float64)
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    iu, ju = np.triu_indices(n, k=1)
    mask = dist[iu, ju] < radius
    e = np.column_stack([iu[mask], ju[mask]])
    w = np.exp(-dist[iu[mask], ju[mask]]) if weighted else None
    return Graph(n, e, weights=w, positions=pos)


def _random_geometric(params, rng):
    n, radius = int(params["n"]), float(params["radius"])
    weighted = bool(params.get("weighted", False))
    pos = rng.random((n, 2))
    return geometric_graph_from_positions(pos, radius, weighted)


def _community(params, rng):
    n = int(params["n"])
    k = int(params["n_communities"])
    p_intra, p_inter = float(params["p_intra"]), float(params["p_inter"])
    if not 1 <= k <= n:
        raise ValueError("n_communities must be in [1, n]")
    base, extra = divmod(n, k)
    sizes = [base + (1 if c < extra else 0) for c in range(k)]
    member = np.repeat(np.arange(k), sizes)
    iu, ju = np.triu_indices(n, k=1)
    same = member[iu] == member[ju]
    prob = np.where(same, p_intra, p_inter)
    mask = rng.random(iu.size) < prob
    pairs = [np.column_stack([iu[mask], ju[mask]])]
    # chain of single bridges keeps consecutive communities attached
    starts = np.concatenate([[0], np.cumsum(sizes)])
    for c in range(k - 1):
        u = int(rng.integers(starts[c], starts[c + 1]))
        v = int(rng.integers(starts[c + 1], starts[c + 2]))
        pairs.append(np.array([[u, v]]))
    e = _canonical_pairs(*np.concatenate(pairs).T) if pairs else np.zeros((0, 2))
    return Graph(n, e)


def _grid2d(params, rng):
    rows, cols = int(params["rows"]), int(params["cols"])
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    idx = np.arange(rows * cols).reshape(rows, cols)
    right = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    down = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return Graph(rows * cols, np.concatenate([right, down]))


def _small_world(params, rng):
    n = int(params["n"])
    k = int(params["ring_degree"])
    beta = float(params["rewire_prob"])
    if k % 2 or k < 2 or k >= n:
        raise ValueError("ring_degree must be even, >= 2 and < n")
    adj: list[set[int]] = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for i in range(n):
            adj[i].add((i + j) % n)
            adj[(i + j) % n].add(i)
    # Watts-Strogatz rewiring: each ring edge moves its far endpoint with prob beta
    for j in range(1, k // 2 + 1):
        for i in range(n):
            old = (i + j) % n
            if old not in adj[i]:
                continue
            if rng.random() < beta:
                if len(adj[i]) >= n - 1:
                    continue
                w = int(rng.integers(n))
                while w == i or w in adj[i]:
                    w = int(rng.integers(n))
                adj[i].discard(old)
                adj[old].discard(i)
                adj[i].add(w)
                adj[w].add(i)
    e = [(i, v) for i in range(n) for v in adj[i] if i < v]
    return Graph(n, np.asarray(e, dtype=np.int64).reshape(-1, 2))


def _cycle(params, rng):
    n = int(params["n"])
    if n < 3:
        raise ValueError("cycle needs at least 3 nodes")
    i = np.arange(n)
    return Graph(n, np.column_stack([i, (i + 1) % n]))


def _complete(params, rng):
    n = int(params["n"])
    iu, ju = np.triu_indices(n, k=1)
    return Graph(n, np.column_stack([iu, ju]))


_BUILDERS = {
    "erdos-renyi": (_erdos_renyi, {"n", "p_e"}),
    "random-geometric": (_random_geometric, {"n", "radius", "weighted"}),
    "community": (_community, {"n", "n_communities", "p_intra", "p_inter"}),
    "grid2d": (_grid2d, {"rows", "cols"}),
    "small-world": (_small_world, {"n", "ring_degree", "rewire_prob"}),
    "cycle": (_cycle, {"n"}),
    "complete": (_complete, {"n"}),
}


def generate(kind: str, params: dict, seed: int) -> Graph:
    """Build a random graph; identical (kind, params, seed) give identical graphs."""
    if kind not in _BUILDERS:
        raise ValueError(f"unknown graph kind {kind!r}, expected one of {GENERATOR_KINDS}")
    builder, allowed = _BUILDERS[kind]
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown parameters for {kind}: {sorted(unknown)}")
    for key in ("p_e", "p_intra", "p_inter", "rewire_prob"):
        if key in params and not 0.0 < float(params[key]) <= 1.0:
            raise ValueError(f"{key} must lie in (0, 1]")
    if "radius" in params and not 0.0 < float(params["radius"]) <= math.sqrt(2.0):
        raise ValueError("radius must lie in (0, sqrt(2)]")
    if "n" in params and int(params["n"]) < 1:
        raise ValueError("n must be >= 1")
    return builder(params, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# edge-list files
#
# Format: first non-comment line is the node count; each following line is
# "i j" or "i j w" with 0-based endpoints; '#' starts a comment line.

def load_edge_list(path, positions_path=None) -> Graph:
    n = None
    pairs: list[tuple[int, int]] = []
    weights: list[float] = []
    seen: set[tuple[int, int]] = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if n is None:
                if len(tokens) != 1:
                    raise GraphFormatError(f"{path}:{lineno}: expected node count alone")
                try:
                    n = int(tokens[0])
                except ValueError:
                    raise GraphFormatError(f"{path}:{lineno}: node count is not an integer")
                if n < 0:
                    raise GraphFormatError(f"{path}:{lineno}: node count must be nonnegative")
                continue
            if len(tokens) not in (2, 3):
                raise GraphFormatError(f"{path}:{lineno}: expected 'i j' or 'i j w'")
            try:
                i, j = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: endpoints must be integers")
            w = 1.0
            if len(tokens) == 3:
                try:
                    w = float(tokens[2])
                except ValueError:
                    raise GraphFormatError(f"{path}:{lineno}: weight is not a number")
                if not w > 0:
                    raise GraphFormatError(f"{path}:{lineno}: weight must be positive")
            if i == j:
                raise GraphFormatError(f"{path}:{lineno}: self-loop {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphFormatError(f"{path}:{lineno}: endpoint out of range for n={n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphFormatError(f"{path}:{lineno}: duplicate edge {i} {j}")
            seen.add(key)
            pairs.append(key)
            weights.append(w)
    if n is None:
        raise GraphFormatError(f"{path}: missing node count line")
    positions = None
    if positions_path is not None:
        positions = _load_positions(positions_path, n)
    return Graph(n, np.asarray(pairs, dtype=np.int64).reshape(-1, 2),
                 weights=np.asarray(weights), positions=positions)


def _load_positions(path, n: int) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected 'x y'")
            try:
                rows.append((float(tokens[0]), float(tokens[1])))
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: coordinates must be numbers")
    if len(rows) != n:
        raise GraphFormatError(f"{path}: expected {n} position lines, found {len(rows)}")
    return np.asarray(rows)


def save_edge_list(graph: Graph, path, positions_path=None) -> None:
    with open(path, "w") as fh:
        fh.write(f"{graph.n}\n")
        for (i, j), w in zip(graph.edges, graph.weights):
            if w == 1.0:
                fh.write(f"{i} {j}\n")
            else:
                fh.write(f"{i} {j} {float(w)!r}\n")
    if positions_path is not None:
        if graph.positions is None:
            raise ValueError("graph has no positions to save")
        with open(positions_path, "w") as fh:
            for x, y in graph.positions:
                fh.write(f"{float(x)!r} {float(y)!r}\n")
