"""Sampling-set construction and randomized local aggregation operators.

A sampling plan lists the nodes whose closed neighborhoods are aggregated,
one measurement per entry (nodes may repeat).  The plan starts from a greedy
dominating set of the graph, moves to a p-hop expansion when the budget is
smaller than the dominating set, and otherwise grows node by node toward the
budget while keeping the per-node aggregation counts balanced.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import (
    Graph,
    HopPlanInfeasibleError,
    _minimal_hop_search,
    bfs_distances,
    closed_in_neighborhood,
)
from .spectral import numerical_rank

STRATEGIES = ("repeat-dominating", "insert-new")


class PoolExhaustedError(RuntimeError):
    """Every eligible candidate was rejected while growing a plan."""


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    """Where each measurement aggregates.

    nodes[t] is the node whose closed neighborhood (on ``base_graph``) feeds
    measurement t.  ``multiplicities[j]`` counts how many measurements touch
    node j.  ``base_graph`` is the aggregation graph (the p-hop expansion of
    ``source_graph``; identical to it when p == 1).
    """

    nodes: np.ndarray
    p: int
    strategy: str          # "exact", "repeat-dominating" or "insert-new"
    multiplicities: np.ndarray
    base_graph: Graph
    source_graph: Graph
    dominating_set: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        for name in ("nodes", "multiplicities", "dominating_set"):
            arr = np.array(getattr(self, name), dtype=np.int64, copy=True)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return int(self.nodes.size)


@dataclass(frozen=True, eq=False)
class SamplingOperator:
    """A realized measurement matrix with its provenance."""

    phi: np.ndarray
    plan: SamplingPlan | None = None
    seed: int | None = None
    label: str = "aggregation"

    def __post_init__(self):
        phi = np.array(self.phi, dtype=np.float64, copy=True)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @property
    def m(self) -> int:
        return self.phi.shape[0]

    @property
    def n(self) -> int:
        return self.phi.shape[1]


def node_multiplicities(graph: Graph, nodes) -> np.ndarray:
    """How many entries of ``nodes`` contain each node in their closed neighborhood.

    Repeated sampling nodes count once per repetition.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    g = np.zeros(graph.n, dtype=np.int64)
    for i in nodes:
        g[closed_in_neighborhood(graph, int(i))] += 1
    return g


def _criterion_pick(agg: Graph, pool: np.ndarray, g: np.ndarray) -> int:
    """Node of the pool whose neighborhood covers most minimum-count nodes.

    The minimum is taken over the union of the pool's closed neighborhoods;
    ties break toward the lowest node index (the pool is kept sorted).
    """
    ac = agg.closed_adjacency
    rows = ac[pool]
    cover = np.asarray(rows.sum(axis=0)).ravel() > 0
    gmin = g[cover].min()
    counts = rows @ (g == gmin).astype(np.float64)
    return int(pool[int(np.argmax(counts))])


def _draw_row(agg: Graph, node: int, rng: np.random.Generator, n: int) -> np.ndarray:
    row = np.zeros(n)
    nb = closed_in_neighborhood(agg, node)
    row[nb] = rng.standard_normal(nb.size)
    return row


def build_plan(graph: Graph, m: int, strategy: str = "insert-new",
               seed: int | None = None) -> SamplingPlan:
    """Choose the sampling multiset for a measurement budget of m.

    The greedy dominating set of the smallest feasible hop expansion seeds the
    plan.  If it is smaller than m, extra nodes are added one at a time by the
    balancing criterion: either repeating dominators ("repeat-dominating",
    each insertion checked to keep a freshly drawn operator full row rank) or
    inserting nodes not yet sampled ("insert-new").  The returned strategy tag
    is "exact" when no growth was needed.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")
    if m < 1:
        raise ValueError("measurement budget m must be >= 1")
    p, dom, agg = _minimal_hop_search(graph, m)
    nodes = list(int(v) for v in dom)
    agg = graph if p == 1 else agg
    g = node_multiplicities(agg, nodes)
    tag = "exact"
    rng = np.random.default_rng(seed)
    scaffold: np.ndarray | None = None
    if len(nodes) < m:
        tag = strategy
        if strategy == "repeat-dominating":
            scaffold = np.vstack([_draw_row(agg, v, rng, graph.n) for v in nodes])
            if numerical_rank(scaffold) < len(nodes):
                raise PoolExhaustedError("initial dominating rows are rank deficient")
    while len(nodes) < m:
        if strategy == "insert-new":
            pool = np.setdiff1d(np.arange(graph.n), np.asarray(nodes, dtype=np.int64))
            if pool.size == 0:
                raise PoolExhaustedError(
                    f"cannot insert new nodes past m = n = {graph.n}")
            best = _criterion_pick(agg, pool, g)
        else:
            pool = np.asarray(sorted(set(nodes[:dom.size])), dtype=np.int64)
            best = None
            while pool.size:
                cand = _criterion_pick(agg, pool, g)
                row = _draw_row(agg, cand, rng, graph.n)
                stacked = np.vstack([scaffold, row])
                if numerical_rank(stacked) == stacked.shape[0]:
                    scaffold = stacked
                    best = cand
                    break
                pool = pool[pool != cand]
            if best is None:
                raise PoolExhaustedError(
                    "no dominator repetition keeps the operator full row rank")
        nodes.append(best)
        g[closed_in_neighborhood(agg, best)] += 1
    return SamplingPlan(nodes=np.asarray(nodes, dtype=np.int64), p=p, strategy=tag,
                        multiplicities=g, base_graph=agg, source_graph=graph,
                        dominating_set=dom, seed=seed)


def draw_operator(plan: SamplingPlan, seed: int | None = None) -> SamplingOperator:
    """Draw the sparse Gaussian measurement matrix for a plan.

    Row t is supported on the closed neighborhood of plan.nodes[t]; the entry
    touching node j has variance 1/multiplicities[j], so measurements form an
    isotropic ensemble on average.  Entries are filled row by row in ascending
    column order from a PCG64 generator, making draws reproducible per seed.
    """
    agg = plan.base_graph
    rng = np.random.default_rng(seed)
    phi = np.zeros((plan.m, agg.n))
    scale = np.sqrt(np.where(plan.multiplicities > 0, plan.multiplicities, 1))
    for t, node in enumerate(plan.nodes):
        nb = closed_in_neighborhood(agg, int(node))
        phi[t, nb] = rng.standard_normal(nb.size) / scale[nb]
    return SamplingOperator(phi=phi, plan=plan, seed=seed)


def measure(op: SamplingOperator, x: np.ndarray) -> np.ndarray:
    """Apply the operator: one aggregated sample per plan entry."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (op.n,):
        raise ValueError(f"signal must have shape ({op.n},), got {x.shape}")
    return op.phi @ x


def transmission_bounds(plan: SamplingPlan) -> tuple[int, int]:
    """Upper bounds on scalar transmissions for the two growth strategies.

    Each aggregating node j collects from nodes up to p hops away on the
    original graph; a node at hop distance i forwards through i transmissions.
    The first bound sums over the dominating set (repetitions reuse routes),
    the second over the distinct nodes of the sampling multiset.
    """
    src = plan.source_graph

    def cost(nodes: np.ndarray) -> int:
        nodes = np.unique(nodes)
        if nodes.size == 0:
            return 0
        dist = bfs_distances(src, nodes)
        total = 0
        for hop in range(1, plan.p + 1):
            total += hop * int((dist == hop).sum())
        return total

    return cost(plan.dominating_set), cost(plan.nodes)


def theorem1_gmin_threshold(k: int, n: int, mu: float, delta: float,
                            c: float = 1.0) -> float:
    """Multiplicity level sufficient for a restricted isometry of order k.

    Evaluates c * delta**-2 * mu**2 * k * max(log k, 1)**2 * log(n)**2 with
    natural logarithms.  Diagnostic only; constants are generic.
    """
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if not 0.0 < mu <= 1.0:
        raise ValueError("mu must lie in (0, 1]")
    if c <= 0.0:
        raise ValueError("constant c must be positive")
    logk = max(math.log(k), 1.0)
    return c * delta ** -2 * mu ** 2 * k * logk ** 2 * math.log(n) ** 2


# ---------------------------------------------------------------------------
# plan files

def plan_to_json(plan: SamplingPlan) -> str:
    payload = {
        "nodes": [int(v) for v in plan.nodes],
        "p": int(plan.p),
        "strategy": plan.strategy,
        "seed": plan.seed,
    }
    return json.dumps(payload, indent=2)


def plan_from_json(graph: Graph, text: str) -> SamplingPlan:
    """Rebuild a plan against the original graph it was made from."""
    payload = json.loads(text)
    p = int(payload["p"])
    nodes = np.asarray(payload["nodes"], dtype=np.int64)
    from .graph import p_hop_graph, greedy_dominating_set

    agg = graph if p == 1 else p_hop_graph(graph, p)
    dom = greedy_dominating_set(agg)
    return SamplingPlan(nodes=nodes, p=p, strategy=payload["strategy"],
                        multiplicities=node_multiplicities(agg, nodes),
                        base_graph=agg, source_graph=graph, dominating_set=dom,
                        seed=payload.get("seed"))
