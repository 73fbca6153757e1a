"""Experiment drivers: seeded sweeps over samplers with CSV result tables.

Seeding contract: every random object consumed by an experiment comes from a
seed derived as SHA-256 over the pipe-joined decimal/repr rendering of
(master seed, purpose tag, sweep value, trial index, ...), taking the first
8 digest bytes little-endian.  Identical configs and master seeds therefore
reproduce result tables bit for bit on one platform.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field, asdict, replace

import numpy as np
from scipy.sparse import csgraph

from . import __version__
from .baselines import (
    minpinv_greedy,
    successive_aggregations,
    uniform_node_sampling,
    weighted_node_sampling,
)
from .graph import Graph, generate, geometric_graph_from_positions, closed_in_neighborhood
from .graph import _grow_reach, _reach_to_graph, greedy_dominating_set
from .recon import (
    FLOOR_DB,
    PERFECT_DB,
    SolverParams,
    SparseSignalSpec,
    bp_l1,
    ls_known_support,
    realized_coefficients,
    synthesize,
)
from .sampler import SamplingOperator, build_plan, draw_operator
from .spectral import OrthoBasis, condition_number, dct_basis, gft_basis

SAMPLER_TAGS = ("proposed-insert", "proposed-repeat", "uniform", "weighted",
                "minpinv", "successive")
# these need the support at sampling time, so they are excluded from blind runs
SUPPORT_AWARE = ("weighted", "minpinv")

BASIS_TAGS = ("gft-normalized", "gft-combinatorial", "dct")


def derive_seed(master: int, *parts) -> int:
    """Stable sub-seed from a master seed and a tuple of labels/values."""
    def canon(p):
        if isinstance(p, float):
            return repr(p)
        return str(p)

    text = "|".join([str(int(master))] + [canon(p) for p in parts])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def config_hash(payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def _to_db(linear_mse: float) -> float:
    if linear_mse <= 0.0:
        return FLOOR_DB
    return max(10.0 * float(np.log10(linear_mse)), FLOOR_DB)


@dataclass(frozen=True)
class GraphSpec:
    kind: str
    params: dict
    seed: int

    def build(self) -> Graph:
        return generate(self.kind, self.params, self.seed)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "GraphSpec":
        return cls(kind=d["kind"], params=dict(d["params"]), seed=int(d["seed"]))


def _build_basis(graph: Graph, tag: str) -> OrthoBasis:
    if tag == "gft-normalized":
        return gft_basis(graph, normalized=True)
    if tag == "gft-combinatorial":
        return gft_basis(graph, normalized=False)
    if tag == "dct":
        return dct_basis(graph.n)
    raise ValueError(f"basis must be one of {BASIS_TAGS}")


@dataclass
class ExperimentConfig:
    """Knobs for the known/unknown-support sweeps and the runtime benchmark."""

    graph: GraphSpec
    k: int
    samplers: tuple = ("proposed-insert",)
    basis: str = "gft-normalized"
    signal_model: str = "bandlimited"
    sweep_variable: str = "m"
    sweep_values: tuple = ()
    trials: int = 1
    master_seed: int = 0
    sigma: float = 0.0
    fixed_m: int | None = None
    solver: SolverParams = field(default_factory=SolverParams)
    output: str | None = None

    def __post_init__(self):
        self.samplers = tuple(self.samplers)
        self.sweep_values = tuple(self.sweep_values)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sweep_variable not in ("m", "sigma"):
            raise ValueError("sweep_variable must be 'm' or 'sigma'")
        if not self.sweep_values:
            raise ValueError("sweep_values must be nonempty")
        if list(self.sweep_values) != sorted(set(self.sweep_values)):
            raise ValueError("sweep values must be strictly increasing")
        for tag in self.samplers:
            if tag not in SAMPLER_TAGS:
                raise ValueError(f"unknown sampler tag {tag!r}")
        if self.sweep_variable == "sigma" and self.fixed_m is None:
            raise ValueError("sweeping sigma requires fixed_m")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    def to_dict(self) -> dict:
        d = {
            "graph": self.graph.to_dict(),
            "k": self.k,
            "samplers": list(self.samplers),
            "basis": self.basis,
            "signal_model": self.signal_model,
            "sweep": {"variable": self.sweep_variable,
                      "values": list(self.sweep_values)},
            "trials": self.trials,
            "master_seed": self.master_seed,
            "sigma": self.sigma,
            "solver": asdict(self.solver),
        }
        if self.fixed_m is not None:
            d["fixed_m"] = self.fixed_m
        if self.output is not None:
            d["output"] = self.output
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        solver = SolverParams(**d.get("solver", {}))
        sweep = d.get("sweep", {})
        return cls(
            graph=GraphSpec.from_dict(d["graph"]),
            k=int(d["k"]),
            samplers=tuple(d.get("samplers", ("proposed-insert",))),
            basis=d.get("basis", "gft-normalized"),
            signal_model=d.get("signal_model", "bandlimited"),
            sweep_variable=sweep.get("variable", "m"),
            sweep_values=tuple(sweep.get("values", ())),
            trials=int(d.get("trials", 1)),
            master_seed=int(d.get("master_seed", 0)),
            sigma=float(d.get("sigma", 0.0)),
            fixed_m=(int(d["fixed_m"]) if "fixed_m" in d else None),
            solver=solver,
            output=d.get("output"),
        )


class _OperatorFactory:
    """Realizes sampler tags as operators, caching what is deterministic."""

    def __init__(self, graph: Graph, basis: OrthoBasis, master_seed: int):
        self.graph = graph
        self.basis = basis
        self.master = master_seed
        self._plans: dict = {}
        self._fixed: dict = {}

    def plan_for(self, tag: str, m: int):
        key = (tag, m)
        if key not in self._plans:
            strategy = "insert-new" if tag == "proposed-insert" else "repeat-dominating"
            self._plans[key] = build_plan(self.graph, m, strategy,
                                          seed=derive_seed(self.master, "plan", tag, m))
        return self._plans[key]

    def operator(self, tag: str, m: int, support, seed: int) -> SamplingOperator:
        if tag in ("proposed-insert", "proposed-repeat"):
            return draw_operator(self.plan_for(tag, m), seed=seed)
        if tag == "uniform":
            return uniform_node_sampling(self.graph.n, m, seed=seed)
        if tag == "weighted":
            return weighted_node_sampling(self.basis, support, m, seed=seed)
        if tag == "minpinv":
            key = ("minpinv", m, tuple(int(v) for v in np.asarray(support)))
            if key not in self._fixed:
                self._fixed[key] = minpinv_greedy(self.basis, support, m)
            return self._fixed[key]
        if tag == "successive":
            key = ("successive", m)
            if key not in self._fixed:
                self._fixed[key] = successive_aggregations(self.graph, None, m)
            return self._fixed[key]
        raise ValueError(f"unknown sampler tag {tag!r}")


def run_known_support(config: ExperimentConfig) -> list[dict]:
    """Mean reconstruction error per sampler and sweep value, support given.

    Measurements are y = Phi (x + noise); reconstruction is least squares on
    the true support; per-point aggregation is the decibel value of the mean
    linear MSE over trials.
    """
    graph = config.graph.build()
    basis = _build_basis(graph, config.basis)
    factory = _OperatorFactory(graph, basis, config.master_seed)
    rows = []
    for tag in config.samplers:
        for value in config.sweep_values:
            if config.sweep_variable == "m":
                m, sigma = int(value), config.sigma
            else:
                m, sigma = int(config.fixed_m), float(value)
            acc = 0.0
            for t in range(config.trials):
                ts = derive_seed(config.master_seed, tag, value, t)
                spec = SparseSignalSpec.draw(graph.n, config.k, config.signal_model,
                                             derive_seed(ts, "signal"))
                x = synthesize(basis, spec)
                op = factory.operator(tag, m, spec.support, derive_seed(ts, "operator"))
                pre = x
                if sigma > 0:
                    noise = np.random.default_rng(derive_seed(ts, "noise"))
                    pre = x + sigma * noise.standard_normal(graph.n)
                y = op.phi @ pre
                res = ls_known_support(op, basis, spec.support, y)
                acc += float(np.mean((res.x_star - x) ** 2))
            rows.append({"sampler": tag, "sweep_variable": config.sweep_variable,
                         "sweep_value": value, "mean_mse_db": _to_db(acc / config.trials),
                         "trials": config.trials})
    return rows


def run_unknown_support(config: ExperimentConfig) -> list[dict]:
    """Perfect-recovery probability per sampler and budget, support unknown.

    Noiseless measurements, minimum-l1 reconstruction; a trial counts as
    recovered when its error lands below the -40 dB threshold.
    """
    if config.sweep_variable != "m":
        raise ValueError("blind recovery sweeps measurements only")
    if config.sigma != 0.0:
        raise ValueError("blind recovery runs are noiseless")
    bad = [t for t in config.samplers if t in SUPPORT_AWARE]
    if bad:
        raise ValueError(f"samplers {bad} need the support and cannot run blind")
    graph = config.graph.build()
    basis = _build_basis(graph, config.basis)
    factory = _OperatorFactory(graph, basis, config.master_seed)
    rows = []
    for tag in config.samplers:
        for value in config.sweep_values:
            m = int(value)
            hits = 0
            for t in range(config.trials):
                ts = derive_seed(config.master_seed, tag, value, t)
                spec = SparseSignalSpec.draw(graph.n, config.k, config.signal_model,
                                             derive_seed(ts, "signal"))
                x = synthesize(basis, spec)
                op = factory.operator(tag, m, spec.support, derive_seed(ts, "operator"))
                y = op.phi @ x
                res = bp_l1(op, basis, y, config.solver).scored(x)
                hits += int(res.perfect)
            rows.append({"sampler": tag, "sweep_variable": "m", "sweep_value": value,
                         "recovery_prob": hits / config.trials,
                         "trials": config.trials})
    return rows


def condition_table(graph_spec: GraphSpec, k: int, m_values, trials: int,
                    master_seed: int, methods=("proposed-insert", "successive")) -> list[dict]:
    """Median conditioning of the support-restricted system per method and m.

    Each trial regenerates the graph, draws a random size-k support, realizes
    each method's operator and records cond(Phi @ U restricted to the support).
    """
    m_values = [int(m) for m in m_values]
    rows = []
    conds: dict = {(meth, m): [] for meth in methods for m in m_values}
    for t in range(trials):
        g = generate(graph_spec.kind, graph_spec.params,
                     derive_seed(master_seed, "graph", t))
        basis = gft_basis(g, normalized=True)
        rng = np.random.default_rng(derive_seed(master_seed, "support", t))
        support = np.sort(rng.choice(g.n, size=k, replace=False))
        u_s = basis.u[:, support]
        for meth in methods:
            for m in m_values:
                if meth == "proposed-insert":
                    plan = build_plan(g, m, "insert-new",
                                      seed=derive_seed(master_seed, "plan", t, m))
                    op = draw_operator(plan, seed=derive_seed(master_seed, "draw", t, m))
                elif meth == "proposed-repeat":
                    plan = build_plan(g, m, "repeat-dominating",
                                      seed=derive_seed(master_seed, "plan", t, m))
                    op = draw_operator(plan, seed=derive_seed(master_seed, "draw", t, m))
                elif meth == "successive":
                    op = successive_aggregations(g, None, m)
                elif meth == "uniform":
                    op = uniform_node_sampling(g.n, m,
                                               seed=derive_seed(master_seed, "unif", t, m))
                else:
                    raise ValueError(f"unsupported method {meth!r}")
                conds[(meth, m)].append(condition_number(op.phi @ u_s))
    for meth in methods:
        for m in m_values:
            rows.append({"method": meth, "m": m,
                         "median_cond": float(np.median(conds[(meth, m)])),
                         "trials": trials})
    return rows


def dominating_curve(graph_spec: GraphSpec, p_max: int) -> list[dict]:
    """Greedy dominating-set size of the p-hop expansion for p = 1..p_max."""
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    graph = graph_spec.build()
    reach = graph._structure.copy().tocsr()
    reach.data[:] = 1.0
    rows = []
    for p in range(1, p_max + 1):
        hop = _reach_to_graph(graph, reach)
        rows.append({"p": p, "dominating_size": int(greedy_dominating_set(hop).size)})
        if p < p_max:
            reach = _grow_reach(reach, graph._structure)
    return rows


# ---------------------------------------------------------------------------
# sensor-network tradeoff

@dataclass
class WsnScenario:
    """Random sensor field reporting compressed samples to a far base station."""

    n: int = 250
    k: int = 50
    radius: float = 0.2
    bs_distance_factor: float = 5.0
    cluster_head_counts: tuple = (5, 15, 30)
    m_values: tuple = (60, 90, 120, 150, 180)
    trials: int = 10
    master_seed: int = 0
    solver: SolverParams = field(default_factory=SolverParams)
    output: str | None = None

    def __post_init__(self):
        self.cluster_head_counts = tuple(int(v) for v in self.cluster_head_counts)
        self.m_values = tuple(int(v) for v in self.m_values)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")
        for nc in self.cluster_head_counts:
            if not 1 <= nc <= self.n:
                raise ValueError("cluster head counts must lie in [1, n]")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cluster_head_counts"] = list(self.cluster_head_counts)
        d["m_values"] = list(self.m_values)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WsnScenario":
        d = dict(d)
        if "solver" in d:
            d["solver"] = SolverParams(**d["solver"])
        return cls(**d)


def _spatial_dct_basis(positions: np.ndarray) -> OrthoBasis:
    """DCT atoms laid over nodes sorted by (x, y); smooth fields become sparse."""
    n = positions.shape[0]
    order = np.lexsort((positions[:, 1], positions[:, 0]))
    base = dct_basis(n).u
    u = np.empty_like(base)
    u[order, :] = base
    return OrthoBasis(u=u, ordering="natural", label="dct-spatial")


def _forward_route_power(graph: Graph, plan) -> float:
    """Squared-distance cost of forwarding every aggregated scalar.

    Every node of a measurement's neighborhood sends its value to the
    aggregating node along the breadth-first shortest path on the original
    graph, paying the squared length of every edge walked.
    """
    pos = graph.positions
    total = 0.0
    for node in plan.nodes:
        node = int(node)
        nb = closed_in_neighborhood(plan.base_graph, node)
        _, pred = csgraph.breadth_first_order(graph._structure, node, directed=False,
                                              return_predecessors=True)
        for j in nb:
            j = int(j)
            cur = j
            while cur != node:
                par = int(pred[cur])
                total += float(((pos[cur] - pos[par]) ** 2).sum())
                cur = par
    return total


def _largest_remainder(m: int, sizes: np.ndarray) -> np.ndarray:
    quota = m * sizes / sizes.sum()
    alloc = np.floor(quota).astype(np.int64)
    frac = quota - alloc
    leftover = m - int(alloc.sum())
    order = np.argsort(-frac, kind="stable")
    alloc[order[:leftover]] += 1
    return alloc


def wsn_experiment(scenario: WsnScenario) -> list[dict]:
    """Power/error tradeoff of aggregated sampling against in-cluster sensing.

    Both approaches push m scalars to the base station (cost m * d_bs^2) and
    reconstruct blindly via l1 minimization in a spatial DCT basis; they
    differ in how measurements are formed and what in-network forwarding
    costs.  Returns one row per method and budget with mean powers and mean
    reconstruction error.
    """
    ms = scenario.master_seed
    d_bs = scenario.bs_distance_factor * 1.0
    agg: dict = {}
    redraws: dict = {}
    for t in range(scenario.trials):
        rng_pos = np.random.default_rng(derive_seed(ms, "positions", t))
        pos = rng_pos.random((scenario.n, 2))
        graph = geometric_graph_from_positions(pos, scenario.radius)
        basis = _spatial_dct_basis(pos)
        spec = SparseSignalSpec(support=np.arange(scenario.k), model="bandlimited",
                                seed=derive_seed(ms, "signal", t))
        x = synthesize(basis, spec)

        for m in scenario.m_values:
            plan = build_plan(graph, m, "insert-new",
                              seed=derive_seed(ms, "plan", t, m))
            op = draw_operator(plan, seed=derive_seed(ms, "draw", t, m))
            res = bp_l1(op, basis, op.phi @ x, scenario.solver)
            err = float(np.mean((res.x_star - x) ** 2))
            p_intra = _forward_route_power(graph, plan)
            p_bs = m * d_bs ** 2
            agg.setdefault(("proposed", m), []).append((p_intra, p_bs, err))

        for nc in scenario.cluster_head_counts:
            heads, members, tries = _draw_clusters(scenario, pos, t, nc)
            redraws[nc] = redraws.get(nc, 0) + tries - 1
            sizes = np.asarray([members[c].size for c in range(nc)])
            dists2 = [((pos[members[c]] - pos[heads[c]]) ** 2).sum(axis=1)
                      for c in range(nc)]
            for m in scenario.m_values:
                alloc = _largest_remainder(m, sizes)
                rng = np.random.default_rng(derive_seed(ms, "cluster-draw", t, nc, m))
                phi = np.zeros((m, scenario.n))
                row = 0
                p_intra = 0.0
                for c in range(nc):
                    mc = int(alloc[c])
                    if mc == 0:
                        continue
                    cols = members[c]
                    phi[row:row + mc, cols] = rng.standard_normal((mc, cols.size))
                    row += mc
                    # the head's own reading travels distance zero
                    p_intra += mc * float(dists2[c].sum())
                op = SamplingOperator(phi=phi, label=f"cluster-{nc}")
                res = bp_l1(op, basis, op.phi @ x, scenario.solver)
                err = float(np.mean((res.x_star - x) ** 2))
                p_bs = m * d_bs ** 2
                agg.setdefault((f"cluster-{nc}", m), []).append((p_intra, p_bs, err))

    rows = []
    for (method, m), vals in agg.items():
        arr = np.asarray(vals)
        nc_redraws = 0
        if method.startswith("cluster-"):
            nc_redraws = redraws.get(int(method.split("-")[1]), 0)
        rows.append({
            "method": method, "m": m,
            "mean_power": float(arr[:, 0].mean() + arr[:, 1].mean()),
            "mean_power_intra": float(arr[:, 0].mean()),
            "mean_power_bs": float(arr[:, 1].mean()),
            "mean_mse_db": _to_db(float(arr[:, 2].mean())),
            "trials": scenario.trials,
            "head_redraws": nc_redraws,
        })
    return rows


def _draw_clusters(scenario: WsnScenario, pos: np.ndarray, trial: int, nc: int):
    """Heads plus nearest-head membership; redraw on a degenerate clustering."""
    for attempt in range(64):
        rng = np.random.default_rng(derive_seed(scenario.master_seed, "heads",
                                                trial, nc, attempt))
        heads = rng.choice(scenario.n, size=nc, replace=False)
        d2 = ((pos[:, None, :] - pos[heads][None, :, :]) ** 2).sum(axis=2)
        owner = np.argmin(d2, axis=1)
        members = [np.flatnonzero(owner == c) for c in range(nc)]
        if all(ms.size > 0 for ms in members):
            return heads, members, attempt + 1
    raise RuntimeError("could not draw a clustering without empty clusters")


def runtime_benchmark(config: ExperimentConfig, repetitions: int = 1) -> list[dict]:
    """Wall-clock seconds to realize each sampler, basis work included.

    Times cover sampling only: plan construction plus the operator draw for
    aggregation samplers, eigendecomposition plus selection for the samplers
    that need a basis.  Nothing is cached between timings.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    graph = config.graph.build()
    support = np.arange(config.k)
    rows = []
    for tag in config.samplers:
        for value in config.sweep_values:
            m = int(value)
            for rep in range(repetitions):
                seed = derive_seed(config.master_seed, "runtime", tag, m, rep)
                t0 = time.perf_counter()
                if tag in ("proposed-insert", "proposed-repeat"):
                    strategy = ("insert-new" if tag == "proposed-insert"
                                else "repeat-dominating")
                    plan = build_plan(graph, m, strategy, seed=seed)
                    draw_operator(plan, seed=derive_seed(seed, "draw"))
                elif tag == "uniform":
                    uniform_node_sampling(graph.n, m, seed=seed)
                elif tag == "weighted":
                    basis = _build_basis(graph, config.basis)
                    weighted_node_sampling(basis, support, m, seed=seed)
                elif tag == "minpinv":
                    basis = _build_basis(graph, config.basis)
                    minpinv_greedy(basis, support, m)
                elif tag == "successive":
                    successive_aggregations(graph, None, m)
                rows.append({"sampler": tag, "m": m, "repetition": rep,
                             "seconds": time.perf_counter() - t0})
    return rows


# ---------------------------------------------------------------------------
# result files

def write_csv(path, rows: list[dict], fieldnames: list[str], meta: dict) -> None:
    """Result table with a leading comment line carrying provenance."""
    with open(path, "w", newline="") as fh:
        fh.write("# " + ", ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def result_meta(payload: dict, master_seed: int) -> dict:
    # the output path is not part of an experiment's identity
    payload = {k: v for k, v in payload.items() if k != "output"}
    return {"config-hash": config_hash(payload), "seed": master_seed,
            "version": __version__}
