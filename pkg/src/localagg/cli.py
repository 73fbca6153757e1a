"""Command line front end: generate graphs, build plans, reconstruct, run experiments."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .graph import generate, load_edge_list, save_edge_list
from .recon import SolverParams, bp_l1, ls_known_support
from .sampler import SamplingOperator, build_plan, draw_operator, plan_to_json
from .spectral import dct_basis, gft_basis, load_matrix_csv, save_matrix_csv


def _basis_for(graph, tag: str):
    if tag == "gft-normalized":
        return gft_basis(graph, normalized=True)
    if tag == "gft-combinatorial":
        return gft_basis(graph, normalized=False)
    if tag == "dct":
        return dct_basis(graph.n)
    raise SystemExit(f"unknown basis {tag!r}")


def _cmd_generate(args):
    params = json.loads(args.params)
    graph = generate(args.kind, params, args.seed)
    positions_out = args.positions_out if graph.positions is not None else None
    save_edge_list(graph, args.out, positions_path=positions_out)
    print(f"wrote {graph.n} nodes, {graph.num_edges} edges to {args.out}")


def _cmd_sample(args):
    graph = load_edge_list(args.graph, positions_path=args.positions)
    plan = build_plan(graph, args.m, args.strategy, seed=args.seed)
    with open(args.plan_out, "w") as fh:
        fh.write(plan_to_json(plan) + "\n")
    print(f"plan: m={plan.m} p={plan.p} strategy={plan.strategy} "
          f"dominating={plan.dominating_set.size}")
    if args.operator_out:
        op = draw_operator(plan, seed=args.operator_seed)
        save_matrix_csv(args.operator_out, op.phi)
        print(f"wrote operator {op.m}x{op.n} to {args.operator_out}")


def _cmd_reconstruct(args):
    graph = load_edge_list(args.graph)
    basis = _basis_for(graph, args.basis)
    phi = load_matrix_csv(args.operator)
    y = load_matrix_csv(args.measurements).ravel()
    op = SamplingOperator(phi=phi, label="file")
    if args.method == "ls":
        if not args.support:
            raise SystemExit("ls reconstruction needs --support")
        support = np.asarray([int(v) for v in args.support.split(",")])
        res = ls_known_support(op, basis, support, y)
    else:
        res = bp_l1(op, basis, y)
    save_matrix_csv(args.out, res.x_star.reshape(-1, 1))
    stats = ", ".join(f"{k}={v}" for k, v in res.solver_stats.items()
                      if k != "objective_trace")
    print(f"wrote reconstruction to {args.out} ({stats})")


def _load_config(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _apply_overrides(payload: dict, args) -> dict:
    if args.seed is not None:
        payload["master_seed"] = args.seed
    if args.trials is not None:
        payload["trials"] = args.trials
    if args.out is not None:
        payload["output"] = args.out
    return payload


_FIELDS = {
    "known-support": ["sampler", "sweep_variable", "sweep_value", "mean_mse_db", "trials"],
    "unknown-support": ["sampler", "sweep_variable", "sweep_value", "recovery_prob", "trials"],
    "condition-table": ["method", "m", "median_cond", "trials"],
    "dominating-curve": ["p", "dominating_size"],
    "wsn": ["method", "m", "mean_power", "mean_power_intra", "mean_power_bs",
            "mean_mse_db", "trials", "head_redraws"],
    "runtime": ["sampler", "m", "repetition", "seconds"],
}


def _cmd_experiment(args):
    payload = _apply_overrides(_load_config(args.config), args)
    kind = args.what
    if kind in ("known-support", "unknown-support", "runtime"):
        config = harness.ExperimentConfig.from_dict(payload)
        if kind == "known-support":
            rows = harness.run_known_support(config)
        elif kind == "unknown-support":
            rows = harness.run_unknown_support(config)
        else:
            rows = harness.runtime_benchmark(config, repetitions=args.repetitions)
        out = config.output
        seed = config.master_seed
        meta_payload = config.to_dict()
    elif kind == "wsn":
        scenario = harness.WsnScenario.from_dict(payload)
        rows = harness.wsn_experiment(scenario)
        out = scenario.output
        seed = scenario.master_seed
        meta_payload = scenario.to_dict()
    elif kind == "condition-table":
        spec = harness.GraphSpec.from_dict(payload["graph"])
        seed = int(payload.get("master_seed", 0))
        rows = harness.condition_table(spec, int(payload["k"]), payload["m_values"],
                                       int(payload.get("trials", 10)), seed,
                                       methods=tuple(payload.get(
                                           "methods", ("proposed-insert", "successive"))))
        out = payload.get("output")
        meta_payload = payload
    elif kind == "dominating-curve":
        spec = harness.GraphSpec.from_dict(payload["graph"])
        seed = spec.seed
        rows = harness.dominating_curve(spec, int(payload.get("p_max", 4)))
        out = payload.get("output")
        meta_payload = payload
    else:
        raise SystemExit(f"unknown experiment {kind!r}")
    if not out:
        raise SystemExit("no output path: set it in the config or pass --out")
    harness.write_csv(out, rows, _FIELDS[kind], harness.result_meta(meta_payload, seed))
    print(f"wrote {len(rows)} rows to {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localagg",
                                     description="graph signal sampling by local aggregations")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random graph as an edge list")
    g.add_argument("--kind", required=True)
    g.add_argument("--params", required=True, help="JSON object of generator parameters")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--positions-out", default=None)
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("sample", help="build a sampling plan, optionally draw the operator")
    s.add_argument("--graph", required=True)
    s.add_argument("--positions", default=None)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--strategy", choices=("repeat-dominating", "insert-new"),
                   default="insert-new")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--plan-out", required=True)
    s.add_argument("--operator-out", default=None)
    s.add_argument("--operator-seed", type=int, default=0)
    s.set_defaults(func=_cmd_sample)

    r = sub.add_parser("reconstruct", help="recover a signal from measurements")
    r.add_argument("--graph", required=True)
    r.add_argument("--operator", required=True)
    r.add_argument("--measurements", required=True)
    r.add_argument("--basis", default="gft-normalized")
    r.add_argument("--method", choices=("ls", "bp"), default="bp")
    r.add_argument("--support", default=None, help="comma-separated indices for ls")
    r.add_argument("--out", required=True)
    r.set_defaults(func=_cmd_reconstruct)

    e = sub.add_parser("experiment", help="run a seeded experiment from a JSON config")
    e.add_argument("what", choices=tuple(_FIELDS))
    e.add_argument("--config", required=True)
    e.add_argument("--seed", type=int, default=None, help="override master seed")
    e.add_argument("--trials", type=int, default=None, help="override trial count")
    e.add_argument("--out", default=None, help="override output path")
    e.add_argument("--repetitions", type=int, default=1, help="runtime benchmark only")
    e.set_defaults(func=_cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
