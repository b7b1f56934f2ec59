"""Command-line interface.

Four subcommands cover the full workflow:

    acqc generate ...   write random unit-disk instances as JSON files
    acqc run ...        simulate protocol x window-length grids, aggregate
    acqc schedule ...   export one drive schedule as JSON or CSV
    acqc verify         run the built-in correctness battery

Exit codes: 0 on success, 1 when a simulation cell or a verification
check fails, 2 on bad configuration or usage.

Aggregate CSV output is byte-identical for any --jobs value: every cell
derives its sampling seed from a stable hash of (seed, instance,
protocol, T), and rows are sorted before writing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path

import numpy as np

from .constants import (
    C6_DEFAULT,
    DELTA_MAX_DEFAULT,
    OMEGA_MAX_DEFAULT,
    SPACING_DEFAULT,
    UNIT_CONVENTION,
    default_blockade_radius,
)
from .errors import AcqcError
from .evolve import PROTOCOLS, build_protocol_schedule, run_protocol
from .graph import (
    CostParams,
    GridSpec,
    MisSolution,
    generate_kings_graph,
    load_graph,
    save_graph,
    solve_mis_exact,
)
from .metrics import approximation_ratio
from .schedule import HardwareLimits, save_schedule_csv, save_schedule_json, validate_boundary
from .verify import run_battery

__all__ = ["main", "build_parser", "cell_seed"]

CSV_COLUMNS = ("instance", "protocol", "T", "r", "ci", "min_ratio", "ground_pop", "status")


def cell_seed(base_seed: int, instance: str, protocol: str, total_time: float) -> int:
    """Deterministic per-cell sampling seed.

    Derived from a cryptographic hash so it is stable across processes
    and Python versions (builtin hash() is salted per interpreter).
    """
    key = f"{base_seed}|{instance}|{protocol}|{total_time:.6g}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _config_digest(doc: dict) -> str:
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    radius = args.blockade_radius
    if radius is None:
        radius = default_blockade_radius(args.c6, args.omega_max)
    cost = CostParams(penalty=args.cost_a, reward=args.cost_b)
    for i in range(args.count):
        spec = GridSpec(
            rows=args.rows,
            cols=args.cols,
            n_nodes=args.n_nodes,
            spacing=args.spacing,
            seed=args.seed + i,
        )
        g = generate_kings_graph(spec, blockade_radius=radius)
        sol = solve_mis_exact(g, cost)
        path = out_dir / f"graph_{i:04d}.json"
        save_graph(g, path)
        print(
            f"{path}  n={g.n_vertices}  edges={g.n_edges}  "
            f"mis={sol.size}  seed={spec.seed}"
        )
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def _run_cell(task: dict) -> dict:
    """Simulate one (instance, protocol, T) cell. Top level so it pickles.

    Receives only primitives; schedules and graphs are rebuilt inside the
    worker process.
    """
    row = {
        "instance": task["instance"],
        "protocol": task["protocol"],
        "T": task["total_time"],
        "n": 0,
        "r": "",
        "ci": "",
        "min_ratio": "",
        "ground_pop": "",
        "status": "ok",
    }
    try:
        graph = load_graph(task["graph_path"])
        row["n"] = graph.n_vertices
        result = run_protocol(
            graph,
            task["protocol"],
            task["total_time"],
            limits=HardwareLimits(
                omega_max=task["omega_max"], delta_max=task["delta_max"]
            ),
            cost=CostParams(penalty=task["cost_a"], reward=task["cost_b"]),
            shots=task["shots"],
            seed=task["seed"],
            c6=task["c6"],
            clamp_limits=task["clamp_limits"],
        )
        mis = MisSolution(
            size=result.params["mis_size"],
            witnesses=(),
            energy=result.params["mis_energy"],
        )
        stats = approximation_ratio(
            result.energies, [c for _, c in result.samples], mis
        )
        row["r"] = _fmt(stats.approximation_ratio)
        row["ci"] = _fmt(stats.ci_half_width / abs(mis.energy))
        row["min_ratio"] = _fmt(stats.min_ratio)
        row["ground_pop"] = _fmt(result.ground_population)
        if task["out_dir"] is not None:
            name = f"{task['instance']}_{task['protocol']}_T{task['total_time']:.6g}.json"
            result.save(Path(task["out_dir"]) / name)
    except Exception as exc:  # noqa: BLE001 - a cell failure must not kill the sweep
        row["status"] = f"error: {exc}"
    return row


def _summarize(rows: list[dict]) -> list[dict]:
    """Quartile summaries of the approximation ratio, grouped by
    (protocol, T, qubit count), ready for box plots."""
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        if row["status"] != "ok":
            continue
        key = (row["protocol"], row["T"], row["n"])
        groups.setdefault(key, []).append(float(row["r"]))
    out = []
    for (protocol, T, n), values in sorted(groups.items()):
        q = np.percentile(values, [0, 25, 50, 75, 100])
        out.append(
            {
                "protocol": protocol,
                "T_us": T,
                "n_vertices": n,
                "count": len(values),
                "r": {
                    "min": float(q[0]),
                    "q1": float(q[1]),
                    "median": float(q[2]),
                    "q3": float(q[3]),
                    "max": float(q[4]),
                },
            }
        )
    return out


def cmd_run(args: argparse.Namespace) -> int:
    if args.out is None:
        print("error: run requires --out for its result files", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        times = [float(x) for x in args.times.split(",") if x.strip()]
        protocols = [p.strip() for p in args.protocols.split(",") if p.strip()]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not times or not protocols:
        print("error: need at least one protocol and one window length", file=sys.stderr)
        return 2
    for p in protocols:
        if p not in PROTOCOLS:
            print(
                f"error: unknown protocol {p!r}, expected one of {', '.join(PROTOCOLS)}",
                file=sys.stderr,
            )
            return 2

    config = {
        "seed": args.seed,
        "shots": args.shots,
        "omega_max": args.omega_max,
        "delta_max": args.delta_max,
        "c6": args.c6,
        "cost": {"A": args.cost_a, "B": args.cost_b},
        "clamp_limits": args.clamp_limits,
        "protocols": protocols,
        "T_us": times,
        "instances": [Path(p).stem for p in args.graphs],
        "units": UNIT_CONVENTION,
    }
    digest = _config_digest(config)

    tasks = []
    for graph_path in args.graphs:
        instance = Path(graph_path).stem
        for protocol in protocols:
            for T in times:
                tasks.append(
                    {
                        "graph_path": str(graph_path),
                        "instance": instance,
                        "protocol": protocol,
                        "total_time": T,
                        "shots": args.shots,
                        "seed": cell_seed(args.seed, instance, protocol, T),
                        "omega_max": args.omega_max,
                        "delta_max": args.delta_max,
                        "c6": args.c6,
                        "cost_a": args.cost_a,
                        "cost_b": args.cost_b,
                        "clamp_limits": args.clamp_limits,
                        "out_dir": str(out_dir),
                    }
                )

    rows: list[dict] = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_cell, t) for t in tasks]
            for fut in as_completed(futures):
                rows.append(fut.result())
    else:
        for t in tasks:
            rows.append(_run_cell(t))

    rows.sort(key=lambda r: (r["instance"], r["protocol"], r["T"]))

    csv_lines = [f"# config sha256={digest}", ",".join(CSV_COLUMNS)]
    for row in rows:
        csv_lines.append(
            ",".join(
                (
                    row["instance"],
                    row["protocol"],
                    _fmt(row["T"]),
                    row["r"],
                    row["ci"],
                    row["min_ratio"],
                    row["ground_pop"],
                    row["status"],
                )
            )
        )
    (out_dir / "aggregate.csv").write_text("\n".join(csv_lines) + "\n")

    summary = {
        "config_sha256": digest,
        "config": config,
        "groups": _summarize(rows),
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")

    failed = [r for r in rows if r["status"] != "ok"]
    for row in rows:
        label = f"{row['instance']} {row['protocol']} T={_fmt(row['T'])}"
        if row["status"] == "ok":
            print(f"{label}  r={row['r']}  ground_pop={row['ground_pop']}")
        else:
            print(f"{label}  {row['status']}")
    print(f"wrote {out_dir / 'aggregate.csv'} ({len(rows)} cells, {len(failed)} failed)")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# schedule
# ---------------------------------------------------------------------------


def cmd_schedule(args: argparse.Namespace) -> int:
    limits = HardwareLimits(omega_max=args.omega_max, delta_max=args.delta_max)
    schedule = build_protocol_schedule(
        args.protocol,
        args.time,
        limits,
        clamp_limits=args.clamp_limits,
    )

    table = np.linspace(0.0, args.time, 2001)
    om = np.asarray(schedule.omega(table))
    de = np.asarray(schedule.delta(table))
    peak_om = float(np.max(np.abs(om)))
    peak_de = float(np.max(np.abs(de)))
    if peak_om > args.omega_max * (1 + 1e-12):
        t_at = float(table[int(np.argmax(np.abs(om)))])
        print(
            f"warning: amplitude peaks at {peak_om:.6g} rad/us "
            f"(limit {args.omega_max:g}) near t = {t_at:.6g} us",
            file=sys.stderr,
        )
    if peak_de > args.delta_max * (1 + 1e-12):
        t_at = float(table[int(np.argmax(np.abs(de)))])
        print(
            f"warning: detuning peaks at {peak_de:.6g} rad/us "
            f"(limit {args.delta_max:g}) near t = {t_at:.6g} us",
            file=sys.stderr,
        )

    report = validate_boundary(schedule)
    if not report.passed:
        print("warning: schedule fails the boundary check", file=sys.stderr)

    out = args.out
    if out is None:
        out = f"schedule_{args.protocol}_T{args.time:.6g}.{args.format}"
    if args.format == "json":
        save_schedule_json(schedule, out, args.n_samples)
    else:
        save_schedule_csv(schedule, out, args.n_samples)
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_battery(seed=args.seed)
    for res in results:
        tag = "PASS" if res.passed else "FAIL"
        print(f"{tag}  {res.name}: {res.detail}")
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base random seed")
    common.add_argument(
        "--omega-max", type=float, default=OMEGA_MAX_DEFAULT,
        help="amplitude limit in rad/us",
    )
    common.add_argument(
        "--delta-max", type=float, default=DELTA_MAX_DEFAULT,
        help="detuning limit in rad/us",
    )
    common.add_argument(
        "--c6", type=float, default=C6_DEFAULT,
        help="interaction coefficient in rad/us * um^6",
    )
    common.add_argument(
        "--cost-a", type=float, default=2.0, help="edge penalty coefficient"
    )
    common.add_argument(
        "--cost-b", type=float, default=1.0, help="vertex reward coefficient"
    )
    common.add_argument("--shots", type=int, default=500, help="samples per run")
    common.add_argument("--out", type=str, default=None, help="output file or directory")
    common.add_argument(
        "--jobs", type=int, default=1, help="worker processes for the run sweep"
    )
    common.add_argument(
        "--clamp-limits",
        action="store_true",
        help="clip synthesized controls at the hardware limits instead of "
        "letting them exceed",
    )

    parser = argparse.ArgumentParser(
        prog="acqc",
        description="Exact simulation of Rydberg-array annealing protocols "
        "for maximum independent set, with counterdiabatic schedule synthesis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser(
        "generate", parents=[common], help="write random unit-disk instances"
    )
    p_gen.add_argument("--rows", type=int, default=4, help="grid rows")
    p_gen.add_argument("--cols", type=int, default=4, help="grid columns")
    p_gen.add_argument("--n-nodes", type=int, default=12, help="atoms per instance")
    p_gen.add_argument(
        "--spacing", type=float, default=SPACING_DEFAULT, help="grid pitch in um"
    )
    p_gen.add_argument(
        "--blockade-radius",
        type=float,
        default=None,
        help="edge radius in um (default derived from c6 and omega-max)",
    )
    p_gen.add_argument("--count", type=int, default=1, help="number of instances")
    p_gen.set_defaults(func=cmd_generate)

    p_run = sub.add_parser(
        "run", parents=[common], help="simulate protocols over instances"
    )
    p_run.add_argument("graphs", nargs="+", help="instance JSON files")
    p_run.add_argument(
        "--protocols",
        type=str,
        default="linear,smooth,acqc",
        help="comma-separated protocol names",
    )
    p_run.add_argument(
        "--times",
        type=str,
        default="1.0",
        help="comma-separated window lengths in us",
    )
    p_run.set_defaults(func=cmd_run)

    p_sched = sub.add_parser(
        "schedule", parents=[common], help="export one drive schedule"
    )
    p_sched.add_argument(
        "--protocol", type=str, default="acqc", choices=PROTOCOLS
    )
    p_sched.add_argument(
        "--time", type=float, default=1.0, help="window length in us"
    )
    p_sched.add_argument(
        "--n-samples", type=int, default=1001, help="rows in the exported table"
    )
    p_sched.add_argument("--format", choices=("json", "csv"), default="json")
    p_sched.set_defaults(func=cmd_schedule)

    p_ver = sub.add_parser(
        "verify", parents=[common], help="run the correctness battery"
    )
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AcqcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
