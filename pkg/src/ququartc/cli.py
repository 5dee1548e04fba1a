"""Command-line front end: benchmark generation, compilation, EPS estimation,
noisy simulation and the sensitivity sweep harness.

Exit codes: 0 success, 2 usage error, 3 capacity or simulation refusal.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import benchmarks, estimator, gates, simulator
from .circuits import LogicalCircuit
from .compiler import STRATEGIES, CapacityError, compile_circuit
from .noise import NoiseConfig
from .simulator import MemoryLimitError, TrajectoryConfig, average_fidelity

EXIT_USAGE = 2
EXIT_REFUSED = 3

SWEEP_COLUMNS = [
    "family", "n_qubits", "strategy", "axis", "axis_value",
    "gate_eps", "coherence_eps", "total_eps",
    "mean_fidelity", "std_error", "n_states",
    "duration_ns", "swap_count", "seed", "error",
]


def _load_noise(path: str | None) -> NoiseConfig:
    if path is None:
        path = os.environ.get("QUQUARTC_NOISE_CONFIG")
    if path is None:
        return NoiseConfig()
    with open(path, encoding="utf-8") as fh:
        return NoiseConfig.from_json(fh.read())


def _make_benchmark(family: str, args: argparse.Namespace) -> LogicalCircuit:
    if family == "cnu":
        return benchmarks.gen_cnu(args.controls)
    if family == "cuccaro":
        return benchmarks.gen_cuccaro(args.bits)
    if family == "qram":
        return benchmarks.gen_qram(args.address_bits)
    if family == "select":
        return benchmarks.gen_select(args.index_bits, args.targets, args.seed)
    return benchmarks.gen_synthetic(
        args.qubits, args.gates, args.cx_fraction, args.seed
    )


def cmd_gates(args) -> int:
    args.output.write(gates.export_gate_table() + "\n")
    return 0


def cmd_bench(args) -> int:
    circuit = _make_benchmark(args.family, args)
    args.output.write(circuit.to_text())
    return 0


def _compile_report(result) -> dict:
    rep = result.report()
    rep["strategy"] = {
        "encoding": result.strategy.encoding,
        "lowering": result.strategy.lowering,
    }
    return rep


def cmd_compile(args) -> int:
    circuit = LogicalCircuit.from_text(args.circuit.read())
    result = compile_circuit(circuit, args.strategy, args.devices)
    args.output.write(result.physical.to_jsonl())
    report = _compile_report(result)
    json.dump(report, sys.stderr if args.output is sys.stdout else sys.stdout,
              indent=2, sort_keys=True)
    print(file=sys.stderr if args.output is sys.stdout else sys.stdout)
    return 0


def _run_record(
    circuit: LogicalCircuit, family: str, strategy_name: str,
    noise: NoiseConfig, n_states: int, seed: int,
) -> dict:
    result = compile_circuit(circuit, strategy_name)
    eps = estimator.total_eps(
        result.physical, result.schedule, config=noise
    )
    record = {
        "family": family,
        "strategy": strategy_name,
        "n_qubits": circuit.n_qubits,
        "n_devices": result.physical.n_devices,
        "gate_eps": eps.gate_eps,
        "coherence_eps": eps.coherence_eps,
        "total_eps": eps.total_eps,
        "duration_ns": result.schedule.duration_ns,
        "swap_count": result.physical.swap_count(),
        "gate_counts": result.physical.gate_histogram(),
        "n_states": n_states,
        "seed": seed,
    }
    if n_states > 0:
        fid = average_fidelity(result, noise, TrajectoryConfig(n_states, seed=seed))
        record["mean_fidelity"] = fid.mean
        record["std_error"] = fid.std_error
    return record


def cmd_run(args) -> int:
    circuit = LogicalCircuit.from_text(args.circuit.read())
    noise = _load_noise(args.noise_config)
    record = _run_record(
        circuit, args.circuit.name, args.strategy, noise, args.n_states, args.seed
    )
    json.dump(record, args.output, indent=2, sort_keys=True)
    args.output.write("\n")
    return 0


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _sweep_cell(task: tuple) -> dict:
    (family, size, strategy_name, axis, axis_value,
     base_noise_json, n_states, seed) = task
    row = {c: "" for c in SWEEP_COLUMNS}
    row.update(
        family=family, strategy=strategy_name, axis=axis,
        axis_value=axis_value, seed=seed, n_states=n_states,
    )
    try:
        circuit = _size_benchmark(family, size, seed, axis, axis_value)
        noise = NoiseConfig.from_json(base_noise_json)
        if axis == "ququart_gate_error_multiplier":
            noise.ququart_error_multiplier = axis_value
        elif axis == "coherence_multiplier":
            noise.coherence_multiplier = axis_value
        record = _run_record(circuit, family, strategy_name, noise, n_states, seed)
        row.update(
            n_qubits=record["n_qubits"],
            gate_eps=record["gate_eps"],
            coherence_eps=record["coherence_eps"],
            total_eps=record["total_eps"],
            duration_ns=record["duration_ns"],
            swap_count=record["swap_count"],
            mean_fidelity=record.get("mean_fidelity", ""),
            std_error=record.get("std_error", ""),
        )
    except Exception as exc:  # per-cell failures keep the sweep alive
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _size_benchmark(
    family: str, size: int | float, seed: int, axis: str, axis_value: float
) -> LogicalCircuit:
    size = int(size)
    if family == "cnu":
        circuit = benchmarks.gen_cnu(size)
    elif family == "cuccaro":
        circuit = benchmarks.gen_cuccaro(size)
    elif family == "qram":
        circuit = benchmarks.gen_qram(size)
    elif family == "select":
        circuit = benchmarks.gen_select(size, size, seed)
    elif family == "synthetic":
        cx_fraction = axis_value if axis == "cx_fraction" else 0.5
        circuit = benchmarks.gen_synthetic(size, 4 * size, cx_fraction, seed)
    else:
        raise ValueError(f"unknown family {family}")
    return circuit


def cmd_sweep(args) -> int:
    strategies = args.strategies.split(",")
    for s in strategies:
        if s not in STRATEGIES:
            print(f"unknown strategy {s!r}", file=sys.stderr)
            return EXIT_USAGE
    if args.axis == "circuit_size":
        values = [int(v) for v in args.values.split(",")]
    else:
        values = [float(v) for v in args.values.split(",")]
    if sorted(values) != values:
        print("axis values must be sorted", file=sys.stderr)
        return EXIT_USAGE
    noise = _load_noise(args.noise_config)

    tasks = []
    row_index = 0
    for value in values:
        size = value if args.axis == "circuit_size" else args.size
        for strategy_name in strategies:
            tasks.append((
                args.family, size, strategy_name, args.axis, value,
                noise.to_json(), args.n_states,
                _row_seed(args.seed, row_index),
            ))
            row_index += 1

    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]

    writer = csv.DictWriter(args.output, fieldnames=SWEEP_COLUMNS,
                            lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return 0


def _row_seed(base_seed: int, row_index: int) -> int:
    return (base_seed * 1_000_003 + row_index) % 2**63


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ququartc",
        description="compile and simulate three-qubit-gate circuits on ququarts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gates", help="print the gate table as JSON")
    p.add_argument("-o", "--output", type=argparse.FileType("w"),
                   default=sys.stdout)
    p.set_defaults(func=cmd_gates)

    p = sub.add_parser("bench", help="generate a benchmark circuit")
    bench_sub = p.add_subparsers(dest="family", required=True)
    for family, flags in [
        ("cnu", [("--controls", int, 3)]),
        ("cuccaro", [("--bits", int, 2)]),
        ("qram", [("--address-bits", int, 1)]),
        ("select", [("--index-bits", int, 2), ("--targets", int, 2),
                    ("--seed", int, 0)]),
        ("synthetic", [("--qubits", int, 5), ("--gates", int, 20),
                       ("--cx-fraction", float, 0.5), ("--seed", int, 0)]),
    ]:
        fp = bench_sub.add_parser(family)
        for flag, ftype, default in flags:
            fp.add_argument(flag, type=ftype, default=default)
        fp.add_argument("-o", "--output", type=argparse.FileType("w"),
                        default=sys.stdout)
        fp.set_defaults(func=cmd_bench)

    p = sub.add_parser("compile", help="compile a circuit file")
    p.add_argument("circuit", type=argparse.FileType("r"))
    p.add_argument("--strategy", choices=sorted(STRATEGIES), required=True)
    p.add_argument("--devices", type=int, default=None)
    p.add_argument("-o", "--output", type=argparse.FileType("w"),
                   default=sys.stdout)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="compile, estimate EPS and simulate")
    p.add_argument("circuit", type=argparse.FileType("r"))
    p.add_argument("--strategy", choices=sorted(STRATEGIES), required=True)
    p.add_argument("--noise-config", default=None)
    p.add_argument("--n-states", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", type=argparse.FileType("w"),
                   default=sys.stdout)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="cross strategies against an axis, emit CSV")
    p.add_argument("--family", choices=sorted(benchmarks.FAMILIES), required=True)
    p.add_argument("--axis", default="circuit_size", choices=[
        "circuit_size", "ququart_gate_error_multiplier",
        "coherence_multiplier", "cx_fraction",
    ])
    p.add_argument("--values", required=True,
                   help="comma-separated, sorted axis values")
    p.add_argument("--size", type=int, default=3,
                   help="benchmark size parameter for non-size axes")
    p.add_argument("--strategies", required=True,
                   help="comma-separated strategy names")
    p.add_argument("--n-states", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--noise-config", default=None)
    p.add_argument("-o", "--output", type=argparse.FileType("w"),
                   default=sys.stdout)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapacityError, MemoryLimitError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
