"""Closed-form expected probability of success (EPS) for compiled circuits.

Gate EPS is the product of every instruction's success probability.
Coherence EPS multiplies, over devices, exp(-(t1 + 3 * t3) / T1) where t_k
is the wall time spent at occupancy level k; an encoded pair decays three
times faster than a bare qubit, matching the level-scaled lifetimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import gates
from .circuits import PhysicalCircuit, Schedule, level_occupancy_times
from .noise import DEFAULT_T1_NS, NoiseConfig


@dataclass
class EpsReport:
    gate_eps: float
    coherence_eps: float
    total_eps: float
    per_device_coherence: list[float]
    gate_histogram: dict[str, int]


def gate_eps(circuit: PhysicalCircuit, config: NoiseConfig | None = None) -> float:
    """Product of all gate success rates, single-qubit gates included."""
    out = 1.0
    for ins in circuit.instructions:
        out *= config.gate_fidelity(ins.gate) if config else gates.fidelity_of(ins.gate)
    return out


def coherence_eps(
    schedule: Schedule,
    t1_ns: float = DEFAULT_T1_NS,
    coherence_multiplier: float = 1.0,
) -> float:
    return math.prod(
        _device_coherence(schedule, d, t1_ns, coherence_multiplier)
        for d in range(schedule.n_devices)
    )


def _device_coherence(
    schedule: Schedule, device: int, t1_ns: float, mult: float
) -> float:
    t1_time, t3_time = level_occupancy_times(schedule, device)
    return math.exp(-(t1_time + 3.0 * mult * t3_time) / t1_ns)


def total_eps(
    circuit: PhysicalCircuit,
    schedule: Schedule,
    t1_ns: float = DEFAULT_T1_NS,
    config: NoiseConfig | None = None,
) -> EpsReport:
    mult = config.coherence_multiplier if config else 1.0
    if config is not None:
        t1_ns = math.inf if config.zero_noise else config.t1_ns
    per_device = [
        _device_coherence(schedule, d, t1_ns, mult)
        for d in range(schedule.n_devices)
    ]
    g = gate_eps(circuit, config)
    c = math.prod(per_device)
    return EpsReport(g, c, g * c, per_device, circuit.gate_histogram())
