"""Duration-aware Monte Carlo wavefunction simulator over mixed-radix registers.

One trajectory applies, per instruction in start-time order: amplitude
damping on each operand device for its exact idle gap, the instruction's
unitary, then one depolarizing draw sized to the gate's error support.
Averaging single trajectories over Haar-random inputs yields the reported
fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gates, noise as noise_mod
from .circuits import LogicalCircuit, PhysicalCircuit
from .compiler import CompileResult
from .noise import NoiseConfig
from .topology import Node

#: refuse registers larger than this many amplitudes unless overridden
DEFAULT_AMPLITUDE_LIMIT = 2**24


class MemoryLimitError(RuntimeError):
    """Register exceeds the configured amplitude budget."""


@dataclass
class MixedRadixState:
    dims: tuple[int, ...]
    vec: np.ndarray  # complex amplitudes, length prod(dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def copy(self) -> "MixedRadixState":
        return MixedRadixState(self.dims, self.vec.copy())


def _check_size(dims: tuple[int, ...], limit: int):
    total = math.prod(dims)
    if total > limit:
        raise MemoryLimitError(
            f"register of {total} amplitudes exceeds the limit of {limit}"
        )


def haar_random_state(
    dims: tuple[int, ...], rng: np.random.Generator,
    limit: int = DEFAULT_AMPLITUDE_LIMIT,
) -> MixedRadixState:
    """Normalized complex-Gaussian vector over the full product space."""
    _check_size(dims, limit)
    total = math.prod(dims)
    vec = rng.normal(size=total) + 1j * rng.normal(size=total)
    return MixedRadixState(tuple(dims), vec / np.linalg.norm(vec))


def apply_unitary(
    state: MixedRadixState, matrix: np.ndarray, devices: tuple[int, ...]
) -> MixedRadixState:
    """Contract a unitary over the named device axes (dimensions must match)."""
    sub = math.prod(state.dims[d] for d in devices)
    if matrix.shape != (sub, sub):
        raise ValueError(
            f"matrix of shape {matrix.shape} cannot act on devices {devices}"
        )
    tensor = state.vec.reshape(state.dims)
    moved = np.moveaxis(tensor, devices, range(len(devices)))
    shape = moved.shape
    out = (matrix @ moved.reshape(sub, -1)).reshape(shape)
    state.vec = np.moveaxis(out, range(len(devices)), devices).reshape(-1)
    return state


_EMBED_CACHE: dict[tuple, np.ndarray] = {}


def _embedded_unitary(
    name: str, params: tuple[float, ...], dev_dims: tuple[int, ...]
) -> np.ndarray:
    """Instruction unitary adapted to the actual device dimensions.

    Gates whose operand radix is below the device dimension act as identity
    on the extra levels; the encode gate's donor side may conversely be
    sliced down to two levels (its action is closed there).
    """
    key = (name, params, dev_dims)
    cached = _EMBED_CACHE.get(key)
    if cached is not None:
        return cached
    u = gates.unitary_of(name, params)
    radices = gates.gate_spec(name).operand_radices
    if tuple(radices) == tuple(dev_dims):
        _EMBED_CACHE[key] = u
        return u
    out = _reshape_levels(u, radices, dev_dims)
    _EMBED_CACHE[key] = out
    return out


def _reshape_levels(
    u: np.ndarray, radices: tuple[int, ...], dev_dims: tuple[int, ...]
) -> np.ndarray:
    total = math.prod(dev_dims)
    out = np.zeros((total, total), dtype=complex)
    for idx in range(total):
        levels = np.unravel_index(idx, dev_dims)
        if all(l < r for l, r in zip(levels, radices)):
            col = np.ravel_multi_index(levels, radices)
            for row in range(u.shape[0]):
                amp = u[row, col]
                if amp == 0:
                    continue
                out_levels = np.unravel_index(row, radices)
                if any(l >= d for l, d in zip(out_levels, dev_dims)):
                    if abs(amp) > 1e-12:
                        raise ValueError("gate leaks outside the device levels")
                    continue
                out[np.ravel_multi_index(out_levels, dev_dims), idx] += amp
        else:
            out[idx, idx] = 1.0
    return out


def device_populations(state: MixedRadixState, device: int) -> np.ndarray:
    tensor = np.abs(state.vec.reshape(state.dims)) ** 2
    axes = tuple(a for a in range(len(state.dims)) if a != device)
    return tensor.sum(axis=axes)


def _apply_damping(
    state: MixedRadixState, device: int, kraus: noise_mod.KrausSet,
    rng: np.random.Generator,
):
    pops = device_populations(state, device)
    index = noise_mod.sample_kraus(rng, kraus, pops)
    tensor = state.vec.reshape(state.dims)
    moved = np.moveaxis(tensor, device, 0)
    if index == 0:
        diag = kraus.k0_diagonal.reshape((kraus.dim,) + (1,) * (moved.ndim - 1))
        moved = moved * diag
    else:
        jumped = np.zeros_like(moved)
        jumped[0] = math.sqrt(kraus.lambdas[index - 1]) * moved[index]
        moved = jumped
    vec = np.moveaxis(moved, 0, device).reshape(-1)
    state.vec = vec / np.linalg.norm(vec)


def _apply_gate_error(
    state: MixedRadixState, devices: tuple[int, ...],
    draw: list[tuple[int, int]], support: tuple[int, ...],
):
    for dev, (a, b), d_err in zip(devices, draw, support):
        if a == 0 and b == 0:
            continue
        pauli = np.linalg.matrix_power(noise_mod.shift_matrix(d_err), a) @ \
            np.linalg.matrix_power(noise_mod.clock_matrix(d_err), b)
        embedded = _reshape_levels(pauli, (d_err,), (state.dims[dev],))
        apply_unitary(state, embedded, (dev,))


def run_trajectory(
    result: CompileResult,
    input_state: MixedRadixState,
    config: NoiseConfig,
    rng: np.random.Generator,
) -> MixedRadixState:
    """One noisy pass over the compiled circuit; the input state is consumed."""
    state = input_state
    dims = state.dims
    instrs = sorted(
        range(len(result.physical.instructions)),
        key=lambda i: (result.physical.instructions[i].start_ns, i),
    )
    last_end = [0.0] * result.physical.n_devices
    for i in instrs:
        ins = result.physical.instructions[i]
        for dev in ins.devices:
            gap = ins.start_ns - last_end[dev]
            kraus = config.damping(dims[dev], gap)
            if kraus is not None:
                _apply_damping(state, dev, kraus, rng)
        apply_unitary(
            state, _embedded_unitary(ins.gate, ins.params, tuple(dims[d] for d in ins.devices)),
            ins.devices,
        )
        eps = config.gate_error(ins.gate)
        if eps > 0.0:
            support = noise_mod.error_support(ins.gate)
            draw = noise_mod.sample_gate_error(rng, eps, support)
            if draw is not None:
                _apply_gate_error(state, ins.devices, draw, support)
        for dev in ins.devices:
            last_end[dev] = ins.start_ns + ins.duration_ns
    for dev in range(result.physical.n_devices):
        gap = result.schedule.duration_ns - last_end[dev]
        kraus = config.damping(dims[dev], gap)
        if kraus is not None:
            _apply_damping(state, dev, kraus, rng)
    return state


# ---------------------------------------------------------------------------
# logical reference evolution and the encode isometry
# ---------------------------------------------------------------------------

def logical_statevector(
    circuit: LogicalCircuit, input_vec: np.ndarray | None = None
) -> np.ndarray:
    """Noiseless statevector of the logical circuit (qubit 0 most significant)."""
    n = circuit.n_qubits
    if input_vec is None:
        vec = np.zeros(2**n, dtype=complex)
        vec[0] = 1.0
    else:
        vec = np.asarray(input_vec, dtype=complex).copy()
    state = MixedRadixState((2,) * n, vec)
    for g in circuit.gates:
        apply_unitary(state, g.matrix(), g.qubits)
    return state.vec


def encode_state(
    logical_vec: np.ndarray,
    layout: dict[int, Node],
    dims: tuple[int, ...],
    n_qubits: int,
) -> MixedRadixState:
    """Isometry from the logical register into the device product space.

    A device holding one qubit stores it in levels {0, 1}; a device holding
    a pair stores level 2*b(slot 0) + b(slot 1). Unused devices stay at 0.
    """
    per_device: dict[int, list[tuple[int, int]]] = {}
    for q, (dev, slot) in layout.items():
        per_device.setdefault(dev, []).append((slot, q))
    strides = np.ones(len(dims), dtype=np.int64)
    for d in range(len(dims) - 2, -1, -1):
        strides[d] = strides[d + 1] * dims[d + 1]
    idx = np.arange(2**n_qubits, dtype=np.int64)
    phys = np.zeros(2**n_qubits, dtype=np.int64)
    for dev, slot_qubits in per_device.items():
        slot_qubits.sort()
        if len(slot_qubits) == 2:
            (s0, q0), (s1, q1) = slot_qubits
            assert (s0, s1) == (0, 1)
            level = 2 * ((idx >> (n_qubits - 1 - q0)) & 1) + (
                (idx >> (n_qubits - 1 - q1)) & 1
            )
        else:
            (_, q) = slot_qubits[0]
            level = (idx >> (n_qubits - 1 - q)) & 1
        phys += level * strides[dev]
    vec = np.zeros(math.prod(dims), dtype=complex)
    vec[phys] = logical_vec
    return MixedRadixState(tuple(dims), vec)


# ---------------------------------------------------------------------------
# fidelity estimation protocol
# ---------------------------------------------------------------------------

@dataclass
class TrajectoryConfig:
    n_states: int = 1000
    n_trajectories_per_state: int = 1
    seed: int = 0
    amplitude_limit: int = DEFAULT_AMPLITUDE_LIMIT

    def __post_init__(self):
        if self.n_states < 1 or self.n_trajectories_per_state < 1:
            raise ValueError("state and trajectory counts must be positive")


@dataclass
class FidelityResult:
    mean: float
    std_error: float
    n_samples: int
    samples: np.ndarray


def average_fidelity(
    result: CompileResult, noise_config: NoiseConfig, config: TrajectoryConfig
) -> FidelityResult:
    """Mean state-overlap fidelity over Haar-random logical inputs.

    Each input is encoded through the initial layout, run through one (or
    more) noisy trajectories, and compared against the noiseless logical
    output encoded through the final layout.
    """
    dims = result.device_dims
    _check_size(dims, config.amplitude_limit)
    n = result.logical.n_qubits
    fids = []
    for i in range(config.n_states):
        rng = np.random.default_rng([config.seed, i])
        amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        logical_in = amps / np.linalg.norm(amps)
        expected = encode_state(
            logical_statevector(result.logical, logical_in),
            result.final_map, dims, n,
        )
        for _ in range(config.n_trajectories_per_state):
            state = encode_state(logical_in, result.initial_map, dims, n)
            final = run_trajectory(result, state, noise_config, rng)
            fids.append(abs(np.vdot(expected.vec, final.vec)) ** 2)
    samples = np.array(fids)
    std_error = (
        float(samples.std(ddof=1) / math.sqrt(len(samples)))
        if len(samples) > 1
        else 0.0
    )
    return FidelityResult(float(samples.mean()), std_error, len(samples), samples)
