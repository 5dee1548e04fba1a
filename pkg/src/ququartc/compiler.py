"""Mapping, routing and three-qubit lowering over ququart meshes.

The pipeline: interaction weights with 1/t lookahead, greedy centre-out
placement, SWAP routing that only ever moves an operand strictly closer to
its partners (picking the least disruptive such move), and per-strategy
lowering of three-qubit gates.

Encodings: ``qubit_only`` keeps one qubit per two-level device and
decomposes every three-qubit gate; ``mixed_radix`` encodes two operands
into one ququart just around each three-qubit gate (ENC ... ENC-dagger);
``full_ququart`` packs qubit pairs for the whole circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import gates, topology
from .circuits import (
    LogicalCircuit,
    LogicalGate,
    PhysicalCircuit,
    PhysicalInstruction,
    Schedule,
    asap_schedule,
)
from .topology import InteractionGraph, Mesh, Node


class CapacityError(ValueError):
    """Circuit does not fit on the requested device count."""


class RoutingError(RuntimeError):
    """No strictly improving SWAP exists; indicates a broken distance metric."""


ENCODINGS = ("qubit_only", "mixed_radix", "full_ququart")
LOWERINGS = (
    "decompose_8cx", "itoffoli",
    "native_ccx", "retargeted_ccx", "ccz_transform", "native_cswap",
)


@dataclass(frozen=True)
class Strategy:
    encoding: str
    lowering: str
    cswap_orientation: str = "targets_together"

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.lowering not in LOWERINGS:
            raise ValueError(f"unknown lowering {self.lowering!r}")
        qubit_only = self.encoding == "qubit_only"
        if qubit_only != (self.lowering in ("decompose_8cx", "itoffoli")):
            raise ValueError(
                f"lowering {self.lowering} incompatible with {self.encoding}"
            )
        if self.cswap_orientation not in ("targets_together", "default"):
            raise ValueError(f"unknown orientation {self.cswap_orientation!r}")

    @property
    def native_cswap(self) -> bool:
        return self.lowering == "native_cswap"

    @property
    def ccx_flavor(self) -> str:
        # native CSWAP compilation keeps the CCZ transform for Toffolis
        return "ccz_transform" if self.native_cswap else self.lowering

    def min_devices(self, n_qubits: int) -> int:
        if self.encoding == "full_ququart":
            return math.ceil(n_qubits / 2)
        return n_qubits


#: CLI/benchmark strategy presets
STRATEGIES: dict[str, Strategy] = {
    "qubit-only-8cx": Strategy("qubit_only", "decompose_8cx"),
    "qubit-only-itoffoli": Strategy("qubit_only", "itoffoli"),
    "mixed-radix-ccx": Strategy("mixed_radix", "native_ccx"),
    "mixed-radix-retarget": Strategy("mixed_radix", "retargeted_ccx"),
    "mixed-radix-ccz": Strategy("mixed_radix", "ccz_transform"),
    "mixed-radix-cswap": Strategy("mixed_radix", "native_cswap"),
    "full-ququart-ccx": Strategy("full_ququart", "native_ccx"),
    "full-ququart-ccz": Strategy("full_ququart", "ccz_transform"),
    "full-ququart-cswap": Strategy("full_ququart", "native_cswap"),
    "full-ququart-cswap-basic": Strategy("full_ququart", "native_cswap", "default"),
}


# ---------------------------------------------------------------------------
# interaction weights
# ---------------------------------------------------------------------------

def _weights_of(gate_seq, n_qubits: int) -> np.ndarray:
    """w(i, j) = sum over ASAP moments t of [i, j share a gate at t] / t."""
    w = np.zeros((n_qubits, n_qubits))
    frontier = [0] * n_qubits
    for g in gate_seq:
        t = 1 + max(frontier[q] for q in g.qubits)
        for q in g.qubits:
            frontier[q] = t
        for x in range(len(g.qubits)):
            for y in range(x + 1, len(g.qubits)):
                i, j = g.qubits[x], g.qubits[y]
                w[i, j] += 1.0 / t
                w[j, i] += 1.0 / t
    return w


def interaction_weights(circuit: LogicalCircuit) -> np.ndarray:
    return _weights_of(circuit.gates, circuit.n_qubits)


# ---------------------------------------------------------------------------
# mapping
# ---------------------------------------------------------------------------

class Mapping:
    """Injective logical qubit -> (device, slot) assignment with occupancy."""

    def __init__(self, n_qubits: int, n_devices: int):
        self.n_qubits = n_qubits
        self.n_devices = n_devices
        self._node_of: dict[int, Node] = {}
        self._qubit_at: dict[Node, int] = {}
        self.occupancy = [0] * n_devices

    def place(self, qubit: int, node: Node):
        if node in self._qubit_at:
            raise ValueError(f"node {node} already occupied")
        self._node_of[qubit] = node
        self._qubit_at[node] = qubit
        self.occupancy[node[0]] += 1
        if self.occupancy[node[0]] > 2:
            raise CapacityError(f"device {node[0]} over capacity")

    def node_of(self, qubit: int) -> Node:
        return self._node_of[qubit]

    def qubit_at(self, node: Node) -> int | None:
        return self._qubit_at.get(node)

    def swap(self, a: Node, b: Node):
        qa, qb = self._qubit_at[a], self._qubit_at[b]
        self._qubit_at[a], self._qubit_at[b] = qb, qa
        self._node_of[qa], self._node_of[qb] = b, a

    def move(self, qubit: int, node: Node):
        old = self._node_of.pop(qubit)
        del self._qubit_at[old]
        self.occupancy[old[0]] -= 1
        self.place(qubit, node)

    def snapshot(self) -> dict[int, Node]:
        return dict(self._node_of)

    def is_bare(self, device: int) -> bool:
        return self.occupancy[device] <= 1

    def token(self, qubit: int) -> tuple[int, int | str]:
        dev, slot = self._node_of[qubit]
        return (dev, "q" if self.is_bare(dev) else slot)


def initial_map(
    circuit: LogicalCircuit,
    graph: InteractionGraph,
    weights: np.ndarray,
    strategy: Strategy,
    dist: topology.DistanceTable | None = None,
) -> Mapping:
    """Greedy placement: heaviest qubit at the mesh centre, then each next
    qubit (by weight to the placed set) at the free node minimising the
    weighted distance to its placed partners. Ties resolve to the lowest
    qubit id, device id, then slot."""
    n = circuit.n_qubits
    capacity = 2 if strategy.encoding == "full_ququart" else 1
    if sum(min(graph.radixes[d] // 2, capacity) for d in range(graph.mesh.n_devices)) < n:
        raise CapacityError(
            f"{n} qubits exceed capacity of {graph.mesh.n_devices} devices"
        )
    if dist is None:
        dist = topology.distance_table(graph)
    mapping = Mapping(n, graph.mesh.n_devices)

    def free_nodes():
        for node in graph.nodes:
            if mapping.qubit_at(node) is None and (
                mapping.occupancy[node[0]] < capacity
            ):
                yield node

    ecc = topology.eccentricity(graph.mesh)
    seed_dev = min(range(graph.mesh.n_devices), key=lambda d: (ecc[d], d))
    totals = weights.sum(axis=1)
    seed = min(range(n), key=lambda q: (-totals[q], q))
    mapping.place(seed, (seed_dev, 0))

    placed = [seed]
    remaining = [q for q in range(n) if q != seed]
    while remaining:
        to_placed = lambda q: sum(weights[q, p] for p in placed)
        q = min(remaining, key=lambda x: (-to_placed(x), x))
        remaining.remove(q)
        best = min(
            free_nodes(),
            key=lambda node: (
                sum(weights[q, p] * dist(node, mapping.node_of(p)) for p in placed),
                node[0],
                node[1],
            ),
        )
        mapping.place(q, best)
        placed.append(q)
    return mapping


# ---------------------------------------------------------------------------
# routing
# ---------------------------------------------------------------------------

def _mesh_adjacent(graph: InteractionGraph, d1: int, d2: int) -> bool:
    return (d1, d2) in graph.mesh.edges or (d2, d1) in graph.mesh.edges


def _line_center(graph: InteractionGraph, devs: list[int]) -> int | None:
    """Index of the operand whose device touches both others, if any."""
    for i in range(3):
        others = [devs[j] for j in range(3) if j != i]
        if all(_mesh_adjacent(graph, devs[i], o) for o in others):
            return i
    return None


def _gate_ready(gate: LogicalGate, mapping: Mapping, graph: InteractionGraph,
                strategy: Strategy) -> bool:
    nodes = [mapping.node_of(q) for q in gate.qubits]
    if len(gate.qubits) == 2:
        return graph.adjacent(nodes[0], nodes[1])
    devs = [nd[0] for nd in nodes]
    if strategy.encoding == "full_ququart":
        unique = sorted(set(devs))
        return len(unique) == 2 and _mesh_adjacent(graph, unique[0], unique[1])
    return len(set(devs)) == 3 and _line_center(graph, devs) is not None


def _swap_instruction(mapping: Mapping, a: Node, b: Node) -> PhysicalInstruction:
    if a[0] == b[0]:
        return PhysicalInstruction("SWAP^in", (a[0],), gates.gate_spec("SWAP^in").slots)
    ta = "q" if mapping.is_bare(a[0]) else a[1]
    tb = "q" if mapping.is_bare(b[0]) else b[1]
    if ta == "q" and tb == "q":
        return PhysicalInstruction(
            "SWAP_2", (a[0], b[0]), gates.gate_spec("SWAP_2").slots
        )
    return _named_instruction("SWAP", [(a[0], ta), (b[0], tb)])


def _named_instruction(
    base: str, placement: list[tuple[int, int | str]], params: tuple[float, ...] = ()
) -> PhysicalInstruction:
    name, perm = gates.gate_name_for(base, placement)
    spec = gates.gate_spec(name)
    devices: list[int | None] = [None] * len(spec.operand_radices)
    for i, (pos, _slot) in enumerate(spec.slots):
        dev = placement[perm[i]][0]
        if devices[pos] not in (None, dev):
            raise gates.UnknownGateError(f"inconsistent placement for {name}")
        devices[pos] = dev
    return PhysicalInstruction(name, tuple(devices), spec.slots, params)


class Router:
    """Single-circuit routing/lowering pass; not reusable across circuits."""

    def __init__(self, circuit: LogicalCircuit, mapping: Mapping,
                 graph: InteractionGraph, strategy: Strategy,
                 dist: topology.DistanceTable | None = None):
        self.circuit = circuit
        self.mapping = mapping
        self.graph = graph
        self.strategy = strategy
        self.dist = dist if dist is not None else topology.distance_table(graph)
        self.instructions: list[PhysicalInstruction] = []
        self.max_occupancy = list(mapping.occupancy)
        self._weights = np.zeros((circuit.n_qubits, circuit.n_qubits))

    # -- emission helpers --------------------------------------------------

    def emit(self, ins: PhysicalInstruction):
        self.instructions.append(ins)

    def emit_u3(self, qubit: int, theta: float, phi: float, lam: float):
        dev, slot = self.mapping.node_of(qubit)
        if self.mapping.is_bare(dev):
            name = "U"
        else:
            name = f"U^{slot}"
        spec = gates.gate_spec(name)
        self.emit(PhysicalInstruction(name, (dev,), spec.slots, (theta, phi, lam)))

    def emit_1q(self, gate: LogicalGate):
        kind_angles = {
            "x": (math.pi, 0.0, math.pi),
            "h": (math.pi / 2, 0.0, math.pi),
            "sdg": (0.0, 0.0, -math.pi / 2),
        }
        if gate.kind in kind_angles:
            self.emit_u3(gate.qubits[0], *kind_angles[gate.kind])
        elif gate.kind == "rz":
            self.emit_u3(gate.qubits[0], 0.0, 0.0, gate.params[0])
        elif gate.kind == "u3":
            self.emit_u3(gate.qubits[0], *gate.params)
        else:
            raise ValueError(f"not a 1q gate: {gate.kind}")

    def emit_h(self, qubit: int):
        self.emit_u3(qubit, math.pi / 2, 0.0, math.pi)

    def emit_t(self, qubit: int, dagger: bool = False):
        self.emit_u3(qubit, 0.0, 0.0, -math.pi / 4 if dagger else math.pi / 4)

    def emit_swap(self, a: Node, b: Node):
        self.emit(_swap_instruction(self.mapping, a, b))
        self.mapping.swap(a, b)

    def emit_enc(self, donor_dev: int, host_dev: int):
        """Encode the donor's qubit into the host; incoming qubit takes slot 0."""
        spec = gates.gate_spec("ENC")
        self.emit(PhysicalInstruction("ENC", (donor_dev, host_dev), spec.slots))
        donor_q = self.mapping.qubit_at((donor_dev, 0))
        resident_q = self.mapping.qubit_at((host_dev, 0))
        self.mapping.move(resident_q, (host_dev, 1))
        self.mapping.move(donor_q, (host_dev, 0))
        self.max_occupancy[host_dev] = 2

    def emit_dec(self, donor_dev: int, host_dev: int):
        spec = gates.gate_spec("ENC†")
        self.emit(PhysicalInstruction("ENC†", (donor_dev, host_dev), spec.slots))
        donated_q = self.mapping.qubit_at((host_dev, 0))
        resident_q = self.mapping.qubit_at((host_dev, 1))
        self.mapping.move(donated_q, (donor_dev, 0))
        self.mapping.move(resident_q, (host_dev, 0))

    # -- two-qubit lowering -------------------------------------------------

    def emit_cx(self, control: int, target: int):
        nc, nt = self.mapping.node_of(control), self.mapping.node_of(target)
        if nc[0] == nt[0]:
            name = f"CX^{nt[1]}"
            self.emit(PhysicalInstruction(name, (nc[0],), gates.gate_spec(name).slots))
        elif self.mapping.is_bare(nc[0]) and self.mapping.is_bare(nt[0]):
            self.emit(PhysicalInstruction(
                "CX_2", (nc[0], nt[0]), gates.gate_spec("CX_2").slots))
        else:
            self.emit(_named_instruction(
                "CX", [self.mapping.token(control), self.mapping.token(target)]))

    def lower_two_qubit(self, gate: LogicalGate):
        a, b = gate.qubits
        na, nb = self.mapping.node_of(a), self.mapping.node_of(b)
        same_device = na[0] == nb[0]
        both_bare = self.mapping.is_bare(na[0]) and self.mapping.is_bare(nb[0])
        if gate.kind == "cx":
            self.emit_cx(a, b)
        elif gate.kind == "swap":
            # a logical swap exchanges the values in place; the mapping is
            # untouched (only routing swaps relabel qubits)
            if same_device:
                self.emit(PhysicalInstruction(
                    "SWAP^in", (na[0],), gates.gate_spec("SWAP^in").slots))
            elif both_bare:
                self.emit(PhysicalInstruction(
                    "SWAP_2", (na[0], nb[0]), gates.gate_spec("SWAP_2").slots))
            else:
                self.emit(_named_instruction(
                    "SWAP", [self.mapping.token(a), self.mapping.token(b)]))
        elif gate.kind == "cz":
            if same_device:  # no internal CZ pulse; conjugate an internal CX
                self.emit_h(b)
                self.emit_cx(a, b)
                self.emit_h(b)
            elif both_bare:
                self.emit(PhysicalInstruction(
                    "CZ_2", (na[0], nb[0]), gates.gate_spec("CZ_2").slots))
            else:
                self.emit(_named_instruction(
                    "CZ", [self.mapping.token(a), self.mapping.token(b)]))
        elif gate.kind == "csdg":
            if both_bare and not same_device:
                self.emit(PhysicalInstruction(
                    "CS†_2", (na[0], nb[0]), gates.gate_spec("CS†_2").slots))
            else:  # build from internal/cross CX and T rotations
                self.emit_t(a, dagger=True)
                self.emit_t(b, dagger=True)
                self.emit_cx(a, b)
                self.emit_t(b)
                self.emit_cx(a, b)
        else:
            raise ValueError(f"not a 2q gate: {gate.kind}")

    # -- three-qubit lowering -----------------------------------------------

    def _ccz_parity_network(self, end1: int, center: int, end2: int):
        """Exact CCZ on a device line using eight CX and seven T rotations."""
        for q in (end1, center, end2):
            self.emit_t(q)
        cx_center_end = lambda: self.emit_cx(center, end2)
        cx_end_center = lambda: self.emit_cx(end1, center)
        cx_center_end(); self.emit_t(end2, dagger=True)
        cx_end_center(); self.emit_t(center, dagger=True)
        cx_center_end(); self.emit_t(end2, dagger=True)
        cx_end_center()
        cx_center_end(); self.emit_t(end2)
        cx_end_center()
        cx_center_end()
        cx_end_center()

    def _lower_three_qubit_only(self, gate: LogicalGate):
        nodes = [self.mapping.node_of(q) for q in gate.qubits]
        devs = [nd[0] for nd in nodes]
        center_idx = _line_center(self.graph, devs)
        center = gate.qubits[center_idx]
        ends = [q for q in gate.qubits if q != center]
        ends.sort(key=lambda q: self.mapping.node_of(q)[0])

        if self.strategy.lowering == "decompose_8cx":
            if gate.kind == "ccx":
                target = gate.qubits[2]
                self.emit_h(target)
                self._ccz_parity_network(ends[0], center, ends[1])
                self.emit_h(target)
            else:  # ccz
                self._ccz_parity_network(ends[0], center, ends[1])
            return

        # iToffoli lowering; target must sit on the centre device
        c1, c2, target = gate.qubits
        if center == target:
            controls = [c1, c2]
            retarget = None
        else:
            # swap roles of the centre control and the target with Hadamards
            retarget = center
            controls = [q for q in (c1, c2) if q != center] + [target]
            target = retarget
            self.emit_h(retarget)
            self.emit_h(gate.qubits[2])
        self.emit(PhysicalInstruction(
            "iToffoli_3",
            (self.mapping.node_of(controls[0])[0],
             self.mapping.node_of(controls[1])[0],
             self.mapping.node_of(target)[0]),
            gates.gate_spec("iToffoli_3").slots,
        ))
        # the corrective CS-dagger needs adjacent controls: swap one into the
        # centre, permanently disrupting the layout
        mover = min(controls)
        other = controls[0] if mover == controls[1] else controls[1]
        self.emit_swap(self.mapping.node_of(mover), self.mapping.node_of(target))
        self.emit(PhysicalInstruction(
            "CS†_2",
            (self.mapping.node_of(mover)[0], self.mapping.node_of(other)[0]),
            gates.gate_spec("CS†_2").slots,
        ))
        if retarget is not None:
            self.emit_h(retarget)
            self.emit_h(gate.qubits[2])

    def _lower_three_mixed(self, gate: LogicalGate):
        nodes = [self.mapping.node_of(q) for q in gate.qubits]
        devs = [nd[0] for nd in nodes]
        center_idx = _line_center(self.graph, devs)
        center = gate.qubits[center_idx]
        ends = sorted(
            (q for q in gate.qubits if q != center),
            key=lambda q: self.mapping.node_of(q)[0],
        )
        host = self.mapping.node_of(center)[0]
        flavor = self.strategy.ccx_flavor

        def enc_pair(donor_qubit: int):
            donor_dev = self.mapping.node_of(donor_qubit)[0]
            self.emit_enc(donor_dev, host)
            return donor_dev

        def emit_named(base: str, operands: tuple[int, ...]):
            self.emit(_named_instruction(
                base, [self.mapping.token(q) for q in operands]))

        if gate.kind == "ccz" or (gate.kind == "ccx" and flavor == "ccz_transform"):
            if gate.kind == "ccx":
                self.emit_h(gate.qubits[2])
            donor_dev = enc_pair(ends[0])
            emit_named("CCZ", gate.qubits)
            self.emit_dec(donor_dev, host)
            if gate.kind == "ccx":
                self.emit_h(gate.qubits[2])
            return

        if gate.kind == "ccx":
            c1, c2, target = gate.qubits
            if target != center:
                # controls can share the host ququart
                donor = c1 if c2 == center else c2
                donor_dev = enc_pair(donor)
                emit_named("CCX", gate.qubits)
                self.emit_dec(donor_dev, host)
            elif flavor == "native_ccx":
                donor_dev = enc_pair(ends[0])  # split configuration, as-is
                emit_named("CCX", gate.qubits)
                self.emit_dec(donor_dev, host)
            else:  # retargeted_ccx: make the centre the target via Hadamards
                new_target = ends[1]
                self.emit_h(new_target)
                self.emit_h(target)
                donor_dev = enc_pair(ends[0])
                emit_named("CCX", (ends[0], target, new_target))
                self.emit_dec(donor_dev, host)
                self.emit_h(target)
                self.emit_h(new_target)
            return

        # native CSWAP: keep the targets together whenever the line allows
        control, t1, t2 = gate.qubits
        if control != center:
            donor = t1 if t2 == center else t2
            donor_dev = enc_pair(donor)
        else:
            donor_dev = enc_pair(ends[0])
        emit_named("CSWAP", gate.qubits)
        self.emit_dec(donor_dev, host)

    def _lower_three_full(self, gate: LogicalGate):
        qubits = list(gate.qubits)

        def host_device() -> int:
            devs = [self.mapping.node_of(q)[0] for q in qubits]
            return next(d for d in devs if devs.count(d) == 2)

        def emit_named(base: str, operands: tuple[int, ...]):
            self.emit(_named_instruction(
                base, [self.mapping.token(q) for q in operands]))

        flavor = self.strategy.ccx_flavor
        if gate.kind == "ccz" or (gate.kind == "ccx" and flavor == "ccz_transform"):
            if gate.kind == "ccx":
                self.emit_h(gate.qubits[2])
            emit_named("CCZ", gate.qubits)
            if gate.kind == "ccx":
                self.emit_h(gate.qubits[2])
            return

        if gate.kind == "ccx":
            c1, c2, target = gate.qubits
            host = host_device()
            split = self.mapping.node_of(target)[0] == host and (
                self.mapping.node_of(c1)[0] != self.mapping.node_of(c2)[0]
            )
            if split and flavor == "retargeted_ccx":
                c_in = c1 if self.mapping.node_of(c1)[0] == host else c2
                c_out = c2 if c_in == c1 else c1
                self.emit_h(c_out)
                self.emit_h(target)
                emit_named("CCX", (c_in, target, c_out))
                self.emit_h(target)
                self.emit_h(c_out)
            else:
                emit_named("CCX", gate.qubits)
            return

        control, t1, t2 = gate.qubits
        targets_apart = self.mapping.node_of(t1)[0] != self.mapping.node_of(t2)[0]
        if targets_apart and self.strategy.cswap_orientation == "targets_together":
            # re-pair: exchange the control with the remote target
            remote = t1 if self.mapping.node_of(t1)[0] != host_device() else t2
            if self.mapping.node_of(control)[0] == host_device():
                self.emit_swap(
                    self.mapping.node_of(control), self.mapping.node_of(remote)
                )
        emit_named("CSWAP", gate.qubits)

    def lower_three_qubit(self, gate: LogicalGate):
        if self.strategy.encoding == "qubit_only":
            self._lower_three_qubit_only(gate)
        elif self.strategy.encoding == "mixed_radix":
            self._lower_three_mixed(gate)
        else:
            self._lower_three_full(gate)

    # -- routing ------------------------------------------------------------

    def _move_kind(self, source: Node, target: Node) -> str | None:
        """Classify a candidate move of an operand from source to target.

        ``swap`` exchanges two occupied positions. When the target position
        is free the move changes occupancies: ``pack`` joins a lone qubit's
        device (full-ququart only), ``move`` hops a bare qubit onto an empty
        device, ``unpack`` pulls one qubit of a pair onto an empty device.
        """
        occupied = self.mapping.qubit_at(target) is not None
        if occupied:
            return "swap"
        src_occ = self.mapping.occupancy[source[0]]
        tgt_occ = self.mapping.occupancy[target[0]]
        full = self.strategy.encoding == "full_ququart"
        if tgt_occ == 1 and src_occ == 2 and full:
            return "pack"
        if tgt_occ == 0 and src_occ == 1:
            return "move"
        if tgt_occ == 0 and src_occ == 2 and full:
            return "unpack"
        return None

    def _apply_move(self, kind: str, qubit: int, target: Node):
        source = self.mapping.node_of(qubit)
        dev, ldev = source[0], target[0]
        if kind == "swap":
            self.emit_swap(source, target)
            return
        if kind == "move":
            self.emit(PhysicalInstruction(
                "SWAP_2", (dev, ldev), gates.gate_spec("SWAP_2").slots))
            self.mapping.move(qubit, (ldev, 0))
            return
        # extracting from a pair: the partner must end in the low bit (slot 1)
        # so the device reads as a bare qubit afterwards
        if source[1] == 1:
            self.emit(PhysicalInstruction(
                "SWAP^in", (dev,), gates.gate_spec("SWAP^in").slots))
            self.mapping.swap((dev, 0), (dev, 1))
        if kind == "pack":
            # exchange our high bit with the lone device's empty high bit;
            # the resident keeps the low bit and relabels to slot 1
            self.emit(PhysicalInstruction(
                "SWAP^{00}", (dev, ldev), gates.gate_spec("SWAP^{00}").slots))
            resident = self.mapping.qubit_at((ldev, 0))
            self.mapping.move(resident, (ldev, 1))
            self.max_occupancy[ldev] = 2
        else:  # unpack onto an empty device, landing as a bare qubit
            self.emit(_named_instruction("SWAP", [(ldev, "q"), (dev, 0)]))
        self.mapping.move(qubit, (ldev, 0))
        partner = self.mapping.qubit_at((dev, 1))
        if partner is not None:
            self.mapping.move(partner, (dev, 0))

    def _pick_swap(self, operands: tuple[int, ...]):
        d = self.dist
        op_set = set(operands)
        op_nodes = {q: self.mapping.node_of(q) for q in operands}
        best = None
        for i in sorted(operands):
            ni = op_nodes[i]
            for n in self.graph.neighbors(ni):
                j = self.mapping.qubit_at(n)
                if j in op_set:
                    continue
                kind = self._move_kind(ni, n)
                if kind is None:
                    continue
                gain = sum(
                    d(ni, op_nodes[o]) - d(n, op_nodes[o])
                    for o in operands
                    if o != i
                )
                if gain <= 1e-12:
                    continue
                w = self._weights
                disruption = 0.0
                for k in range(self.circuit.n_qubits):
                    if k == i or k == j:
                        continue
                    wik = w[i, k]
                    wjk = w[j, k] if j is not None else 0.0
                    if wik == 0.0 and wjk == 0.0:
                        continue
                    nk = self.mapping.node_of(k)
                    delta = d(n, nk) - d(ni, nk)
                    disruption += wik * delta - wjk * delta
                score = disruption * gain
                key = (score, i, n[0], n[1])
                if best is None or key < best[0]:
                    best = (key, kind, i, n)
        if best is None:
            raise RoutingError(
                f"no strictly improving SWAP for operands {operands}"
            )
        return best[1], best[2], best[3]

    def route_gate(self, gate: LogicalGate):
        while not _gate_ready(gate, self.mapping, self.graph, self.strategy):
            kind, qubit, target = self._pick_swap(gate.qubits)
            self._apply_move(kind, qubit, target)

    def run(self) -> None:
        for idx, gate in enumerate(self.circuit.gates):
            if len(gate.qubits) == 1:
                self.emit_1q(gate)
                continue
            self._weights = _weights_of(
                self.circuit.gates[idx:], self.circuit.n_qubits
            )
            self.route_gate(gate)
            if len(gate.qubits) == 2:
                self.lower_two_qubit(gate)
            else:
                self.lower_three_qubit(gate)


# ---------------------------------------------------------------------------
# end-to-end compilation
# ---------------------------------------------------------------------------

def to_basis(circuit: LogicalCircuit, strategy: Strategy) -> LogicalCircuit:
    """Rewrite to the gate basis the router understands.

    iToffolis become CCX plus a CS correction; CSWAPs decompose to
    CX.CCX.CX except under native CSWAP compilation; CCZ becomes a
    Hadamard-framed CCX only for the iToffoli strategy.
    """
    out: list[LogicalGate] = []
    for g in circuit.gates:
        if g.kind == "itoffoli":
            c1, c2, t = g.qubits
            out.append(LogicalGate("ccx", (c1, c2, t)))
            out += [  # CS on the controls restores the leading i phase
                LogicalGate("cx", (c1, c2)),
                LogicalGate("rz", (c2,), (-math.pi / 4,)),
                LogicalGate("cx", (c1, c2)),
                LogicalGate("rz", (c2,), (math.pi / 4,)),
                LogicalGate("rz", (c1,), (math.pi / 4,)),
            ]
        elif g.kind == "cswap" and not strategy.native_cswap:
            c, t1, t2 = g.qubits
            out.append(LogicalGate("cx", (t2, t1)))
            out.append(LogicalGate("ccx", (c, t1, t2)))
            out.append(LogicalGate("cx", (t2, t1)))
        elif g.kind == "ccz" and strategy.lowering == "itoffoli":
            a, b, t = g.qubits
            out.append(LogicalGate("h", (t,)))
            out.append(LogicalGate("ccx", (a, b, t)))
            out.append(LogicalGate("h", (t,)))
        else:
            out.append(g)
    return LogicalCircuit(circuit.n_qubits, tuple(out))


@dataclass
class CompileResult:
    logical: LogicalCircuit
    strategy: Strategy
    physical: PhysicalCircuit
    schedule: Schedule
    initial_map: dict[int, Node]
    final_map: dict[int, Node]
    device_dims: tuple[int, ...]
    mesh: Mesh

    def report(self) -> dict:
        return {
            "n_qubits": self.logical.n_qubits,
            "n_devices": self.physical.n_devices,
            "duration_ns": self.schedule.duration_ns,
            "n_instructions": len(self.physical.instructions),
            "swap_count": self.physical.swap_count(),
            "gate_histogram": self.physical.gate_histogram(),
        }


def compile_circuit(
    circuit: LogicalCircuit,
    strategy: Strategy | str,
    n_devices: int | None = None,
) -> CompileResult:
    """weights -> placement -> routing/lowering -> ASAP schedule."""
    if isinstance(strategy, str):
        strategy = STRATEGIES[strategy]
    basis = to_basis(circuit, strategy)
    if n_devices is None:
        n_devices = strategy.min_devices(circuit.n_qubits)
    if n_devices < strategy.min_devices(circuit.n_qubits):
        raise CapacityError(
            f"{circuit.n_qubits} qubits need at least "
            f"{strategy.min_devices(circuit.n_qubits)} devices under "
            f"{strategy.encoding}, got {n_devices}"
        )
    mesh = topology.mesh_for(n_devices)
    radix = gates.QUBIT if strategy.encoding == "qubit_only" else gates.QUQUART
    graph = topology.expand(mesh, radix)
    dist = topology.distance_table(graph)
    weights = interaction_weights(basis)
    mapping = initial_map(basis, graph, weights, strategy, dist)
    initial = mapping.snapshot()
    initial_occupancy = tuple(mapping.occupancy)

    router = Router(basis, mapping, graph, strategy, dist)
    router.run()
    physical = PhysicalCircuit(n_devices, router.instructions, initial_occupancy)
    schedule = asap_schedule(physical)
    device_dims = tuple(
        4 if router.max_occupancy[d] >= 2 else 2 for d in range(n_devices)
    )
    return CompileResult(
        circuit, strategy, physical, schedule,
        initial, mapping.snapshot(), device_dims, mesh,
    )


def route(
    circuit: LogicalCircuit,
    mapping: Mapping,
    graph: InteractionGraph,
    strategy: Strategy,
) -> tuple[PhysicalCircuit, Mapping]:
    """Routing/lowering stage on an existing placement (circuit already in basis)."""
    initial_occupancy = tuple(mapping.occupancy)
    router = Router(circuit, mapping, graph, strategy)
    router.run()
    return (
        PhysicalCircuit(graph.mesh.n_devices, router.instructions, initial_occupancy),
        mapping,
    )
