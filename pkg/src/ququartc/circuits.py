"""Circuit representations and the as-soon-as-possible device scheduler.

Logical circuits are device-independent qubit programs; physical circuits
are sequences of placed instructions over a fixed device count. The
schedule assigns start times and tracks, per device, the occupancy level
(1 while the device holds at most one logical qubit, 3 while it holds an
encoded pair) that drives all coherence accounting downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import gates

#: logical gate kinds -> (operand count, parameter count)
GATE_KINDS: dict[str, tuple[int, int]] = {
    "x": (1, 0),
    "h": (1, 0),
    "sdg": (1, 0),
    "rz": (1, 1),
    "u3": (1, 3),
    "cx": (2, 0),
    "cz": (2, 0),
    "csdg": (2, 0),
    "swap": (2, 0),
    "ccx": (3, 0),
    "ccz": (3, 0),
    "cswap": (3, 0),
    "itoffoli": (3, 0),
}

_KIND_TO_BASE = {
    "x": "X", "h": "H", "sdg": "SDG",
    "cx": "CX", "cz": "CZ", "csdg": "CSDG", "swap": "SWAP",
    "ccx": "CCX", "ccz": "CCZ", "cswap": "CSWAP", "itoffoli": "ITOFFOLI",
}


@dataclass(frozen=True)
class LogicalGate:
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity, n_params = GATE_KINDS[self.kind]
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubits, got {self.qubits}")
        if len(set(self.qubits)) != arity:
            raise ValueError(f"duplicate operand in {self.kind} {self.qubits}")
        if len(self.params) != n_params:
            raise ValueError(f"{self.kind} takes {n_params} params, got {self.params}")

    def matrix(self) -> np.ndarray:
        """Qubit-level unitary, operand 0 as the most significant bit."""
        if self.kind == "rz":
            return gates.rz_matrix(self.params[0])
        if self.kind == "u3":
            return gates.u3_matrix(*self.params)
        return gates.BASE_MATRICES[_KIND_TO_BASE[self.kind]]


@dataclass(frozen=True)
class LogicalCircuit:
    n_qubits: int
    gates: tuple[LogicalGate, ...]

    def __post_init__(self):
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise ValueError(f"operand out of range in {g} (n={self.n_qubits})")

    def moments(self) -> list[int]:
        """1-indexed ASAP moment of each gate."""
        frontier = [0] * self.n_qubits
        out = []
        for g in self.gates:
            t = 1 + max(frontier[q] for q in g.qubits)
            for q in g.qubits:
                frontier[q] = t
            out.append(t)
        return out

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def to_text(self) -> str:
        lines = [f"qubits {self.n_qubits}"]
        for g in self.gates:
            name = g.kind
            if g.params:
                name += "(" + ",".join(repr(p) for p in g.params) + ")"
            lines.append(name + " " + " ".join(str(q) for q in g.qubits))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "LogicalCircuit":
        n_qubits = None
        parsed: list[LogicalGate] = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            if head == "qubits":
                n_qubits = int(rest[0])
                continue
            params: tuple[float, ...] = ()
            if "(" in head:
                head, arg_text = head.split("(", 1)
                params = tuple(float(a) for a in arg_text.rstrip(")").split(","))
            parsed.append(LogicalGate(head, tuple(int(q) for q in rest), params))
        if n_qubits is None:
            raise ValueError("circuit text is missing a 'qubits N' line")
        return LogicalCircuit(n_qubits, tuple(parsed))


# ---------------------------------------------------------------------------
# physical circuits
# ---------------------------------------------------------------------------

@dataclass
class PhysicalInstruction:
    """A placed gate: inventory name, device tuple and slot assignment."""

    gate: str
    devices: tuple[int, ...]
    slots: tuple[tuple[int, int], ...]
    params: tuple[float, ...] = ()
    start_ns: float = 0.0
    duration_ns: float = 0.0

    def __post_init__(self):
        spec = gates.gate_spec(self.gate)
        self.duration_ns = spec.duration_ns
        if len(self.devices) != len(spec.operand_radices):
            raise ValueError(f"{self.gate} spans {len(spec.operand_radices)} devices")
        if len(set(self.devices)) != len(self.devices):
            raise ValueError(f"repeated device in {self.gate} {self.devices}")

    def unitary(self) -> np.ndarray:
        return gates.unitary_of(self.gate, self.params)


@dataclass
class PhysicalCircuit:
    n_devices: int
    instructions: list[PhysicalInstruction] = field(default_factory=list)
    initial_occupancy: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.initial_occupancy:
            self.initial_occupancy = (0,) * self.n_devices

    def gate_histogram(self) -> dict[str, int]:
        hist: dict[str, int] = {}
        for ins in self.instructions:
            hist[ins.gate] = hist.get(ins.gate, 0) + 1
        return dict(sorted(hist.items()))

    def swap_count(self) -> int:
        return sum(1 for ins in self.instructions if ins.gate.startswith("SWAP"))

    def to_jsonl(self) -> str:
        lines = [
            json.dumps(
                {
                    "n_devices": self.n_devices,
                    "initial_occupancy": list(self.initial_occupancy),
                },
                sort_keys=True,
            )
        ]
        for ins in self.instructions:
            rec = {
                "gate": ins.gate,
                "devices": list(ins.devices),
                "slots": [list(s) for s in ins.slots],
                "start_ns": ins.start_ns,
                "duration_ns": ins.duration_ns,
            }
            if ins.params:
                rec["params"] = list(ins.params)
            lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text: str) -> "PhysicalCircuit":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = json.loads(lines[0])
        pc = PhysicalCircuit(
            header["n_devices"], [], tuple(header["initial_occupancy"])
        )
        for ln in lines[1:]:
            rec = json.loads(ln)
            ins = PhysicalInstruction(
                rec["gate"],
                tuple(rec["devices"]),
                tuple(tuple(s) for s in rec["slots"]),
                tuple(rec.get("params", ())),
            )
            ins.start_ns = rec["start_ns"]
            pc.instructions.append(ins)
        return pc


# ---------------------------------------------------------------------------
# scheduling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BusyInterval:
    start: float
    end: float
    level: int  # occupancy level in force during the interval


@dataclass
class Schedule:
    n_devices: int
    duration_ns: float
    busy: list[list[BusyInterval]]
    level_segments: list[list[tuple[float, float, int]]]  # (start, end, level)


def asap_schedule(circuit: PhysicalCircuit) -> Schedule:
    """Assign start times: each instruction begins when all its devices are free.

    Also stamps ``start_ns`` on the instructions. Occupancy level flips to 3
    on the receiving device at an ENC start and back to 1 at the matching
    ENC-dagger end, so both encode pulses are counted at the higher level.
    """
    n = circuit.n_devices
    ready = [0.0] * n
    level = [3 if occ >= 2 else 1 for occ in circuit.initial_occupancy]
    seg_start = [0.0] * n
    busy: list[list[BusyInterval]] = [[] for _ in range(n)]
    segments: list[list[tuple[float, float, int]]] = [[] for _ in range(n)]

    def switch_level(dev: int, at: float, new_level: int):
        if at > seg_start[dev]:
            segments[dev].append((seg_start[dev], at, level[dev]))
        seg_start[dev] = at
        level[dev] = new_level

    for ins in circuit.instructions:
        start = max(ready[d] for d in ins.devices)
        ins.start_ns = start
        end = start + ins.duration_ns
        if ins.gate == "ENC":
            switch_level(ins.devices[1], start, 3)
        for d in ins.devices:
            busy[d].append(BusyInterval(start, end, level[d]))
            ready[d] = end
        if ins.gate == "ENC†":
            switch_level(ins.devices[1], end, 1)

    duration = max(ready) if circuit.instructions else 0.0
    for d in range(n):
        if duration > seg_start[d]:
            segments[d].append((seg_start[d], duration, level[d]))
        elif not segments[d] and duration == 0.0:
            segments[d].append((0.0, 0.0, level[d]))
    return Schedule(n, duration, busy, segments)


def idle_gaps(schedule: Schedule, device: int) -> list[tuple[float, float, int]]:
    """(gap_start, gap_length, level) before each busy interval plus the tail."""

    def level_at(t: float) -> int:
        for s, e, lv in schedule.level_segments[device]:
            if s <= t < e or (t == e == schedule.duration_ns):
                return lv
        return schedule.level_segments[device][-1][2]

    gaps = []
    cursor = 0.0
    for iv in schedule.busy[device]:
        if iv.start > cursor:
            gaps.append((cursor, iv.start - cursor, level_at(cursor)))
        cursor = iv.end
    if schedule.duration_ns > cursor:
        gaps.append((cursor, schedule.duration_ns - cursor, level_at(cursor)))
    return gaps


def level_occupancy_times(schedule: Schedule, device: int) -> tuple[float, float]:
    """Total wall time the device spends at occupancy level 1 and level 3."""
    t1 = t3 = 0.0
    for s, e, lv in schedule.level_segments[device]:
        if lv == 3:
            t3 += e - s
        else:
            t1 += e - s
    return t1, t3
