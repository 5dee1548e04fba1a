"""Physical gate library for ququart devices that each hold up to two encoded qubits.

A four-level device stores a qubit pair through ``|q0 q1> -> |2*q0 + q1>``,
so slot 0 is the high bit of the level index. Every named gate in the library
is a qubit-level operation embedded into the device product space with
:func:`lift`; durations come from pulse-synthesis results and are fixed
constants here.

Name grammar (``gate_name_for`` resolves placements back to these names):

* ``U``, ``CX_2``, ``CZ_2``, ``CS†_2``, ``SWAP_2``, ``iToffoli_3`` act on bare
  qubits only.
* A superscript lists one token per logical operand, in the gate's operand
  order (controls first, CSWAP control first). Digit tokens are slot indices
  on a ququart; ``q`` is a bare qubit on its own device. A comma separates
  two distinct ququarts, e.g. ``CCX^{01,1}`` has both controls in ququart one
  and the target in slot 1 of ququart two.
* ``CX^0``/``CX^1`` are internal gates: the superscript names the target slot
  and the other slot controls. ``SWAP^in`` exchanges the encoded pair.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

QUBIT = 2
QUQUART = 4

#: fidelity targets for gates confined to one device vs. gates spanning several
SINGLE_DEVICE_FIDELITY = 0.999
MULTI_DEVICE_FIDELITY = 0.99


class UnknownGateError(KeyError):
    """Raised when a gate name is not in the inventory."""


def encode_level(q0: int, q1: int) -> int:
    """Level of a ququart holding the qubit pair (q0, q1)."""
    if q0 not in (0, 1) or q1 not in (0, 1):
        raise ValueError(f"bits must be 0 or 1, got ({q0}, {q1})")
    return 2 * q0 + q1


def decode_level(level: int) -> tuple[int, int]:
    """Inverse of :func:`encode_level`."""
    if level not in (0, 1, 2, 3):
        raise ValueError(f"level must be in 0..3, got {level}")
    return level >> 1, level & 1


# ---------------------------------------------------------------------------
# canonical qubit-level matrices
# ---------------------------------------------------------------------------

def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """Generic single-qubit rotation; H = u3(pi/2, 0, pi), X = u3(pi, 0, pi)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S = np.diag([1, 1j]).astype(complex)
SDG = np.diag([1, -1j]).astype(complex)
T = np.diag([1, cmath.exp(1j * math.pi / 4)]).astype(complex)
TDG = T.conj()


def rz_matrix(theta: float) -> np.ndarray:
    """diag(1, e^{i theta}); S = rz(pi/2), T = rz(pi/4)."""
    return np.diag([1, cmath.exp(1j * theta)]).astype(complex)


def _controlled(u: np.ndarray, n_controls: int = 1) -> np.ndarray:
    dim = u.shape[0]
    full = np.eye(dim * 2**n_controls, dtype=complex)
    full[-dim:, -dim:] = u
    return full


CX = _controlled(X)
CZ = _controlled(Z)
CS = _controlled(S)
CSDG = _controlled(SDG)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
CCX = _controlled(X, 2)
CCZ = _controlled(Z, 2)
CSWAP = _controlled(SWAP)

# iToffoli: Toffoli with an extra phase i whenever both controls are 1, so a
# CS-dagger on the controls recovers an exact CCX.
ITOFFOLI = _controlled(1j * X, 2)

BASE_MATRICES: dict[str, np.ndarray] = {
    "X": X,
    "Y": Y,
    "Z": Z,
    "H": H,
    "S": S,
    "SDG": SDG,
    "T": T,
    "TDG": TDG,
    "CX": CX,
    "CZ": CZ,
    "CS": CS,
    "CSDG": CSDG,
    "SWAP": SWAP,
    "CCX": CCX,
    "CCZ": CCZ,
    "CSWAP": CSWAP,
    "ITOFFOLI": ITOFFOLI,
}

#: operand index permutations that leave each base gate invariant
BASE_SYMMETRIES: dict[str, list[tuple[int, ...]]] = {
    "CX": [(0, 1)],
    "CZ": [(0, 1), (1, 0)],
    "CS": [(0, 1), (1, 0)],
    "CSDG": [(0, 1), (1, 0)],
    "SWAP": [(0, 1), (1, 0)],
    "CCX": [(0, 1, 2), (1, 0, 2)],
    "CCZ": [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)],
    "CSWAP": [(0, 1, 2), (0, 2, 1)],
    "ITOFFOLI": [(0, 1, 2), (1, 0, 2)],
}


# ---------------------------------------------------------------------------
# lifting qubit gates into device space
# ---------------------------------------------------------------------------

def _strides(dims: tuple[int, ...]) -> list[int]:
    strides = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    return strides


def _index_to_bits(index: int, dims: tuple[int, ...]) -> list[list[int]]:
    """Per-device slot bits for a product-space basis index (slot 0 first)."""
    bits = []
    rest = index
    for d in reversed(dims):
        level = rest % d
        rest //= d
        if d == QUQUART:
            q0, q1 = decode_level(level)
            bits.append([q0, q1])
        else:
            bits.append([level])
    bits.reverse()
    return bits


def _bits_to_index(bits: list[list[int]], dims: tuple[int, ...]) -> int:
    index = 0
    for dev_bits, d, stride in zip(bits, dims, _strides(dims)):
        level = encode_level(*dev_bits) if d == QUQUART else dev_bits[0]
        index += level * stride
    return index


def lift(
    u: np.ndarray,
    radices: tuple[int, ...],
    assignment: tuple[tuple[int, int], ...],
) -> np.ndarray:
    """Embed a k-qubit unitary into the product space of the given devices.

    ``assignment[i] = (device position, slot)`` places logical operand i;
    operand 0 is the most significant bit of the qubit-level matrix. Slots
    left unassigned on radix-4 devices are acted on as identity, which makes
    the result a permutation-similar embedding of ``u (x) 1``.
    """
    k = round(math.log2(u.shape[0]))
    if u.shape != (2**k, 2**k):
        raise ValueError(f"matrix shape {u.shape} is not a power-of-two square")
    if len(assignment) != k:
        raise ValueError(f"{k} operands but {len(assignment)} slot assignments")
    if len(set(assignment)) != k:
        raise ValueError(f"duplicate slot in assignment {assignment}")
    for pos, slot in assignment:
        if not 0 <= pos < len(radices):
            raise ValueError(f"device position {pos} out of range")
        if slot >= radices[pos] // 2:
            raise ValueError(f"slot {slot} invalid for radix {radices[pos]}")

    dim = math.prod(radices)
    out = np.zeros((dim, dim), dtype=complex)
    for idx_in in range(dim):
        bits = _index_to_bits(idx_in, radices)
        col = 0
        for pos, slot in assignment:
            col = (col << 1) | bits[pos][slot]
        for row in range(2**k):
            amp = u[row, col]
            if amp == 0:
                continue
            new_bits = [list(b) for b in bits]
            for i, (pos, slot) in enumerate(assignment):
                new_bits[pos][slot] = (row >> (k - 1 - i)) & 1
            out[_bits_to_index(new_bits, radices), idx_in] += amp
    return out


def enc_unitary() -> np.ndarray:
    """Encode permutation on (donor, receiver): |a>|b> -> |0>|2a+b>.

    Completed to a full involution on the 16-dimensional space by swapping
    the basis pairs (|1>|0>, |0>|2>) and (|1>|1>, |0>|3>) and fixing the
    rest; behaviour outside the computational subspace never matters in a
    valid compilation.
    """
    u = np.eye(16, dtype=complex)
    for a_idx, b_idx in ((4, 2), (5, 3)):  # 4*a + b indexing, donor first
        u[a_idx, a_idx] = u[b_idx, b_idx] = 0
        u[a_idx, b_idx] = u[b_idx, a_idx] = 1
    return u


# ---------------------------------------------------------------------------
# the inventory
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateSpec:
    """A named physical gate: operand devices, timing, fidelity and unitary."""

    name: str
    base: str
    operand_radices: tuple[int, ...]
    duration_ns: float
    fidelity: float
    slots: tuple[tuple[int, int], ...]  # per logical operand: (device pos, slot)
    parameterized: bool = False
    _unitary: np.ndarray | None = field(default=None, repr=False, compare=False)

    def unitary(self, params: tuple[float, ...] = ()) -> np.ndarray:
        if self.parameterized:
            if len(params) != 3:
                raise ValueError(f"{self.name} needs u3 angles, got {params}")
            u = u3_matrix(*params)
            if self.base == "U2":  # same rotation on both encoded qubits
                return lift(np.kron(u, u), self.operand_radices, self.slots)
            return lift(u, self.operand_radices, self.slots)
        assert self._unitary is not None
        return self._unitary


def _parse_script(script: str) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    """Radices and per-operand (device, slot) pairs for a superscript.

    Two-token scripts place each token on its own device (CX^{01} spans two
    ququarts); in longer comma-free scripts the digit tokens share a single
    ququart (CCX^{01q}); a comma always separates two ququarts.
    """
    radices: list[int] = []
    slots: list[tuple[int, int]] = []
    groups = script.split(",")
    tokens_per_device = len(groups) == 1 and sum(len(g) for g in groups) == 2
    for group in groups:
        quart_pos = None
        for ch in group:
            if ch == "q":
                radices.append(QUBIT)
                slots.append((len(radices) - 1, 0))
            else:
                if quart_pos is None or tokens_per_device:
                    radices.append(QUQUART)
                    quart_pos = len(radices) - 1
                slots.append((quart_pos, int(ch)))
    return tuple(radices), tuple(slots)


# (name, base, duration) for every superscripted multi-device gate
_SCRIPTED = [
    ("CX^{0q}", "CX", 560), ("CX^{1q}", "CX", 632),
    ("CX^{q0}", "CX", 880), ("CX^{q1}", "CX", 812),
    ("CZ^{q0}", "CZ", 384), ("CZ^{q1}", "CZ", 404),
    ("SWAP^{q0}", "SWAP", 680), ("SWAP^{q1}", "SWAP", 792),
    ("CX^{00}", "CX", 544), ("CX^{01}", "CX", 544),
    ("CX^{10}", "CX", 700), ("CX^{11}", "CX", 700),
    ("CZ^{00}", "CZ", 392), ("CZ^{01}", "CZ", 488), ("CZ^{11}", "CZ", 776),
    ("SWAP^{00}", "SWAP", 916), ("SWAP^{01}", "SWAP", 892), ("SWAP^{11}", "SWAP", 964),
    ("CCX^{q01}", "CCX", 619), ("CCX^{1q0}", "CCX", 697), ("CCX^{01q}", "CCX", 412),
    ("CCZ^{01q}", "CCZ", 264),
    ("CSWAP^{01q}", "CSWAP", 684), ("CSWAP^{10q}", "CSWAP", 762),
    ("CSWAP^{q01}", "CSWAP", 444),
    ("CCX^{01,0}", "CCX", 536), ("CCX^{01,1}", "CCX", 552),
    ("CCX^{0,01}", "CCX", 785), ("CCX^{0,10}", "CCX", 785),
    ("CCX^{1,10}", "CCX", 785), ("CCX^{1,01}", "CCX", 680),
    ("CCZ^{01,0}", "CCZ", 232), ("CCZ^{01,1}", "CCZ", 310),
    ("CSWAP^{01,0}", "CSWAP", 680), ("CSWAP^{01,1}", "CSWAP", 744),
    ("CSWAP^{10,0}", "CSWAP", 758), ("CSWAP^{10,1}", "CSWAP", 822),
    ("CSWAP^{0,01}", "CSWAP", 510), ("CSWAP^{1,01}", "CSWAP", 432),
]


def _build_inventory() -> dict[str, GateSpec]:
    inv: dict[str, GateSpec] = {}

    def add(name, base, radices, duration, slots, unitary=None, parameterized=False):
        fidelity = (
            SINGLE_DEVICE_FIDELITY if len(radices) == 1 else MULTI_DEVICE_FIDELITY
        )
        inv[name] = GateSpec(
            name, base, tuple(radices), float(duration), fidelity,
            tuple(slots), parameterized, unitary,
        )

    # single-device gates
    add("U", "U", (QUBIT,), 35, ((0, 0),), parameterized=True)
    add("U^0", "U", (QUQUART,), 87, ((0, 0),), parameterized=True)
    add("U^1", "U", (QUQUART,), 66, ((0, 1),), parameterized=True)
    add("U^{0,1}", "U2", (QUQUART,), 86, ((0, 0), (0, 1)), parameterized=True)
    add("CX^0", "CX", (QUQUART,), 83, ((0, 1), (0, 0)),
        lift(CX, (QUQUART,), ((0, 1), (0, 0))))
    add("CX^1", "CX", (QUQUART,), 84, ((0, 0), (0, 1)),
        lift(CX, (QUQUART,), ((0, 0), (0, 1))))
    add("SWAP^in", "SWAP", (QUQUART,), 78, ((0, 0), (0, 1)),
        lift(SWAP, (QUQUART,), ((0, 0), (0, 1))))

    # bare-qubit gates
    for name, base, dur in [
        ("CX_2", "CX", 251), ("CZ_2", "CZ", 236),
        ("CS†_2", "CSDG", 126), ("SWAP_2", "SWAP", 504),
    ]:
        slots = ((0, 0), (1, 0))
        add(name, base, (QUBIT, QUBIT), dur, slots,
            lift(BASE_MATRICES[base], (QUBIT, QUBIT), slots))
    add("iToffoli_3", "ITOFFOLI", (QUBIT,) * 3, 912, ((0, 0), (1, 0), (2, 0)),
        ITOFFOLI.copy())

    # superscripted mixed-radix and full-ququart gates
    for name, base, dur in _SCRIPTED:
        script = name[name.index("{") + 1 : -1]
        radices, slots = _parse_script(script)
        add(name, base, radices, dur, slots,
            lift(BASE_MATRICES[base], radices, slots))

    # the encode permutation and its inverse (an involution, so equal matrices)
    enc = enc_unitary()
    add("ENC", "ENC", (QUQUART, QUQUART), 608, ((0, 0), (1, 0)), enc)
    add("ENC†", "ENC†", (QUQUART, QUQUART), 608, ((0, 0), (1, 0)),
        enc.conj().T)
    return inv


INVENTORY: dict[str, GateSpec] = _build_inventory()


def gate_spec(name: str) -> GateSpec:
    try:
        return INVENTORY[name]
    except KeyError:
        raise UnknownGateError(f"unknown gate {name!r}") from None


def duration_of(name: str) -> float:
    return gate_spec(name).duration_ns


def fidelity_of(name: str) -> float:
    return gate_spec(name).fidelity


def unitary_of(name: str, params: tuple[float, ...] = ()) -> np.ndarray:
    return gate_spec(name).unitary(params)


def gate_name_for(base: str, placement: list[tuple[int, int | str]]) -> tuple[str, tuple[int, ...]]:
    """Resolve an operand placement to an inventory name.

    ``placement[i] = (device, slot)`` with slot ``'q'`` for a bare qubit.
    Returns the canonical name plus the operand permutation mapping the
    caller's operand order to the name's token order (symmetric operands may
    need reordering, e.g. CZ or the CSWAP target pair).
    """
    for perm in BASE_SYMMETRIES.get(base, [tuple(range(len(placement)))]):
        permuted = [placement[p] for p in perm]
        tokens = ["q" if slot == "q" else str(slot) for _, slot in permuted]
        quart_devs = sorted({dev for dev, slot in permuted if slot != "q"})
        if len(permuted) == 2:
            if permuted[0][0] == permuted[1][0]:
                continue  # internal gates carry single-token names
            script = "".join(tokens)
        elif len(quart_devs) <= 1:
            script = "".join(tokens)
        else:
            # two ququarts: each device's tokens must sit contiguously
            groups: list[str] = []
            seen: list[int] = []
            ok = True
            for (dev, _), tok in zip(permuted, tokens):
                if seen and seen[-1] == dev:
                    groups[-1] += tok
                elif dev in seen:
                    ok = False
                    break
                else:
                    groups.append(tok)
                    seen.append(dev)
            if not ok:
                continue
            script = ",".join(groups)
        name = f"{base}^{{{script}}}"
        if name in INVENTORY:
            return name, perm
    raise UnknownGateError(f"no inventory gate for {base} placed at {placement}")


def export_gate_table() -> str:
    """Gate table as JSON for documentation and the plotting component."""
    rows = [
        {
            "name": s.name,
            "radices": list(s.operand_radices),
            "duration_ns": s.duration_ns,
            "fidelity": s.fidelity,
        }
        for s in INVENTORY.values()
    ]
    return json.dumps(rows, indent=2, ensure_ascii=False)
