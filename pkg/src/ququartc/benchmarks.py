"""Generators for the five benchmark circuit families.

Every generator emits a plain qubit circuit over {1q gates, CX, CZ, CCX,
CCZ, CSWAP} and is a pure function of its parameters and seed.
"""

from __future__ import annotations

import math

import numpy as np

from .circuits import LogicalCircuit, LogicalGate


def _g(kind: str, *qubits: int, params: tuple[float, ...] = ()) -> LogicalGate:
    return LogicalGate(kind, tuple(qubits), params)


def gen_cnu(n_controls: int) -> LogicalCircuit:
    """Generalized Toffoli: flip the target iff every control is one.

    Built as the usual compute/uncompute V-chain of Toffolis over
    ``n_controls - 2`` ancillas, so the circuit is exclusively CCX based and
    uses ``2*n_controls - 1`` qubits. Layout: controls, then ancillas, then
    the target last.
    """
    if n_controls < 2:
        raise ValueError("need at least two controls")
    k = n_controls
    controls = list(range(k))
    ancillas = list(range(k, 2 * k - 2))
    target = 2 * k - 2
    if k == 2:
        return LogicalCircuit(3, ( _g("ccx", 0, 1, 2),))
    compute = [_g("ccx", controls[0], controls[1], ancillas[0])]
    for i in range(k - 3):
        compute.append(_g("ccx", controls[i + 2], ancillas[i], ancillas[i + 1]))
    apply = _g("ccx", controls[-1], ancillas[-1], target)
    return LogicalCircuit(
        2 * k - 1, tuple(compute) + (apply,) + tuple(reversed(compute))
    )


def gen_cuccaro(n_bits: int) -> LogicalCircuit:
    """Ripple-carry adder on 2n+2 qubits; adds register a into register b.

    Qubit layout: carry-in ancilla 0, then a[0..n-1], then b[0..n-1], then
    the carry-out qubit last. MAJ/UMA construction, nearly fully serial.
    """
    if n_bits < 1:
        raise ValueError("need at least one bit")
    n = n_bits
    a = [1 + i for i in range(n)]
    b = [1 + n + i for i in range(n)]
    carry_in, carry_out = 0, 2 * n + 1

    def maj(c, y, x):
        return [_g("cx", x, y), _g("cx", x, c), _g("ccx", c, y, x)]

    def uma(c, y, x):
        return [_g("ccx", c, y, x), _g("cx", x, c), _g("cx", c, y)]

    seq: list[LogicalGate] = []
    carries = [carry_in] + a[:-1]
    for i in range(n):
        seq += maj(carries[i], b[i], a[i])
    seq.append(_g("cx", a[-1], carry_out))
    for i in reversed(range(n)):
        seq += uma(carries[i], b[i], a[i])
    return LogicalCircuit(2 * n + 2, tuple(seq))


def gen_qram(n_address_bits: int) -> LogicalCircuit:
    """Addressed bus<->cell exchange through a CSWAP routing tree.

    The gather network brings the addressed leaf to leaf 0 (one CSWAP per
    merge, addressed by the matching address bit), the bus swaps with it,
    and the network unwinds. Qubit layout: address bits, bus, then the
    2^m leaf cells.
    """
    m = n_address_bits
    if m < 1:
        raise ValueError("need at least one address bit")
    addr = list(range(m))
    bus = m
    leaf = [m + 1 + i for i in range(2**m)]

    gather: list[LogicalGate] = []
    for level in range(m):  # fine-grained merges first: step 1, then 2, ...
        step = 2**level
        control = addr[m - 1 - level]  # address register reads big-endian
        for lo in range(0, 2**m, 2 * step):
            gather.append(_g("cswap", control, leaf[lo], leaf[lo + step]))
    seq = gather + [_g("swap", bus, leaf[0])] + list(reversed(gather))
    return LogicalCircuit(m + 1 + 2**m, tuple(seq))


_PAULI_KINDS = ("i", "x", "y", "z")


def gen_select(m_index: int, n_targets: int, seed: int) -> LogicalCircuit:
    """Apply one of two seed-drawn Pauli strings picked by the index register.

    For each selected index value the matching controls are folded onto an
    AND chain of Toffolis (m - 1 ancillas), the string's single-qubit Paulis
    are applied controlled on the chain's top, and the chain is uncomputed.
    Qubit layout: index bits, targets, then ancillas.
    """
    if m_index < 1 or n_targets < 1:
        raise ValueError("need at least one index bit and one target")
    rng = np.random.default_rng(seed)
    values = rng.choice(2**m_index, size=min(2, 2**m_index), replace=False)
    strings = [
        [_PAULI_KINDS[k] for k in rng.integers(0, 4, size=n_targets)]
        for _ in values
    ]

    m, n = m_index, n_targets
    index = list(range(m))
    targets = [m + i for i in range(n)]
    ancillas = [m + n + i for i in range(max(m - 1, 0))]

    def controlled_pauli(control: int, target: int, pauli: str) -> list[LogicalGate]:
        if pauli == "x":
            return [_g("cx", control, target)]
        if pauli == "z":
            return [_g("cz", control, target)]
        if pauli == "y":  # Y = S X S^dagger
            return [
                _g("sdg", target), _g("cx", control, target),
                _g("rz", target, params=(math.pi / 2,)),
            ]
        return []

    seq: list[LogicalGate] = []
    for value, string in zip(values, strings):
        flips = [index[i] for i in range(m) if not (value >> (m - 1 - i)) & 1]
        seq += [_g("x", q) for q in flips]
        if m == 1:
            top = index[0]
            chain: list[LogicalGate] = []
        else:
            chain = [_g("ccx", index[0], index[1], ancillas[0])]
            for i in range(m - 2):
                chain.append(_g("ccx", index[i + 2], ancillas[i], ancillas[i + 1]))
            top = ancillas[m - 2]
        seq += chain
        for t, pauli in zip(targets, string):
            seq += controlled_pauli(top, t, pauli)
        seq += list(reversed(chain))
        seq += [_g("x", q) for q in flips]
    return LogicalCircuit(m + n + len(ancillas), tuple(seq))


def gen_synthetic(
    n_qubits: int, n_gates: int, cx_fraction: float, seed: int
) -> LogicalCircuit:
    """Random mix of CX and CCX gates to study two- vs three-qubit balance."""
    if n_qubits < 3:
        raise ValueError("need at least three qubits")
    if not 0.0 <= cx_fraction <= 1.0:
        raise ValueError("cx_fraction must be in [0, 1]")
    rng = np.random.default_rng(seed)
    seq = []
    for _ in range(n_gates):
        if rng.random() < cx_fraction:
            q = rng.choice(n_qubits, size=2, replace=False)
            seq.append(_g("cx", int(q[0]), int(q[1])))
        else:
            q = rng.choice(n_qubits, size=3, replace=False)
            seq.append(_g("ccx", int(q[0]), int(q[1]), int(q[2])))
    return LogicalCircuit(n_qubits, tuple(seq))


FAMILIES = {
    "cnu": gen_cnu,
    "cuccaro": gen_cuccaro,
    "qram": gen_qram,
    "select": gen_select,
    "synthetic": gen_synthetic,
}
