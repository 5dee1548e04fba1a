"""Benchmark generators checked against classical arithmetic oracles."""

from itertools import product

import numpy as np
import pytest

from ququartc import benchmarks
from ququartc.circuits import LogicalCircuit

from .oracle import circuit_unitary, run_logical


def _basis_out(circuit: LogicalCircuit, bits: list[int]) -> list[int]:
    n = circuit.n_qubits
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    vec = np.zeros(2**n, dtype=complex)
    vec[idx] = 1.0
    out = run_logical(circuit, vec)
    j = int(np.argmax(np.abs(out)))
    assert abs(abs(out[j]) - 1.0) < 1e-9, "output is not a basis state"
    return [(j >> (n - 1 - q)) & 1 for q in range(n)]


class TestCnu:
    def test_widths_and_counts(self):
        c2 = benchmarks.gen_cnu(2)
        assert c2.n_qubits == 3 and c2.count("ccx") == 1
        c3 = benchmarks.gen_cnu(3)
        assert c3.n_qubits == 5 and c3.count("ccx") == 3
        assert benchmarks.gen_cnu(4).n_qubits == 7

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_flips_target_iff_all_controls_one(self, k):
        circuit = benchmarks.gen_cnu(k)
        n = circuit.n_qubits
        for controls in product((0, 1), repeat=k):
            for target in (0, 1):
                bits = list(controls) + [0] * (k - 2) + [target]
                out = _basis_out(circuit, bits)
                expected = bits.copy()
                if all(controls):
                    expected[n - 1] ^= 1
                assert out == expected

    def test_minimum_size(self):
        with pytest.raises(ValueError):
            benchmarks.gen_cnu(1)


class TestCuccaro:
    def test_width_formula(self):
        assert benchmarks.gen_cuccaro(4).n_qubits == 10

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_addition_on_all_inputs(self, n):
        circuit = benchmarks.gen_cuccaro(n)
        total = circuit.n_qubits
        for carry_in, a, b in product((0, 1), range(2**n), range(2**n)):
            bits = [carry_in] + [0] * (2 * n) + [0]
            for i in range(n):
                bits[1 + i] = (a >> i) & 1
                bits[1 + n + i] = (b >> i) & 1
            out = _basis_out(circuit, bits)
            s = a + b + carry_in
            got_a = sum(out[1 + i] << i for i in range(n))
            got_b = sum(out[1 + n + i] << i for i in range(n))
            assert out[0] == carry_in and got_a == a
            assert got_b == s % 2**n
            assert out[total - 1] == s >> n

    def test_specific_example(self):
        # a=1, b=2 with two bits: b register reads 3 afterwards
        circuit = benchmarks.gen_cuccaro(2)
        bits = [0, 1, 0, 0, 1, 0]  # a = 01 (LSB first), b = 01 -> a=1, b=2
        out = _basis_out(circuit, bits)
        got_b = out[3] + 2 * out[4]
        assert got_b == 3 and out[1] + 2 * out[2] == 1

    def test_adding_zero_is_identity(self):
        circuit = benchmarks.gen_cuccaro(2)
        for b in range(4):
            bits = [0, 0, 0, (b >> 0) & 1, (b >> 1) & 1, 0]
            assert _basis_out(circuit, bits) == bits


class TestQram:
    def test_m1_gate_counts(self):
        circuit = benchmarks.gen_qram(1)
        assert circuit.count("cswap") == 2
        assert circuit.count("swap") == 1

    @pytest.mark.parametrize("m", [1, 2])
    def test_addressed_exchange(self, m):
        circuit = benchmarks.gen_qram(m)
        n = circuit.n_qubits
        for idx in range(2**n):
            bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
            address = 0
            for i in range(m):
                address = (address << 1) | bits[i]
            expected = bits.copy()
            expected[m], expected[m + 1 + address] = (
                bits[m + 1 + address], bits[m],
            )
            assert _basis_out(circuit, bits) == expected

    def test_zero_background_identity(self):
        circuit = benchmarks.gen_qram(2)
        bits = [1, 0] + [0] * 5  # only the address set
        assert _basis_out(circuit, bits) == bits


PAULIS = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.diag([1.0, -1.0]).astype(complex),
}


class TestSelect:
    def test_deterministic_in_seed(self):
        a = benchmarks.gen_select(2, 2, seed=3)
        b = benchmarks.gen_select(2, 2, seed=3)
        assert a == b
        assert a != benchmarks.gen_select(2, 2, seed=4)

    def test_m1_n1_two_blocks(self):
        circuit = benchmarks.gen_select(1, 1, seed=0)
        assert circuit.n_qubits == 2  # no ancilla for a single index bit
        # both index values selected, conjugating X frames appear once
        assert circuit.count("x") in (0, 2)

    @pytest.mark.parametrize("seed", [0, 5, 9])
    def test_blocks_are_pauli_strings(self, seed):
        m = n = 2
        circuit = benchmarks.gen_select(m, n, seed)
        u = circuit_unitary(circuit)
        non_identity = 0
        for value in range(2**m):
            block = np.zeros((2**n, 2**n), dtype=complex)
            for t_out in range(2**n):
                for t_in in range(2**n):
                    col = (value << (n + m - 1)) | (t_in << (m - 1))
                    row = (value << (n + m - 1)) | (t_out << (m - 1))
                    block[t_out, t_in] = u[row, col]
            match = None
            for string in product("ixyz", repeat=n):
                ref = np.kron(PAULIS[string[0]], PAULIS[string[1]])
                if np.allclose(block, ref, atol=1e-9):
                    match = string
                    break
            assert match is not None, f"index {value} block is not a Pauli string"
            if match != ("i",) * n:
                non_identity += 1
        assert non_identity <= 2

    def test_unselected_index_untouched(self):
        circuit = benchmarks.gen_select(2, 1, seed=1)
        u = circuit_unitary(circuit)
        identity_blocks = 0
        for value in range(4):
            col = value << 2
            if abs(u[col, col] - 1) < 1e-9 and abs(u[col + 2, col + 2] - 1) < 1e-9:
                identity_blocks += 1
        assert identity_blocks >= 2  # at most two values are selected


class TestSynthetic:
    def test_pure_fractions(self):
        assert benchmarks.gen_synthetic(4, 30, 1.0, 0).count("ccx") == 0
        assert benchmarks.gen_synthetic(4, 30, 0.0, 0).count("cx") == 0

    def test_binomial_mix(self):
        circuit = benchmarks.gen_synthetic(5, 1000, 0.6, seed=2)
        n_cx = circuit.count("cx")
        sigma = (1000 * 0.6 * 0.4) ** 0.5
        assert abs(n_cx - 600) <= 3 * sigma
        assert n_cx + circuit.count("ccx") == 1000

    def test_determinism_and_validation(self):
        a = benchmarks.gen_synthetic(5, 20, 0.5, 7)
        assert a.to_text() == benchmarks.gen_synthetic(5, 20, 0.5, 7).to_text()
        with pytest.raises(ValueError):
            benchmarks.gen_synthetic(2, 5, 0.5, 0)
        with pytest.raises(ValueError):
            benchmarks.gen_synthetic(4, 5, 1.5, 0)


def test_all_generators_validate():
    circuits = [
        benchmarks.gen_cnu(3),
        benchmarks.gen_cuccaro(2),
        benchmarks.gen_qram(2),
        benchmarks.gen_select(2, 2, 0),
        benchmarks.gen_synthetic(4, 10, 0.5, 0),
    ]
    for c in circuits:
        assert isinstance(c, LogicalCircuit)
        assert all(max(g.qubits) < c.n_qubits for g in c.gates)
