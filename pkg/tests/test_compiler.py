"""Compiler pipeline: weights, placement, routing, lowering, invariants."""

import math

import numpy as np
import pytest

from ququartc import benchmarks, gates, topology
from ququartc.circuits import LogicalCircuit, LogicalGate
from ququartc.compiler import (
    STRATEGIES,
    CapacityError,
    Mapping,
    Strategy,
    compile_circuit,
    initial_map,
    interaction_weights,
    route,
    to_basis,
)
from ququartc.noise import NoiseConfig
from ququartc.simulator import encode_state, logical_statevector, run_trajectory

from .oracle import encode as oracle_encode
from .oracle import random_state, run_logical


def _equivalence_fidelity(circuit, result, n_inputs=20, seed=13):
    """Worst-case overlap between compiled output and the logical reference."""
    zero = NoiseConfig(zero_noise=True)
    rng = np.random.default_rng(seed)
    worst = 1.0
    for _ in range(n_inputs):
        vec = random_state(circuit.n_qubits, rng)
        reference = oracle_encode(
            run_logical(circuit, vec), result.final_map,
            result.device_dims, circuit.n_qubits,
        )
        state = encode_state(vec, result.initial_map, result.device_dims,
                             circuit.n_qubits)
        final = run_trajectory(result, state, zero, rng)
        worst = min(worst, abs(np.vdot(reference, final.vec)) ** 2)
    return worst


class TestWeights:
    def test_repeated_cx(self):
        circuit = LogicalCircuit(2, (
            LogicalGate("cx", (0, 1)), LogicalGate("cx", (0, 1)),
        ))
        w = interaction_weights(circuit)
        assert w[0, 1] == pytest.approx(1.0 + 0.5)

    def test_empty_circuit(self):
        assert interaction_weights(LogicalCircuit(3, ())).sum() == 0

    def test_ccx_counts_all_pairs(self):
        w = interaction_weights(LogicalCircuit(3, (LogicalGate("ccx", (0, 1, 2)),)))
        assert w[0, 1] == w[0, 2] == w[1, 2] == 1.0

    def test_moments_advance_with_dependencies(self):
        circuit = LogicalCircuit(3, (
            LogicalGate("cx", (0, 1)),   # moment 1
            LogicalGate("cx", (1, 2)),   # moment 2
        ))
        w = interaction_weights(circuit)
        assert w[1, 2] == pytest.approx(0.5)


class TestInitialMap:
    def test_single_gate_lands_adjacent(self):
        circuit = LogicalCircuit(2, (LogicalGate("cx", (0, 1)),))
        strategy = STRATEGIES["qubit-only-8cx"]
        graph = topology.expand(topology.mesh_for(4), 2)
        mapping = initial_map(circuit, graph, interaction_weights(circuit), strategy)
        d0 = mapping.node_of(0)[0]
        d1 = mapping.node_of(1)[0]
        assert (d0, d1) in graph.mesh.edges or (d1, d0) in graph.mesh.edges

    def test_seed_takes_center_slot0(self):
        circuit = LogicalCircuit(1, ())
        graph = topology.expand(topology.mesh_for(9), 2)
        mapping = initial_map(
            circuit, graph, interaction_weights(circuit),
            STRATEGIES["qubit-only-8cx"],
        )
        assert mapping.node_of(0) == (4, 0)  # centre of the 3x3 grid

    def test_weight_ties_break_to_lowest_id(self):
        circuit = LogicalCircuit(3, ())
        graph = topology.expand(topology.mesh_for(3), 2)
        mapping = initial_map(
            circuit, graph, interaction_weights(circuit),
            STRATEGIES["qubit-only-8cx"],
        )
        # all weights zero: seed is qubit 0 at the centre-most device
        assert mapping.node_of(0)[1] == 0

    def test_full_ququart_packs_pairs(self):
        circuit = benchmarks.gen_cnu(3)
        strategy = STRATEGIES["full-ququart-ccz"]
        graph = topology.expand(topology.mesh_for(3), 4)
        mapping = initial_map(circuit, graph, interaction_weights(circuit), strategy)
        assert sorted(mapping.occupancy) == [1, 2, 2]

    def test_capacity_error(self):
        circuit = LogicalCircuit(5, ())
        graph = topology.expand(topology.mesh_for(2), 2)
        with pytest.raises(CapacityError):
            initial_map(circuit, graph, interaction_weights(circuit),
                        STRATEGIES["qubit-only-8cx"])


class TestRouting:
    def test_adjacent_cx_inserts_no_swap(self):
        circuit = LogicalCircuit(2, (LogicalGate("cx", (0, 1)),))
        result = compile_circuit(circuit, "qubit-only-8cx")
        assert result.physical.swap_count() == 0

    def test_line_corner_to_corner_needs_one_swap(self):
        # hand-built 1x3 line with operands on the far ends
        mesh = topology.Mesh(1, 3, 3, ((0, 1), (1, 2)))
        graph = topology.expand(mesh, 2)
        circuit = LogicalCircuit(2, (LogicalGate("cx", (0, 1)),))
        mapping = Mapping(2, 3)
        mapping.place(0, (0, 0))
        mapping.place(1, (2, 0))
        physical, _ = route(circuit, mapping, graph,
                            STRATEGIES["qubit-only-8cx"])
        assert physical.swap_count() == 1
        assert physical.gate_histogram()["CX_2"] == 1

    def test_multi_device_instructions_span_mesh_edges(self):
        for name in ("qubit-only-itoffoli", "mixed-radix-ccz", "full-ququart-ccz"):
            result = compile_circuit(benchmarks.gen_cnu(3), name)
            edges = set(result.mesh.edges) | {
                (b, a) for a, b in result.mesh.edges
            }
            for ins in result.physical.instructions:
                if len(ins.devices) == 2:
                    assert tuple(ins.devices) in edges, (name, ins)
                elif len(ins.devices) == 3:  # iToffoli: target centred
                    c1, c2, t = ins.devices
                    assert (c1, t) in edges and (c2, t) in edges

    def test_mixed_radix_windows(self):
        # radix-4 gate names appear only between ENC / ENC-dagger pairs
        result = compile_circuit(benchmarks.gen_cuccaro(2), "mixed-radix-ccz")
        encoded = set()
        for ins in result.physical.instructions:
            if ins.gate == "ENC":
                encoded.add(ins.devices[1])
            elif ins.gate == "ENC†":
                encoded.discard(ins.devices[1])
            else:
                radices = gates.gate_spec(ins.gate).operand_radices
                for dev, radix in zip(ins.devices, radices):
                    if radix == 4:
                        assert dev in encoded, ins
        assert not encoded

    def test_qubit_only_never_uses_radix4(self):
        for name in ("qubit-only-8cx", "qubit-only-itoffoli"):
            result = compile_circuit(benchmarks.gen_cnu(3), name)
            for ins in result.physical.instructions:
                assert 4 not in gates.gate_spec(ins.gate).operand_radices

    def test_occupancy_bounded(self):
        result = compile_circuit(benchmarks.gen_qram(2), "full-ququart-cswap")
        assert all(d in (2, 4) for d in result.device_dims)


class TestLoweringCounts:
    def test_8cx_shende_count(self):
        result = compile_circuit(benchmarks.gen_cnu(2), "qubit-only-8cx")
        hist = result.physical.gate_histogram()
        assert hist["CX_2"] == 8
        assert hist.get("U", 0) <= 14
        two_qubit = sum(
            c for name, c in hist.items()
            if len(gates.gate_spec(name).operand_radices) == 2
        )
        assert two_qubit == 8

    def test_mixed_ccz_window(self):
        result = compile_circuit(benchmarks.gen_cnu(2), "mixed-radix-ccz")
        names = [i.gate for i in result.physical.instructions]
        assert names == ["U", "ENC", "CCZ^{01q}", "ENC†", "U"]

    def test_itoffoli_adds_swap_and_correction(self):
        result = compile_circuit(benchmarks.gen_cnu(2), "qubit-only-itoffoli")
        hist = result.physical.gate_histogram()
        assert hist["iToffoli_3"] == 1
        assert hist["CS†_2"] == 1
        assert hist["SWAP_2"] == 1

    def test_full_ququart_beats_qubit_only_on_gate_count(self):
        circuit = benchmarks.gen_cnu(4)
        full = compile_circuit(circuit, "full-ququart-ccz")
        qubit = compile_circuit(circuit, "qubit-only-8cx")

        def multi_device(result):
            return sum(
                1 for i in result.physical.instructions if len(i.devices) >= 2
            )

        assert multi_device(full) < multi_device(qubit)

    def test_full_ququart_device_budget(self):
        result = compile_circuit(benchmarks.gen_cuccaro(4), "full-ququart-ccz")
        assert result.physical.n_devices == 5


class TestStrategyValidation:
    def test_named_presets_resolve(self):
        for name, strategy in STRATEGIES.items():
            assert isinstance(strategy, Strategy), name

    def test_incompatible_pairs(self):
        with pytest.raises(ValueError):
            Strategy("qubit_only", "native_ccx")
        with pytest.raises(ValueError):
            Strategy("mixed_radix", "decompose_8cx")
        with pytest.raises(ValueError):
            Strategy("full_ququart", "itoffoli")
        with pytest.raises(ValueError):
            Strategy("full_ququart", "ccz_transform", "sideways")

    def test_capacity_check(self):
        with pytest.raises(CapacityError):
            compile_circuit(benchmarks.gen_cnu(3), "qubit-only-8cx", n_devices=3)


class TestToBasis:
    def test_itoffoli_rewrite_matches_matrix(self):
        circuit = LogicalCircuit(3, (LogicalGate("itoffoli", (0, 1, 2)),))
        rewritten = to_basis(circuit, STRATEGIES["qubit-only-8cx"])
        assert all(g.kind != "itoffoli" for g in rewritten.gates)
        from .oracle import circuit_unitary

        assert np.abs(
            circuit_unitary(rewritten) - circuit_unitary(circuit)
        ).max() < 1e-10

    def test_cswap_rewrite_only_when_not_native(self):
        circuit = LogicalCircuit(3, (LogicalGate("cswap", (0, 1, 2)),))
        plain = to_basis(circuit, STRATEGIES["mixed-radix-ccz"])
        assert [g.kind for g in plain.gates] == ["cx", "ccx", "cx"]
        native = to_basis(circuit, STRATEGIES["mixed-radix-cswap"])
        assert [g.kind for g in native.gates] == ["cswap"]


class TestDeterminismAndEquivalence:
    def test_byte_identical_recompiles(self):
        circuit = benchmarks.gen_select(2, 2, seed=1)
        a = compile_circuit(circuit, "mixed-radix-retarget")
        b = compile_circuit(circuit, "mixed-radix-retarget")
        assert a.physical.to_jsonl() == b.physical.to_jsonl()

    @pytest.mark.parametrize("strategy", sorted(STRATEGIES))
    def test_cnu3_statevector_equivalence(self, strategy):
        circuit = benchmarks.gen_cnu(3)
        result = compile_circuit(circuit, strategy)
        assert _equivalence_fidelity(circuit, result, n_inputs=10) > 1 - 1e-9

    def test_logical_swap_is_not_virtualised(self):
        # a lone logical swap must change the state, not just the mapping
        circuit = LogicalCircuit(2, (LogicalGate("swap", (0, 1)),))
        result = compile_circuit(circuit, "qubit-only-8cx")
        assert _equivalence_fidelity(circuit, result, n_inputs=5) > 1 - 1e-9
        assert result.physical.gate_histogram().get("SWAP_2") == 1
