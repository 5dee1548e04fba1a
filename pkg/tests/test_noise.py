"""Noise model: generalized Paulis, depolarizing draws, damping Kraus sets."""

import math

import numpy as np
import pytest

from ququartc import gates, noise
from ququartc.noise import (
    NoiseConfig,
    clock_matrix,
    damping_kraus,
    error_support,
    generalized_paulis,
    sample_gate_error,
    sample_kraus,
    shift_matrix,
)


class TestGeneralizedPaulis:
    def test_qubit_set(self):
        ps = generalized_paulis(2)
        assert len(ps) == 4
        assert np.allclose(ps[0], np.eye(2))
        assert np.allclose(ps[1], np.diag([1, -1]))       # Z
        assert np.allclose(ps[2], [[0, 1], [1, 0]])       # X
        assert np.allclose(ps[3], [[0, -1], [1, 0]])      # XZ = -iY

    def test_ququart_trace_orthogonality(self):
        ps = generalized_paulis(4)
        assert len(ps) == 16
        for i, p in enumerate(ps):
            for j, q in enumerate(ps):
                tr = np.trace(p.conj().T @ q)
                assert abs(tr - (4.0 if i == j else 0.0)) < 1e-12

    def test_shift_wraps(self):
        x4 = shift_matrix(4)
        vec = np.zeros(4)
        vec[3] = 1.0
        assert np.argmax(np.abs(x4 @ vec)) == 0

    def test_spans_matrix_space(self):
        for d in (2, 4):
            flat = np.array([p.reshape(-1) for p in generalized_paulis(d)])
            assert np.linalg.matrix_rank(flat) == d * d

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError):
            generalized_paulis(3)


class TestErrorSupport:
    @pytest.mark.parametrize("name,dims", [
        ("CX^{0q}", (4, 2)),
        ("CX^{q1}", (2, 4)),
        ("CX^0", (4,)),
        ("U^1", (4,)),
        ("CX_2", (2, 2)),
        ("U", (2,)),
        ("iToffoli_3", (2, 2, 2)),
        ("CX^{00}", (4, 4)),
        ("CCX^{01q}", (4, 2)),
        ("ENC", (2, 4)),
        ("ENC†", (2, 4)),
    ])
    def test_supports(self, name, dims):
        assert error_support(name) == dims


class TestDepolarizingDraw:
    def test_zero_error_never_fires(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            assert sample_gate_error(rng, 0.0, (2, 2)) is None

    def test_channel_counts(self):
        rng = np.random.default_rng(1)
        seen = set()
        for _ in range(20000):
            draw = sample_gate_error(rng, 0.9, (2, 2))
            if draw is not None:
                seen.add(tuple(draw))
        assert len(seen) == 15
        seen44 = set()
        for _ in range(200000):
            draw = sample_gate_error(rng, 0.95, (4, 4))
            if draw is not None:
                seen44.add(tuple(draw))
        assert len(seen44) == 255

    def test_multinomial_frequencies(self):
        rng = np.random.default_rng(2)
        eps = 0.3
        n = 100_000
        counts: dict = {}
        for _ in range(n):
            draw = sample_gate_error(rng, eps, (2, 2))
            key = None if draw is None else tuple(draw)
            counts[key] = counts.get(key, 0) + 1
        p_id = 1 - eps
        sigma = math.sqrt(n * p_id * (1 - p_id))
        assert abs(counts[None] - n * p_id) <= 3 * sigma
        p_each = eps / 15
        sigma = math.sqrt(n * p_each * (1 - p_each))
        for key, c in counts.items():
            if key is not None:
                assert abs(c - n * p_each) <= 4 * sigma, key

    def test_invalid_eps(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            sample_gate_error(rng, 1.0, (2,))


class TestDamping:
    def test_zero_idle_is_identity_channel(self):
        ks = damping_kraus(4, 0.0, 1000.0)
        ops = ks.operators()
        assert np.allclose(ops[0], np.eye(4))
        for k in ops[1:]:
            assert np.allclose(k, 0)

    def test_long_idle_limit(self):
        ks = damping_kraus(2, 1e9, 10.0)
        assert ks.lambdas[0] == pytest.approx(1.0)

    def test_reference_value(self):
        ks = damping_kraus(2, 163450.0, 163450.0)
        assert ks.lambdas[0] == pytest.approx(1 - math.exp(-1), abs=1e-6)
        assert ks.lambdas[0] == pytest.approx(0.632121, abs=1e-6)

    @pytest.mark.parametrize("d", [2, 4])
    def test_cptp_completeness(self, d):
        rng = np.random.default_rng(3)
        for _ in range(100):
            dt = float(rng.uniform(0, 5e5))
            ops = damping_kraus(d, dt, 163450.0).operators()
            total = sum(k.conj().T @ k for k in ops)
            assert np.abs(total - np.eye(d)).max() < 1e-12

    def test_lambda_monotone(self):
        prev = 0.0
        for m, lam in enumerate(damping_kraus(4, 1000.0, 163450.0).lambdas, 1):
            assert lam > prev
            prev = lam
        a = damping_kraus(4, 1000.0, 163450.0).lambdas
        b = damping_kraus(4, 2000.0, 163450.0).lambdas
        assert all(x < y for x, y in zip(a, b))

    def test_high_level_rate_multiplier(self):
        base = damping_kraus(4, 1000.0, 163450.0)
        fast = damping_kraus(4, 1000.0, 163450.0, high_level_rate=2.0)
        assert fast.lambdas[0] == base.lambdas[0]  # level 1 untouched
        assert fast.lambdas[1] > base.lambdas[1]
        assert fast.lambdas[2] > base.lambdas[2]


class TestKrausSampling:
    def test_ground_state_never_decays(self):
        rng = np.random.default_rng(4)
        ks = damping_kraus(2, 1e5, 163450.0)
        pops = np.array([1.0, 0.0])
        assert all(sample_kraus(rng, ks, pops) == 0 for _ in range(200))

    def test_excited_state_jump_rate(self):
        rng = np.random.default_rng(5)
        ks = damping_kraus(2, 80000.0, 163450.0)
        pops = np.array([0.0, 1.0])
        n = 20000
        jumps = sum(sample_kraus(rng, ks, pops) == 1 for _ in range(n))
        lam = ks.lambdas[0]
        sigma = math.sqrt(n * lam * (1 - lam))
        assert abs(jumps - n * lam) <= 3 * sigma

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            pops = rng.dirichlet(np.ones(4))
            ks = damping_kraus(4, float(rng.uniform(0, 3e5)), 163450.0)
            total = 1.0 - sum(
                lam * pops[m] for m, lam in enumerate(ks.lambdas, 1)
            )
            total += sum(lam * pops[m] for m, lam in enumerate(ks.lambdas, 1))
            assert total == pytest.approx(1.0, abs=1e-12)


class TestNoiseConfig:
    def test_defaults(self):
        cfg = NoiseConfig()
        assert cfg.t1_ns == 163450.0
        assert cfg.gate_fidelity("CX_2") == 0.99
        assert cfg.gate_fidelity("U") == 0.999

    def test_override(self):
        cfg = NoiseConfig(fidelity_overrides={"CX_2": 0.95})
        assert cfg.gate_fidelity("CX_2") == 0.95

    def test_ququart_multiplier_targets_radix4_only(self):
        cfg = NoiseConfig(ququart_error_multiplier=3.0)
        assert cfg.gate_fidelity("CX_2") == 0.99          # bare gate untouched
        assert cfg.gate_fidelity("iToffoli_3") == 0.99
        assert cfg.gate_fidelity("CCZ^{01q}") == pytest.approx(0.97)
        assert cfg.gate_fidelity("CX^0") == pytest.approx(0.997)

    def test_zero_noise(self):
        cfg = NoiseConfig(zero_noise=True)
        assert cfg.gate_fidelity("CX_2") == 1.0
        assert cfg.damping(2, 1000.0) is None

    def test_json_round_trip(self):
        cfg = NoiseConfig(
            t1_ns=1000.0, fidelity_overrides={"CX_2": 0.9},
            ququart_error_multiplier=2.0, coherence_multiplier=1.5,
        )
        again = NoiseConfig.from_json(cfg.to_json())
        assert again == cfg
