"""Qudit error model: depolarizing draws, amplitude damping, error supports.

Depolarizing errors are generalized Paulis X^a Z^b sized to each operand's
dimension; a gate with total error probability eps keeps the identity with
probability 1 - eps and spreads eps uniformly over the remaining D^2 - 1
tensor products. Amplitude damping uses lambda_m = 1 - exp(-m dt / T1), so
level k decays with effective lifetime T1 / k.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import gates

#: base amplitude-damping lifetime in ns (known-good transmon figure)
DEFAULT_T1_NS = 163_450.0


def shift_matrix(d: int) -> np.ndarray:
    """X_d: the +1 mod d level shift."""
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j + 1) % d, j] = 1
    return x


def clock_matrix(d: int) -> np.ndarray:
    """Z_d = diag(w^0 ... w^{d-1}) with w = exp(2 pi i / d)."""
    w = np.exp(2j * math.pi / d)
    return np.diag([w**j for j in range(d)])


def generalized_paulis(d: int) -> list[np.ndarray]:
    """The d^2 operators X^a Z^b in lexicographic (a, b) order; index 0 = I."""
    if d not in (2, 4):
        raise ValueError(f"unsupported dimension {d}")
    x, z = shift_matrix(d), clock_matrix(d)
    return [
        np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
        for a in range(d)
        for b in range(d)
    ]


def error_support(gate_name: str) -> tuple[int, ...]:
    """Error dimensions per operand device for a gate's depolarizing draw.

    Encoded devices draw 4-dimensional errors, bare participants 2-dimensional
    ones; the encode gate counts its donor as the bare participant.
    """
    if gate_name in ("ENC", "ENC†"):
        return (2, 4)
    return gates.gate_spec(gate_name).operand_radices


def sample_gate_error(
    rng: np.random.Generator, eps: float, dims: tuple[int, ...]
) -> list[tuple[int, int]] | None:
    """Draw a generalized-Pauli product; None means no error.

    Returns per-operand (a, b) exponents for X^a Z^b. The identity outcome
    has probability 1 - eps and each of the D^2 - 1 non-identity products
    eps / (D^2 - 1).
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"error probability {eps} outside [0, 1)")
    if eps == 0.0 or rng.random() >= eps:
        return None
    n_channels = math.prod(d * d for d in dims)
    k = int(rng.integers(1, n_channels))
    out = []
    for d in reversed(dims):
        c = k % (d * d)
        k //= d * d
        out.append((c // d, c % d))
    out.reverse()
    return out


@dataclass(frozen=True)
class KrausSet:
    """Amplitude damping channel: K_0 plus one jump operator per level."""

    dim: int
    lambdas: tuple[float, ...]  # lambda_m for m = 1..d-1

    @property
    def k0_diagonal(self) -> np.ndarray:
        return np.sqrt(np.concatenate(([1.0], 1.0 - np.array(self.lambdas))))

    def operators(self) -> list[np.ndarray]:
        ops = [np.diag(self.k0_diagonal).astype(complex)]
        for m, lam in enumerate(self.lambdas, start=1):
            k = np.zeros((self.dim, self.dim), dtype=complex)
            k[0, m] = math.sqrt(lam)
            ops.append(k)
        return ops


def damping_kraus(
    d: int, dt_ns: float, t1_ns: float, high_level_rate: float = 1.0
) -> KrausSet:
    """Kraus set for an idle window of dt on a d-level device.

    lambda_m = 1 - exp(-m dt / T1); levels 2 and 3 additionally scale by
    ``high_level_rate`` (the coherence sensitivity knob).
    """
    if dt_ns < 0:
        raise ValueError("idle time must be non-negative")
    if not t1_ns > 0:
        raise ValueError("T1 must be positive")
    lambdas = []
    for m in range(1, d):
        rate = m * (high_level_rate if m >= 2 else 1.0)
        lambdas.append(1.0 - math.exp(-rate * dt_ns / t1_ns))
    return KrausSet(d, tuple(lambdas))


def sample_kraus(
    rng: np.random.Generator, kraus: KrausSet, populations: np.ndarray
) -> int:
    """Pick a Kraus index with probability <psi|K_m^dag K_m|psi>.

    ``populations[m]`` is the probability of level m in the device-reduced
    state; the caller applies the selected operator and renormalizes.
    """
    probs = [
        lam * populations[m] for m, lam in enumerate(kraus.lambdas, start=1)
    ]
    p0 = 1.0 - sum(probs)
    u = rng.random()
    acc = p0
    if u < acc:
        return 0
    for m, p in enumerate(probs, start=1):
        acc += p
        if u < acc:
            return m
    return kraus.dim - 1


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _is_ququart_class(gate_name: str) -> bool:
    return gates.QUQUART in gates.gate_spec(gate_name).operand_radices


@dataclass
class NoiseConfig:
    """Simulation noise knobs; the defaults reproduce the baseline model.

    ``ququart_error_multiplier`` scales the error deficit (1 - fidelity) of
    every gate that touches a four-level device; ``coherence_multiplier``
    scales the decay rate of levels 2 and 3 only. ``zero_noise`` disables
    everything (exact unitary evolution).
    """

    t1_ns: float = DEFAULT_T1_NS
    fidelity_overrides: dict[str, float] = field(default_factory=dict)
    ququart_error_multiplier: float = 1.0
    coherence_multiplier: float = 1.0
    zero_noise: bool = False

    def gate_fidelity(self, gate_name: str) -> float:
        if self.zero_noise:
            return 1.0
        base = self.fidelity_overrides.get(gate_name)
        if base is None:
            base = gates.fidelity_of(gate_name)
        if self.ququart_error_multiplier != 1.0 and _is_ququart_class(gate_name):
            base = 1.0 - self.ququart_error_multiplier * (1.0 - base)
        return min(max(base, 0.0), 1.0)

    def gate_error(self, gate_name: str) -> float:
        return 1.0 - self.gate_fidelity(gate_name)

    def damping(self, dim: int, dt_ns: float) -> KrausSet | None:
        if self.zero_noise or dt_ns <= 0.0:
            return None
        return damping_kraus(dim, dt_ns, self.t1_ns, self.coherence_multiplier)

    def to_json(self) -> str:
        return json.dumps(
            {
                "t1_ns": self.t1_ns,
                "fidelity_overrides": self.fidelity_overrides,
                "ququart_error_multiplier": self.ququart_error_multiplier,
                "coherence_multiplier": self.coherence_multiplier,
                "zero_noise": self.zero_noise,
            },
            indent=2,
            ensure_ascii=False,
        )

    @staticmethod
    def from_json(text: str) -> "NoiseConfig":
        raw = json.loads(text)
        return NoiseConfig(
            t1_ns=raw.get("t1_ns", DEFAULT_T1_NS),
            fidelity_overrides=dict(raw.get("fidelity_overrides", {})),
            ququart_error_multiplier=raw.get("ququart_error_multiplier", 1.0),
            coherence_multiplier=raw.get("coherence_multiplier", 1.0),
            zero_noise=raw.get("zero_noise", False),
        )
