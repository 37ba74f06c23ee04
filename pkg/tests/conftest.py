import math

import numpy as np
import pytest

from qdil.channels import QuantumOperation
from qdil.verify import ChannelSpec, random_channel, rng_for

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def amplitude_damping(gamma: float) -> QuantumOperation:
    e0 = np.diag([1.0, math.sqrt(1 - gamma)])
    e1 = math.sqrt(gamma) * np.array([[0.0, 1.0], [0.0, 0.0]])
    return QuantumOperation(2, 2, (e0, e1))


def dephasing(p: float) -> QuantumOperation:
    z = np.diag([1.0, -1.0])
    return QuantumOperation(2, 2, (math.sqrt(1 - p / 2) * np.eye(2), math.sqrt(p / 2) * z))


def depolarizing() -> QuantumOperation:
    paulis = [
        np.eye(2),
        np.array([[0, 1], [1, 0]]),
        np.array([[0, -1j], [1j, 0]]),
        np.diag([1, -1]),
    ]
    return QuantumOperation(2, 2, tuple(0.5 * p for p in paulis))


def identity_channel(dim: int = 2) -> QuantumOperation:
    return QuantumOperation(dim, dim, (np.eye(dim),))


def projector_op() -> QuantumOperation:
    return QuantumOperation(2, 2, (np.diag([1.0, 0.0]),))


def mixed_spec(seed: int, max_rank: int = 8) -> ChannelSpec:
    """Seeded spec with dims in 1..4, alternating TP / trace-decreasing."""
    rng = rng_for(seed, 99)
    dim_in, dim_out = (int(x) for x in rng.integers(1, 5, size=2))
    low = -(-dim_in // dim_out)
    high = min(max_rank, dim_in * dim_out)
    rank = int(rng.integers(low, high + 1))
    return ChannelSpec(dim_in, dim_out, rank, trace_preserving=seed % 2 == 0, seed=seed)


def mixed_channel(seed: int) -> QuantumOperation:
    return random_channel(mixed_spec(seed))


def contracted_channel(seed: int) -> QuantumOperation:
    """Random channel followed by a random non-scalar input contraction (K not a multiple of I).

    One singular value of the contraction is 1, so ``rank(I - K) < dim_in``.
    """
    spec = mixed_spec(seed)
    op = random_channel(ChannelSpec(spec.dim_in, spec.dim_out, spec.rank, True, seed))
    rng = rng_for(seed, 7)
    g = rng.standard_normal((spec.dim_in, spec.dim_in)) + 1j * rng.standard_normal((spec.dim_in, spec.dim_in))
    q, _ = np.linalg.qr(g)
    s = rng.uniform(0.2, 0.95, spec.dim_in)
    s[0] = 1.0
    c = q @ np.diag(s) @ q.conj().T
    return QuantumOperation(spec.dim_in, spec.dim_out, tuple(e @ c for e in op.kraus))


@pytest.fixture
def rng():
    return rng_for(12345)
