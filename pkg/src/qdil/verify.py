"""Seeded generators and independent numerical checks.

Random numbers come from numpy's ``PCG64`` bit generator, whose output stream
numpy keeps stable across releases; every function takes an explicit seed and
derives per-trial streams from ``SeedSequence([seed, trial])``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import QuantumOperation, apply, choi_matrix
from .dilations import PowerDilation, apply_power, compose_power, input_dim, realize
from .errors import DimensionError, PreconditionError, ValidationError
from .linalg import TOL, dag, fro, is_isometry


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix of independent standard complex Gaussian entries."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    if rows < cols:
        raise DimensionError(f"an isometry needs rows >= cols, got {rows}x{cols}")
    q, r = np.linalg.qr(ginibre(rows, cols, rng))
    # fix the QR phase freedom so the result does not depend on LAPACK sign choices
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return random_isometry(dim, dim, rng)


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(dim, dim, rng)
    rho = g @ dag(g)
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class ChannelSpec:
    dim_in: int
    dim_out: int
    rank: int
    trace_preserving: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise PreconditionError("dimensions must be positive")
        if not 1 <= self.rank <= self.dim_in * self.dim_out:
            raise PreconditionError(
                f"rank {self.rank} is infeasible: it must lie in 1..{self.dim_in * self.dim_out}"
            )
        if self.rank * self.dim_out < self.dim_in:
            raise PreconditionError(
                f"rank {self.rank} is infeasible: a channel {self.dim_in}->{self.dim_out} "
                f"needs rank * dim_out >= dim_in"
            )
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")


def random_channel(spec: ChannelSpec) -> QuantumOperation:
    """Seeded random operation with the requested Choi rank.

    The Kraus operators are the ``dim_out``-row blocks of a random isometry
    ``H -> C^rank (x) K``.  Trace-decreasing specs scale that Kraus set by a
    random factor in ``[0.3, 0.9]``.
    """
    rng = rng_for(spec.seed, 0)
    v = random_isometry(spec.rank * spec.dim_out, spec.dim_in, rng)
    scale = 1.0 if spec.trace_preserving else rng.uniform(0.3, 0.9)
    kraus = [scale * v[i * spec.dim_out:(i + 1) * spec.dim_out] for i in range(spec.rank)]
    return QuantumOperation(spec.dim_in, spec.dim_out, tuple(kraus))


def mix_kraus(op: QuantumOperation, y) -> QuantumOperation:
    """Kraus form ``E'_j = sum_i Y[j, i] E_i`` for an isometric ``Y`` (same map)."""
    y = np.asarray(y, dtype=complex)
    if y.ndim != 2 or y.shape[1] != len(op.kraus):
        raise DimensionError(
            f"mixing matrix needs {len(op.kraus)} columns, got shape {y.shape}"
        )
    if not is_isometry(y):
        raise ValidationError("mixing matrix is not an isometry (Y^dag Y != I)")
    stacked = np.stack(op.kraus)
    mixed = np.einsum("ji,iab->jab", y, stacked)
    return QuantumOperation(op.dim_in, op.dim_out, tuple(mixed))


def reconstruction_error(dil, op: QuantumOperation, trials: int = 10, seed: int = 0) -> float:
    """Largest ``||realized(rho) - E(rho)||_F`` over seeded random states.

    Power dilations are checked at every power ``k = 1..n`` against ``E^k``.
    """
    if input_dim(dil) != op.dim_in:
        raise DimensionError(
            f"dilation acts on dimension {input_dim(dil)}, operation on {op.dim_in}"
        )
    worst = 0.0
    for t in range(trials):
        rho = random_density(op.dim_in, rng_for(seed, 1, t))
        if isinstance(dil, PowerDilation):
            for k in range(1, dil.n + 1):
                worst = max(worst, fro(apply_power(dil, rho, k) - compose_power(op, rho, k)))
        else:
            worst = max(worst, fro(realize(dil, rho) - apply(op, rho)))
    return worst


def cp_audit(op) -> bool:
    """True iff the Choi matrix (of an operation, or given directly) is positive."""
    if isinstance(op, QuantumOperation):
        r = choi_matrix(op.kraus, op.dim_in, op.dim_out)
    else:
        r = np.asarray(getattr(op, "matrix", op), dtype=complex)
    if fro(r - dag(r)) > TOL:
        return False
    return bool(np.linalg.eigvalsh((r + dag(r)) / 2)[0] >= -TOL)
