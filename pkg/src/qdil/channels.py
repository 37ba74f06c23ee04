"""Quantum operations in Kraus form, their dual maps and Choi operators.

Vectorization stacks rows: ``|A>> = sum_{n,m} A[n, m] |n>|m>``, i.e.
``A.reshape(-1)``.  The Choi operator of ``E: H -> K`` is the positive matrix
``sum_i |E_i>><<E_i|`` on ``K (x) H``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, ValidationError
from .linalg import (
    TOL,
    as_matrix,
    dag,
    fro,
    hermitian_eig,
    numerical_rank,
    partial_trace_first,
    partial_trace_second,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuantumOperation:
    """A trace-non-increasing CP map ``rho -> sum_n E_n rho E_n^dag``.

    ``kraus`` holds ``dim_out x dim_in`` matrices.  An empty tuple is the zero
    map, which is a valid (rank 0) operation.
    """

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if self.dim_in < 1 or self.dim_out < 1:
            raise DimensionError(f"dimensions must be positive, got {self.dim_in}->{self.dim_out}")
        kraus = []
        for i, e in enumerate(self.kraus):
            e = as_matrix(e, f"Kraus operator {i}")
            if e.shape != (self.dim_out, self.dim_in):
                raise DimensionError(
                    f"Kraus operator {i} has shape {e.shape}, "
                    f"expected {(self.dim_out, self.dim_in)}"
                )
            kraus.append(_frozen(e))
        object.__setattr__(self, "kraus", tuple(kraus))
        top = float(np.linalg.eigvalsh(self.effect)[-1])
        if top > 1 + TOL:
            raise ValidationError(
                f"trace-increasing map: K = sum E^dag E has eigenvalue {top:.12g} > 1"
            )

    @property
    def effect(self) -> np.ndarray:
        """``K = sum_n E_n^dag E_n``; ``Tr[K rho]`` is the probability of occurrence."""
        k = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for e in self.kraus:
            k += dag(e) @ e
        return k

    def __len__(self) -> int:
        return len(self.kraus)


@dataclass(frozen=True)
class DensityState:
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix, "density matrix")
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"density matrix has shape {m.shape}, expected side {self.dim}")
        if fro(m - dag(m)) > TOL:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TOL:
            raise ValidationError(f"density matrix has trace {np.trace(m).real:.12g}")
        if np.linalg.eigvalsh((m + dag(m)) / 2)[0] < -TOL:
            raise ValidationError("density matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", _frozen(m))


@dataclass(frozen=True)
class ChoiOperator:
    """Positive matrix ``R_E`` on ``K (x) H`` (output factor first)."""

    dim_in: int
    dim_out: int
    matrix: np.ndarray = field(repr=False)

    def effect(self) -> np.ndarray:
        """Recover ``K`` from the Choi matrix.

        Tracing out the output factor gives ``K`` transposed in the
        computational basis, ``Tr_K[R_E] = K^T``; the transpose is undone here.
        """
        return partial_trace_first(self.matrix, self.dim_out, self.dim_in).T


def as_density(rho, dim: int | None = None) -> np.ndarray:
    """Return the matrix behind ``rho`` (a ``DensityState`` or array-like)."""
    m = rho.matrix if isinstance(rho, DensityState) else as_matrix(rho, "rho")
    if dim is not None and m.shape != (dim, dim):
        raise DimensionError(f"state has shape {m.shape}, expected side {dim}")
    return m


def new_quantum_operation(kraus: Sequence, dim_in: int, dim_out: int) -> QuantumOperation:
    """Validate a Kraus list and wrap it as a :class:`QuantumOperation`."""
    if len(kraus) == 0:
        raise ValidationError("a Kraus list needs at least one operator")
    return QuantumOperation(dim_in, dim_out, tuple(kraus))


def apply(op: QuantumOperation, rho) -> np.ndarray:
    """Unnormalized output state ``sum_n E_n rho E_n^dag``."""
    rho = as_density(rho, op.dim_in)
    out = np.zeros((op.dim_out, op.dim_out), dtype=complex)
    for e in op.kraus:
        out += e @ rho @ dag(e)
    return out


def apply_dual(op: QuantumOperation, obs) -> np.ndarray:
    """Heisenberg picture ``sum_n E_n^dag O E_n``."""
    obs = as_matrix(obs, "observable")
    if obs.shape != (op.dim_out, op.dim_out):
        raise DimensionError(f"observable has shape {obs.shape}, expected side {op.dim_out}")
    out = np.zeros((op.dim_in, op.dim_in), dtype=complex)
    for e in op.kraus:
        out += dag(e) @ obs @ e
    return out


def vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).reshape(-1)


def unvec(v: np.ndarray, dim_out: int, dim_in: int) -> np.ndarray:
    return np.asarray(v).reshape(dim_out, dim_in)


def choi_matrix(kraus: Sequence[np.ndarray], dim_in: int, dim_out: int) -> np.ndarray:
    r = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
    for e in kraus:
        v = vec(e)
        r += np.outer(v, v.conj())
    return r


def choi(op: QuantumOperation) -> ChoiOperator:
    return ChoiOperator(op.dim_in, op.dim_out, _frozen(choi_matrix(op.kraus, op.dim_in, op.dim_out)))


def apply_choi(r: ChoiOperator, rho) -> np.ndarray:
    """Schrodinger picture from the Choi matrix: ``Tr_H[(I_K (x) rho^T) R_E]``."""
    rho = as_density(rho, r.dim_in)
    lifted = np.kron(np.eye(r.dim_out), rho.T) @ r.matrix
    return partial_trace_second(lifted, r.dim_out, r.dim_in)


def fix_phase(e: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry (row-major) is real positive."""
    flat = e.reshape(-1)
    scale = np.max(np.abs(flat), initial=0.0)
    if scale == 0:
        return e
    idx = int(np.argmax(np.abs(flat) > TOL * scale))
    return e * (abs(flat[idx]) / flat[idx])


def canonical_kraus(op: QuantumOperation) -> QuantumOperation:
    """Pairwise Hilbert-Schmidt orthogonal Kraus form from the Choi spectrum.

    Each Choi eigenpair ``(lam, v)`` above the rank cutoff gives the operator
    ``sqrt(lam) * unvec(v)``.  Operators come out in non-increasing order of
    ``||E_i||_2^2 = lam`` with the phase convention of :func:`fix_phase`.
    Under degenerate Choi eigenvalues the decomposition is only unique up to
    a unitary mixing inside each eigenspace; compare maps, not Kraus lists.
    """
    lam, vecs = hermitian_eig(choi(op).matrix)
    c = numerical_rank(lam)
    kraus = [
        fix_phase(np.sqrt(lam[i]) * unvec(vecs[:, i], op.dim_out, op.dim_in)) for i in range(c)
    ]
    return QuantumOperation(op.dim_in, op.dim_out, tuple(kraus))


def rank(op: QuantumOperation) -> int:
    """Rank of the operation: cardinality of its canonical Kraus decomposition."""
    lam = np.linalg.eigvalsh(choi(op).matrix)
    return numerical_rank(lam)


def occurrence_probability(op: QuantumOperation, rho) -> float:
    rho = as_density(rho, op.dim_in)
    p = float(np.real(np.trace(op.effect @ rho)))
    if p < -TOL or p > 1 + TOL:
        raise ValidationError(f"occurrence probability {p:.12g} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def is_trace_preserving(op: QuantumOperation) -> bool:
    return fro(op.effect - np.eye(op.dim_in)) <= TOL


def defect_rank(op: QuantumOperation) -> int:
    """``rank(I_H - K)``, counted with the absolute tolerance ``TOL`` as floor."""
    if is_trace_preserving(op):
        return 0
    lam = np.linalg.eigvalsh(np.eye(op.dim_in) - op.effect)
    return numerical_rank(lam, atol=TOL)


__all__ = [
    "QuantumOperation",
    "DensityState",
    "ChoiOperator",
    "new_quantum_operation",
    "apply",
    "apply_dual",
    "apply_choi",
    "choi",
    "choi_matrix",
    "canonical_kraus",
    "rank",
    "occurrence_probability",
    "is_trace_preserving",
    "defect_rank",
    "vec",
    "unvec",
    "fix_phase",
]
