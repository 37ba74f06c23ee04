"""Majorization selection of interacting dilations and ancilla-size bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import channels
from .channels import QuantumOperation
from .dilations import partial_elements
from .errors import DilationMismatchError, ValidationError
from .linalg import TOL, fro

#: A dilation whose Choi matrix differs from the operation's by more than this
#: does not realize it.
MISMATCH_TOL = 1e-8


def _pad(x: np.ndarray, n: int) -> np.ndarray:
    return np.concatenate([x, np.zeros(n - len(x))])


def _sorted_padded(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if np.any(x < -1e-12) or np.any(y < -1e-12):
        raise ValidationError("majorization is defined for non-negative vectors")
    n = max(len(x), len(y))
    return np.sort(_pad(x, n))[::-1], np.sort(_pad(y, n))[::-1]


def majorizes(x, y, tol: float = TOL) -> bool:
    """True iff ``x`` is majorized by ``y`` (``x < y``).

    The shorter vector is zero-padded.  Every prefix sum of ``x`` sorted
    non-increasingly must not exceed the corresponding prefix sum of ``y``,
    and the totals must agree, both to within ``tol``.
    """
    xs, ys = _sorted_padded(x, y)
    cx, cy = np.cumsum(xs), np.cumsum(ys)
    if len(cx) == 0:
        return True
    return bool(np.all(cx <= cy + tol) and abs(cx[-1] - cy[-1]) <= tol)


@dataclass(frozen=True)
class MajorizationReport:
    candidate: np.ndarray
    canonical: np.ndarray
    majorized: bool
    partial_sums: list[tuple[float, float]] = field(repr=False)

    @property
    def tight(self) -> bool:
        """Every prefix sum coincides: the candidate is as concentrated as the canonical form."""
        return all(abs(a - b) <= TOL for a, b in self.partial_sums)

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate.tolist(),
            "canonical": self.canonical.tolist(),
            "majorized": self.majorized,
            "tight": self.tight,
            "partial_sums": [list(p) for p in self.partial_sums],
        }


def dilation_majorization_vector(dil) -> np.ndarray:
    """Squared Hilbert-Schmidt norms of the partial matrix elements ``<sigma_i|U|phi_R>``.

    Returned non-increasing, one entry per basis vector of ``Rng(Sigma)``.
    Works for interacting and free dilations (``U D`` plays the role of
    ``U |phi_R>``) and for bare isometric dilations.
    """
    norms = [float(np.sum(np.abs(e) ** 2)) for e in partial_elements(dil)]
    return np.sort(np.array(norms))[::-1]


def check_majorization_constraint(dil, op: QuantumOperation) -> MajorizationReport:
    """Compare a dilation's norm vector against the canonical Kraus norms.

    Raises
    ------
    DilationMismatchError
        If the dilation does not realize ``op``; the comparison would be meaningless.
    """
    elements = partial_elements(dil)
    implemented = channels.choi_matrix(elements, op.dim_in, op.dim_out)
    err = fro(implemented - channels.choi(op).matrix)
    if err > MISMATCH_TOL:
        raise DilationMismatchError(
            f"dilation does not realize the operation: Choi mismatch {err:.3e} > {MISMATCH_TOL:g}"
        )
    candidate = dilation_majorization_vector(dil)
    canonical = np.array(
        [float(np.sum(np.abs(e) ** 2)) for e in channels.canonical_kraus(op).kraus]
    )
    xs, ys = _sorted_padded(candidate, canonical)
    sums = list(zip(np.cumsum(xs).tolist(), np.cumsum(ys).tolist()))
    return MajorizationReport(
        candidate=candidate,
        canonical=np.sort(canonical)[::-1],
        majorized=majorizes(candidate, canonical),
        partial_sums=sums,
    )


@dataclass(frozen=True)
class BoundsReport:
    c: int
    rank_defect: int
    dim_in: int
    dim_out: int
    lower_bound_dim_l: int
    actual_dim_l: int | None = None
    rank_sigma: int | None = None
    satisfied: bool | None = None

    @property
    def weak_bound_dim_l(self) -> int:
        """``dim(L) >= rank(Sigma) >= c``: the bound implied by majorization alone."""
        return self.c

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "rank_defect": self.rank_defect,
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "lower_bound_dim_l": self.lower_bound_dim_l,
            "weak_bound_dim_l": self.weak_bound_dim_l,
            "actual_dim_l": self.actual_dim_l,
            "rank_sigma": self.rank_sigma,
            "satisfied": self.satisfied,
        }


def ancilla_lower_bound(op: QuantumOperation) -> BoundsReport:
    """``dim(L) >= c + ceil(rank(I_H - K) / dim(K))`` for any isometric dilation."""
    c = channels.rank(op)
    defect = channels.defect_rank(op)
    return BoundsReport(
        c=c,
        rank_defect=defect,
        dim_in=op.dim_in,
        dim_out=op.dim_out,
        lower_bound_dim_l=c + math.ceil(defect / op.dim_out),
    )


def check_bounds(dil, op: QuantumOperation) -> BoundsReport:
    """Audit a dilation's measurement ancilla against the resource bounds.

    ``satisfied`` requires ``dim_l`` at least the lower bound, ``rank(Sigma)``
    at least the rank ``c`` of the operation, and ``dim_l * dim_out >= dim_in``.
    """
    base = ancilla_lower_bound(op)
    sigma = np.asarray(dil.sigma)
    rank_sigma = int(round(float(np.trace(sigma).real)))
    dim_l = int(dil.dim_l)
    ok = dim_l >= base.lower_bound_dim_l and rank_sigma >= base.c and dim_l * op.dim_out >= op.dim_in
    return BoundsReport(
        c=base.c,
        rank_defect=base.rank_defect,
        dim_in=op.dim_in,
        dim_out=op.dim_out,
        lower_bound_dim_l=base.lower_bound_dim_l,
        actual_dim_l=dim_l,
        rank_sigma=rank_sigma,
        satisfied=bool(ok),
    )
