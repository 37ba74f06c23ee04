"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  Composite
spaces ``A (x) B`` are laid out first-factor-major: the basis vector
``|a>|b>`` sits at index ``a * dim_B + b``, which is what ``numpy.kron``
produces.  Every tensor product in the package follows this convention, with
ancilla factors written first (``L (x) K``, ``R (x) H``).
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, ValidationError

#: Absolute tolerance on Frobenius residuals (hermiticity, orthonormality).
TOL = 1e-9
#: Eigenvalues below ``RANK_RTOL * lambda_max`` count as zero.
RANK_RTOL = 1e-10
#: Floor under the relative cutoff so that round-off on a null matrix is not counted.
RANK_ATOL = 1e-12
#: Adjacent eigenvalues closer than this are treated as degenerate.
CLUSTER_GAP = 1e-9
#: Gram-Schmidt candidates whose residual is shorter than this are skipped.
GS_SKIP = 1e-9
#: Largest side length of any matrix built here.
MAX_DIM = 2**12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array (column vectors stay 2-D)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m


def dag(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def fro(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def _check_side(rows: int, cols: int) -> None:
    if rows > MAX_DIM or cols > MAX_DIM:
        raise DimensionError(
            f"a {rows}x{cols} matrix exceeds the size limit of {MAX_DIM}"
        )


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` with the first factor major."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    _check_side(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return np.kron(a, b)


def partial_trace_first(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out the first factor of a square matrix on ``A (x) B``."""
    m = as_matrix(m)
    side = dim_a * dim_b
    if m.shape != (side, side):
        raise DimensionError(
            f"expected a {side}x{side} matrix for dims {dim_a}x{dim_b}, got {m.shape}"
        )
    return np.einsum("abac->bc", m.reshape(dim_a, dim_b, dim_a, dim_b))


def partial_trace_second(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out the second factor of a square matrix on ``A (x) B``."""
    m = as_matrix(m)
    side = dim_a * dim_b
    if m.shape != (side, side):
        raise DimensionError(
            f"expected a {side}x{side} matrix for dims {dim_a}x{dim_b}, got {m.shape}"
        )
    return np.einsum("abcb->ac", m.reshape(dim_a, dim_b, dim_a, dim_b))


def is_hermitian(h: np.ndarray, tol: float = TOL) -> bool:
    return h.shape[0] == h.shape[1] and fro(h - dag(h)) <= tol


def is_isometry(t: np.ndarray, tol: float = TOL) -> bool:
    return fro(dag(t) @ t - np.eye(t.shape[1])) <= tol


def is_unitary(u: np.ndarray, tol: float = TOL) -> bool:
    return u.shape[0] == u.shape[1] and is_isometry(u, tol) and is_isometry(dag(u), tol)


def _canonical_span_basis(q: np.ndarray) -> np.ndarray:
    # Orthonormal basis of Rng(q) obtained by projecting e_0, e_1, ... onto it
    # and orthonormalizing; independent of which basis of the span q holds.
    m = q.shape[1]
    basis: list[np.ndarray] = []
    for j in range(q.shape[0]):
        r = q[j].conj()
        for _ in range(2):
            for b in basis:
                r = r - b * np.vdot(b, r)
        norm = np.linalg.norm(r)
        if norm < GS_SKIP:
            continue
        basis.append(r / norm)
        if len(basis) == m:
            break
    return q @ np.stack(basis, axis=1)


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues non-increasing.

    Eigenvectors are returned as the columns of the second array.  The output
    is deterministic: inside every cluster of eigenvalues closer than
    ``CLUSTER_GAP`` (including singleton clusters, which fixes the phase) the
    eigenvectors are replaced by the Gram-Schmidt orthonormalization of the
    canonical basis vectors projected onto the eigenspace, in index order.

    Raises
    ------
    ValidationError
        If ``h`` deviates from its adjoint by more than ``TOL`` (Frobenius).
    """
    h = as_matrix(h, "h")
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"hermitian_eig needs a square matrix, got {h.shape}")
    if not is_hermitian(h):
        raise ValidationError(
            f"matrix is not Hermitian: ||h - h^dag||_F = {fro(h - dag(h)):.3e}"
        )
    w, v = np.linalg.eigh((h + dag(h)) / 2)
    w = w[::-1].copy()
    v = v[:, ::-1]
    out = np.empty_like(v)
    start = 0
    for stop in range(1, len(w) + 1):
        if stop == len(w) or w[stop - 1] - w[stop] >= CLUSTER_GAP:
            out[:, start:stop] = _canonical_span_basis(v[:, start:stop])
            start = stop
    return w, out


def rank_cutoff(eigenvalues, atol: float = RANK_ATOL) -> float:
    lam_max = float(np.max(eigenvalues, initial=0.0))
    return max(RANK_RTOL * lam_max, atol)


def numerical_rank(eigenvalues, atol: float = RANK_ATOL) -> int:
    """Number of eigenvalues above the global rank cutoff."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    return int(np.count_nonzero(eigenvalues > rank_cutoff(eigenvalues, atol)))


def complete_to_unitary(t) -> np.ndarray:
    """Extend an isometry to a unitary by appending orthonormal columns.

    The new columns span ``Rng(I - t t^dag)`` and are produced by Gram-Schmidt
    over the canonical basis vectors in index order; a candidate is skipped
    when its residual is shorter than ``GS_SKIP``.  A square unitary input is
    returned unchanged.
    """
    t = as_matrix(t, "t")
    rows, cols = t.shape
    if rows < cols:
        raise DimensionError(f"an isometry needs rows >= cols, got {t.shape}")
    if not is_isometry(t):
        raise ValidationError(
            f"input is not an isometry: ||t^dag t - I||_F = "
            f"{fro(dag(t) @ t - np.eye(cols)):.3e}"
        )
    missing = rows - cols
    if missing == 0:
        return t.copy()
    extra = np.zeros((rows, missing), dtype=complex)
    found = 0
    for j in range(rows):
        r = np.zeros(rows, dtype=complex)
        r[j] = 1.0
        for _ in range(2):
            r = r - t @ (dag(t) @ r)
            r = r - extra[:, :found] @ (dag(extra[:, :found]) @ r)
        norm = np.linalg.norm(r)
        if norm < GS_SKIP:
            continue
        extra[:, found] = r / norm
        found += 1
        if found == missing:
            break
    if found < missing:
        raise ValidationError("could not complete the isometry to a unitary")
    return np.hstack([t, extra])


def swap_factors(n: int, dim: int, i: int, j: int) -> np.ndarray:
    """Permutation matrix exchanging tensor factors ``i`` and ``j`` (0-based) of ``dim**n``."""
    side = dim**n
    _check_side(side, side)
    eye = np.eye(side, dtype=complex).reshape((dim,) * n + (side,))
    return np.swapaxes(eye, i, j).reshape(side, side)


def cyclic_ancilla_permutation(n: int, dim_r: int, dim_h: int) -> np.ndarray:
    """The operator ``(E_{1,n} E_{2,n} ... E_{n-1,n}) (x) I_H`` on ``R^{(x)n} (x) H``.

    ``E_{i,n}`` swaps ancilla factor ``i`` with the last ancilla factor; the
    product is taken left to right in ascending ``i`` and the net effect is a
    cyclic shift of the ancilla slots.
    """
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    _check_side(dim_r**n * dim_h, dim_r**n * dim_h)
    perm = np.eye(dim_r**n, dtype=complex)
    for i in range(n - 1):
        perm = perm @ swap_factors(n, dim_r, i, n - 1)
    return kron(perm, np.eye(dim_h))
