"""Unitary realizations of quantum operations.

Every builder starts from a Stinespring isometry ``V: H -> L (x) K`` together
with a projector ``Sigma`` on the measurement ancilla ``L`` and then extends
``V`` to a unitary in one of four ways:

* free (direct-sum): ``U`` on ``L (x) K`` acting on ``rho (+) 0_D``;
* interacting (tensor-product): ``U`` on ``R (x) H = L (x) K`` acting on
  ``|phi_R><phi_R| (x) rho``;
* Halmos-type: ``U`` on ``S (x) L (x) K`` built from a nilpotent ``W`` on a
  third ancilla ``S``;
* power: ``W`` on ``R^{(x)n} (x) H`` whose ``k``-th power realizes ``E^k``.

The identification ``L (x) K = R (x) H`` is coordinate-wise in the
first-factor-major layout, so ``|phi_R> (x) I_H`` is the trivial isometry
``D`` of the free form and the interacting ``U`` has ``V`` as its first
column block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import singledispatch

import numpy as np

from .channels import (
    QuantumOperation,
    apply,
    as_density,
    canonical_kraus,
    is_trace_preserving,
)
from .errors import DimensionError, PreconditionError, ValidationError
from .linalg import (
    RANK_ATOL,
    TOL,
    as_matrix,
    complete_to_unitary,
    cyclic_ancilla_permutation,
    dag,
    hermitian_eig,
    kron,
    numerical_rank,
    partial_trace_first,
)


@dataclass(frozen=True)
class IsometricDilation:
    """``E^dag(X) = V^dag (Sigma (x) X) V`` with ``V`` an isometry."""

    v: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    dim_l: int
    sigma_basis: tuple[np.ndarray, ...] = field(repr=False)
    dim_in: int
    dim_out: int


@dataclass(frozen=True)
class FreeDilation:
    u: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    dim_l: int
    dim_d: int
    dim_in: int
    dim_out: int
    sigma_basis: tuple[np.ndarray, ...] = field(repr=False)


@dataclass(frozen=True)
class InteractingDilation:
    u: np.ndarray = field(repr=False)
    phi_r: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    dim_r: int
    dim_l: int
    dim_in: int
    dim_out: int
    sigma_basis: tuple[np.ndarray, ...] = field(repr=False)


@dataclass(frozen=True)
class HalmosDilation:
    u: np.ndarray = field(repr=False)
    sigma_s: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    phi_r: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    dim_s: int
    dim_r: int
    dim_l: int
    dim_in: int
    dim_out: int


@dataclass(frozen=True)
class PowerDilation:
    """``W = (prod_i E_{i,n} (x) I_H)(I (x) U)`` with ancilla state ``|phi_R><phi_R|^{(x)n}``."""

    w: np.ndarray = field(repr=False)
    sigma_state: np.ndarray = field(repr=False)
    n: int
    dim_r: int
    dim_h: int

    @property
    def dim_l(self) -> int:
        return self.dim_r

    @property
    def sigma(self) -> np.ndarray:
        return np.eye(self.dim_r)


def _stack(kraus, dim_l: int, dim_in: int, dim_out: int) -> np.ndarray:
    blocks = list(kraus) + [np.zeros((dim_out, dim_in))] * (dim_l - len(kraus))
    return np.vstack(blocks).astype(complex)


def stinespring_contraction(op: QuantumOperation, dim_l: int | None = None) -> np.ndarray:
    """Stack the Kraus operators vertically into ``E = sum_i |l_i> (x) E_i``.

    ``E^dag E = K``, so ``E`` is a contraction (an isometry for channels).
    Slots beyond the number of Kraus operators hold null operators.
    """
    if dim_l is None:
        dim_l = max(len(op.kraus), 1)
    if dim_l < len(op.kraus):
        raise PreconditionError(
            f"dim_l = {dim_l} is smaller than the number of Kraus operators ({len(op.kraus)})"
        )
    return _stack(op.kraus, dim_l, op.dim_in, op.dim_out)


def complementary_kraus(p, dim_k: int, atol: float = RANK_ATOL) -> list[np.ndarray]:
    """Write a positive ``p`` as ``sum_i A_i^dag A_i`` with ``A_i: H -> K``.

    Uses the minimal number ``ceil(rank(p) / dim_k)`` of operators: the
    unnormalized eigenvectors ``v_j`` (``<v_j|v_j>`` = eigenvalue) are dealt
    out ``dim_k`` at a time as the rows of each ``A_i``.
    """
    p = as_matrix(p, "p")
    if dim_k < 1:
        raise DimensionError(f"dim_k must be positive, got {dim_k}")
    lam, vecs = hermitian_eig(p)
    if lam.size and lam[-1] < -TOL:
        raise ValidationError(f"operator is not positive: smallest eigenvalue {lam[-1]:.3e}")
    r = numerical_rank(lam, atol=atol)
    unnormalized = [np.sqrt(lam[j]) * vecs[:, j] for j in range(r)]
    ops = []
    for i in range(math.ceil(r / dim_k)):
        a = np.zeros((dim_k, p.shape[0]), dtype=complex)
        for j, v in enumerate(unnormalized[i * dim_k:(i + 1) * dim_k]):
            a[j] = v.conj()
        ops.append(a)
    return ops


def _diag_projector(dim_l: int, rank: int) -> np.ndarray:
    sigma = np.zeros((dim_l, dim_l), dtype=complex)
    sigma[:rank, :rank] = np.eye(rank)
    return sigma


def _basis_vector(dim: int, i: int = 0) -> np.ndarray:
    e = np.zeros(dim, dtype=complex)
    e[i] = 1.0
    return e


def isometric_dilation(
    op: QuantumOperation, *, canonical: bool = True, null_slots: int = 0
) -> IsometricDilation:
    """Isometry ``V = sum_i |e_i> (x) E_i + sum_j |f_j> (x) F_j``.

    ``E_i`` is the canonical Kraus set (or ``op.kraus`` as given when
    ``canonical=False``) followed by ``null_slots`` zero operators, and
    ``F_j`` complete ``sum F^dag F = I - K`` with the fewest operators.
    ``Sigma`` projects onto ``span{e_i}``; it is the identity exactly when
    ``op`` is trace-preserving.  The zero map keeps one null ``e`` slot so
    that ``Sigma`` does not vanish.
    """
    null = np.zeros((op.dim_out, op.dim_in), dtype=complex)
    kraus = list(canonical_kraus(op).kraus if canonical else op.kraus) or [null]
    kraus += [null] * null_slots
    n_e = len(kraus)
    if is_trace_preserving(op):
        comp = []
    else:
        comp = complementary_kraus(np.eye(op.dim_in) - op.effect, op.dim_out, atol=TOL)
    dim_l = n_e + len(comp)
    v = _stack(kraus + comp, dim_l, op.dim_in, op.dim_out)
    return IsometricDilation(
        v=v,
        sigma=_diag_projector(dim_l, n_e),
        dim_l=dim_l,
        sigma_basis=tuple(_basis_vector(dim_l, i) for i in range(n_e)),
        dim_in=op.dim_in,
        dim_out=op.dim_out,
    )


def _project_and_trace(big: np.ndarray, sigma: np.ndarray, dim_l: int, dim_out: int) -> np.ndarray:
    return partial_trace_first(np.kron(sigma, np.eye(dim_out)) @ big, dim_l, dim_out)


def apply_isometric(dil: IsometricDilation, rho) -> np.ndarray:
    rho = as_density(rho, dil.dim_in)
    return _project_and_trace(dil.v @ rho @ dag(dil.v), dil.sigma, dil.dim_l, dil.dim_out)


def free_dilation(op: QuantumOperation, *, canonical: bool = True) -> FreeDilation:
    """Direct-sum dilation: ``U = V (+) W`` (horizontal join) and ``D = I_H (+) 0``."""
    iso = isometric_dilation(op, canonical=canonical)
    u = complete_to_unitary(iso.v)
    side = u.shape[0]
    d = np.eye(side, op.dim_in, dtype=complex)
    return FreeDilation(
        u=u,
        d=d,
        sigma=iso.sigma,
        dim_l=iso.dim_l,
        dim_d=side - op.dim_in,
        dim_in=op.dim_in,
        dim_out=op.dim_out,
        sigma_basis=iso.sigma_basis,
    )


def apply_free(dil: FreeDilation, rho) -> np.ndarray:
    """``Tr_L[(Sigma (x) I_K) U (rho (+) 0_D) U^dag]``."""
    rho = as_density(rho, dil.dim_in)
    embedded = dil.d @ rho @ dag(dil.d)
    return _project_and_trace(dil.u @ embedded @ dag(dil.u), dil.sigma, dil.dim_l, dil.dim_out)


def _divisible_padding(dim_l: int, dim_out: int, dim_in: int) -> int:
    pad = 0
    while ((dim_l + pad) * dim_out) % dim_in:
        pad += 1
    return pad


def _interacting_isometry(op: QuantumOperation, canonical: bool) -> IsometricDilation:
    iso = isometric_dilation(op, canonical=canonical)
    pad = _divisible_padding(iso.dim_l, op.dim_out, op.dim_in)
    if pad:
        iso = isometric_dilation(op, canonical=canonical, null_slots=pad)
    return iso


def interacting_dilation(op: QuantumOperation, *, canonical: bool = True) -> InteractingDilation:
    """Tensor-product dilation ``U = sum_i <r_i| (x) W_i`` with ``W_1 = V``.

    ``dim_l`` is raised, by appending null Kraus slots inside ``Sigma``, to
    the smallest value with ``dim_l * dim_out`` divisible by ``dim_in``; then
    ``dim_r = dim_l * dim_out / dim_in``.  The isometries ``W_2 .. W_r`` are
    the Gram-Schmidt completion of ``V`` grouped into blocks of ``dim_in``
    columns, and ``|phi_R>`` is the first basis vector of ``R``.
    """
    iso = _interacting_isometry(op, canonical)
    u = complete_to_unitary(iso.v)
    dim_r = iso.dim_l * op.dim_out // op.dim_in
    return InteractingDilation(
        u=u,
        phi_r=_basis_vector(dim_r),
        sigma=iso.sigma,
        dim_r=dim_r,
        dim_l=iso.dim_l,
        dim_in=op.dim_in,
        dim_out=op.dim_out,
        sigma_basis=iso.sigma_basis,
    )


def _ancilla_state(phi: np.ndarray) -> np.ndarray:
    return np.outer(phi, phi.conj())


def apply_interacting(dil: InteractingDilation, rho) -> np.ndarray:
    """``Tr_L[(Sigma (x) I_K) U (|phi_R><phi_R| (x) rho) U^dag]``."""
    rho = as_density(rho, dil.dim_in)
    joint = np.kron(_ancilla_state(dil.phi_r), rho)
    return _project_and_trace(dil.u @ joint @ dag(dil.u), dil.sigma, dil.dim_l, dil.dim_out)


def apply_naive_power(dil: InteractingDilation, rho, k: int) -> np.ndarray:
    """Apply ``U^k`` to a single fresh ancilla; in general this is *not* ``E^k(rho)``."""
    if dil.dim_in != dil.dim_out:
        raise PreconditionError("powers need equal input and output spaces")
    rho = as_density(rho, dil.dim_in)
    uk = np.linalg.matrix_power(dil.u, k)
    joint = np.kron(_ancilla_state(dil.phi_r), rho)
    return _project_and_trace(uk @ joint @ dag(uk), dil.sigma, dil.dim_l, dil.dim_out)


def nilpotent_pairing(dim_s: int) -> np.ndarray:
    """Direct sum of ``|0><1|`` blocks: ``W^2 = 0`` and ``W W^dag + W^dag W = I``."""
    if dim_s < 2 or dim_s % 2:
        raise PreconditionError(
            f"dim_s must be even and >= 2, got {dim_s}: W W^dag and W^dag W must be "
            "complementary projectors of equal rank"
        )
    w = np.zeros((dim_s, dim_s), dtype=complex)
    for b in range(dim_s // 2):
        w[2 * b, 2 * b + 1] = 1.0
    return w


def halmos_dilation(op: QuantumOperation, dim_s: int = 2) -> HalmosDilation:
    """Three-ancilla dilation on ``S (x) L (x) K``.

    With ``Vt = V (<phi_R| (x) I_H)`` (a partial isometry on ``L (x) K``)::

        U = W W^dag (x) Vt - W^dag W (x) Vt^dag
            + W^dag (x) (I - Vt^dag Vt) + W (x) (I - Vt Vt^dag)

    and the third ancilla is prepared in ``W W^dag / Tr[W W^dag]``.
    """
    w = nilpotent_pairing(dim_s)
    iso = _interacting_isometry(op, canonical=True)
    side = iso.v.shape[0]
    dim_r = side // op.dim_in
    phi = _basis_vector(dim_r)
    vt = iso.v @ np.kron(phi.conj().reshape(1, -1), np.eye(op.dim_in))
    eye = np.eye(side)
    wwd = w @ dag(w)
    wdw = dag(w) @ w
    u = (
        kron(wwd, vt)
        - kron(wdw, dag(vt))
        + kron(dag(w), eye - dag(vt) @ vt)
        + kron(w, eye - vt @ dag(vt))
    )
    return HalmosDilation(
        u=u,
        sigma_s=wwd / np.trace(wwd).real,
        w=w,
        phi_r=phi,
        sigma=iso.sigma,
        dim_s=dim_s,
        dim_r=dim_r,
        dim_l=iso.dim_l,
        dim_in=op.dim_in,
        dim_out=op.dim_out,
    )


def apply_halmos(dil: HalmosDilation, rho) -> np.ndarray:
    """``Tr_{S,L}[(I_S (x) Sigma (x) I_K) U (sigma_S (x) |phi_R><phi_R| (x) rho) U^dag]``."""
    rho = as_density(rho, dil.dim_in)
    joint = np.kron(dil.sigma_s, np.kron(_ancilla_state(dil.phi_r), rho))
    evolved = dil.u @ joint @ dag(dil.u)
    proj = np.kron(np.eye(dil.dim_s), dil.sigma)
    return _project_and_trace(evolved, proj, dil.dim_s * dil.dim_l, dil.dim_out)


def power_dilation(op: QuantumOperation, n: int) -> PowerDilation:
    """Unitary on ``R^{(x)n} (x) H`` realizing ``E, E^2, ..., E^n`` by its powers.

    Only defined for channels with equal input and output spaces, where the
    preparation and measurement ancillas coincide.
    """
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    if op.dim_in != op.dim_out:
        raise PreconditionError(
            f"power dilations need equal input and output spaces, got {op.dim_in}->{op.dim_out}"
        )
    if not is_trace_preserving(op):
        raise PreconditionError(
            "power dilations need a trace-preserving map: a trace-decreasing operation "
            "requires a projective measurement on the ancilla at every step"
        )
    single = interacting_dilation(op)
    dim_r, dim_h = single.dim_r, op.dim_in
    perm = cyclic_ancilla_permutation(n, dim_r, dim_h)
    w = perm @ kron(np.eye(dim_r ** (n - 1)), single.u)
    sigma_state = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        sigma_state = np.kron(sigma_state, _ancilla_state(single.phi_r))
    return PowerDilation(w=w, sigma_state=sigma_state, n=n, dim_r=dim_r, dim_h=dim_h)


def apply_power(dil: PowerDilation, rho, k: int) -> np.ndarray:
    """``Tr_{R^{(x)n}}[W^k (sigma (x) rho) W^{dag k}]`` for ``1 <= k <= n``."""
    if not 1 <= k <= dil.n:
        raise PreconditionError(f"k must lie in 1..{dil.n}, got {k}")
    rho = as_density(rho, dil.dim_h)
    state = np.kron(dil.sigma_state, rho)
    for _ in range(k):
        state = dil.w @ state @ dag(dil.w)
    return partial_trace_first(state, dil.dim_r**dil.n, dil.dim_h)


@singledispatch
def realize(dil, rho) -> np.ndarray:
    """Output of any dilation on ``rho`` (the first power for power dilations)."""
    raise TypeError(f"not a dilation: {type(dil).__name__}")


realize.register(IsometricDilation, apply_isometric)
realize.register(FreeDilation, apply_free)
realize.register(InteractingDilation, apply_interacting)
realize.register(HalmosDilation, apply_halmos)


@realize.register
def _(dil: PowerDilation, rho) -> np.ndarray:
    return apply_power(dil, rho, 1)


def input_dim(dil) -> int:
    return dil.dim_h if isinstance(dil, PowerDilation) else dil.dim_in


def source_isometry(dil) -> np.ndarray:
    """``V: H -> L (x) K`` recovered from a dilation (``UD`` or ``U(|phi_R> (x) I_H)``)."""
    if isinstance(dil, IsometricDilation):
        return dil.v
    if isinstance(dil, FreeDilation):
        return dil.u @ dil.d
    if isinstance(dil, InteractingDilation):
        return dil.u @ np.kron(dil.phi_r.reshape(-1, 1), np.eye(dil.dim_in))
    raise TypeError(f"{type(dil).__name__} has no single-step isometry")


def partial_elements(dil) -> list[np.ndarray]:
    """``(<sigma_i| (x) I_K) V`` for an orthonormal basis ``{sigma_i}`` of ``Rng(Sigma)``.

    These are the Kraus operators actually implemented by the dilation.
    """
    v = source_isometry(dil).reshape(dil.dim_l, dil.dim_out, dil.dim_in)
    basis = getattr(dil, "sigma_basis", None)
    if not basis:
        lam, vecs = hermitian_eig(dil.sigma)
        basis = [vecs[:, i] for i in range(int(np.count_nonzero(lam > 0.5)))]
    return [np.einsum("l,lki->ki", s.conj(), v) for s in basis]


def compose_power(op: QuantumOperation, rho, k: int) -> np.ndarray:
    """``E^k(rho)`` by iterating :func:`apply`."""
    out = as_density(rho, op.dim_in)
    for _ in range(k):
        out = apply(op, out)
    return out
