import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdil.errors import DimensionError, ValidationError
from qdil.linalg import (
    MAX_DIM,
    complete_to_unitary,
    cyclic_ancilla_permutation,
    hermitian_eig,
    kron,
    partial_trace_first,
    partial_trace_second,
)
from qdil.verify import ginibre, random_density, random_isometry, rng_for

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestKron:
    def test_identities(self):
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))

    def test_diagonal(self):
        np.testing.assert_array_equal(kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))

    def test_scalar_factor(self):
        np.testing.assert_array_equal(kron([[0, 1], [1, 0]], [[2]]), [[0, 2], [2, 0]])

    def test_index_convention(self, rng):
        a, b = ginibre(2, 3, rng), ginibre(3, 2, rng)
        out = kron(a, b)
        for i, j, k, l in itertools.product(range(2), range(3), range(3), range(2)):
            assert abs(out[i * 3 + k, j * 2 + l] - a[i, j] * b[k, l]) <= 1e-15

    def test_overflow(self):
        with pytest.raises(DimensionError):
            kron(np.eye(MAX_DIM // 2 + 1), np.eye(2))

    @given(seeds)
    @settings(max_examples=40, deadline=None)
    def test_associative_exact_on_integer_entries(self, seed):
        # small Gaussian integers multiply exactly, so evaluation order cannot matter
        rng = rng_for(seed)
        a, b, c = (
            rng.integers(-4, 5, (r, s)) + 1j * rng.integers(-4, 5, (r, s))
            for r, s in rng.integers(1, 4, (3, 2))
        )
        np.testing.assert_array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

    @given(seeds)
    @settings(max_examples=40, deadline=None)
    def test_associative_floats(self, seed):
        rng = rng_for(seed)
        a, b, c = (ginibre(int(r), int(s), rng) for r, s in rng.integers(1, 4, (3, 2)))
        np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), rtol=1e-14, atol=1e-15)


class TestPartialTrace:
    def test_product_state(self, rng):
        phi = ginibre(3, 1, rng)
        phi /= np.linalg.norm(phi)
        rho = random_density(2, rng)
        out = partial_trace_first(kron(phi @ phi.conj().T, rho), 3, 2)
        np.testing.assert_allclose(out, rho, atol=1e-15)

    def test_identity(self):
        np.testing.assert_array_equal(partial_trace_first(np.eye(4), 2, 2), 2 * np.eye(2))

    def test_bell_projector(self):
        # |Phi+> = (|00> + |11>)/sqrt 2 has entries 1/2 at (0,0), (0,3), (3,0), (3,3)
        bell = np.zeros((4, 4))
        bell[np.ix_([0, 3], [0, 3])] = 0.5
        np.testing.assert_allclose(partial_trace_first(bell, 2, 2), np.eye(2) / 2)

    def test_side_mismatch(self):
        with pytest.raises(DimensionError):
            partial_trace_first(np.eye(5), 2, 2)

    @given(seeds)
    @settings(max_examples=50, deadline=None)
    def test_product_of_densities(self, seed):
        rng = rng_for(seed)
        da, db = (int(x) for x in rng.integers(1, 5, 2))
        a, b = random_density(da, rng), random_density(db, rng)
        m = kron(a, b)
        np.testing.assert_allclose(partial_trace_first(m, da, db), np.trace(a) * b, atol=1e-12)
        np.testing.assert_allclose(partial_trace_second(m, da, db), np.trace(b) * a, atol=1e-12)
        assert abs(np.trace(partial_trace_first(m, da, db)) - np.trace(m)) < 1e-12


class TestHermitianEig:
    def test_diagonal(self):
        lam, v = hermitian_eig(np.diag([0.25, 0.75]))
        np.testing.assert_allclose(lam, [0.75, 0.25])
        np.testing.assert_allclose(v, [[0, 1], [1, 0]], atol=1e-15)

    def test_rank_one(self):
        # characteristic polynomial x^2 - x = 0
        lam, v = hermitian_eig(0.5 * np.ones((2, 2)))
        np.testing.assert_allclose(lam, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(v[:, 0], np.ones(2) / math.sqrt(2))

    def test_degenerate_identity_is_canonical(self):
        lam, v = hermitian_eig(np.eye(3))
        np.testing.assert_allclose(lam, [1, 1, 1])
        np.testing.assert_allclose(v, np.eye(3), atol=1e-15)

    def test_tie_break_independent_of_rotation(self, rng):
        # the same degenerate matrix written in two unitary frames gives identical vectors
        u = random_isometry(4, 4, rng)
        h = u @ np.diag([2.0, 2.0, 1.0, 0.0]) @ u.conj().T
        w = random_isometry(2, 2, rng)
        rotated = u.copy()
        rotated[:, :2] = u[:, :2] @ w
        h2 = rotated @ np.diag([2.0, 2.0, 1.0, 0.0]) @ rotated.conj().T
        _, v1 = hermitian_eig(h)
        _, v2 = hermitian_eig(h2)
        np.testing.assert_allclose(v1, v2, atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    @given(seeds)
    @settings(max_examples=60, deadline=None)
    def test_reconstruction(self, seed):
        rng = rng_for(seed)
        n = int(rng.integers(1, 17))
        g = ginibre(n, n, rng)
        h = g + g.conj().T
        lam, v = hermitian_eig(h)
        assert np.all(np.diff(lam) <= 0)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-9)
        err = np.linalg.norm(h - v @ np.diag(lam) @ v.conj().T)
        assert err <= 1e-10 * np.linalg.norm(h)

    def test_deterministic(self, rng):
        g = ginibre(6, 6, rng)
        h = g + g.conj().T
        a, b = hermitian_eig(h), hermitian_eig(h.copy())
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])


class TestCompleteToUnitary:
    def test_basis_column(self):
        np.testing.assert_array_equal(complete_to_unitary([[1], [0]]), np.eye(2))

    def test_square_unitary_unchanged(self, rng):
        u = random_isometry(3, 3, rng)
        np.testing.assert_array_equal(complete_to_unitary(u), u)

    def test_hand_gram_schmidt(self):
        # e1 - t<t|e1> = (1, -1, 0)/2 -> normalized; e2 is then dependent; e3 survives
        t = np.array([[1], [1], [0]]) / math.sqrt(2)
        u = complete_to_unitary(t)
        expected = np.array([[1, 1, 0], [1, -1, 0], [0, 0, math.sqrt(2)]]) / math.sqrt(2)
        np.testing.assert_allclose(u, expected, atol=1e-15)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-15)

    def test_rejects_non_isometry(self):
        with pytest.raises(ValidationError):
            complete_to_unitary([[1.0], [1.0]])

    def test_hundred_random_isometries(self):
        for seed in range(100):
            rng = rng_for(seed, 5)
            rows = int(rng.integers(1, 17))
            cols = int(rng.integers(1, rows + 1))
            t = random_isometry(rows, cols, rng)
            u = complete_to_unitary(t)
            assert np.linalg.norm(u.conj().T @ u - np.eye(rows)) <= 1e-10
            np.testing.assert_array_equal(u[:, :cols], t)
            assert np.linalg.norm(t.conj().T @ u[:, cols:]) <= 1e-10


def _swap_digits(state, i, j):
    s = list(state)
    s[i], s[j] = s[j], s[i]
    return tuple(s)


class TestCyclicPermutation:
    def test_single_copy(self):
        np.testing.assert_array_equal(cyclic_ancilla_permutation(1, 3, 2), np.eye(6))

    def test_two_qubit_swap(self):
        swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        np.testing.assert_array_equal(cyclic_ancilla_permutation(2, 2, 1), swap)

    def test_three_qubits_by_enumeration(self):
        # E_{1,3} E_{2,3}: apply E_{2,3} first, then E_{1,3}, to every basis label
        p = cyclic_ancilla_permutation(3, 2, 1)
        for state in itertools.product(range(2), repeat=3):
            image = _swap_digits(_swap_digits(state, 1, 2), 0, 2)
            col = np.zeros(8)
            col[int("".join(map(str, state)), 2)] = 1
            row = int("".join(map(str, image)), 2)
            out = p @ col
            assert out[row] == 1 and np.count_nonzero(out) == 1
        # net effect is the cyclic shift (a, b, c) -> (b, c, a)
        assert _swap_digits(_swap_digits((0, 1, 2), 1, 2), 0, 2) == (1, 2, 0)

    @pytest.mark.parametrize("n,dim_r,dim_h", [(1, 2, 3), (2, 3, 2), (3, 2, 2), (4, 2, 1), (3, 3, 1)])
    def test_permutation_matrix(self, n, dim_r, dim_h):
        p = cyclic_ancilla_permutation(n, dim_r, dim_h)
        assert set(np.unique(p)) <= {0, 1}
        np.testing.assert_array_equal(p.sum(axis=0), 1)
        np.testing.assert_array_equal(p.sum(axis=1), 1)
