import numpy as np
import pytest

from spinwitness.qcore import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    PureState,
    QubitBasis,
    basis_from_bloch,
    bloch_vector,
    embed_site_operator,
    hermitian_eig,
    make_ghz,
    partial_trace_keep_site,
    partial_trace_remove_site,
    partial_transpose_site,
    sample_qubit_basis,
    schmidt_qubit,
    trace_distance,
    trace_norm,
)
from conftest import haar_state, random_density

UP_Y = np.array([1.0, 1.0j]) / np.sqrt(2.0)
UP_X = np.array([1.0, 1.0]) / np.sqrt(2.0)
DOWN_X = np.array([1.0, -1.0]) / np.sqrt(2.0)


class TestEmbedSiteOperator:
    def test_single_site_is_identity_embedding(self):
        assert np.array_equal(embed_site_operator(SIGMA_Y, 1, 1), SIGMA_Y)

    def test_tensor_placement(self):
        expected = np.kron(np.eye(2), SIGMA_X)
        assert np.array_equal(embed_site_operator(SIGMA_X, 2, 2), expected)

    def test_site_one_is_most_significant_bit(self):
        # enumerate all 8 basis labels by their bit strings: the sigma_z
        # eigenvalue at site s is fixed by character s-1 of the label
        op = embed_site_operator(SIGMA_Z, 1, 3)
        expected = np.diag([1.0 if format(i, "03b")[0] == "0" else -1.0
                            for i in range(8)])
        assert np.allclose(op, expected)
        state = np.zeros(8)
        state[0b100] = 1.0
        assert np.allclose(op @ state, -state)

    def test_site_out_of_range(self):
        with pytest.raises(ValueError):
            embed_site_operator(SIGMA_X, 0, 2)
        with pytest.raises(ValueError):
            embed_site_operator(SIGMA_X, 3, 2)


class TestPartialTrace:
    def test_product_state(self):
        psi = np.kron(UP_Y, UP_Y)
        red = partial_trace_keep_site(psi, 1)
        assert np.allclose(red.entries, np.outer(UP_Y, UP_Y.conj()), atol=1e-12)

    def test_ghz_marginal_maximally_mixed(self):
        red = partial_trace_keep_site(make_ghz(3, 0.0), 1)
        assert np.allclose(red.entries, np.eye(2) / 2.0, atol=1e-12)

    def test_against_index_loop_oracle_n2(self):
        # ground state of a 2-spin chain, reduced by an explicit block sum
        from spinwitness.model import SpinChainParams, ground_state, spectrum

        gs = ground_state(spectrum(SpinChainParams(2, 1.0, 1.0, 0.5)))
        rho = np.outer(gs.amplitudes, gs.amplitudes.conj())
        oracle = np.zeros((2, 2), dtype=complex)
        for a in range(2):
            for b in range(2):
                for r in range(2):
                    oracle[a, b] += rho[(a << 1) | r, (b << 1) | r]
        red = partial_trace_keep_site(rho, 1)
        assert np.allclose(red.entries, oracle, atol=1e-12)

    def test_remove_site_complements_keep(self, rng):
        psi = haar_state(3, rng)
        rest = partial_trace_remove_site(psi, 2)
        assert rest.entries.shape == (4, 4)
        assert abs(np.trace(rest.entries) - 1.0) < 1e-12

    def test_site_out_of_range(self):
        with pytest.raises(ValueError):
            partial_trace_keep_site(np.eye(4) / 4.0, 3)


class TestPartialTranspose:
    def test_product_state_stays_psd(self, rng):
        psi = np.kron(UP_Y, DOWN_X)
        rho = np.outer(psi, psi.conj())
        pt = partial_transpose_site(rho, 1)
        evals = np.linalg.eigvalsh(pt)
        assert np.allclose(np.sort(evals), np.sort(np.linalg.eigvalsh(rho)), atol=1e-12)
        assert evals.min() > -1e-12

    def test_bell_state_eigenvalues(self):
        bell = np.zeros(4, dtype=complex)
        bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
        pt = partial_transpose_site(np.outer(bell, bell.conj()), 1)
        assert np.allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_involution_exact(self, rng):
        rho = random_density(3, rng)
        assert np.array_equal(partial_transpose_site(partial_transpose_site(rho, 2), 2), rho)

    def test_preserves_trace_and_hermiticity(self, rng):
        rho = random_density(3, rng)
        pt = partial_transpose_site(rho, 1)
        assert abs(np.trace(pt) - 1.0) < 1e-12
        assert np.abs(pt - pt.conj().T).max() < 1e-12


class TestTraceNorm:
    def test_identity(self):
        assert trace_norm(np.eye(4)) == pytest.approx(4.0, abs=1e-12)

    def test_diagonal(self):
        assert trace_norm(np.diag([0.5, -0.5])) == pytest.approx(1.0, abs=1e-12)

    def test_hermitian_equals_sum_abs_eigenvalues(self, rng):
        for _ in range(20):
            a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            h = (a + a.conj().T) / 2.0
            oracle = np.abs(np.linalg.eigvalsh(h)).sum()
            assert trace_norm(h) == pytest.approx(oracle, abs=1e-10)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            trace_norm(np.ones((2, 3)))


class TestTraceDistance:
    def test_identical_states(self, rng):
        rho = random_density(2, rng)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        a = np.diag([1.0, 0.0])
        b = np.diag([0.0, 1.0])
        assert trace_distance(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_half_for_pure_vs_mixed(self):
        assert trace_distance(np.diag([1.0, 0.0]), np.eye(2) / 2.0) == pytest.approx(0.5, abs=1e-12)

    def test_symmetry_and_triangle(self, rng):
        a, b, c = (random_density(2, rng) for _ in range(3))
        assert trace_distance(a, b) == pytest.approx(trace_distance(b, a), abs=1e-12)
        assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12

    def test_contractive_under_partial_trace(self, rng):
        for n in (2, 3, 4):
            for _ in range(5):
                rho, sigma = random_density(n, rng), random_density(n, rng)
                full = trace_distance(rho, sigma)
                site = int(rng.integers(1, n + 1))
                reduced = trace_distance(partial_trace_keep_site(rho, site),
                                         partial_trace_keep_site(sigma, site))
                assert reduced <= full + 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(np.eye(2) / 2.0, np.eye(4) / 4.0)


class TestHermitianEig:
    def test_sigma_y(self):
        dec = hermitian_eig(SIGMA_Y)
        assert np.allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-12)

    def test_diagonal_permutation(self):
        dec = hermitian_eig(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(dec.eigenvalues, [1.0, 2.0, 3.0], atol=1e-12)
        # eigenvectors are standard basis vectors with positive entries
        expected = np.zeros((3, 3))
        expected[1, 0] = expected[2, 1] = expected[0, 2] = 1.0
        assert np.allclose(dec.eigenvectors, expected, atol=1e-12)

    def test_free_spin_hamiltonian_levels(self):
        from spinwitness.model import SpinChainParams, build_hamiltonian

        h = build_hamiltonian(SpinChainParams(2, 0.0, 1.0, 1.0))
        assert np.allclose(hermitian_eig(h).eigenvalues, [-2.0, 0.0, 0.0, 2.0], atol=1e-12)

    def test_reconstruction_and_unitarity(self, rng):
        for _ in range(10):
            a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
            h = (a + a.conj().T) / 2.0
            dec = hermitian_eig(h)
            assert np.abs(dec.reconstruct() - h).max() < 1e-9
            v = dec.eigenvectors
            assert np.abs(v.conj().T @ v - np.eye(12)).max() < 1e-10

    def test_repeated_calls_bit_identical(self, rng):
        a = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
        h = (a + a.conj().T) / 2.0
        d1, d2 = hermitian_eig(h), hermitian_eig(h)
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.eigenvectors, d2.eigenvectors)

    def test_rejects_non_hermitian(self, rng):
        with pytest.raises(ValueError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSchmidt:
    def test_product_state(self):
        psi = np.kron(UP_Y, np.kron(UP_X, DOWN_X))
        sd = schmidt_qubit(psi, 1)
        assert sd.lambda0 == pytest.approx(1.0, abs=1e-12)
        assert sd.lambda1 == pytest.approx(0.0, abs=1e-12)
        assert np.abs(sd.reconstruct() - psi).max() < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_ghz_balanced(self, n):
        sd = schmidt_qubit(make_ghz(n, 0.7), 1)
        assert sd.lambda0 == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-10)
        assert sd.lambda1 == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-10)

    def test_already_schmidt_form(self):
        psi = np.sqrt(0.8) * np.kron(UP_X, UP_X) + np.sqrt(0.2) * np.kron(DOWN_X, DOWN_X)
        sd = schmidt_qubit(psi, 1)
        assert sd.lambda0 == pytest.approx(np.sqrt(0.8), abs=1e-12)
        assert sd.lambda1 == pytest.approx(np.sqrt(0.2), abs=1e-12)
        # local basis is the sigma_x eigenbasis up to phase
        assert abs(np.vdot(UP_X, sd.local_basis.vec0)) == pytest.approx(1.0, abs=1e-10)
        assert abs(np.vdot(DOWN_X, sd.local_basis.vec1)) == pytest.approx(1.0, abs=1e-10)

    def test_reconstruction_on_haar_states(self, rng):
        for n in (2, 3, 4, 5, 6):
            for _ in range(20):
                psi = haar_state(n, rng)
                site = int(rng.integers(1, n + 1))
                sd = schmidt_qubit(psi, site)
                arr = np.moveaxis(sd.reconstruct().reshape((2,) * n), 0, site - 1).ravel()
                assert np.abs(arr - psi.amplitudes).max() < 1e-10

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            schmidt_qubit(np.ones(4), 1)


class TestBasisSampling:
    def test_y_axis_gives_sigma_y_eigenbasis(self):
        basis = basis_from_bloch(0.0, np.pi / 2.0)
        assert abs(np.vdot(basis.vec0, SIGMA_Y @ basis.vec0) - 1.0) < 1e-12
        assert abs(np.vdot(basis.vec1, SIGMA_Y @ basis.vec1) + 1.0) < 1e-12

    def test_samples_orthonormal(self, rng):
        for _ in range(50):
            b = sample_qubit_basis(rng)
            assert abs(np.vdot(b.vec0, b.vec0) - 1.0) < 1e-12
            assert abs(np.vdot(b.vec0, b.vec1)) < 1e-12

    def test_mean_bloch_vector_is_small(self):
        rng = np.random.default_rng(11)
        total = np.zeros(3)
        for _ in range(10_000):
            total += bloch_vector(sample_qubit_basis(rng).vec0)
        assert np.linalg.norm(total / 10_000) < 0.05

    def test_same_seed_same_stream(self):
        streams = [np.random.default_rng(42) for _ in range(2)]
        for _ in range(10):
            b1 = sample_qubit_basis(streams[0])
            b2 = sample_qubit_basis(streams[1])
            assert np.array_equal(b1.vec0, b2.vec0)
            assert np.array_equal(b1.vec1, b2.vec1)


class TestMakeGhz:
    def test_two_site_amplitudes(self):
        g = make_ghz(2, 0.0)
        expected = np.zeros(4, dtype=complex)
        expected[0] = expected[3] = 1.0 / np.sqrt(2.0)
        assert np.allclose(g.amplitudes, expected, atol=1e-12)

    def test_negativity_half(self):
        from spinwitness.protocol import negativity

        assert negativity(make_ghz(3, np.pi), 1) == pytest.approx(0.5, abs=1e-10)

    @pytest.mark.parametrize("phase", [0.0, 0.9, np.pi, 4.2])
    def test_marginal_is_maximally_mixed(self, phase):
        g = make_ghz(4, phase)
        for site in range(1, 5):
            red = partial_trace_keep_site(g, site)
            assert np.allclose(red.entries, np.eye(2) / 2.0, atol=1e-12)

    def test_rejects_single_site(self):
        with pytest.raises(ValueError):
            make_ghz(1, 0.0)


class TestDomainTypes:
    def test_pure_state_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]), 1)

    def test_pure_state_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 0.0, 0.0]), 2)

    def test_density_matrix_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]), 1)

    def test_density_matrix_rejects_negative(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]), 1)

    def test_qubit_basis_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            QubitBasis(np.array([1.0, 0.0]), np.array([1.0, 0.0]))

    def test_arrays_are_locked(self, rng):
        psi = haar_state(2, rng)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 1.0
