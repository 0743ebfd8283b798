import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entcorr.measures import entanglement_of_formation
from entcorr.qcore import (
    BipartiteSplit,
    CapacityError,
    DomainError,
    bures_distance,
    cc_state,
    haar_pure,
    haar_unitary,
    hellinger_distance,
    hermitian_eig,
    majorizes,
    matrix_sqrt_psd,
    mems_state,
    partial_trace,
    projector,
    purify,
    purity,
    random_density,
    random_spectrum,
    schmidt,
    shannon_entropy,
    spectrum,
    strictly_correlated_cc,
    von_neumann_entropy,
    worker_rng,
    worker_seed,
)

RNG = worker_rng(20240601)

BELL = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def random_state(dim, rng, ancilla=None):
    return random_density(dim, ancilla or dim, rng)


spectra = st.lists(st.floats(0.01, 1.0), min_size=1, max_size=8).map(
    lambda xs: np.sort(np.array(xs))[::-1] / np.sum(xs)
)


class TestHermitianEig:
    def test_identity(self):
        w, _ = hermitian_eig(np.eye(2))
        assert np.allclose(w, [1.0, 1.0])

    def test_diagonal(self):
        w, v = hermitian_eig(np.diag([0.7, 0.3]))
        assert np.allclose(w, [0.7, 0.3])
        assert np.allclose(np.abs(v), np.eye(2))

    def test_pauli_x(self):
        # characteristic polynomial of [[0,1],[1,0]] is l^2 - 1
        w, _ = hermitian_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(w, [1.0, -1.0])

    def test_reconstruction_and_unitarity(self):
        for _ in range(20):
            g = RNG.standard_normal((6, 6)) + 1j * RNG.standard_normal((6, 6))
            m = (g + g.conj().T) / 2
            w, v = hermitian_eig(m)
            assert np.all(np.diff(w) <= 1e-12)
            assert np.max(np.abs((v * w) @ v.conj().T - m)) < 1e-12
            assert np.max(np.abs(v.conj().T @ v - np.eye(6))) < 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSpectrum:
    def test_maximally_mixed(self):
        assert np.allclose(spectrum(np.eye(4) / 4), np.full(4, 0.25))

    def test_pure_projector(self):
        assert np.allclose(spectrum(projector(BELL)), [1.0])

    def test_diagonal(self):
        assert np.allclose(spectrum(np.diag([0.6, 0.4])), [0.6, 0.4])

    def test_unitary_invariance(self):
        for _ in range(10):
            rho = random_state(5, RNG)
            u = haar_unitary(5, RNG)
            p = spectrum(rho)
            q = spectrum(u @ rho @ u.conj().T)
            n = min(p.size, q.size)
            assert np.max(np.abs(p[:n] - q[:n])) < 1e-10


class TestPartialTrace:
    def test_bell_marginal(self):
        red = partial_trace(projector(BELL), (2, 2), keep=1)
        assert np.allclose(red, np.eye(2) / 2)

    def test_product_factorization(self):
        rho_a = random_state(2, RNG)
        rho_b = random_state(3, RNG)
        rho = np.kron(rho_a, rho_b)
        assert np.max(np.abs(partial_trace(rho, (2, 3), keep=1) - rho_a)) < 1e-12
        assert np.max(np.abs(partial_trace(rho, (2, 3), keep=2) - rho_b)) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            partial_trace(np.eye(4) / 4, (2, 3), keep=1)


class TestPurify:
    def test_uniform_qubit_gives_bell_coefficients(self):
        psi = purify(np.eye(2) / 2)
        assert np.allclose(schmidt(psi, (2, 2)), [0.5, 0.5])

    def test_pure_input_stays_product(self):
        psi = purify(projector(haar_pure(3, RNG)))
        assert psi.size == 3  # rank-one ancilla
        assert np.allclose(schmidt(psi, (3, 1)), [1.0])

    def test_spectrum_square_root(self):
        psi = purify(np.diag([0.9, 0.1]))
        s = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
        assert np.allclose(np.sort(s)[::-1], np.sqrt([0.9, 0.1]))

    def test_round_trip(self):
        for dim in (2, 3, 5, 8):
            rho = random_state(dim, RNG)
            psi = purify(rho)
            rank = psi.size // dim
            back = partial_trace(projector(psi), (dim, rank), keep=1)
            assert np.max(np.abs(back - rho)) < 1e-10


class TestSchmidt:
    def test_product(self):
        psi = np.kron(haar_pure(2, RNG), haar_pure(3, RNG))
        assert np.allclose(schmidt(psi, (2, 3)), [1.0])

    def test_bell(self):
        assert np.allclose(schmidt(BELL, (2, 2)), [0.5, 0.5])

    def test_explicit_form(self):
        psi = np.zeros(4, dtype=complex)
        psi[0], psi[3] = np.sqrt(0.8), np.sqrt(0.2)
        assert np.allclose(schmidt(psi, (2, 2)), [0.8, 0.2])

    def test_matches_reduced_spectrum(self):
        for _ in range(10):
            psi = haar_pure(12, RNG)
            p = schmidt(psi, (3, 4))
            q = spectrum(partial_trace(projector(psi), (3, 4), keep=1))
            n = min(p.size, q.size)
            assert np.max(np.abs(p[:n] - q[:n])) < 1e-10


class TestEntropies:
    def test_pure_state_zero(self):
        assert von_neumann_entropy(projector(BELL)) == 0.0

    def test_maximally_mixed(self):
        assert abs(von_neumann_entropy(np.eye(4) / 4) - np.log(4)) < 1e-12

    def test_half_half(self):
        assert abs(von_neumann_entropy(np.diag([0.5, 0.5])) - np.log(2)) < 1e-12

    def test_shannon_and_purity_uniform(self):
        p = np.full(4, 0.25)
        assert abs(shannon_entropy(p) - np.log(4)) < 1e-12
        assert abs(purity(p) - 0.25) < 1e-12


class TestMajorization:
    @given(spectra)
    def test_point_mass_majorizes_everything(self, p):
        assert majorizes(np.array([1.0]), p)

    @given(spectra)
    def test_uniform_is_majorized(self, p):
        d = p.size
        assert majorizes(p, np.full(d, 1.0 / d))

    def test_reflexive(self):
        for _ in range(20):
            p = random_spectrum(5, RNG)
            assert majorizes(p, p)

    def test_transitive_on_comparable_triples(self):
        for _ in range(200):
            p = random_spectrum(4, RNG)
            q = random_spectrum(4, RNG)
            r = random_spectrum(4, RNG)
            if majorizes(p, q) and majorizes(q, r):
                assert majorizes(p, r)

    def test_antisymmetric_up_to_equality(self):
        for _ in range(200):
            p = random_spectrum(4, RNG)
            q = random_spectrum(4, RNG)
            if majorizes(p, q, atol=0.0) and majorizes(q, p, atol=0.0):
                assert np.allclose(p, q)


class TestDistances:
    def test_self_distance_zero(self):
        rho = random_state(4, RNG)
        assert bures_distance(rho, rho) < 1e-7
        assert hellinger_distance(rho, rho) < 1e-7

    def test_orthogonal_pure_states(self):
        a = np.diag([1.0, 0.0]).astype(complex)
        b = np.diag([0.0, 1.0]).astype(complex)
        assert abs(hellinger_distance(a, b) - np.sqrt(2)) < 1e-12
        assert abs(bures_distance(a, b) - np.sqrt(2)) < 1e-12

    def test_commuting_pair_hand_value(self):
        val = bures_distance(np.eye(2) / 2, np.diag([1.0, 0.0]))
        assert abs(val - np.sqrt(2 - 2 * np.sqrt(0.5))) < 1e-12

    def test_commuting_closed_form(self):
        # on diagonal pairs both distances reduce to sqrt(2 - 2 sum sqrt(a_i b_i))
        for _ in range(20):
            a = random_spectrum(4, RNG)
            b = random_spectrum(4, RNG)
            expected = np.sqrt(2 - 2 * np.sum(np.sqrt(a * b)))
            assert abs(bures_distance(np.diag(a), np.diag(b)) - expected) < 1e-10
            assert abs(hellinger_distance(np.diag(a), np.diag(b)) - expected) < 1e-10

    def test_symmetry_and_range(self):
        for _ in range(10):
            rho = random_state(3, RNG)
            sig = random_state(3, RNG)
            for dist in (bures_distance, hellinger_distance):
                d1, d2 = dist(rho, sig), dist(sig, rho)
                assert abs(d1 - d2) < 1e-9
                assert 0.0 <= d1 <= np.sqrt(2) + 1e-12

    def test_matrix_sqrt(self):
        rho = random_state(5, RNG)
        root = matrix_sqrt_psd(rho)
        assert np.max(np.abs(root @ root - rho)) < 1e-10


class TestRandomness:
    def test_haar_pure_dim_one(self):
        psi = haar_pure(1, RNG)
        assert psi.shape == (1,)
        assert abs(abs(psi[0]) - 1.0) < 1e-12

    def test_mean_purity_of_induced_measure(self):
        # E[tr rho^2] = (m + k) / (m k + 1) for the partial trace of a Haar
        # pure state on m x k; for (2, 2) that is 4/5.
        rng = worker_rng(5150)
        n = 30_000
        total = 0.0
        for _ in range(n):
            rho = random_density(2, 2, rng)
            total += np.trace(rho @ rho).real
        assert abs(total / n - 0.8) < 0.01

    def test_random_spectrum_contract(self):
        rng = worker_rng(77)
        for _ in range(100_000):
            p = random_spectrum(4, rng)
            assert p[0] >= p[1] >= p[2] >= p[3] > 0
            assert abs(p.sum() - 1.0) < 1e-12

    def test_worker_streams_distinct_and_reproducible(self):
        a = worker_rng(123, 0).standard_normal(4)
        b = worker_rng(123, 0).standard_normal(4)
        c = worker_rng(123, 1).standard_normal(4)
        assert np.allclose(a, b)
        assert not np.allclose(a, c)
        assert worker_seed(123, 0) != worker_seed(123, 1) != worker_seed(124, 1)


class TestConstructors:
    def test_split_validation(self):
        with pytest.raises(DomainError):
            BipartiteSplit(0, 2)
        assert BipartiteSplit(2, 8).dim == 16

    def test_cc_state_is_diagonal(self):
        joint = np.array([[0.3, 0.2], [0.1, 0.4]])
        rho = cc_state(joint, 2, 2)
        assert np.allclose(np.diag(rho).real, [0.3, 0.2, 0.1, 0.4])
        assert np.allclose(rho, np.diag(np.diag(rho)))

    def test_strictly_correlated_product_case(self):
        rho = strictly_correlated_cc(np.array([1.0]), 2, 2)
        assert np.allclose(rho, np.diag([1.0, 0.0, 0.0, 0.0]))

    def test_strictly_correlated_marginal(self):
        p = np.array([0.5, 0.3, 0.2])
        rho = strictly_correlated_cc(p, 3, 3)
        assert np.allclose(spectrum(partial_trace(rho, (3, 3), keep=1)), p)

    def test_mems_single_vector_is_bell(self):
        rho = mems_state(np.array([1.0]), (2, 2))
        assert np.allclose(rho, projector(BELL))
        assert abs(entanglement_of_formation(rho) - np.log(2)) < 1e-12

    def test_mems_marginals(self):
        rho = mems_state(np.array([0.5, 0.5]), (2, 4))
        assert np.allclose(spectrum(rho), [0.5, 0.5])
        # every eigenvector is maximally entangled across (2, 4)
        w, v = np.linalg.eigh(rho)
        for k in np.nonzero(w > 1e-12)[0]:
            assert np.allclose(schmidt(v[:, k], (2, 4)), [0.5, 0.5])
        assert np.allclose(
            partial_trace(rho, (2, 4), keep=1), np.eye(2) / 2
        )

    def test_mems_capacity(self):
        with pytest.raises(CapacityError):
            mems_state(np.array([0.5, 0.5]), (2, 2))
