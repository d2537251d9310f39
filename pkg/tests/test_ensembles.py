import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmtlab import ensembles, matcore
from rmtlab.ensembles import EnsembleSpec
from rmtlab.errors import InvalidSpec
from rmtlab.rng import RngStream


def stream(tag, n=0):
    return RngStream(2024, tag, n)


class TestSpecValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(kind="Wishart", n=8, m=4),
        dict(kind="HaarPower", n=4, m=5),
        dict(kind="HaarPower", n=4, m=0),
        dict(kind="Compression", n=4, k=5),
        dict(kind="QuantumSpinGlass", n=2),
        dict(kind="QuantumSpinGlass", n=14),
        dict(kind="Haar", n=3, group="GL"),
        dict(kind="RandomizedSum", n=3, group="Sp"),
        dict(kind="Nope", n=3),
        dict(kind="GUE", n=0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidSpec):
            EnsembleSpec(**kwargs)

    def test_with_n_keeps_ratios(self):
        assert EnsembleSpec("Wishart", 64, m=128).with_n(256).m == 512
        assert EnsembleSpec("Compression", 64, k=32).with_n(128).k == 64
        assert EnsembleSpec("HaarPower", 64, m=4).with_n(128).m == 4

    def test_tag_distinguishes_parameters(self):
        assert EnsembleSpec("Haar", 4, group="O").tag != EnsembleSpec("Haar", 4, group="U").tag


class TestWigner:
    def test_gue_is_hermitian(self):
        M = ensembles.sample_wigner(EnsembleSpec("GUE", 2), 1)
        assert M[0, 1] == np.conj(M[1, 0])
        assert M[0, 0].imag == 0 and M[1, 1].imag == 0

    def test_determinism(self):
        spec = EnsembleSpec("GUE", 5)
        a = ensembles.sample(spec, stream("gue", 5))
        b = ensembles.sample(spec, stream("gue", 5))
        assert np.array_equal(a, b)

    def test_gue_second_moment(self):
        # E (1/n) sum lambda^2 = E (1/n) ||M||_HS^2 = 1; the estimator has sd 0.18
        g = stream("gue-moment").generator()
        spec = EnsembleSpec("GUE", 8)
        vals = [matcore.hs_norm(ensembles.sample_wigner(spec, g)) ** 2 / 8 for _ in range(100_000)]
        assert abs(np.mean(vals) - 1.0) <= 0.01

    def test_gue_first_moment(self):
        g = stream("gue-mean").generator()
        spec = EnsembleSpec("GUE", 8)
        vals = [np.trace(ensembles.sample_wigner(spec, g)).real / 8 for _ in range(20_000)]
        assert abs(np.mean(vals)) <= 0.01

    @pytest.mark.parametrize("literal,diag,off", [(False, 2.0, 1.0), (True, 1.0, 1 / math.sqrt(2))])
    def test_goe_variances(self, literal, diag, off):
        n = 6
        spec = EnsembleSpec("GOE", n, paper_literal_goe=literal)
        g = stream("goe").generator()
        Ms = np.array([ensembles.sample_wigner(spec, g) for _ in range(20_000)])
        assert np.isrealobj(Ms)
        assert abs(Ms[:, 0, 0].var() * n - diag) <= 0.05 * diag
        assert abs(Ms[:, 0, 1].var() * n - off) <= 0.05 * off

    @pytest.mark.parametrize("field", ["complex", "real"])
    def test_uniform_entries_match_variance(self, field):
        n = 5
        spec = EnsembleSpec("WignerGeneric", n, entry="uniform", field=field)
        g = stream("wg").generator()
        Ms = np.array([ensembles.sample_wigner(spec, g) for _ in range(20_000)])
        gauss = EnsembleSpec("GUE" if field == "complex" else "GOE", n)
        Gs = np.array([ensembles.sample_wigner(gauss, g) for _ in range(20_000)])
        assert abs(np.mean(np.abs(Ms[:, 0, 1]) ** 2) / np.mean(np.abs(Gs[:, 0, 1]) ** 2) - 1) < 0.05
        assert np.max(np.abs(Ms)) < 3.0

    def test_unitary_invariance_of_spectral_moments(self):
        n, reps = 8, 10_000
        spec = EnsembleSpec("GUE", n)
        V = ensembles.sample_haar("U", n, 99)
        g1, g2 = stream("inv-a").generator(), stream("inv-b").generator()
        a = np.array([np.linalg.eigvalsh(V @ ensembles.sample_wigner(spec, g1) @ V.conj().T)
                      for _ in range(reps)])
        b = np.array([np.linalg.eigvalsh(ensembles.sample_wigner(spec, g2)) for _ in range(reps)])
        for k in range(1, 5):
            ma, mb = (a ** k).mean(axis=1), (b ** k).mean(axis=1)
            se = math.sqrt(ma.var() / reps + mb.var() / reps)
            assert abs(ma.mean() - mb.mean()) <= 3 * se

    def test_vmv_entry_law(self):
        n, reps = 6, 20_000
        spec = EnsembleSpec("GUE", n)
        V = ensembles.sample_haar("U", n, 5)
        g = stream("vmv").generator()
        d = np.array([(V @ ensembles.sample_wigner(spec, g) @ V.conj().T)[0, 0].real for _ in range(reps)])
        assert abs(d.var() * n - 1.0) < 0.05


class TestWishart:
    def test_psd_and_shapes(self):
        S, X = ensembles.sample_wishart(EnsembleSpec("Wishart", 5, m=9), 3)
        assert X.shape == (9, 5) and S.shape == (5, 5)
        assert np.min(matcore.hermitian_eigenvalues(S)) >= -1e-10
        assert np.allclose(S, X.conj().T @ X / 9)

    def test_full_rank_when_square(self):
        S, _ = ensembles.sample_wishart(EnsembleSpec("Wishart", 6, m=6), 4)
        assert np.min(matcore.hermitian_eigenvalues(S)) > 0

    @pytest.mark.parametrize("field", ["complex", "real"])
    def test_mean_trace(self, field):
        spec = EnsembleSpec("Wishart", 8, m=8, field=field)
        g = stream("wishart-" + field).generator()
        vals = [np.trace(ensembles.sample_wishart(spec, g)[0]).real / 8 for _ in range(100_000)]
        assert abs(np.mean(vals) - 1.0) <= 0.01

    @given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**32 - 1), st.floats(1e-6, 2.0))
    def test_local_lipschitz(self, n, extra, seed, eps):
        g = np.random.default_rng(seed)
        m = n + extra
        X = g.standard_normal((m, n)) + 1j * g.standard_normal((m, n))
        Y = X + eps * (g.standard_normal((m, n)) + 1j * g.standard_normal((m, n)))
        lhs = matcore.hs_distance(X.conj().T @ X / m, Y.conj().T @ Y / m)
        rhs = (matcore.op_norm(X) + matcore.op_norm(Y)) * matcore.hs_distance(X, Y) / m
        assert lhs <= rhs + 1e-9


class TestHaar:
    @pytest.mark.parametrize("group", ensembles.GROUPS)
    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_unitary(self, group, n):
        U = ensembles.sample_haar(group, n, stream(group, n))
        size = 2 * n if group == "Sp" else n
        assert U.shape == (size, size)
        assert ensembles.unitarity_defect(U) <= 1e-10 * size

    def test_special_groups(self):
        for seed in range(30):
            assert abs(np.linalg.det(ensembles.sample_haar("SO", 3, seed)) - 1) < 1e-12
            assert abs(np.linalg.det(ensembles.sample_haar("SU", 4, seed)) - 1) < 1e-12

    def test_symplectic_form_preserved(self):
        U = ensembles.sample_haar("Sp", 4, 8)
        J = ensembles.symplectic_form(4)
        assert np.allclose(U.T @ J @ U, J, atol=1e-12)

    def test_trace_second_moment(self):
        g = stream("haar-trace").generator()
        vals = [abs(np.trace(ensembles.sample_haar("U", 6, g))) ** 2 for _ in range(100_000)]
        assert abs(np.mean(vals) - 1.0) <= 0.02

    def test_trace_second_moment_n1(self):
        assert abs(abs(np.trace(ensembles.sample_haar("U", 1, 0))) ** 2 - 1) < 1e-14

    def test_orthogonal_mean_trace_is_zero(self):
        g = stream("haar-o").generator()
        vals = [np.trace(ensembles.sample_haar("O", 5, g)) for _ in range(20_000)]
        assert abs(np.mean(vals)) < 0.03


class TestPowers:
    def test_power_one_is_haar(self):
        a = ensembles.sample_haar_power("U", 6, 1, stream("p", 6))
        b = ensembles.sample_haar("U", 6, stream("p", 6))
        assert np.array_equal(a, b)

    def test_squares(self):
        M = ensembles.sample_haar("U", 8, stream("sq", 8))
        M2 = ensembles.sample_haar_power("U", 8, 2, stream("sq", 8))
        ev = matcore.general_eigenvalues(M) ** 2
        ev2 = matcore.general_eigenvalues(M2)
        assert np.max([np.min(np.abs(ev2 - e)) for e in ev]) < 1e-10

    def test_u1_full_power(self):
        M = ensembles.sample_haar_power("U", 1, 1, 3)
        assert abs(abs(M[0, 0]) - 1) < 1e-14

    def test_invalid_exponent(self):
        with pytest.raises(InvalidSpec):
            ensembles.sample_haar_power("U", 3, 4, 0)


class TestSumsAndCompressions:
    def test_identity_rotation(self):
        A, B = np.diag([1.0, 2.0]), np.diag([0.5, -1.0])
        assert np.allclose(ensembles.randomized_sum(A, B, np.eye(2)), A + B)

    def test_zero_a(self):
        B = np.diag([0.5, -1.0])
        U = ensembles.sample_haar("U", 2, 0)
        assert np.allclose(ensembles.randomized_sum(np.zeros((2, 2)), B, U), B)

    @given(st.integers(1, 10), st.integers(0, 2**32 - 1))
    def test_trace_invariance(self, n, seed):
        g = np.random.default_rng(seed)
        A = np.diag(g.standard_normal(n))
        B = np.diag(g.standard_normal(n))
        U = ensembles.sample_haar("U", n, g)
        M = ensembles.randomized_sum(A, B, U)
        scale = matcore.op_norm(A) + matcore.op_norm(B)
        assert abs(np.trace(M) - np.trace(A) - np.trace(B)) <= 1e-9 * n * scale
        assert np.allclose(M, M.conj().T)

    @given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(1e-6, 1.0))
    def test_sum_lipschitz(self, n, seed, eps):
        g = np.random.default_rng(seed)
        X = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
        A, B = (X + X.conj().T) / 2, np.diag(g.standard_normal(n))
        U = ensembles.sample_haar("U", n, g)
        w, Q = np.linalg.eigh(eps * (X + X.conj().T))
        V = U @ (Q * np.exp(1j * w)) @ Q.conj().T
        lhs = matcore.hs_distance(ensembles.randomized_sum(A, B, U), ensembles.randomized_sum(A, B, V))
        assert lhs <= 2 * matcore.op_norm(A) * matcore.hs_distance(U, V) + 1e-9

    def test_full_compression(self):
        A = np.diag([1.0, -2.0, 3.0])
        assert np.allclose(ensembles.compress(A, np.eye(3), 3), A)

    def test_rank_one_compression(self):
        U = ensembles.sample_haar("U", 4, 1)
        A = np.diag([1.0, -1.0, 2.0, 0.5])
        C = ensembles.compress(A, U, 1)
        assert C.shape == (1, 1)
        assert abs(C[0, 0].imag) <= 1e-12
        assert np.isclose(C[0, 0].real, (U @ A @ U.conj().T)[0, 0].real)

    def test_interlacing(self):
        n = 7
        A = np.diag(np.linspace(-1, 1, n))
        U = ensembles.sample_haar("U", n, 11)
        a = matcore.hermitian_eigenvalues(A)
        c = matcore.hermitian_eigenvalues(ensembles.compress(A, U, n - 1))
        assert np.all(a[:-1] <= c + 1e-12) and np.all(c <= a[1:] + 1e-12)

    def test_invalid_rank(self):
        with pytest.raises(InvalidSpec):
            ensembles.compress(np.eye(3), np.eye(3), 0)

    def test_ingredients(self):
        assert np.array_equal(ensembles.ingredient_matrix("signs", 4), np.diag([1.0, 1, -1, -1]))
        assert np.allclose(ensembles.ingredient_matrix("equispaced", 3), np.diag([-1.0, 0, 1]))
        assert np.array_equal(ensembles.ingredient_matrix("zero", 2), np.zeros((2, 2)))
        with pytest.raises(InvalidSpec):
            ensembles.ingredient_matrix("ones", 2)


class TestSpinGlass:
    def test_traceless_and_hermitian(self):
        H = ensembles.sample_qsg(4, 0)
        assert H.shape == (16, 16)
        assert abs(np.trace(H)) < 1e-12
        assert np.allclose(H, H.conj().T)

    def test_pauli_words_are_hs_orthogonal(self):
        nq = 3
        words = []
        for j in range(nq):
            for a in range(3):
                for b in range(3):
                    x = np.zeros(9 * nq)
                    x[9 * j + 3 * a + b] = 1.0
                    words.append(ensembles.qsg_hamiltonian(x, nq) * 3 * math.sqrt(nq))
        G = np.array([[np.vdot(u, v) for v in words] for u in words])
        assert np.allclose(G, 2 ** nq * np.eye(9 * nq))

    @given(st.integers(3, 7), st.integers(0, 2**32 - 1))
    def test_lipschitz_equality(self, nq, seed):
        g = np.random.default_rng(seed)
        x, y = g.standard_normal(9 * nq), g.standard_normal(9 * nq)
        lhs = matcore.hs_distance(ensembles.qsg_hamiltonian(x, nq), ensembles.qsg_hamiltonian(y, nq))
        rhs = ensembles.qsg_lipschitz_constant(nq) * np.linalg.norm(x - y)
        assert abs(lhs / rhs - 1) <= 1e-12

    def test_second_moment(self):
        g = stream("qsg-moment").generator()
        vals = [np.mean(np.linalg.eigvalsh(ensembles.sample_qsg(4, g)) ** 2) for _ in range(1000)]
        assert abs(np.mean(vals) - 1.0) <= 0.05

    def test_qubit_range(self):
        with pytest.raises(InvalidSpec):
            ensembles.sample_qsg(2, 0)


class TestGinibre:
    def test_entry_variance(self):
        g = stream("gin").generator()
        vals = [matcore.hs_norm(ensembles.sample_ginibre(16, g)) ** 2 / 256 for _ in range(10_000)]
        assert abs(np.mean(vals) - 1.0) <= 0.01

    def test_mean_trace(self):
        g = stream("gin-tr").generator()
        vals = [np.trace(ensembles.sample_ginibre(16, g)) for _ in range(10_000)]
        # trace ~ complex normal with E|tr|^2 = 16: 4 standard errors
        assert abs(np.mean(vals)) <= 4 * 4 / 100

    def test_normalized_spectrum_in_disc(self):
        spec = EnsembleSpec("Ginibre", 256)
        for rep in range(5):
            z = ensembles.sample_spectrum(spec, stream("gin-disc", 256).child(rep=rep))
            assert np.max(np.abs(z)) < 1.5


class TestSpectralMeasure:
    def test_identity(self):
        mu = ensembles.spectral_measure(np.eye(3))
        assert np.allclose(mu.atoms, 1) and math.isclose(mu.weight, 1 / 3)

    def test_diagonal(self):
        assert np.allclose(ensembles.spectral_measure(np.diag([0.0, 2.0])).atoms, [0, 2])

    def test_rotation(self):
        mu = ensembles.spectral_measure(np.array([[0.0, 1.0], [-1.0, 0.0]]), "general")
        assert np.allclose(np.sort_complex(mu.atoms), [-1j, 1j])

    def test_unknown_kind(self):
        with pytest.raises(InvalidSpec):
            ensembles.spectral_measure(np.eye(2), "other")
