import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from designmoments import core
from designmoments.sampling import haar_unitary, random_density_hs, random_pure_state


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def random_unit(rng, size=None):
    v = rng.standard_normal((3,) if size is None else (size, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


class TestPauli:
    def test_x(self):
        np.testing.assert_array_equal(core.pauli("x"), [[0, 1], [1, 0]])

    def test_z(self):
        np.testing.assert_array_equal(core.pauli("z"), [[1, 0], [0, -1]])

    def test_y_squared_is_identity(self):
        y = core.pauli("y")
        np.testing.assert_allclose(y @ y, np.eye(2))

    @pytest.mark.parametrize("bad", ["w", "", "xy"])
    def test_unknown_axis(self, bad):
        with pytest.raises(ValueError):
            core.pauli(bad)


class TestSigmaU:
    def test_axes(self):
        np.testing.assert_array_equal(core.sigma_u([0, 0, 1]), core.pauli("z"))
        np.testing.assert_array_equal(core.sigma_u([1, 0, 0]), core.pauli("x"))

    def test_diagonal_direction(self):
        m = core.sigma_u(unit([1, 1, 1]))
        assert np.trace(m @ core.pauli("x")).real / 2 == pytest.approx(1 / np.sqrt(3), abs=1e-15)

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            core.sigma_u([1, 1, 0])


class TestCorrelation:
    def test_bell_zz(self):
        assert core.correlation(core.bell(), [[0, 0, 1], [0, 0, 1]]) == pytest.approx(1)

    def test_maximally_mixed(self, rng):
        dirs = random_unit(rng, 3)
        assert core.correlation(core.maximally_mixed(3), dirs) == pytest.approx(0, abs=1e-15)

    def test_ghz3_xxx(self):
        x = [1, 0, 0]
        assert core.correlation(core.ghz(3), [x, x, x]) == pytest.approx(1)

    def test_wrong_number_of_directions(self):
        with pytest.raises(ValueError):
            core.correlation(core.bell(), [[0, 0, 1]])

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_tensor_agrees_with_direct_trace(self, n, rng):
        rho = random_density_hs(n, rng)
        t = core.correlation_tensor(rho)
        for _ in range(5):
            dirs = random_unit(rng, n)
            e = t
            for u in dirs:
                e = np.tensordot(e, u, axes=([0], [0]))
            assert float(e) == pytest.approx(core.correlation(rho, dirs), abs=1e-12)

    def test_batched_tensor(self, rng):
        rhos = np.array([random_density_hs(2, rng).matrix for _ in range(4)])
        batch = core.correlation_tensor(rhos)
        for rho, t in zip(rhos, batch):
            np.testing.assert_allclose(t, core.correlation_tensor(core.DensityMatrix(rho)), atol=1e-14)

    def test_multilinear(self, rng):
        rho = random_density_hs(3, rng)
        t = core.correlation_tensor(rho)

        def e(a, b, c):
            return np.einsum("ijk,i,j,k->", t, a, b, c)

        u, v, b, c = rng.standard_normal((4, 3))
        alpha, beta = rng.standard_normal(2)
        assert e(alpha * u + beta * v, b, c) == pytest.approx(alpha * e(u, b, c) + beta * e(v, b, c), abs=1e-10)
        assert e(b, alpha * u + beta * v, c) == pytest.approx(alpha * e(b, u, c) + beta * e(b, v, c), abs=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_product_factorizes(self, n, rng):
        blochs = random_unit(rng, n)
        state = core.product_state(blochs)
        dirs = random_unit(rng, n)
        expected = np.prod(np.einsum("ij,ij->i", blochs, dirs))
        assert core.correlation(state, dirs) == pytest.approx(expected, abs=1e-12)


class TestStates:
    def test_w3_amplitudes(self):
        amps = core.w(3).amplitudes
        expected = np.zeros(8)
        expected[[0b001, 0b010, 0b100]] = 1 / np.sqrt(3)
        np.testing.assert_allclose(amps, expected)

    def test_bell_diagonal_corner_is_pure(self):
        rho = core.bell_diagonal(1, -1, 1)
        assert rho.rank() == 1
        assert rho.purity() == pytest.approx(1)

    def test_bell_diagonal_outside_tetrahedron(self):
        with pytest.raises(ValueError):
            core.bell_diagonal(1, 1, 1)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_noisy_ghz_full_noise(self, n):
        np.testing.assert_allclose(core.noisy_ghz(1, n).matrix, core.maximally_mixed(n).matrix)

    def test_noisy_ghz_rejects_p(self):
        with pytest.raises(ValueError):
            core.noisy_ghz(1.5, 3)

    def test_werner_singlet_correlations(self):
        t = core.correlation_tensor(core.werner(1.0))
        np.testing.assert_allclose(t, -np.eye(3), atol=1e-15)

    def test_partial_trace_of_w3(self):
        rho = core.partial_trace(core.w(3), [0, 1]).matrix
        s = 1 / np.sqrt(2)
        psi = np.array([0, s, s, 0])
        expected = np.diag([1, 0, 0, 0]) / 3 + 2 / 3 * np.outer(psi, psi)
        np.testing.assert_allclose(rho, expected, atol=1e-15)

    def test_partial_trace_order(self, rng):
        a, b = random_pure_state(1, rng), random_pure_state(1, rng)
        rho = core.partial_trace(core.tensor(a, b), [1])
        np.testing.assert_allclose(rho.matrix, b.density().matrix, atol=1e-14)

    def test_qubit_state_bloch(self, rng):
        u = random_unit(rng)
        rho = core.qubit_state(u).density()
        got = [np.trace(rho.matrix @ p).real for p in core.PAULI_XYZ]
        np.testing.assert_allclose(got, u, atol=1e-14)

    @pytest.mark.parametrize(
        "kind, n, params",
        [("ghz", 4, {}), ("w", 3, {}), ("bell", None, {}), ("bell_diagonal", None, {"c": (0.2, -0.1, 0.3)}),
         ("noisy_ghz", 3, {"p": 0.4}), ("werner", None, {"q": 0.5}), ("product", 2, {}), ("mixed", 2, {})],
    )
    def test_standard_states_are_valid(self, kind, n, params):
        rho = core.as_density(core.standard_state(kind, n, **params))
        assert rho.purity() <= 1 + 1e-12

    def test_standard_state_unknown(self):
        with pytest.raises(ValueError):
            core.standard_state("cluster", 3)


class TestValidation:
    def test_unnormalized_pure(self):
        with pytest.raises(ValueError):
            core.PureState([1, 1])

    def test_non_power_of_two(self):
        with pytest.raises(ValueError):
            core.PureState([1, 0, 0])

    def test_too_many_qubits(self):
        with pytest.raises(ValueError):
            core.maximally_mixed(core.MAX_QUBITS + 1)

    def test_not_hermitian(self):
        with pytest.raises(ValueError):
            core.DensityMatrix([[0.5, 0.1], [0.2, 0.5]])

    def test_bad_trace(self):
        with pytest.raises(ValueError):
            core.DensityMatrix(np.eye(2))

    def test_not_psd(self):
        with pytest.raises(ValueError):
            core.DensityMatrix([[1.1, 0], [0, -0.1]])

    def test_psd_tolerance_accepts_rounding(self):
        core.DensityMatrix([[1 + 1e-10, 0], [0, -1e-10]])

    def test_arrays_are_read_only(self):
        state = core.ghz(2)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_local_unitaries_rotate_tensor(seed, n):
    # T transforms as an orthogonal rotation on each index
    rng = np.random.default_rng(seed)
    rho = random_density_hs(n, rng)
    us = [haar_unitary(2, rng) for _ in range(n)]
    rotated = core.correlation_tensor(core.apply_local_unitaries(rho, us))
    original = core.correlation_tensor(rho)
    assert np.sum(rotated**2) == pytest.approx(np.sum(original**2), abs=1e-12)
