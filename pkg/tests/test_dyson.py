import numpy as np
import pytest

from kwire import dyson, oracle
from kwire.dyson import DysonChain
from kwire.model import ModelParams, f_wire, g_wire_a

RTOL = 1e-10
ATOL = 1e-12

FREQUENCIES = [-6.0, -1.3, -0.25, 0.0, 0.3, 0.5, 2.2, 8.0]


def oracle_values(omega, p):
    return oracle.solve_dyson(omega, p)


@pytest.mark.parametrize("omega", FREQUENCIES)
@pytest.mark.parametrize("eV", [0.0, 1.0, -1.7])
def test_chain_matches_oracle(params, omega, eV):
    p = params.with_bias(eV)
    G_r, G_a, F = oracle_values(omega, p)
    L = p.L
    chain = DysonChain(omega, p)

    for j in (1, 4, 8, L):
        np.testing.assert_allclose(chain.ga_boundary(j), [G_a[1, j], G_a[L, j]], rtol=RTOL, atol=ATOL)
        np.testing.assert_allclose(chain.ga_terminal(j), [G_a[0, j], G_a[L + 1, j]], rtol=RTOL, atol=ATOL)
        np.testing.assert_allclose(chain.f_terminal(j), [F[0, j], F[L + 1, j]], rtol=RTOL, atol=ATOL)

    for i, j in ((4, 8), (8, 4), (1, L), (13, 17), (6, 6)):
        np.testing.assert_allclose(chain.f_full(i, j), F[i, j], rtol=RTOL, atol=ATOL)

    Gr_1L, Ga_L1 = chain.gr_1L_and_ga_L1()
    np.testing.assert_allclose([Gr_1L, Ga_L1], [G_r[1, L], G_a[L, 1]], rtol=RTOL, atol=ATOL)


def test_module_level_operations(biased):
    omega = 0.3
    _, G_a, F = oracle_values(omega, biased)
    L = biased.L
    np.testing.assert_allclose(dyson.Ga_boundary(omega, 8, biased), [G_a[1, 8], G_a[L, 8]], rtol=RTOL)
    np.testing.assert_allclose(dyson.Ga_terminal(omega, 8, biased), [G_a[0, 8], G_a[L + 1, 8]], rtol=RTOL)
    np.testing.assert_allclose(dyson.F_terminal(omega, 8, biased), [F[0, 8], F[L + 1, 8]], rtol=RTOL)
    np.testing.assert_allclose(dyson.F_full(omega, 4, 8, biased), F[4, 8], rtol=RTOL)


@pytest.mark.parametrize("omega", [0.0, 0.7, -3.1])
def test_advanced_denominator_is_dyson_determinant(params, omega):
    g_a = oracle.unperturbed_matrices(omega, params)[1].values
    sigma = oracle.sigma_matrix(params)
    det = np.linalg.det(np.eye(params.L + 2) - g_a @ sigma)
    D = dyson.advanced_denominator(omega, params)
    np.testing.assert_allclose(D, det, rtol=1e-10)
    if omega == 0.0:
        assert abs(D - 1) > 0


def test_denominators_are_conjugate(params):
    omegas = np.linspace(-5, 5, 41)
    np.testing.assert_allclose(dyson.retarded_denominator(omegas, params),
                               np.conj(dyson.advanced_denominator(omegas, params)), rtol=0, atol=1e-15)


def test_f_full_is_anti_hermitian(biased):
    chain = DysonChain(np.linspace(-4, 4, 33), biased)
    for i, j in ((4, 8), (1, 20), (3, 15)):
        np.testing.assert_allclose(chain.f_full(i, j) + np.conj(chain.f_full(j, i)), 0, atol=1e-12)


def test_vectorized_matches_scalar(biased):
    omegas = np.array([-2.0, -0.5, 0.0, 0.5, 0.9, 3.0])
    vector = DysonChain(omegas, biased).f_full(4, 8)
    scalar = [DysonChain(w, biased).f_full(4, 8) for w in omegas]
    np.testing.assert_allclose(vector, scalar, rtol=1e-14, atol=1e-15)


def test_decoupled_limit_is_unperturbed(params):
    p = params.replace(t_prime=0.0, eV=1.0)
    omegas = np.linspace(-4, 4, 17)
    chain = DysonChain(omegas, p)
    G_1j, G_Lj = chain.ga_boundary(8)
    np.testing.assert_array_equal(G_1j, g_wire_a(omegas, 1, 8, p))
    np.testing.assert_array_equal(G_Lj, g_wire_a(omegas, p.L, 8, p))
    for value in (*chain.ga_terminal(8), *chain.f_terminal(8)):
        np.testing.assert_array_equal(value, 0)
    np.testing.assert_array_equal(chain.f_full(4, 8), f_wire(omegas, 4, 8, p))


def test_two_site_wire_is_mirror_symmetric():
    p = ModelParams(W=2.0, t_prime=0.5, L=2)
    chain = DysonChain(0.4, p)
    G_12 = chain.ga_boundary(2)[0]
    G_21 = chain.ga_boundary(1)[1]
    assert G_12 == pytest.approx(G_21, rel=1e-14)


@pytest.mark.parametrize("j", [3, 8])
def test_keldysh_terminals_swap_under_mirror(biased, j):
    here = DysonChain(0.3, biased).f_terminal(j)
    there = DysonChain(0.3, biased.with_bias(-biased.eV)).f_terminal(biased.mirror_site(j))
    np.testing.assert_allclose([here[0], here[1]], [there[1], there[0]], rtol=1e-12)


def test_terminal_scales_linearly_in_coupling(params):
    chain = DysonChain(0.3, params)
    boundary = chain.ga_boundary(8)
    full = chain.ga_terminal(8, boundary=boundary)
    half = DysonChain(0.3, params.replace(t_prime=0.25)).ga_terminal(8, boundary=boundary)
    np.testing.assert_allclose(half, np.array(full) / 2, rtol=1e-15)


def test_bad_site_raises(params):
    with pytest.raises(ValueError):
        DysonChain(0.1, params).f_full(0, 4)


@pytest.mark.parametrize("eV", [0.0, 1.0])
def test_denominator_stays_away_from_zero(params, eV):
    p = params.with_bias(eV)
    omegas = np.linspace(-3 * p.omega_c, 3 * p.omega_c, 200001)
    assert np.min(np.abs(dyson.advanced_denominator(omegas, p))) > 1e-12
