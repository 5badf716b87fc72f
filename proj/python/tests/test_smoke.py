import math

import numpy as np
import pytest

import projdens as pd


def sphere():
    return pd.Metric([["1", "0"], ["0", "sin(x0)^2"]])


def test_scalar_field_values_and_jet():
    f = pd.ScalarField("sin(x0)*x1 + x0^3", 2)
    v, grad, hess = f.jet([1.0, 2.0])
    assert v == pytest.approx(math.sin(1.0) * 2.0 + 1.0, rel=1e-15)
    assert grad == pytest.approx([math.cos(1.0) * 2.0 + 3.0, math.sin(1.0)], rel=1e-14)
    assert hess[0][0] == pytest.approx(-math.sin(1.0) * 2.0 + 6.0, rel=1e-14)
    assert hess[0][1] == pytest.approx(math.cos(1.0), rel=1e-14)
    assert f([1.0, 2.0]) == v


def test_errors_form_a_hierarchy():
    with pytest.raises(pd.ParseError):
        pd.ScalarField("x0 + * x1", 2)
    with pytest.raises(pd.UnknownIdentifierError):
        pd.ScalarField("y + 1", 2)
    assert issubclass(pd.BlowUpError, pd.IntegrationError)
    assert issubclass(pd.TorsionError, pd.Error)
    with pytest.raises(pd.TorsionError):
        pd.Connection([[["0", "x1"], ["0", "0"]], [["0", "0"], ["0", "0"]]])


def test_sphere_christoffel_symbols():
    conn = pd.levi_civita(sphere())
    th = 1.1
    g = conn.values([th, 0.2])
    # flattened [k][i][j]
    assert g[0 * 4 + 1 * 2 + 1] == pytest.approx(-math.sin(th) * math.cos(th), rel=1e-14)
    assert g[1 * 4 + 0 * 2 + 1] == pytest.approx(math.cos(th) / math.sin(th), rel=1e-14)
    assert g[1 * 4 + 1 * 2 + 0] == g[1 * 4 + 0 * 2 + 1]


def test_projective_symbols_are_trace_free_and_shift_invariant():
    conn = pd.levi_civita(sphere())
    p = [0.9, -0.4]
    pi = pd.pi_symbols(conn).values(p)
    for j in range(2):
        assert abs(sum(pi[k * 4 + k * 2 + j] for k in range(2))) <= 1e-14
    shifted = pd.projective_shift(conn, ["x0*x1", "cos(x1)"])
    assert np.allclose(pd.pi_symbols(shifted).values(p), pi, rtol=0, atol=1e-13)


def test_upper_connection_on_the_sphere():
    g = sphere()
    pi = pd.pi_symbols(pd.levi_civita(g))
    gamma = pd.upper_connection(pi, pd.inverse_metric(g))
    th = 1.1
    assert gamma[0]([th, 0.2]) == pytest.approx(-math.cos(th) / math.sin(th), rel=1e-12)
    assert gamma[1]([th, 0.2]) == pytest.approx(0.0, abs=1e-14)


def test_flat_laplacian_is_the_ordinary_laplacian():
    pi = pd.pi_symbols(pd.Connection.zero(2))
    S = pd.UpperMetric([["1", "0"], ["0", "1"]])
    L = pd.projective_laplacian(pi, S)
    f = pd.ScalarField("sin(x0)*x1 + x0^3", 2)
    assert L(f, [1.0, 0.5]) == pytest.approx(-math.sin(1.0) * 0.5 + 6.0, rel=1e-14)


def test_density_arithmetic():
    a = pd.Density(2, {"0": "x0", "1/2": "x1"})
    b = pd.Density(2, {"1/2": "1"})
    s = a + b
    assert set(s.terms()) == {"0", "1/2"}
    assert s.coeff("1/2")([3.0, 4.0]) == pytest.approx(5.0)
    assert (2.0 * a).coeff("0")([3.0, 4.0]) == pytest.approx(6.0)
    assert pd.Weight("1/2").value == 0.5
    assert pd.Weight(2, 4) == pd.Weight("1/2")


def test_straight_lines_for_the_zero_connection():
    t, x, v = pd.integrate_linear_geodesic(pd.Connection.zero(2), [0.1, 0.2], [1.0, -0.5], 0.3, 0.01)
    assert t[-1] == 0.3
    assert np.allclose(x[-1], [0.1 + 0.3, 0.2 - 0.15], rtol=0, atol=1e-14)
    assert np.allclose(v, [[1.0, -0.5]] * len(t), rtol=0, atol=1e-14)


def test_sphere_equator_is_a_geodesic():
    conn = pd.levi_civita(sphere())
    _, x, _ = pd.integrate_linear_geodesic(conn, [math.pi / 2, 0.0], [0.0, 1.0], 0.5, 1e-3)
    assert x[-1][0] == pytest.approx(math.pi / 2, abs=1e-12)
    assert x[-1][1] == pytest.approx(0.5, abs=1e-12)


def test_zero_transport_is_the_identity():
    t, x, xi = pd.parallel_transport([["0"]], [[["0"]]], [["0"]], ["x0"], [0.25], 1.0, 0.1)
    assert t[-1] == 1.0
    assert np.array_equal(xi[:, 0], np.full(len(t), 0.25))
    assert np.allclose(x[:, 0], t, rtol=0, atol=1e-14)


def test_fit_recovers_a_moebius_map():
    rng = np.random.default_rng(7)
    xin = rng.uniform(-0.5, 0.5, size=(12, 1))
    a, b, c, d = 2.0, 0.3, -0.4, 1.0
    xout = (a * xin + b) / (c * xin + d)
    block, residual = pd.fit_fractional_linear(xin, xout, holdout=3)
    assert residual <= 1e-10
    want = np.array([[a, b], [c, d]])
    want /= np.abs(want).max()
    got = block / block.flat[np.abs(block).argmax()] * np.sign(want.flat[np.abs(block).argmax()])
    assert np.allclose(got, want, rtol=0, atol=1e-9)
