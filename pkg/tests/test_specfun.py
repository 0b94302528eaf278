import math

import numpy as np
import pytest

from dunklosc.specfun import hermite, jacobi, laguerre, log_gamma


def series_laguerre(n, alpha, x):
    # explicit finite sum, evaluated with lgamma; independent of the recurrence.
    # fsum tames the alternating-series cancellation, but the oracle still
    # carries a few lost digits at larger n and x.
    terms = []
    for k in range(n + 1):
        binom = math.exp(math.lgamma(n + alpha + 1.0)
                         - math.lgamma(alpha + k + 1.0)
                         - math.lgamma(n - k + 1.0))
        terms.append((-1.0) ** k * binom * x ** k / math.factorial(k))
    return math.fsum(terms)


def series_jacobi(n, a, b, x):
    total = 0.0
    for k in range(n + 1):
        c1 = math.exp(math.lgamma(n + a + 1.0) - math.lgamma(n + a - k + 1.0)
                      - math.lgamma(k + 1.0))
        c2 = math.exp(math.lgamma(n + b + 1.0) - math.lgamma(b + k + 1.0)
                      - math.lgamma(n - k + 1.0))
        total += c1 * c2 * (x - 1.0) ** (n - k) * (x + 1.0) ** k
    return total / 2.0 ** n


def test_log_gamma_frozen_values():
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
    assert log_gamma(3.5) == pytest.approx(1.2009736023470742, rel=1e-13)
    assert log_gamma(11.0) == pytest.approx(math.log(math.factorial(10)), rel=1e-14)


def test_log_gamma_matches_stdlib_on_a_sweep():
    for x in np.linspace(0.05, 30.0, 173):
        assert log_gamma(float(x)) == pytest.approx(math.lgamma(float(x)), rel=1e-12, abs=1e-12)


def test_log_gamma_reflection_branch():
    # x < 0.5 goes through the reflection formula
    assert log_gamma(0.2) == pytest.approx(math.lgamma(0.2), rel=1e-12)
    assert log_gamma(0.497) == pytest.approx(math.lgamma(0.497), rel=1e-12)


def test_laguerre_frozen_values():
    # L_1^0.5(2) = 1.5 - 2
    assert laguerre(1, 0.5, 2.0).value == pytest.approx(-0.5, abs=1e-15)
    # L_3^{-0.5}(1) = -23/48
    assert laguerre(3, -0.5, 1.0).value == pytest.approx(-23.0 / 48.0, rel=1e-14)
    assert laguerre(5, 2.0, 7.5).value == pytest.approx(-8.58984375, rel=1e-13)
    assert laguerre(0, 1.7, 9.9).value == 1.0


def test_laguerre_against_series():
    for n in (0, 1, 2, 5, 11):
        for alpha in (-0.49, 0.0, 0.5, 3.2):
            for x in (0.0, 0.3, 1.7, 9.0):
                ref = series_laguerre(n, alpha, x)
                assert laguerre(n, alpha, x).value == pytest.approx(ref, rel=1e-8, abs=1e-8)


def test_laguerre_derivative_identity():
    # d/dx L_n^a = -L_{n-1}^{a+1}
    for n in (1, 2, 6):
        for x in (0.2, 1.1, 4.0):
            got = laguerre(n, 0.7, x).derivative
            ref = -laguerre(n - 1, 1.7, x).value
            assert got == pytest.approx(ref, rel=1e-12)
    assert laguerre(0, 0.7, 1.3).derivative == 0.0


def test_laguerre_derivative_vs_finite_difference():
    h = 1e-6
    for n in (2, 4):
        fd = (laguerre(n, 1.2, 2.0 + h).value - laguerre(n, 1.2, 2.0 - h).value) / (2 * h)
        assert laguerre(n, 1.2, 2.0).derivative == pytest.approx(fd, rel=1e-8)


def test_laguerre_orthogonality_under_gauss_quadrature():
    from scipy.special import roots_genlaguerre
    alpha = 0.8
    nodes, weights = roots_genlaguerre(8, alpha)
    for n in range(4):
        for m in range(4):
            acc = float(np.sum(weights * laguerre(n, alpha, nodes).value
                               * laguerre(m, alpha, nodes).value))
            expected = 0.0 if n != m else math.exp(
                math.lgamma(n + alpha + 1.0) - math.lgamma(n + 1.0))
            assert acc == pytest.approx(expected, abs=1e-10)


def test_jacobi_frozen_values():
    # P_1^{(a,b)}(1) = a + 1
    assert jacobi(1, 0.3, 0.9, 1.0).value == pytest.approx(1.3, rel=1e-14)
    assert jacobi(2, 0.0, 0.0, 0.0).value == pytest.approx(-0.5, rel=1e-14)
    assert jacobi(3, 0.3, 0.7, 0.4).value == pytest.approx(-0.538, rel=1e-12)
    assert jacobi(4, 2.5, -0.4, -0.3).value == pytest.approx(0.499100833359375, rel=1e-12)


def test_jacobi_against_series():
    for n in (0, 1, 2, 5, 9):
        for a, b in ((0.0, 0.0), (0.5, -0.3), (2.0, 1.5)):
            for x in (-0.9, -0.2, 0.0, 0.6, 1.0):
                ref = series_jacobi(n, a, b, x)
                assert jacobi(n, a, b, x).value == pytest.approx(ref, rel=1e-9, abs=1e-10)


def test_jacobi_parity_relation():
    # P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)
    for n in (1, 3, 4):
        for x in (0.15, 0.8):
            lhs = jacobi(n, 0.4, 1.1, -x).value
            rhs = (-1.0) ** n * jacobi(n, 1.1, 0.4, x).value
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_jacobi_derivative_identity():
    # d/dx P_n^{(a,b)} = (n+a+b+1)/2 P_{n-1}^{(a+1,b+1)}
    for n in (1, 2, 5):
        for x in (-0.5, 0.3):
            got = jacobi(n, 0.4, 1.1, x).derivative
            ref = 0.5 * (n + 0.4 + 1.1 + 1.0) * jacobi(n - 1, 1.4, 2.1, x).value
            assert got == pytest.approx(ref, rel=1e-12)


def test_hermite_bridge_to_laguerre():
    # H_{2n}(x) = (-4)^n n! L_n^{-1/2}(x^2); H_{2n+1}(x) = 2(-4)^n n! x L_n^{1/2}(x^2)
    for n in (0, 1, 2, 3):
        for x in (0.3, 1.4):
            even = hermite(2 * n, x).value
            ref_even = (-4.0) ** n * math.factorial(n) * laguerre(n, -0.5, x * x).value
            assert even == pytest.approx(ref_even, rel=1e-12)
            odd = hermite(2 * n + 1, x).value
            ref_odd = 2.0 * (-4.0) ** n * math.factorial(n) * x * laguerre(n, 0.5, x * x).value
            assert odd == pytest.approx(ref_odd, rel=1e-12)


def test_hermite_frozen_values():
    assert hermite(3, 1.0).value == pytest.approx(-4.0, rel=1e-14)       # 8x^3 - 12x
    assert hermite(4, 0.0).value == pytest.approx(12.0, rel=1e-14)
    assert hermite(2, 2.5).value == pytest.approx(23.0, rel=1e-14)       # 4x^2 - 2


def test_array_broadcast_and_scalar_types():
    x = np.linspace(0.0, 3.0, 7)
    out = laguerre(2, 0.5, x)
    assert out.value.shape == x.shape
    assert isinstance(laguerre(2, 0.5, 1.0).value, float)
    out_j = jacobi(3, 0.1, 0.2, np.linspace(-1.0, 1.0, 5))
    assert out_j.derivative.shape == (5,)


def test_domain_validation():
    with pytest.raises(ValueError):
        jacobi(2, -1.5, 0.0, 0.5)
    with pytest.raises(ValueError):
        jacobi(2, 0.0, 0.0, 1.5)
    with pytest.raises(ValueError):
        laguerre(-1, 0.5, 1.0)
    with pytest.raises(ValueError):
        laguerre(300, 0.5, 1.0)
