import math
from fractions import Fraction

import pytest

from egs.constants import compute_c0, compute_c1_double_prime, compute_c1_prime, compute_c1_suite

TOL = Fraction(1, 10**8)


def _fe_integral(delta):
    """int_delta^1 f_e(x) dx and int_delta^1 f_e(x) log(1/x) dx by closed forms on each piece."""
    e = math.e
    pts = {1.0, delta}
    k = 1
    while 1 / k > delta:
        pts.add(1 / k)
        if 1 / (e * k) > delta:
            pts.add(1 / (e * k))
        k += 1
    pts = sorted(pts)
    I0 = I1 = 0.0
    for a, b in zip(pts, pts[1:]):
        m = (a + b) / 2
        g = math.floor(1 / m)
        c = math.ceil(1 / (e * m))
        # f = g log(c e x); antiderivatives of log(cex) and log(cex) log(1/x)
        F0 = lambda x: x * math.log(c * e * x) - x
        F1 = lambda x: -(x * math.log(x) - x) * math.log(c * e) - (x * math.log(x) ** 2 - 2 * x * math.log(x) + 2 * x)
        I0 += g * (F0(b) - F0(a))
        I1 += g * (F1(b) - F1(a))
    return I0, I1


@pytest.fixture(scope="module")
def suite():
    return compute_c0(TOL), compute_c1_suite(TOL)


def test_c0(suite):
    c0, _ = suite
    assert c0.width <= TOL
    assert c0.contains_printed("0.30441901")
    assert set(c0.components) == {"series", "closed", "frac"}


def test_c0_independent_route(suite):
    c0, _ = suite
    delta = 1e-4
    I0, _ = _fe_integral(delta)
    lo, hi = I0 / math.e, I0 / math.e + delta
    assert lo - 1e-9 <= float(c0.value.lo) and float(c0.value.hi) <= hi + 1e-9


def test_c1_prime_adjudication(suite):
    _, (c1p, _, _) = suite
    assert c1p.width <= 10 * TOL
    assert c1p.contains_printed("0.3702051")
    assert not c1p.contains_printed("0.3702015")
    delta = 1e-4
    _, I1 = _fe_integral(delta)
    # remainder over (0, delta) is at most e * int_0^delta log(1/x) dx
    rem = math.e * delta * (1 - math.log(delta))
    assert I1 / math.e - 1e-9 <= float(c1p.value.lo) and float(c1p.value.hi) <= (I1 + rem) / math.e + 1e-9


def test_c1_double_prime(suite):
    _, (_, c1pp, _) = suite
    assert c1pp.contains_printed("1.679578996")
    crude = compute_c1_double_prime(K=10**6, accelerate=False)
    assert crude.value.lo <= c1pp.value.hi and c1pp.value.lo <= crude.value.hi
    assert c1pp.width < crude.width


def test_c1_final_digit(suite):
    _, (_, _, c1) = suite
    assert c1.contains_printed("0.75554808")
    assert not c1.contains_printed("0.7554808")


def test_tolerance_guard():
    with pytest.raises(ValueError):
        compute_c0(Fraction(1, 10**12))
