import pytest
from mpmath import mp

from lucaspal.realfield import PrecReal, alpha
from lucaspal.recurrences import (
    binet_residual,
    check_growth_bounds,
    fibonacci,
    lucas,
    lucas_term,
    lucas_upto,
)


@pytest.mark.parametrize("n, value", [(0, 2), (1, 1), (5, 11), (10, 123), (11, 199)])
def test_lucas(n, value):
    assert lucas(n) == value


def test_lucas_opening_terms():
    assert lucas_upto(11) == [2, 1, 3, 4, 7, 11, 18, 29, 47, 76, 123, 199]


def test_fibonacci():
    assert fibonacci(14) == 377
    assert fibonacci(1) == 1
    a, b = 0, 1
    for _ in range(20):
        a, b = b, a + b
    assert fibonacci(20) == a == 6765


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        lucas(-1)


def test_recurrence_holds_to_2000():
    L = lucas_upto(2002)
    assert all(L[n + 2] == L[n + 1] + L[n] for n in range(2001))
    assert lucas_term(7).value == 29


@pytest.mark.parametrize("n_max", [0, 1, 1000, 2000])
def test_growth_bounds(n_max):
    assert check_growth_bounds(n_max)


def test_binet_residual():
    assert binet_residual(0) == PrecReal.of(1, 1000)
    r1 = binet_residual(1)
    assert abs(r1 - (alpha(1000) - 1)) < PrecReal.of("1e-900", 1000)
    r10 = binet_residual(10)
    with mp.workdps(1000):
        oracle = ((1 + mp.sqrt(5)) / 2) ** -10
    assert abs(r10.value - oracle) < mp.mpf("1e-900")
    assert r10.str(3) == "0.00813"
    assert all(binet_residual(n, 100) < 1 for n in range(1, 60))


def test_lucas_is_nearest_integer_to_alpha_power():
    a = alpha(1000)
    with mp.workdps(1000):
        power = a.value
        for n in range(2, 2001):
            power *= a.value
            assert int(mp.nint(power)) == lucas(n)


def test_digit_count_of_L1000():
    with mp.workdps(100):
        predicted = int(mp.floor(1000 * mp.log10((1 + mp.sqrt(5)) / 2))) + 1
    assert predicted == 209
    assert len(str(lucas(1000))) == 209
