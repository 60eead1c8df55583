import random
from fractions import Fraction

import pytest
from mpmath import mp

from lucaspal.bakerbounds import (
    COVERS,
    DIGIT,
    TEN,
    Alpha,
    ChainError,
    MatveevInstance,
    Power,
    Prod,
    Rat,
    Sum,
    absorb_one_plus_log,
    check_exponent_inequality,
    derive_bound_chain,
    guzman_luca,
    height_bound,
    height_exact,
    lemma2_gamma1,
    lemma3_gamma1,
    matveev_constant,
)
from lucaspal.realfield import PrecReal, ln, log_alpha

D = 100
P = lambda x: PrecReal.of(x, D)  # noqa: E731
TINY = P("1e-80")


@pytest.fixture(scope="module")
def chain():
    return derive_bound_chain()


def close(a, b, tol=TINY):
    return abs(P(a) - P(b)) < tol


def test_height_exact_examples():
    assert close(height_exact(9), ln(9, D))
    assert close(height_exact(1), 0)
    assert close(height_exact(10), ln(10, D))
    assert close(height_exact(Fraction(-3, 7)), ln(7, D))


def test_height_bound_leaves_and_powers():
    assert close(height_bound(Alpha()).constant, log_alpha(D) / 2)
    assert close(height_bound(Power(Alpha(), 5)).constant, log_alpha(D) * Fraction(5, 2))
    assert close(height_bound(Power(TEN, -3)).constant, ln(1000, D))


def test_height_bound_lemma2_expression():
    hb = height_bound(lemma2_gamma1())
    # log 9 (numerator) + log 9 + log 9 + log 2 (difference), ell log 10
    assert close(hb.constant, 3 * ln(9, D) + ln(2, D))
    assert close(hb.coefficient("ell"), ln(10, D))
    assert hb.constant <= 4 * ln(9, D)


def test_height_bound_lemma3_expression():
    hb = height_bound(lemma3_gamma1())
    assert close(hb.coefficient("ell"), ln(10, D))
    assert close(hb.coefficient("m"), 2 * ln(10, D))
    assert hb.constant <= 7 * ln(9, D)
    # as linear forms in ell, m this never exceeds 7 log 9 + (ell+m) log 10 + m log 10
    for ell, m in [(1, 1), (10, 3), (10**6, 10**9)]:
        assert hb.evaluate(ell=ell, m=m) <= 7 * ln(9, D) + (ell + 2 * m) * ln(10, D)


def test_height_bound_monotone():
    small = Sum(Prod(Rat(3), Power(TEN, "ell")), Rat(2), subtract=True)
    big = Sum(Prod(Rat(9), Power(TEN, "ell")), Rat(9), subtract=True)
    for wrap in (lambda e: e, lambda e: Prod(Rat(9), e, divide=True), lambda e: Power(e, 2)):
        hs, hb = height_bound(wrap(small)), height_bound(wrap(big))
        assert hs.constant <= hb.constant
        assert hs.coefficient("ell") <= hb.coefficient("ell")


def test_height_exact_equals_leaf_bound():
    rng = random.Random(7)
    for _ in range(200):
        x = Fraction(rng.randint(-(10**12), 10**12), rng.randint(1, 10**12))
        assert height_bound(Rat(x)).constant == height_exact(x)


def test_height_rules_bound_true_heights():
    rng = random.Random(11)
    for _ in range(100):
        a = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        b = Fraction(rng.randint(-999, 999) or 1, rng.randint(1, 999))
        slack = P("1e-90")
        assert height_exact(a + b) <= height_bound(Sum(Rat(a), Rat(b))).constant + slack
        assert height_exact(a / b) <= height_bound(Prod(Rat(a), Rat(b), divide=True)).constant + slack


def test_symbolic_power_of_symbolic_base_rejected():
    with pytest.raises(ValueError):
        height_bound(Power(Power(TEN, "ell"), "m"))


def test_matveev_instance_validation():
    with pytest.raises(ValueError):
        MatveevInstance(3, 2, (P(1), P(1)))
    with pytest.raises(ValueError):
        MatveevInstance(3, 2, (P("0.1"), P(1), P(1)))
    with pytest.raises(ValueError):
        MatveevInstance(0, 2, ())


def test_matveev_first_instance():
    c = matveev_constant(MatveevInstance(3, 2, (P("4.4"), P("0.5"), P("4.62"))))
    assert P("9.85e12") < c <= P("9.9e12")
    # direct evaluation
    with mp.workdps(50):
        oracle = 1.4 * 30**6 * mp.mpf(3) ** 4.5 * 4 * (1 + mp.log(2)) * mp.mpf("4.4") * 0.5 * mp.mpf("4.62")
    assert abs(c.value / oracle - 1) < mp.mpf("1e-14")


@pytest.mark.parametrize("a1, target", [("2.4e13", "6.2e25"), ("2.82e26", "7.24e38")])
def test_matveev_after_absorption(a1, target):
    c = matveev_constant(MatveevInstance(3, 2, (P(a1), P("0.5"), P("4.62"))))
    absorbed = absorb_one_plus_log(c, 1000)
    assert P(target) * P("0.95") <= absorbed <= P(target)


def test_matveev_multiplicative():
    base = (P("4.4"), P("0.5"), P("4.62"))
    c0 = matveev_constant(MatveevInstance(3, 2, base))
    for i in range(3):
        A = list(base)
        A[i] = A[i] * 2
        c1 = matveev_constant(MatveevInstance(3, 2, tuple(A)))
        assert abs(c1 / c0 - 2) < P("1e-20")


def test_absorb_examples():
    log10 = ln(10, D)
    assert absorb_one_plus_log(P("9.86e12") / log10, 1000) <= P("5e12")
    x = P("123.456")
    # the excess is x / log n_floor, so 1e-8 relative needs log n_floor > 1e8
    assert abs(absorb_one_plus_log(x, 10**9) / x - 1 - 1 / ln(10**9, D)) < TINY
    assert abs(absorb_one_plus_log(x, P("1e100000000")) - x) < P("1e-8") * x
    with pytest.raises(ValueError):
        absorb_one_plus_log(x, 2)


def test_absorb_second_step_as_used(chain):
    # m log 10 - log 19 < 6.2e25 (log n)^2 gives m < 3e25 (log n)^2 for n > 1000
    log10 = ln(10, D)
    c = P("6.2e25") / log10 + ln(19, D) / log10 / ln(1000, D) ** 2
    assert c <= P("3e25")
    assert chain.step("m / (log n)^2").computed == c


def test_absorb_is_valid_above_floor():
    for n in (1001, 10**4, 10**9, 10**40):
        ln_n = ln(n, D)
        assert 1 + ln_n <= absorb_one_plus_log(1, 1000) * ln_n


def test_guzman_luca_examples():
    v = guzman_luca(3, P("1.52e39"))
    assert P("8.8e45") <= v < P("9e45")
    assert abs(guzman_luca(1, 10**5) - 2 * 10**5 * ln(10**5, D)) < TINY
    assert abs(guzman_luca(1, 10**5) - P("2.3026e6")) < P("100")
    with pytest.raises(ValueError):
        guzman_luca(3, 46656)
    guzman_luca(3, 46657)


@pytest.mark.parametrize("s", [1, 2])
def test_guzman_luca_contract(s):
    rng = random.Random(s)
    threshold = (4 * s * s) ** s
    checked = 0
    with mp.workdps(50):
        while checked < 100:
            z = mp.mpf(10) ** rng.uniform(1, 30)
            T = z / mp.log(z) ** s * mp.mpf(rng.uniform(1.0001, 3))
            if T <= threshold:
                continue
            assert z < guzman_luca(s, T).value
            checked += 1


def test_chain_absolute_bounds(chain):
    assert chain.n_abs <= 9 * 10**45
    assert chain.ell_abs <= 53 * 10**13
    assert chain.m_abs <= 34 * 10**28
    assert chain.n_abs < 10**46  # the reduction takes M = 10^46


def test_chain_back_substitution(chain):
    log_n = ln(chain.n_abs, D)
    assert chain.ell_abs == int((chain.ell_log_bound * log_n).value) + 1
    assert chain.m_abs == int((chain.m_log_bound * log_n**2).value) + 1
    assert chain.n_abs >= guzman_luca(3, chain.n_poly_bound)


def test_chain_every_step_under_cover(chain):
    assert {s.name for s in chain.steps} == set(COVERS)
    for s in chain.steps:
        assert s.computed <= s.cover, s.name


SIX = ["matveev 1", "ell / log n", "matveev 2", "m / (log n)^2", "matveev 3", "n_abs"]


@pytest.mark.parametrize("name", SIX)
def test_six_constants_are_covers(chain, name):
    s = chain.step(name)
    assert s.computed <= s.cover


@pytest.mark.parametrize("name", [n for n in SIX if n != "m / (log n)^2"])
def test_six_constants_within_five_percent(chain, name):
    assert chain.step(name).ratio >= 0.95


def test_m_coefficient_cover_is_loose(chain):
    # 6.2e25 / log 10 is about 2.69e25, so the carried 3e25 sits about 10% above
    s = chain.step("m / (log n)^2")
    assert 0.89 < s.ratio < 0.91


def test_chain_raises_when_cover_violated(monkeypatch):
    import lucaspal.bakerbounds as bb

    monkeypatch.setitem(bb.COVERS, "matveev 1", "9e12")
    with pytest.raises(ChainError):
        derive_bound_chain()


def test_chain_precision_stable(chain):
    other = derive_bound_chain(digits=200)
    assert (other.n_abs, other.ell_abs, other.m_abs) == (chain.n_abs, chain.ell_abs, chain.m_abs)


def test_exponent_inequality():
    assert check_exponent_inequality(1001)
    assert check_exponent_inequality(10**6)
    with pytest.raises(ValueError):
        check_exponent_inequality(1000)


def test_digit_constant_covers_all_digits():
    assert DIGIT == Rat(9)
    for d1 in range(1, 10):
        for d2 in range(10):
            assert height_exact(d1) <= height_bound(DIGIT).constant
            assert height_exact(d1 - d2) <= height_bound(DIGIT).constant
