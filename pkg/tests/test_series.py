import pytest

from nonarch.arith import FieldSpec, ZpApprox, lucas_binom
from nonarch.errors import DivisionByZero, InsufficientPrecision, NotOneUnit
from nonarch.series import (
    INF,
    LaurentSeries,
    PowerSeriesAtOne,
    hasse_derivative,
    one_unit_pow,
)

from conftest import random_one_unit, random_series, random_zp

SPECS = [FieldSpec(2, 1), FieldSpec(2, 2), FieldSpec(3, 2)]


# ---------------------------------------------------------------------------
# ring operations


def test_mul_examples(F2):
    t = LaurentSeries.monomial(F2, 1, 1)
    tinv_plus_1 = LaurentSeries.from_coeffs(F2, [1, 1], -1)
    assert (t * tinv_plus_1) == LaurentSeries.from_coeffs(F2, [1, 1], 0)
    assert (t * LaurentSeries.zero(F2)).is_exact_zero()
    one_plus_t = LaurentSeries.from_coeffs(F2, [1, 1])
    assert (one_plus_t * one_plus_t) == LaurentSeries.from_coeffs(F2, [1, 0, 1])


def test_mul_precision_contract(F2, rng):
    for _ in range(40):
        f = random_series(rng, F2, rng.randrange(4, 12))
        g = random_series(rng, F2, rng.randrange(4, 12))
        prod = f * g
        assert prod.prec == min(f.prec + g.val, g.prec + f.val)


def test_schoolbook_convolution_oracle(rng):
    # compare the numpy path against direct schoolbook convolution on coefficients
    for spec in SPECS:
        for _ in range(20):
            f = random_series(rng, spec, rng.randrange(3, 9))
            g = random_series(rng, spec, rng.randrange(3, 9))
            prod = f * g
            for n in range(prod.val, int(prod.prec)):
                acc = spec.zero()
                for a in range(f.val, int(f.prec)):
                    b = n - a
                    if g.val <= b < g.prec:
                        acc = acc + f.coeff(a) * g.coeff(b)
                assert prod.coeff(n) == acc


def test_inverse_examples(F2, F4):
    inv = LaurentSeries.from_coeffs(F2, [1, 1]).inverse(prec=4)
    assert [inv.coeff(n).coeffs[0] for n in range(4)] == [1, 1, 1, 1]
    t = LaurentSeries.monomial(F2, 1, 1)
    assert t.inverse() == LaurentSeries.monomial(F2, 1, -1)
    c = LaurentSeries.from_coeffs(F4, [F4.gen()])
    assert c.inverse() == LaurentSeries.from_coeffs(F4, [F4.gen().inverse()])


def test_inverse_of_zero(F2):
    with pytest.raises(DivisionByZero):
        LaurentSeries.zero(F2).inverse()
    with pytest.raises(DivisionByZero):
        LaurentSeries.zero_mod(F2, 5).inverse()


def test_inverse_round_trip(rng):
    for spec in SPECS:
        for _ in range(25):
            f = random_series(rng, spec, rng.randrange(4, 10))
            finv = f.inverse()
            one = LaurentSeries.one(spec)
            assert (f * finv).eq_to_prec(one)


# ---------------------------------------------------------------------------
# one-unit powers


def test_one_unit_pow_frobenius(F2, F9):
    for spec, p in ((F2, 2), (F9, 3)):
        u = random_one_unit(__import__("random").Random(5), spec, 27)
        zp = ZpApprox.from_int(p, p, 6)
        lhs = one_unit_pow(u, zp)
        rhs = u**p
        assert lhs.eq_to_prec(rhs)


def test_one_unit_pow_simple(F2):
    u = LaurentSeries.one_plus(F2, 1, 1, prec=9)
    assert one_unit_pow(u, ZpApprox.from_int(0, 2, 4)).eq_to_prec(LaurentSeries.one(F2), 9)
    cube = one_unit_pow(u, ZpApprox.from_int(3, 2, 4))
    assert [cube.coeff(n).coeffs[0] for n in range(4)] == [1, 1, 1, 1]


def test_one_unit_pow_minus_one_is_inverse(rng):
    for spec in SPECS:
        p = spec.p
        for _ in range(10):
            u = random_one_unit(rng, spec, 16)
            minus = ZpApprox.from_int(-1, p, 5)
            via_pow = one_unit_pow(u, minus)
            via_inv = u.inverse()
            assert via_pow.eq_to_prec(via_inv)


def test_one_unit_pow_additive_in_exponent(rng):
    for spec in SPECS:
        p = spec.p
        digits = 5 if p == 2 else 4
        for _ in range(10):
            u = random_one_unit(rng, spec, 16)
            c1, c2 = random_zp(rng, p, digits), random_zp(rng, p, digits)
            lhs = one_unit_pow(u, c1 + c2)
            rhs = one_unit_pow(u, c1) * one_unit_pow(u, c2)
            assert lhs.eq_to_prec(rhs)


def test_one_unit_pow_multiplicative_in_base(rng):
    for spec in SPECS:
        p = spec.p
        digits = 5 if p == 2 else 4
        for _ in range(10):
            u, w = random_one_unit(rng, spec, 16), random_one_unit(rng, spec, 16)
            c = random_zp(rng, p, digits)
            lhs = one_unit_pow(u * w, c)
            rhs = one_unit_pow(u, c) * one_unit_pow(w, c)
            assert lhs.eq_to_prec(rhs)


def test_one_unit_pow_rejects_non_units(F2):
    t = LaurentSeries.monomial(F2, 1, 1)
    with pytest.raises(NotOneUnit):
        one_unit_pow(t, ZpApprox.from_int(1, 2, 2))


def test_one_unit_pow_insufficient_digits(F2):
    u = LaurentSeries.one_plus(F2, 1, 1, prec=32)
    with pytest.raises(InsufficientPrecision):
        one_unit_pow(u, ZpApprox.from_int(3, 2, 2))  # needs binomials up to n=31


def test_one_unit_pow_integer_exponent_matches_repeated_mul(F2, F9):
    for spec in (F2, F9):
        u = LaurentSeries.one_plus(spec, spec.omega(spec.r), 2, prec=18)
        for c in (0, 1, 2, 3, 7):
            direct = LaurentSeries.one(spec, 18)
            for _ in range(c):
                direct = direct * u
            assert one_unit_pow(u, c, prec=18).eq_to_prec(direct)


# ---------------------------------------------------------------------------
# Hasse derivatives


def test_hasse_examples(F2, F3):
    ps = PowerSeriesAtOne(F3, [0, 0, 0, 1])  # (z-1)^3
    d2 = ps.hasse_derivative(2)
    assert [c.coeffs[0] for c in d2.coeffs] == [0, 0]  # binom(3,2)=3=0 mod 3
    ps2 = PowerSeriesAtOne(F2, [0, 0, 0, 1])
    assert [c.coeffs[0] for c in ps2.hasse_derivative(2).coeffs] == [0, 1]
    const = PowerSeriesAtOne(F2, [1])
    assert const.hasse_derivative(1).coeffs == ()


def test_hasse_precision_drop(F2, rng):
    f = random_series(rng, F2, 10)
    for k in (1, 2, 3):
        assert hasse_derivative(f, k).prec == f.prec - k


def test_hasse_composition_identity(rng):
    # D^(j) D^(k) = binom(j+k, k) D^(j+k), coefficientwise, negative exponents included
    for spec in SPECS:
        p = spec.p
        for _ in range(25):
            f = random_series(rng, spec, rng.randrange(6, 14))
            j, k = rng.randrange(0, 4), rng.randrange(0, 4)
            lhs = hasse_derivative(hasse_derivative(f, k), j)
            rhs_coeff = lucas_binom(j + k, k, p)
            rhs = hasse_derivative(f, j + k)
            bound = min(lhs.prec, rhs.prec)
            for n in range(int(f.val) - j - k, int(bound)):
                assert lhs.coeff(n) == rhs.coeff(n) * rhs_coeff


def test_hasse_leibniz(rng):
    for spec in SPECS:
        for _ in range(25):
            f = random_series(rng, spec, rng.randrange(5, 11))
            g = random_series(rng, spec, rng.randrange(5, 11))
            k = rng.randrange(0, 5)
            lhs = hasse_derivative(f * g, k)
            rhs = None
            for i in range(k + 1):
                term = hasse_derivative(f, i) * hasse_derivative(g, k - i)
                rhs = term if rhs is None else rhs + term
            assert lhs.eq_to_prec(rhs, lhs.prec)


def test_hasse_chain_rule_special_case(rng):
    # D^(1)(f o g) = ((D^(1) f) o g) * D^(1) g for one-unit g
    for spec in SPECS:
        for _ in range(20):
            T = rng.randrange(4, 9)
            f = PowerSeriesAtOne(spec, [rng.randrange(spec.q) for _ in range(T)])
            g = random_one_unit(rng, spec, rng.randrange(6, 12))
            lhs = hasse_derivative(f.evaluate(g), 1)
            rhs = f.hasse_derivative(1).evaluate(g) * hasse_derivative(g, 1)
            assert lhs.eq_to_prec(rhs, min(lhs.prec, rhs.prec))


def test_hasse_digit_extraction(F2, F3, rng):
    # constant term of D^(p^i) applied to (1+t)^c recovers digit c_i
    for spec in (F2, F3):
        p = spec.p
        for _ in range(8):
            c = random_zp(rng, p, 4)
            u = LaurentSeries.one_plus(spec, 1, 1, prec=p**4)
            series = one_unit_pow(u, c)
            for i in range(3):
                der = hasse_derivative(series, p**i)
                assert der.coeff(0) == spec.from_int(c.digits[i])


# ---------------------------------------------------------------------------
# serialization


def test_series_json_round_trip(F9, rng):
    f = random_series(rng, F9, 7)
    data = f.to_json()
    back = LaurentSeries.from_json(F9, data)
    assert back == f
    z = LaurentSeries.zero(F9)
    assert LaurentSeries.from_json(F9, z.to_json()).is_exact_zero()
    zm = LaurentSeries.zero_mod(F9, 5)
    back = LaurentSeries.from_json(F9, zm.to_json())
    assert back.is_zero_like() and back.prec == 5


def test_coeff_beyond_precision_raises(F2):
    f = LaurentSeries.from_coeffs(F2, [1, 1], 0, 4)
    with pytest.raises(InsufficientPrecision):
        f.coeff(4)
    assert f.coeff(3).is_zero()
