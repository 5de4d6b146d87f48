import pytest

from nonarch.arith import FieldSpec, ZpApprox
from nonarch.characters import (
    AnalyticCharacter,
    ContinuousCharacter,
    TargetField,
    compose_analytic,
    diagonal_embed,
    embed_series,
    eval_analytic,
    eval_continuous,
    is_locally_analytic,
    recover_exponent,
    series_at_one,
)
from nonarch.errors import HorizonExceeded, InsufficientPrecision, NotAnalytic
from nonarch.series import LaurentSeries, PowerSeriesAtOne, one_unit_pow
from nonarch.units import peel

from conftest import random_one_unit, random_zp


# ---------------------------------------------------------------------------
# evaluation


def test_trivial_character_evaluates_to_one(F2, rng):
    chi = ContinuousCharacter.trivial(F2, horizon=7, prec=8)
    u = random_one_unit(rng, F2, 8)
    out = eval_continuous(chi, u)
    assert out.eq_to_prec(LaurentSeries.one(F2), 8)


def test_single_generator_hit(F2):
    table = {(1, 1): LaurentSeries.one_plus(F2, 1, 1, prec=8)}
    chi = ContinuousCharacter(F2, horizon=7, prec=8, table=table)
    u = LaurentSeries.one_plus(F2, F2.omega(1), 1, prec=8)
    assert eval_continuous(chi, u).eq_to_prec(LaurentSeries.one_plus(F2, 1, 1), 8)


def test_diag_eval_matches_analytic(rng):
    for spec in (FieldSpec(2, 1), FieldSpec(3, 2)):
        p = spec.p
        digits = 6 if p == 2 else 4
        for _ in range(8):
            N = 16
            c = random_zp(rng, p, digits)
            chi = diagonal_embed(c, horizon=N - 1, prec=N, source=spec)
            u = random_one_unit(rng, spec, N)
            lhs = eval_continuous(chi, u)
            rhs = eval_analytic(AnalyticCharacter(c), u)
            assert lhs.eq_to_prec(rhs, min(lhs.prec, rhs.prec))


def test_eval_continuous_multiplicative(rng, F9):
    p = 3
    N = 12
    table = {}
    for m in (1, 2, 4):
        for i in (1, 2):
            table[(m, i)] = random_one_unit(rng, F9, N)
    chi = ContinuousCharacter(F9, horizon=N - 1, prec=N, table=table)
    for _ in range(10):
        u, w = random_one_unit(rng, F9, N), random_one_unit(rng, F9, N)
        lhs = eval_continuous(chi, (u * w).truncate(N))
        rhs = eval_continuous(chi, u) * eval_continuous(chi, w)
        assert lhs.eq_to_prec(rhs, min(lhs.prec, rhs.prec))


def test_horizon_violation_is_hard_error(F2):
    chi = diagonal_embed(ZpApprox.from_int(3, 2, 5), horizon=2, prec=8, source=F2)
    u = LaurentSeries.one_plus(F2, 1, 3, prec=8)  # moves generator m=3 > horizon
    with pytest.raises(HorizonExceeded):
        eval_continuous(chi, u)


def test_eval_analytic_examples(F2):
    u = LaurentSeries.one_plus(F2, 1, 1, prec=8)
    c = ZpApprox.from_int(1, 2, 4)
    assert eval_analytic(AnalyticCharacter(c), u).eq_to_prec(u, 8)
    # c = 1 + p: (1+t)^(1+2) over F_2 at prec 8
    c = ZpApprox.from_int(3, 2, 4)
    out = eval_analytic(AnalyticCharacter(c), u)
    expected = u * one_unit_pow(u, 2)
    assert out.eq_to_prec(expected, 8)


# ---------------------------------------------------------------------------
# series at one and exponent recovery


def test_series_at_one_analytic(F2):
    c = ZpApprox.from_int(3, 2, 4)
    s = series_at_one(AnalyticCharacter(c), 6, F2)
    assert [x.coeffs[0] for x in s.coeffs] == [1, 1, 1, 1, 0, 0]


def test_series_at_one_trivial(F2):
    chi = ContinuousCharacter.trivial(F2, horizon=7, prec=8)
    s = series_at_one(chi, 5)
    assert [x.coeffs[0] for x in s.coeffs] == [1, 0, 0, 0, 0]


def test_series_at_one_diag(F2):
    chi = diagonal_embed(ZpApprox.from_int(3, 2, 5), horizon=7, prec=8, source=F2)
    s = series_at_one(chi, 5)
    assert [x.coeffs[0] for x in s.coeffs] == [1, 1, 1, 1, 0]


def test_recover_exponent_round_trip(rng):
    for p in (2, 3):
        spec = FieldSpec(p, 1)
        for _ in range(10):
            c = random_zp(rng, p, 4)
            T = p**4
            s = series_at_one(AnalyticCharacter(c), T, spec)
            back = recover_exponent(s, 4)
            assert back.digits == c.digits


def test_recover_exponent_deep_digits_capped_series(rng):
    # 24-digit exponents, series capped at 2^12 terms: agreement on the digits
    # the truncation can see (12 for p = 2, 8 for p = 3)
    T = 2**12
    for p, avail in ((2, 12), (3, 8)):
        spec = FieldSpec(p, 1)
        for _ in range(20):
            c = random_zp(rng, p, 24)
            s = series_at_one(AnalyticCharacter(c), T, spec)
            back = recover_exponent(s, avail)
            assert back.digits == c.digits[:avail]


def test_recover_exponent_zero(F2):
    s = PowerSeriesAtOne(F2, [1, 0, 0, 0, 0])
    assert recover_exponent(s, 2).to_int() == 0


def test_recover_exponent_rejects_non_prime_field(F4):
    # a_1 = omega_2 sits outside F_p
    s = PowerSeriesAtOne(F4, [F4.one(), F4.omega(2), F4.zero()])
    with pytest.raises(NotAnalytic):
        recover_exponent(s, 1)


def test_recover_exponent_needs_length(F2):
    s = PowerSeriesAtOne(F2, [1, 1])
    with pytest.raises(InsufficientPrecision):
        recover_exponent(s, 3)


# ---------------------------------------------------------------------------
# analyticity verdicts


def test_diag_characters_are_analytic(rng):
    for spec in (FieldSpec(2, 1), FieldSpec(3, 2)):
        p = spec.p
        for _ in range(5):
            c = random_zp(rng, p, 3)
            N = p**3
            chi = diagonal_embed(c, horizon=7, prec=N, source=spec)
            verdict = is_locally_analytic(chi, N)
            assert verdict.analytic
            assert verdict.c.digits[: c.precision] == c.digits


def test_trivial_character_is_analytic_with_zero(F2):
    chi = ContinuousCharacter.trivial(F2, horizon=7, prec=16)
    verdict = is_locally_analytic(chi, 16)
    assert verdict.analytic and verdict.c.is_zero()


def test_off_diagonal_character_detected(F2):
    # fixes 1+t but kills 1+t^3: contradicts chi_1 on the m=3 generator
    table = {(1, 1): LaurentSeries.one_plus(F2, 1, 1, prec=8)}
    chi = ContinuousCharacter(F2, horizon=7, prec=8, table=table)
    verdict = is_locally_analytic(chi, 8)
    assert not verdict.analytic
    assert verdict.witness == ("generator", 3, 1)


def test_pattern_violation_detected(F2):
    # series 1 + t^2 + ... cannot be any (1+t)^c: c_0 = a_1 = 0 forces a_2 = binom(c_1,1) via
    # digit pattern; here a_2 = 1 is consistent with c = 2, but a_3 = 1 breaks the pattern
    img = LaurentSeries.from_coeffs(F2, [1, 0, 1, 1], 0, 8)
    chi = ContinuousCharacter(F2, horizon=7, prec=8, table={(1, 1): img})
    verdict = is_locally_analytic(chi, 8)
    assert not verdict.analytic
    assert verdict.witness[0] == "pattern"


def test_hyperderivative_witness(F4):
    # image with a_1 outside the prime field
    img = LaurentSeries.from_coeffs(F4, [F4.one(), F4.omega(2)], 0, 8)
    chi = ContinuousCharacter(F4, horizon=7, prec=8, table={(1, 1): img})
    verdict = is_locally_analytic(chi, 8)
    assert not verdict.analytic
    assert verdict.witness == ("hyperderivative", 1)


# ---------------------------------------------------------------------------
# ring structure


def test_diagonal_embed_examples(F2):
    chi0 = diagonal_embed(ZpApprox.from_int(0, 2, 4), horizon=5, prec=8, source=F2)
    assert chi0.table == {}
    chi1 = diagonal_embed(ZpApprox.from_int(1, 2, 4), horizon=5, prec=8, source=F2)
    for m in (1, 3, 5):
        assert chi1.image(m, 1).eq_to_prec(LaurentSeries.one_plus(F2, 1, m), 8)
    chi3 = diagonal_embed(ZpApprox.from_int(3, 2, 4), horizon=5, prec=8, source=F2)
    e = peel(chi3.image(1, 1), 8)
    assert e.entries[(1, 1)].to_int() % 8 == 3


def test_diagonal_embed_additive(rng):
    for spec in (FieldSpec(2, 1), FieldSpec(3, 1)):
        p = spec.p
        for _ in range(6):
            c1, c2 = random_zp(rng, p, 4), random_zp(rng, p, 4)
            N = 9
            a = diagonal_embed(c1, 5, N, spec)
            b = diagonal_embed(c2, 5, N, spec)
            ab = diagonal_embed(c1 + c2, 5, N, spec)
            prod = a.multiply(b)
            for key in set(ab.table) | set(prod.table):
                assert ab.image(*key).eq_to_prec(prod.image(*key), N)


def test_compose_analytic(rng):
    for p in (2, 3):
        spec = FieldSpec(p, 1)
        for _ in range(6):
            c1, c2 = random_zp(rng, p, 4), random_zp(rng, p, 4)
            u = random_one_unit(rng, spec, p**3)
            lhs = eval_analytic(compose_analytic(AnalyticCharacter(c1), AnalyticCharacter(c2)), u)
            rhs = one_unit_pow(one_unit_pow(u, c2), c1)
            assert lhs.eq_to_prec(rhs, min(lhs.prec, rhs.prec))
    c = ZpApprox.from_int(7, 2, 4)
    assert compose_analytic(AnalyticCharacter(c), AnalyticCharacter(ZpApprox.from_int(1, 2, 4))).c.to_int() == 7
    assert compose_analytic(AnalyticCharacter(c), AnalyticCharacter(ZpApprox.from_int(0, 2, 4))).c.is_zero()


# ---------------------------------------------------------------------------
# extension targets


def test_unramified_target(F2, F4, rng):
    tgt = TargetField(F4)
    c = ZpApprox.from_int(3, 2, 5)
    chi = diagonal_embed(c, horizon=5, prec=8, source=F2, target=tgt)
    verdict = is_locally_analytic(chi, 8)
    assert verdict.analytic and verdict.c.to_int() % 8 == 3


def test_embed_series_ramified(F2):
    u = LaurentSeries.one_plus(F2, 1, 1, prec=4)
    out = embed_series(u, TargetField(F2, e=3))
    assert out.coeff(0).is_one() and out.coeff(3).is_one()
    assert out.prec == 12


def test_ramified_target_detects_bad_positions(F2):
    tgt = TargetField(F2, e=2)
    img = LaurentSeries.from_coeffs(F2, [1, 1], 0, 8)  # coefficient at odd position
    chi = ContinuousCharacter(F2, horizon=3, prec=8, table={(1, 1): img}, target=tgt)
    verdict = is_locally_analytic(chi, 4)
    assert not verdict.analytic and verdict.witness[0] == "ramified-position"


def test_character_json_round_trip(F2, rng):
    chi = diagonal_embed(ZpApprox.from_int(5, 2, 4), horizon=5, prec=8, source=F2)
    back = ContinuousCharacter.from_json(F2, chi.to_json())
    assert back.horizon == chi.horizon and back.prec == chi.prec
    for key in chi.table:
        assert back.image(*key).eq_to_prec(chi.image(*key), 8)
