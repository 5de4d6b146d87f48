import random

import pytest

from nonarch.arith import FieldSpec


@pytest.fixture(scope="session")
def F2():
    return FieldSpec(2, 1)


@pytest.fixture(scope="session")
def F3():
    return FieldSpec(3, 1)


@pytest.fixture(scope="session")
def F4():
    return FieldSpec(2, 2)


@pytest.fixture(scope="session")
def F9():
    return FieldSpec(3, 2)


@pytest.fixture()
def rng():
    return random.Random(20240811)


def random_one_unit(rng, spec, prec, max_gap=1):
    """Random one-unit series known mod t^prec."""
    from nonarch.series import LaurentSeries

    coeffs = [spec.one()]
    for _ in range(prec - 1):
        packed = rng.randrange(spec.q)
        v, c = packed, []
        for _ in range(spec.r):
            v, digit = divmod(v, spec.p)
            c.append(digit)
        coeffs.append(spec.element(c))
    return LaurentSeries.from_coeffs(spec, coeffs, 0, prec)


def random_series(rng, spec, prec, min_val=-3):
    """Random Laurent series with nonzero leading coefficient."""
    from nonarch.series import LaurentSeries

    val = rng.randrange(min_val, 3)
    length = prec - val
    coeffs = []
    for i in range(length):
        packed = rng.randrange(1, spec.q) if i == 0 else rng.randrange(spec.q)
        v, c = packed, []
        for _ in range(spec.r):
            v, digit = divmod(v, spec.p)
            c.append(digit)
        coeffs.append(spec.element(c))
    return LaurentSeries.from_coeffs(spec, coeffs, val, prec)


def random_zp(rng, p, digits):
    from nonarch.arith import ZpApprox

    return ZpApprox(p, tuple(rng.randrange(p) for _ in range(digits)))
