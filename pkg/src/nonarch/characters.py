"""Characters of the one-unit group of F_q((t)).

A continuous character is stored by its images on the standard one-unit
generators 1 + omega_i t^m (p not dividing m): a finite table up to a
horizon M, with the character asserted trivial on generators beyond the
horizon.  Values may live in a finite extension L of the source field,
specified by a TargetField (coefficient field F_{q^f} plus ramification e,
realized by rebasing t = t_L^e).

Locally analytic characters are the powers z -> z^c for a p-adic integer
c; they form a copy of Z_p whose multiplication corresponds to composition
of characters.  Such a character is pinned down by the coefficients of its
power series at 1: the digit c_i is the coefficient a_{p^i}, which must lie
in the prime field, and the full coefficient pattern is the digitwise
binomial a_n = prod binom(c_i, n_i).  Testing analyticity of a table
character is therefore two-staged: check the coefficient pattern of its
series at 1, then check agreement with z -> z^c on every tracked generator
(the pattern alone cannot see generators 1 + omega_i t^m with m > 1).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .arith import FieldSpec, FqElem, ZpApprox, lucas_binom
from .errors import (
    HorizonExceeded,
    InsufficientPrecision,
    NotAnalytic,
    NotOneUnit,
)
from .series import INF, LaurentSeries, PowerSeriesAtOne, one_unit_pow
from .units import OneUnitExponents, digit_precision, peel


@functools.lru_cache(maxsize=None)
def _embedding_image(src: FieldSpec, dst: FieldSpec):
    """Deterministic image of the source field generator inside dst."""
    if src == dst:
        return dst.gen()
    if dst.p != src.p or dst.r % src.r:
        raise ValueError("target field does not contain the source field")
    for a in dst.elements():
        acc = dst.zero()
        power = dst.one()
        for coef in src.modulus:
            if coef:
                acc = acc + power * dst.from_int(coef)
            power = power * a
        if acc.is_zero():
            return a
    raise ValueError("no root of the source modulus in the target field")


def embed_elem(a: FqElem, dst: FieldSpec) -> FqElem:
    if a.spec == dst:
        return a
    img = _embedding_image(a.spec, dst)
    acc = dst.zero()
    power = dst.one()
    for coef in a.coeffs:
        if coef:
            acc = acc + power * dst.from_int(coef)
        power = power * img
    return acc


@dataclass(frozen=True)
class TargetField:
    """Value field for characters: coefficients F_{q^f}, uniformizer t_L^e = t."""

    spec: FieldSpec
    e: int = 1

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("ramification index must be positive")


def embed_series(u: LaurentSeries, target: TargetField) -> LaurentSeries:
    """Include a series over the source field into the target field."""
    dst, e = target.spec, target.e
    if dst == u.spec and e == 1:
        return u
    if u.is_zero_like():
        prec = u.prec if u.prec == INF else u.prec * e
        return LaurentSeries.zero(dst) if prec == INF else LaurentSeries.zero_mod(dst, prec)
    pairs = [(e * n, embed_elem(c, dst)) for n, c in u.known_coeffs()]
    lo = pairs[0][0]
    hi = pairs[-1][0]
    coeffs = [dst.zero()] * (hi - lo + 1)
    for n, c in pairs:
        coeffs[n - lo] = c
    prec = u.prec if u.prec == INF else u.prec * e
    return LaurentSeries.from_coeffs(dst, coeffs, lo, None if prec == INF else prec)


@dataclass(frozen=True)
class AnalyticCharacter:
    """The character z -> z^c of the one-unit group, c a p-adic integer."""

    c: ZpApprox


class ContinuousCharacter:
    """Table character on one-unit generators, trivial beyond its horizon."""

    def __init__(self, source, horizon, prec, table, target=None):
        self.source = source
        self.target = target or TargetField(source)
        self.horizon = horizon
        self.prec = prec
        clean = {}
        for (m, i), entry in table.items():
            if m < 1 or m % source.p == 0:
                raise ValueError(f"generator index m={m} must be prime to p")
            if not 1 <= i <= source.r:
                raise ValueError(f"basis index i={i} out of range")
            if m > horizon:
                raise ValueError(f"table entry at m={m} lies beyond the horizon {horizon}")
            if not entry.is_one_unit():
                raise NotOneUnit(f"image of generator ({m},{i}) is not a one-unit")
            entry = entry.truncate(prec)
            if not (entry - LaurentSeries.one(entry.spec)).is_zero_like():
                clean[(m, i)] = entry
        self.table = clean

    @classmethod
    def trivial(cls, source, horizon, prec, target=None):
        return cls(source, horizon, prec, {}, target)

    def image(self, m, i):
        """Stored image of 1 + omega_i t^m (trivial when untracked)."""
        entry = self.table.get((m, i))
        if entry is not None:
            return entry
        return LaurentSeries.one(self.target.spec, self.prec)

    def generator_keys(self):
        p = self.source.p
        return [
            (m, i)
            for m in range(1, self.horizon + 1)
            if m % p
            for i in range(1, self.source.r + 1)
        ]

    def multiply(self, other):
        """Pointwise product of characters (addition of exponent data)."""
        if self.source != other.source or self.target != other.target:
            raise ValueError("characters on different groups")
        horizon = min(self.horizon, other.horizon)
        prec = min(self.prec, other.prec)
        keys = {k for k in (set(self.table) | set(other.table)) if k[0] <= horizon}
        table = {
            k: (self.image(*k) * other.image(*k)).truncate(prec) for k in keys
        }
        return ContinuousCharacter(self.source, horizon, prec, table, self.target)

    def to_json(self):
        return {
            "horizon": self.horizon,
            "prec": self.prec,
            "table": [
                {"m": m, "i": i, "image": entry.to_json()}
                for (m, i), entry in sorted(self.table.items())
            ],
        }

    @classmethod
    def from_json(cls, source, data, target=None):
        target = target or TargetField(source)
        table = {
            (item["m"], item["i"]): LaurentSeries.from_json(target.spec, item["image"])
            for item in data.get("table", [])
        }
        return cls(source, data["horizon"], data["prec"], table, target)


def eval_continuous(chi: ContinuousCharacter, u: LaurentSeries) -> LaurentSeries:
    """Evaluate a table character on a one-unit, at the tightest provable precision."""
    if not u.is_one_unit():
        raise NotOneUnit("characters act on one-units")
    if u.spec != chi.source:
        raise ValueError("argument lies in the wrong field")
    p = chi.source.p
    N_u = u.prec if u.prec != INF else chi.prec
    N_u = int(min(N_u, max(chi.prec, chi.horizon + 1)))
    exps = peel(u.truncate(N_u), N_u)
    cap = chi.prec
    # generators the truncation of u cannot see, but whose images are tracked
    for (m, i), entry in chi.table.items():
        if m >= N_u:
            diff = entry - LaurentSeries.one(entry.spec)
            if not diff.is_zero_like():
                cap = min(cap, diff.val)
    L = chi.target.spec
    result = LaurentSeries.one(L, cap)
    for (m, i), a in sorted(exps.entries.items()):
        if m > chi.horizon:
            raise HorizonExceeded(
                f"argument moves generator m={m} beyond the character horizon {chi.horizon}"
            )
        entry = chi.table.get((m, i))
        if entry is None:
            continue
        diff = entry - LaurentSeries.one(entry.spec)
        if diff.is_zero_like():
            continue
        w = diff.val
        factor_prec = min(cap, w * p**a.precision)
        factor = one_unit_pow(entry.truncate(factor_prec), a)
        cap = min(cap, factor.prec)
        result = (result * factor).truncate(cap)
    return result.truncate(cap)


def eval_analytic(chi: AnalyticCharacter, z: LaurentSeries, prec=None) -> LaurentSeries:
    """chi_c(z) = z^c."""
    return one_unit_pow(z, chi.c, prec)


def series_at_one(chi, T: int, spec: FieldSpec = None) -> PowerSeriesAtOne:
    """Coefficients a_0..a_{T-1} of chi(1+t) = sum a_n t^n.

    For an analytic character the coefficients are the digitwise binomials
    binom(c, n).  For a table character they are read off the stored image
    of 1 + t; a ramified target must place them on e-divisible positions.
    """
    if isinstance(chi, AnalyticCharacter):
        if spec is None:
            raise ValueError("a coefficient field is required for analytic characters")
        p = chi.c.p
        if spec.p != p:
            raise ValueError("character and field have different residue characteristics")
        if T - 1 >= p**chi.c.precision:
            raise InsufficientPrecision(
                f"series at 1 to {T} terms needs more digits than {chi.c.precision}"
            )
        return PowerSeriesAtOne(spec, [lucas_binom(chi.c, n) for n in range(T)])
    source = chi.source
    e = chi.target.e
    one_plus_t = LaurentSeries.one_plus(source, source.one(), 1, prec=max(chi.prec, 2))
    img = eval_continuous(chi, one_plus_t)
    if img.prec < e * (T - 1) + 1:
        raise InsufficientPrecision(
            f"character precision {chi.prec} cannot supply {T} coefficients"
        )
    L = chi.target.spec
    coeffs = []
    for n in range(T):
        coeffs.append(img.coeff(e * n))
    if e > 1:
        for n in range(int(img.prec)):
            if n % e and not img.coeff(n).is_zero():
                err = NotAnalytic(
                    f"image of 1+t has a coefficient at ramified position {n}"
                )
                err.witness = ("ramified-position", n)
                raise err
    return PowerSeriesAtOne(L, coeffs)


def recover_exponent(a: PowerSeriesAtOne, k: int) -> ZpApprox:
    """Digits of c from a_{p^i}: requires every a_{p^i} to lie in F_p."""
    p = a.spec.p
    if k < 1:
        raise ValueError("at least one digit must be requested")
    if a.length <= p ** (k - 1):
        raise InsufficientPrecision(
            f"need series length > p^{k - 1} = {p ** (k - 1)}, have {a.length}"
        )
    digits = []
    for i in range(k):
        coeff = a.coeff(p**i)
        v = coeff.prime_field_value()
        if v is None:
            err = NotAnalytic(
                f"hyperderivative value at order p^{i} lies outside the prime field"
            )
            err.witness = ("hyperderivative", p**i)
            raise err
        digits.append(v)
    return ZpApprox(p, tuple(digits))


@dataclass(frozen=True)
class AnalyticityVerdict:
    analytic: bool
    c: ZpApprox | None = None
    witness: tuple | None = None


def is_locally_analytic(chi: ContinuousCharacter, T: int) -> AnalyticityVerdict:
    """Two-stage test: coefficient pattern of the series at 1, then generator agreement."""
    p = chi.source.p
    try:
        a = series_at_one(chi, T)
    except NotAnalytic as err:
        return AnalyticityVerdict(False, None, getattr(err, "witness", ("coefficient", -1)))
    k = 1
    while p**k <= T - 1:
        k += 1
    try:
        c = recover_exponent(a, k)
    except NotAnalytic as err:
        return AnalyticityVerdict(False, None, getattr(err, "witness", ("hyperderivative", -1)))
    # stage (a): the digitwise binomial pattern must reproduce every coefficient
    for n in range(T):
        expected = lucas_binom(c, n)
        if a.coeff(n) != a.spec.from_int(expected):
            return AnalyticityVerdict(False, None, ("pattern", n))
    # stage (b): agreement with z -> z^c on every tracked generator
    L = chi.target.spec
    for m, i in chi.generator_keys():
        base = LaurentSeries.one_plus(chi.source, chi.source.omega(i), m)
        base_L = embed_series(base, chi.target)
        cap = min(chi.prec, chi.target.e * m * p**c.precision)
        candidate = one_unit_pow(base_L.truncate(cap) if cap != INF else base_L, c, prec=cap)
        claimed = chi.image(m, i)
        if not claimed.eq_to_prec(candidate, cap):
            return AnalyticityVerdict(False, None, ("generator", m, i))
    return AnalyticityVerdict(True, c, None)


def diagonal_embed(
    c: ZpApprox, horizon: int, prec: int, source: FieldSpec, target: TargetField = None
) -> ContinuousCharacter:
    """The table character of z -> z^c: every generator maps to its own c-th power."""
    target = target or TargetField(source)
    p = source.p
    table = {}
    for m in range(1, horizon + 1):
        if m % p == 0:
            continue
        for i in range(1, source.r + 1):
            base = LaurentSeries.one_plus(source, source.omega(i), m)
            base_L = embed_series(base, target).truncate(prec)
            table[(m, i)] = one_unit_pow(base_L, c, prec=prec)
    return ContinuousCharacter(source, horizon, prec, table, target)


def compose_analytic(chi, psi) -> AnalyticCharacter:
    """chi_c composed with chi_c' is chi_{c c'}; exponents multiply."""
    c1 = chi.c if isinstance(chi, AnalyticCharacter) else chi
    c2 = psi.c if isinstance(psi, AnalyticCharacter) else psi
    return AnalyticCharacter(c1 * c2)
