"""Multiplicative structure of F_q((t))^x.

Every nonzero element factors as t^v * zeta * u with zeta in the constant
subfield F_q^x (the Teichmueller part, literal in equal characteristic)
and u a one-unit.  One-units in turn are coordinatized by exponent
vectors: u = prod over (m, i), p not dividing m, of (1 + omega_i t^m)^a(m,i)
with a(m,i) p-adic integers.  ``expand`` realizes an exponent vector as a
series, ``peel`` inverts it digit by digit.

Peeling walks the orders n = 1, 2, ... of the residual.  At the lowest n
with residual = 1 + c t^n + ..., write n = m p^s with p not dividing m;
since (1 + omega_i t^m)^(p^s) = 1 + omega_i^(p^s) t^(m p^s), the only
unknowns contributing at order n are the s-th digits of the a(m,i), and
they are forced: they are the coordinates of c in the basis omega_i^(p^s).
Dividing the matched factors out clears order n without touching lower
orders, so the walk terminates after at most N steps.

Truncation at t^N determines each a(m,i) modulo p^k(m) with
k(m) = floor(log_p((N-1)/m)) + 1, the number of digits s with m p^s < N;
exponent vectors carry exactly that much precision and no more.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import FieldSpec, FqElem, ZpApprox, fp_coords_twisted, frobenius
from .errors import DivisionByZero, InsufficientPrecision, NotOneUnit
from .series import INF, LaurentSeries, one_unit_pow


def digit_precision(m, N, p):
    """Number of base-p digits of a(m, i) determined by truncation at t^N."""
    k = 0
    power = m
    while power <= N - 1:
        k += 1
        power *= p
    return k


@dataclass(frozen=True)
class UnitDecomposition:
    """x = t^v * zeta * one_unit with zeta in F_q^x."""

    v: int
    zeta: FqElem
    one_unit: LaurentSeries

    def reassemble(self):
        return self.one_unit.scale(self.zeta).shift(self.v)

    def to_json(self):
        return {
            "v": self.v,
            "zeta": self.zeta.to_json(),
            "one_unit": self.one_unit.to_json(),
        }


def decompose(x: LaurentSeries) -> UnitDecomposition:
    """Split off the uniformizer power and the Teichmueller part."""
    if x.is_zero_like():
        raise DivisionByZero("cannot decompose zero")
    v = x.valuation()
    zeta = x.leading_coeff()
    u = x.shift(-v).scale(zeta.inverse())
    return UnitDecomposition(v, zeta, u)


@dataclass
class OneUnitExponents:
    """Coordinates of a one-unit: (m, i) -> a(m, i) for p not dividing m.

    Untracked keys with m < horizon are asserted zero (to the digit
    precision the horizon supports); nothing is claimed for m >= horizon.
    """

    spec: FieldSpec
    horizon: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (m, i), a in self.entries.items():
            if m < 1 or m % self.spec.p == 0:
                raise ValueError(f"index m={m} must be positive and prime to p")
            if not 1 <= i <= self.spec.r:
                raise ValueError(f"basis index i={i} out of range")
            if not isinstance(a, ZpApprox):
                a = ZpApprox.from_int(a, self.spec.p, digit_precision(m, self.horizon, self.spec.p) or 1)
            if not a.is_zero():
                clean[(m, i)] = a
        self.entries = clean

    def get(self, m, i):
        return self.entries.get((m, i))

    def __add__(self, other):
        """Entrywise sum; precisions truncate to what both horizons support."""
        if self.spec != other.spec:
            raise ValueError("exponent vectors over different fields")
        p = self.spec.p
        horizon = min(self.horizon, other.horizon)
        merged = {}
        for key in set(self.entries) | set(other.entries):
            m = key[0]
            k = digit_precision(m, horizon, p)
            a, b = self.entries.get(key), other.entries.get(key)
            for z in (a, b):
                if z is not None:
                    k = min(k, z.precision)
            if k < 1:
                continue
            total = (a.to_int() if a else 0) + (b.to_int() if b else 0)
            merged[key] = ZpApprox.from_int(total, p, k)
        return OneUnitExponents(self.spec, horizon, merged)

    def agrees_with(self, other, N=None):
        """Entrywise agreement mod p^k(m) relative to min(horizons, N)."""
        if self.spec != other.spec:
            return False
        bound = min(self.horizon, other.horizon)
        if N is not None:
            bound = min(bound, N)
        p = self.spec.p
        for key in set(self.entries) | set(other.entries):
            m = key[0]
            if m >= bound:
                continue
            k = digit_precision(m, bound, p)
            a, b = self.entries.get(key), other.entries.get(key)
            for z in (a, b):
                if z is not None:
                    k = min(k, z.precision)
            if k < 1:
                continue
            av = (a.to_int() if a else 0) % p**k
            bv = (b.to_int() if b else 0) % p**k
            if av != bv:
                return False
        return True

    def to_json(self):
        return {
            "horizon": self.horizon,
            "entries": [
                {"m": m, "i": i, "exp": a.to_json()}
                for (m, i), a in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, spec, data):
        entries = {
            (e["m"], e["i"]): ZpApprox.from_json(e["exp"]) for e in data.get("entries", [])
        }
        return cls(spec, data.get("horizon", 0), entries)


def expand(e: OneUnitExponents, N: int) -> LaurentSeries:
    """Realize exponent coordinates as the one-unit prod (1+omega_i t^m)^a(m,i) mod t^N."""
    spec = e.spec
    p = spec.p
    result = LaurentSeries.one(spec, N)
    for (m, i), a in sorted(e.entries.items()):
        if m >= N:
            continue
        need = digit_precision(m, N, p)
        if a.precision < need:
            raise InsufficientPrecision(
                f"entry ({m},{i}) carries {a.precision} digits, expansion at t^{N} needs {need}"
            )
        base = LaurentSeries.one_plus(spec, spec.omega(i), m)
        result = result * one_unit_pow(base, a.truncate(need), prec=N)
    return result.truncate(N)


def peel(u: LaurentSeries, N: int = None) -> OneUnitExponents:
    """Invert ``expand``: read off exponent coordinates of a one-unit mod t^N."""
    if not u.is_one_unit():
        raise NotOneUnit("can only peel a series congruent to 1 mod t")
    if N is None:
        N = u.prec
    if N == INF:
        raise ValueError("peeling an exact series needs an explicit truncation order")
    N = int(N)
    if u.prec < N:
        raise InsufficientPrecision(f"series known mod t^{u.prec}, peel requested mod t^{N}")
    spec = u.spec
    p = spec.p
    residual = u.truncate(N)
    digits = {}  # (m, i) -> list of digits, length k(m)
    for n in range(1, N):
        c = residual.coeff(n)
        if c.is_zero():
            continue
        m, s = n, 0
        while m % p == 0:
            m //= p
            s += 1
        gamma = fp_coords_twisted(c, s, spec)
        for i, g in enumerate(gamma, start=1):
            if g == 0:
                continue
            key = (m, i)
            if key not in digits:
                digits[key] = [0] * digit_precision(m, N, p)
            digits[key][s] = g
            # divide off (1 + omega_i t^m)^(g p^s) = (1 + omega_i^(p^s) t^n)^g
            w = frobenius(spec.omega(i), s)
            inv_coeffs = [spec.one()]
            minus_w = -w
            acc = spec.one()
            for _ in range(n, N, n):
                acc = acc * minus_w
                inv_coeffs.append(acc)
            factor_inv = LaurentSeries.from_coeffs(
                spec,
                [
                    inv_coeffs[j // n] if j % n == 0 else spec.zero()
                    for j in range((len(inv_coeffs) - 1) * n + 1)
                ],
                0,
                N,
            )
            for _ in range(g):
                residual = (residual * factor_inv).truncate(N)
        assert residual.coeff(n).is_zero(), "peeling failed to clear an order"
    entries = {
        key: ZpApprox(p, tuple(dlist)) for key, dlist in digits.items()
    }
    return OneUnitExponents(spec, N, entries)
