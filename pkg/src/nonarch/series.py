"""Truncated Laurent and power series over F_q.

A LaurentSeries stores the coefficients it actually knows: for a series of
valuation v and precision N (coefficients of t^n are unknown for n >= N)
the known window is exactly [v, N).  Exact polynomials carry precision
+infinity.  Every operation returns the tightest provable precision and
never silently extends it; ZERO is the distinguished exact zero with
valuation treated as +infinity.

One-units (series congruent to 1 mod t) can be raised to p-adic powers
via digitwise binomial coefficients, and Hasse hyperderivatives
D^(k): sum a_n t^n -> sum binom(n, k) a_n t^(n-k)
are available on both Laurent series and power series centred at 1.
Coefficient crunching is delegated to numpy integer convolutions; all
values stay exact.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .arith import FieldSpec, FqElem, ZpApprox, lucas_binom, _poly_mod
from .errors import DivisionByZero, InsufficientPrecision, NotOneUnit

INF = math.inf


@functools.lru_cache(maxsize=None)
def _reduction_rows(spec):
    """Coordinates of x^r, ..., x^(2r-2) mod the field modulus, as an array."""
    r = spec.r
    rows = []
    for m in range(r, 2 * r - 1):
        xm = (0,) * m + (1,)
        red = _poly_mod(xm, spec.modulus, spec.p)
        rows.append(tuple(red) + (0,) * (r - len(red)))
    return np.array(rows, dtype=np.int64).reshape(max(r - 1, 0), r)


def _fq_conv(spec, A, B):
    """Convolution of two coefficient blocks, reduced into F_q coordinates.

    A and B have shape (la, r) and (lb, r) with entries in [0, p); the
    result has shape (la+lb-1, r).  Intermediate values stay far below
    2^63 at desk scale, so int64 arithmetic is exact.
    """
    r, p = spec.r, spec.p
    la, lb = A.shape[0], B.shape[0]
    acc = np.zeros((la + lb - 1, 2 * r - 1), dtype=np.int64)
    for i in range(r):
        if not A[:, i].any():
            continue
        for j in range(r):
            if not B[:, j].any():
                continue
            acc[:, i + j] += np.convolve(A[:, i], B[:, j])
    if r > 1:
        red = _reduction_rows(spec)
        out = acc[:, :r] + acc[:, r:] @ red
    else:
        out = acc
    return out % p


def _rows_from_coeffs(spec, coeffs):
    rows = []
    for c in coeffs:
        if isinstance(c, FqElem):
            if c.spec != spec:
                raise ValueError("field mismatch in coefficients")
            rows.append(c.coeffs)
        elif isinstance(c, int):
            rows.append(spec.from_int(c).coeffs)
        else:
            rows.append(spec.element(c).coeffs)
    return np.array(rows, dtype=np.int64).reshape(len(rows), spec.r)


class LaurentSeries:
    """Element of F_q((t)) known modulo t^prec."""

    __slots__ = ("spec", "val", "prec", "_a")

    def __init__(self, spec, val, array, prec, _normalized=False):
        self.spec = spec
        self._a = array
        self.prec = prec
        self.val = val
        if not _normalized:
            self._normalize()

    def _normalize(self):
        a = self._a
        n = a.shape[0]
        if self.prec != INF and self.prec <= self.val:
            self._a = a[:0]
            self.val = self.prec
            return
        lead = 0
        while lead < n and not a[lead].any():
            lead += 1
        if lead == n:
            # nothing known to be nonzero
            self._a = a[:0]
            self.val = self.prec
            return
        if self.prec == INF:
            tail = n
            while tail > lead and not a[tail - 1].any():
                tail -= 1
            self._a = a[lead:tail]
            self.val = self.val + lead
        else:
            self.val = self.val + lead
            want = self.prec - self.val
            block = a[lead:]
            if block.shape[0] > want:
                block = block[:want]
            elif block.shape[0] < want:
                pad = np.zeros((want - block.shape[0], self.spec.r), dtype=np.int64)
                block = np.concatenate([block, pad])
            self._a = block

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, spec, coeffs, val=0, prec=None):
        rows = _rows_from_coeffs(spec, list(coeffs)) % spec.p
        if prec is None:
            prec = INF
        if prec != INF and prec - val > rows.shape[0]:
            pad = np.zeros((prec - val - rows.shape[0], spec.r), dtype=np.int64)
            rows = np.concatenate([rows, pad])
        return cls(spec, val, rows, prec)

    @classmethod
    def zero(cls, spec):
        return cls(spec, INF, np.zeros((0, spec.r), dtype=np.int64), INF, _normalized=True)

    @classmethod
    def zero_mod(cls, spec, prec):
        return cls(spec, prec, np.zeros((0, spec.r), dtype=np.int64), prec, _normalized=True)

    @classmethod
    def one(cls, spec, prec=None):
        return cls.from_coeffs(spec, [spec.one()], 0, prec)

    @classmethod
    def monomial(cls, spec, coeff, m, prec=None):
        if isinstance(coeff, int):
            coeff = spec.from_int(coeff)
        return cls.from_coeffs(spec, [coeff], m, prec)

    @classmethod
    def one_plus(cls, spec, coeff, m, prec=None):
        """1 + coeff * t^m, exact unless prec is given."""
        if m < 1:
            raise ValueError("need m >= 1 for a one-unit")
        if isinstance(coeff, int):
            coeff = spec.from_int(coeff)
        coeffs = [spec.one()] + [spec.zero()] * (m - 1) + [coeff]
        return cls.from_coeffs(spec, coeffs, 0, prec)

    # -- inspection ----------------------------------------------------------

    def is_zero_like(self):
        """True when no coefficient is known to be nonzero."""
        return self._a.shape[0] == 0

    def is_exact_zero(self):
        return self.is_zero_like() and self.prec == INF

    def valuation(self):
        """t-adic valuation; None when the series has no known nonzero term."""
        return None if self.is_zero_like() else self.val

    def coeff(self, n):
        if n >= self.prec:
            raise InsufficientPrecision(f"coefficient of t^{n} beyond precision {self.prec}")
        if self.is_zero_like() or n < self.val or n >= self.val + self._a.shape[0]:
            return self.spec.zero()
        return FqElem(self.spec, tuple(int(x) for x in self._a[n - self.val]))

    def leading_coeff(self):
        if self.is_zero_like():
            raise DivisionByZero("zero series has no leading coefficient")
        return FqElem(self.spec, tuple(int(x) for x in self._a[0]))

    def is_one_unit(self):
        return (
            not self.is_zero_like()
            and self.val == 0
            and self.prec >= 1
            and self.coeff(0).is_one()
        )

    def known_coeffs(self):
        """Pairs (n, coefficient) over the known window, including zeros."""
        return [(self.val + i, FqElem(self.spec, tuple(int(x) for x in row)))
                for i, row in enumerate(self._a)]

    # -- ring operations -----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            if isinstance(other, int):
                return LaurentSeries.from_coeffs(self.spec, [other], 0, None)
            if isinstance(other, FqElem):
                return LaurentSeries.from_coeffs(self.spec, [other], 0, None)
            raise TypeError(f"cannot combine LaurentSeries with {type(other).__name__}")
        if other.spec != self.spec:
            raise ValueError("series over different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        prec = min(self.prec, other.prec)
        if self.is_zero_like() and other.is_zero_like():
            return LaurentSeries.zero(self.spec) if prec == INF else LaurentSeries.zero_mod(self.spec, prec)
        lo = min(self.val, other.val)
        if prec == INF:
            hi = max(self.val + self._a.shape[0], other.val + other._a.shape[0])
        else:
            hi = prec
        length = max(int(hi - lo), 0)
        if length == 0:
            return LaurentSeries.zero_mod(self.spec, prec)
        out = np.zeros((length, self.spec.r), dtype=np.int64)
        for s in (self, other):
            if s._a.shape[0]:
                i0 = int(s.val - lo)
                take = min(s._a.shape[0], length - i0)
                if take > 0:
                    out[i0 : i0 + take] += s._a[:take]
        return LaurentSeries(self.spec, lo, out % self.spec.p, prec)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return LaurentSeries(
            self.spec, self.val, (-self._a) % self.spec.p, self.prec, _normalized=True
        )

    def __sub__(self, other):
        return self.__add__(self._check(other).__neg__())

    def __rsub__(self, other):
        return self._check(other).__sub__(self)

    def __mul__(self, other):
        other = self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.zero(self.spec)
        prec = min(self.prec + other.val, other.prec + self.val)
        if self.is_zero_like() or other.is_zero_like():
            return LaurentSeries.zero_mod(self.spec, prec)
        conv = _fq_conv(self.spec, self._a, other._a)
        val = self.val + other.val
        if prec != INF:
            conv = conv[: int(prec - val)]
        return LaurentSeries(self.spec, val, conv, prec)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c):
        """Multiply by a field scalar."""
        if isinstance(c, int):
            c = self.spec.from_int(c)
        if c.is_zero():
            return (
                LaurentSeries.zero(self.spec)
                if self.prec == INF
                else LaurentSeries.zero_mod(self.spec, self.prec)
            )
        if self.is_zero_like():
            return self
        block = _fq_conv(self.spec, self._a, np.array([c.coeffs], dtype=np.int64))
        return LaurentSeries(self.spec, self.val, block, self.prec, _normalized=True)

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentSeries(
            self.spec,
            self.val + k,
            self._a,
            self.prec + k if self.prec != INF else INF,
            _normalized=True,
        )

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        if self.is_zero_like() or prec <= self.val:
            return LaurentSeries.zero_mod(self.spec, prec)
        return LaurentSeries(self.spec, self.val, self._a[: int(prec - self.val)], prec)

    def inverse(self, prec=None):
        """Multiplicative inverse; prec bounds the output when self is exact."""
        if self.is_zero_like():
            raise DivisionByZero("cannot invert a series with no known nonzero term")
        v = self.val
        unit = self._a
        lead = self.leading_coeff()
        lead_inv = lead.inverse()
        if unit.shape[0] == 1 or not unit[1:].any():
            # monomial to precision: exact closed form
            out_prec = self.prec - 2 * v if self.prec != INF else INF
            if prec is not None:
                out_prec = min(out_prec, prec)
            return LaurentSeries.monomial(self.spec, lead_inv, -v, None).truncate(out_prec)
        if self.prec == INF:
            if prec is None:
                raise ValueError("inverse of a non-monomial exact series needs a precision bound")
            rel = int(prec + v)
        else:
            rel = int(self.prec - v)
            if prec is not None:
                rel = min(rel, int(prec + v))
        if rel <= 0:
            raise ValueError("requested precision leaves no computable coefficients")
        # recursive convolution on the unit part
        a = [self.coeff(v + j) for j in range(rel)]
        b = [lead_inv]
        for n in range(1, rel):
            s = self.spec.zero()
            for j in range(1, n + 1):
                if not a[j].is_zero():
                    s = s + a[j] * b[n - j]
            b.append(-(lead_inv * s))
        return LaurentSeries.from_coeffs(self.spec, b, -v, -v + rel)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = LaurentSeries.one(self.spec)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- comparisons ---------------------------------------------------------

    def eq_to_prec(self, other, upto=None):
        """Coefficientwise equality on the window both sides know (cap by upto)."""
        other = self._check(other)
        bound = min(self.prec, other.prec)
        if upto is not None:
            bound = min(bound, upto)
        if bound == INF:
            return (
                self.is_zero_like() == other.is_zero_like()
                and self.val == other.val
                and self._a.shape == other._a.shape
                and bool((self._a == other._a).all())
            )
        lo = min(self.val, other.val)
        if lo >= bound:
            return True
        for n in range(int(lo), int(bound)):
            if self.coeff(n) != other.coeff(n):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.prec == other.prec
            and self.val == other.val
            and self._a.shape == other._a.shape
            and bool((self._a == other._a).all())
        )

    def __hash__(self):
        return hash((self.spec, self.val, self.prec, self._a.tobytes()))

    def __repr__(self):
        if self.is_zero_like():
            return "0" if self.prec == INF else f"O(t^{self.prec})"
        terms = []
        for n, c in self.known_coeffs():
            if c.is_zero():
                continue
            if self.spec.r == 1:
                cs = str(c.coeffs[0])
            else:
                cs = "(" + ",".join(map(str, c.coeffs)) + ")"
            if n == 0:
                terms.append(cs)
            else:
                terms.append(f"{cs}*t^{n}" if cs != "1" else f"t^{n}")
        body = " + ".join(terms) if terms else "0"
        tail = "" if self.prec == INF else f" + O(t^{self.prec})"
        return body + tail

    # -- serialization -------------------------------------------------------

    def to_json(self):
        if self.is_zero_like():
            if self.prec == INF:
                return {"zero": True}
            return {"zero": True, "prec": int(self.prec)}
        out = {
            "val": int(self.val),
            "coeffs": [list(map(int, row)) for row in self._a],
        }
        if self.prec != INF:
            out["prec"] = int(self.prec)
        return out

    @classmethod
    def from_json(cls, spec, data):
        if data.get("zero"):
            if "prec" in data:
                return cls.zero_mod(spec, data["prec"])
            return cls.zero(spec)
        val = data.get("val", 0)
        coeffs = data["coeffs"]
        if isinstance(coeffs, str):
            coeffs = [int(ch) for ch in coeffs]
        prec = data.get("prec")
        return cls.from_coeffs(spec, coeffs, val, prec)


def ls_mul(f, g):
    return f * g


def ls_inv(f, prec=None):
    return f.inverse(prec)


def one_unit_pow(u: LaurentSeries, c, prec=None) -> LaurentSeries:
    """u^c for a one-unit u and a p-adic exponent c (ZpApprox or integer).

    Computes sum_n binom(c, n) (u-1)^n with digitwise binomials.  Writing
    w = val(u-1) and T = ceil(prec/w), the exponent must carry enough digits
    that binom(c, n) is determined for all n < T.
    """
    if not u.is_one_unit():
        raise NotOneUnit("base of a p-adic power must be congruent to 1 mod t")
    spec = u.spec
    p = spec.p
    x = u - LaurentSeries.one(spec)
    out_prec = u.prec if prec is None else min(u.prec, prec)
    if x.is_zero_like():
        if x.prec == INF:
            return LaurentSeries.one(spec, None if out_prec == INF else out_prec)
        return LaurentSeries.one(spec, min(out_prec, x.prec))
    w = x.val
    if out_prec == INF:
        if isinstance(c, ZpApprox):
            # beyond w * p^digits the coefficients are undetermined
            out_prec = w * p**c.precision
        elif not (isinstance(c, int) and c >= 0):
            raise ValueError("negative integer exponent on an exact series needs a precision bound")
    if out_prec == INF:
        T = c + 1  # exact binomial expansion of a polynomial
    else:
        T = int(-(-out_prec // w))  # ceil
    n_max = T - 1
    if isinstance(c, ZpApprox):
        if n_max >= p**c.precision:
            raise InsufficientPrecision(
                f"exponent carries {c.precision} digits, power needs binomials up to n={n_max}"
            )
    monomial_like = not x._a[1:].any()
    if monomial_like:
        omega = x.leading_coeff()
        coeffs = [spec.zero()] * (int(out_prec) if out_prec != INF else n_max * w + 1)
        coeffs[0] = spec.one()
        om_pow = spec.one()
        for n in range(1, n_max + 1):
            om_pow = om_pow * omega
            b = lucas_binom(c, n, p)
            if b and (out_prec == INF or n * w < out_prec):
                coeffs[n * w] = spec.from_int(b) * om_pow
        return LaurentSeries.from_coeffs(spec, coeffs, 0, None if out_prec == INF else out_prec)
    # Horner over the truncation
    acc = LaurentSeries.from_coeffs(spec, [lucas_binom(c, n_max, p)], 0, None)
    for n in range(n_max - 1, -1, -1):
        acc = (acc * x).truncate(out_prec) + LaurentSeries.from_coeffs(
            spec, [lucas_binom(c, n, p)], 0, None
        )
    return acc.truncate(out_prec)


def hasse_derivative(f, k: int):
    """k-th hyperderivative: coefficient a_n moves to slot n-k scaled by binom(n, k)."""
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    if isinstance(f, PowerSeriesAtOne):
        return f.hasse_derivative(k)
    if k == 0:
        return f
    spec = f.spec
    if f.is_zero_like():
        return LaurentSeries.zero_mod(spec, f.prec - k) if f.prec != INF else f
    scale = np.array(
        [lucas_binom(n, k, spec.p) for n, _ in f.known_coeffs()], dtype=np.int64
    )
    block = (f._a * scale[:, None]) % spec.p
    new_prec = f.prec - k if f.prec != INF else INF
    return LaurentSeries(spec, f.val - k, block, new_prec)


class PowerSeriesAtOne:
    """Truncated power series sum a_n (z-1)^n with coefficients in F_q."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec, coeffs):
        self.spec = spec
        norm = []
        for c in coeffs:
            if isinstance(c, int):
                c = spec.from_int(c)
            elif not isinstance(c, FqElem):
                c = spec.element(c)
            norm.append(c)
        self.coeffs = tuple(norm)

    @property
    def length(self):
        return len(self.coeffs)

    def coeff(self, n):
        if n >= len(self.coeffs):
            raise InsufficientPrecision(f"coefficient {n} beyond truncation {len(self.coeffs)}")
        return self.coeffs[n]

    def __mul__(self, other):
        if other.spec != self.spec:
            raise ValueError("series over different fields")
        T = min(len(self.coeffs), len(other.coeffs))
        A = _rows_from_coeffs(self.spec, self.coeffs[:T])
        B = _rows_from_coeffs(self.spec, other.coeffs[:T])
        conv = _fq_conv(self.spec, A, B)[:T]
        return PowerSeriesAtOne(
            self.spec, [FqElem(self.spec, tuple(int(x) for x in row)) for row in conv]
        )

    def __add__(self, other):
        T = min(len(self.coeffs), len(other.coeffs))
        return PowerSeriesAtOne(
            self.spec, [self.coeffs[i] + other.coeffs[i] for i in range(T)]
        )

    def hasse_derivative(self, k):
        p = self.spec.p
        out = []
        for n in range(k, len(self.coeffs)):
            b = lucas_binom(n, k, p)
            out.append(self.coeffs[n] * b if b else self.spec.zero())
        return PowerSeriesAtOne(self.spec, out)

    def evaluate(self, u: LaurentSeries) -> LaurentSeries:
        """Substitute a one-unit for z: returns sum a_n (u-1)^n as a Laurent series."""
        if not u.is_one_unit():
            raise NotOneUnit("substitution requires a one-unit")
        spec = u.spec
        x = u - LaurentSeries.one(spec)
        if x.is_zero_like():
            cap = x.prec
        else:
            cap = x.val * len(self.coeffs)
        out_prec = min(u.prec, cap)
        acc = LaurentSeries.zero(spec)
        for n in range(len(self.coeffs) - 1, -1, -1):
            term = LaurentSeries.from_coeffs(spec, [self.coeffs[n]], 0, None)
            acc = (acc * x).truncate(out_prec) + term
        return acc.truncate(out_prec)

    def __eq__(self, other):
        if not isinstance(other, PowerSeriesAtOne):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __repr__(self):
        shown = ", ".join(repr(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"PowerSeriesAtOne[{shown}{more}]"

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, spec, data):
        return cls(spec, [FqElem.from_json(spec, c) for c in data["coeffs"]])
