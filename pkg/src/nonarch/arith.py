"""Exact arithmetic in F_{p^r}, truncated p-adic integers, and digitwise binomials.

Elements of F_q, q = p^r, are coefficient vectors in the power basis
1, x, ..., x^{r-1} of F_p[x]/(modulus).  A FieldSpec fixes p, r, the
modulus and a distinguished F_p-basis omega_1, ..., omega_r (the power
basis by default).  All operations are pure and all values immutable,
so everything here can be shared freely between threads or processes.

Truncated p-adic integers (ZpApprox) store base-p digits d_0, ..., d_{k-1}
representing a residue mod p^k; arithmetic truncates mixed precisions to
the minimum so that precision claims stay auditable.

The binomial coefficient mod p extends from non-negative integers to
p-adic integers digit by digit: binom(c, n) = prod binom(c_i, n_i) mod p
over aligned base-p digits, with binom(a, b) = 0 for a < b.  For integer
arguments this agrees with the exact integer binomial reduced mod p.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

from .errors import DivisionByZero, InsufficientPrecision

# ---------------------------------------------------------------------------
# small prime-field polynomial helpers (coefficient tuples, little-endian)


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    a = list(a)
    b = _poly_trim(b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    deg_b = len(b) - 1
    quot = [0] * max(len(a) - deg_b, 0)
    for i in range(len(a) - 1, deg_b - 1, -1):
        coef = a[i] % p
        if coef:
            q = (coef * inv_lead) % p
            quot[i - deg_b] = q
            for j, bj in enumerate(b):
                a[i - deg_b + j] = (a[i - deg_b + j] - q * bj) % p
    return _poly_trim(quot), _poly_trim([x % p for x in a])


def _poly_mod(a, m, p):
    return _poly_divmod(a, m, p)[1]


def _poly_pow_mod(a, n, m, p):
    result = (1,)
    base = _poly_mod(a, m, p)
    while n:
        if n & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        n >>= 1
    return result


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _all_monic_polys(deg, p):
    """Yield all monic polynomials of exact degree deg over F_p."""
    for packed in range(p**deg):
        c = []
        v = packed
        for _ in range(deg):
            v, d = divmod(v, p)
            c.append(d)
        yield tuple(c) + (1,)


def _is_irreducible(modulus, p):
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(modulus) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in _all_monic_polys(d, p):
            if not _poly_mod(modulus, g, p):
                return False
    return True


# Fixed default moduli (little-endian, monic) for common q; reproducible
# across runs.  Anything missing falls back to the lexicographically first
# irreducible monic polynomial of the right degree.
DEFAULT_MODULI = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}


def default_modulus(p, r):
    mod = DEFAULT_MODULI.get((p, r))
    if mod is not None:
        return mod
    for mod in _all_monic_polys(r, p):
        if _is_irreducible(mod, p):
            return mod
    raise ValueError(f"no irreducible modulus of degree {r} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """Description of F_{p^r} with a distinguished F_p-basis.

    modulus is a monic degree-r coefficient tuple over F_p (little-endian).
    basis is a tuple of r coefficient tuples; the default is the power
    basis 1, x, ..., x^{r-1}.  Construction fails loudly if the modulus is
    reducible (checked exhaustively for r <= 8) or the basis is singular.
    """

    p: int
    r: int
    modulus: tuple = None
    basis: tuple = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.r < 1:
            raise ValueError("extension degree must be positive")
        if self.modulus is None:
            object.__setattr__(self, "modulus", default_modulus(self.p, self.r))
        else:
            object.__setattr__(self, "modulus", tuple(c % self.p for c in self.modulus))
        if len(self.modulus) != self.r + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree r")
        if self.r <= 8 and not _is_irreducible(self.modulus, self.p):
            raise ValueError("modulus is reducible; refusing to build a non-field")
        if self.basis is None:
            power = tuple(
                tuple(1 if j == i else 0 for j in range(self.r)) for i in range(self.r)
            )
            object.__setattr__(self, "basis", power)
        else:
            norm = tuple(
                tuple(c % self.p for c in (tuple(b) + (0,) * self.r)[: self.r])
                for b in self.basis
            )
            object.__setattr__(self, "basis", norm)
        if len(self.basis) != self.r:
            raise ValueError("basis must contain r elements")
        if _matrix_inverse_mod_p(tuple(self.basis), self.p) is None:
            raise ValueError("basis matrix is singular over F_p")

    @property
    def q(self):
        return self.p**self.r

    def zero(self):
        return FqElem(self, (0,) * self.r)

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        return FqElem(self, ((n % self.p),) + (0,) * (self.r - 1))

    def gen(self):
        """The residue class of x (zero when r = 1)."""
        if self.r == 1:
            return self.zero()
        return FqElem(self, (0, 1) + (0,) * (self.r - 2))

    def omega(self, i):
        """Basis element omega_i, indexed 1..r as is customary."""
        return FqElem(self, self.basis[i - 1])

    def element(self, coeffs):
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) > self.r:
            c = _poly_mod(c, self.modulus, self.p)
        return FqElem(self, c + (0,) * (self.r - len(c)))

    def elements(self):
        """Iterate over all q field elements (desk scale only)."""
        for packed in range(self.q):
            v, c = packed, []
            for _ in range(self.r):
                v, d = divmod(v, self.p)
                c.append(d)
            yield FqElem(self, tuple(c))


@dataclass(frozen=True)
class FqElem:
    """Element of F_{p^r} as a length-r coefficient vector in the power basis."""

    spec: FieldSpec
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.spec.r:
            raise ValueError("coefficient vector has wrong length")

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_one(self):
        return self.coeffs[0] == 1 and all(c == 0 for c in self.coeffs[1:])

    def prime_field_value(self):
        """Return the integer in [0, p) if self lies in F_p, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __add__(self, other):
        other = self._coerce(other)
        p = self.spec.p
        return FqElem(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        other = self._coerce(other)
        p = self.spec.p
        return FqElem(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.spec.p
        return FqElem(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        return ff_mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        c = _poly_pow_mod(_poly_trim(self.coeffs), n, self.spec.modulus, self.spec.p)
        return self.spec.element(c)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero in F_q")
        # a^(q-2) = a^(-1) in F_q^x
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.spec != self.spec:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.spec.from_int(other)
        raise TypeError(f"cannot combine FqElem with {type(other).__name__}")

    def __repr__(self):
        if self.spec.r == 1:
            return f"Fq({self.coeffs[0]})"
        return f"Fq{self.coeffs}"

    def to_json(self):
        return list(self.coeffs)

    @classmethod
    def from_json(cls, spec, data):
        if isinstance(data, int):
            return spec.from_int(data)
        return spec.element(data)


def ff_mul(a: FqElem, b: FqElem, spec: FieldSpec = None) -> FqElem:
    """Product in F_q, reduced mod the modulus."""
    spec = spec or a.spec
    if a.spec != spec or b.spec != spec:
        raise ValueError("field mismatch")
    c = _poly_mul(_poly_trim(a.coeffs), _poly_trim(b.coeffs), spec.p)
    return spec.element(_poly_mod(c, spec.modulus, spec.p))


def frobenius(a: FqElem, s: int, spec: FieldSpec = None) -> FqElem:
    """a^(p^s).  F_p-linear and bijective; the identity when s = 0 mod r."""
    spec = spec or a.spec
    s = s % spec.r
    out = a
    for _ in range(s):
        out = out**spec.p
    return out


def _matrix_inverse_mod_p(rows, p):
    """Inverse of a square matrix over F_p, or None if singular."""
    n = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] % p), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col] % p, -1, p)
        aug[col] = [(x * inv) % p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] % p:
                f = aug[i][col] % p
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


@functools.lru_cache(maxsize=None)
def _twisted_basis_inverse(spec, s):
    """Inverse of the matrix whose columns are the coords of omega_i^(p^s)."""
    cols = [frobenius(spec.omega(i), s).coeffs for i in range(1, spec.r + 1)]
    rows = tuple(tuple(cols[j][i] for j in range(spec.r)) for i in range(spec.r))
    inv = _matrix_inverse_mod_p(rows, spec.p)
    if inv is None:  # unreachable: Frobenius of a basis is a basis
        raise ValueError("twisted basis is singular")
    return inv


def fp_coords_twisted(c: FqElem, s: int, spec: FieldSpec = None):
    """Coordinates gamma with c = sum gamma_i omega_i^(p^s), as a tuple over F_p."""
    spec = spec or c.spec
    inv = _twisted_basis_inverse(spec, s % spec.r)
    p = spec.p
    return tuple(sum(inv[i][j] * c.coeffs[j] for j in range(spec.r)) % p for i in range(spec.r))


# ---------------------------------------------------------------------------
# truncated p-adic integers


@dataclass(frozen=True)
class ZpApprox:
    """A p-adic integer known mod p^k, stored as base-p digits d_0..d_{k-1}."""

    p: int
    digits: tuple

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) % self.p for d in self.digits))
        if not self.digits:
            raise ValueError("at least one digit required")

    @classmethod
    def from_int(cls, n, p, precision):
        n %= p**precision
        digits = []
        for _ in range(precision):
            n, d = divmod(n, p)
            digits.append(d)
        return cls(p, tuple(digits))

    @property
    def precision(self):
        return len(self.digits)

    def to_int(self):
        """Canonical representative in [0, p^k)."""
        v = 0
        for d in reversed(self.digits):
            v = v * self.p + d
        return v

    def truncate(self, k):
        if k < 1:
            raise ValueError("precision must be >= 1")
        if k >= self.precision:
            return self
        return ZpApprox(self.p, self.digits[:k])

    def digit(self, i):
        if i >= self.precision:
            raise InsufficientPrecision(f"digit {i} beyond precision {self.precision}")
        return self.digits[i]

    def is_zero(self):
        return all(d == 0 for d in self.digits)

    def _binop(self, other, op):
        if isinstance(other, int):
            other = ZpApprox.from_int(other, self.p, self.precision)
        if other.p != self.p:
            raise ValueError("mixed primes")
        k = min(self.precision, other.precision)
        return ZpApprox.from_int(op(self.to_int(), other.to_int()), self.p, k)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    def __neg__(self):
        return ZpApprox.from_int(-self.to_int(), self.p, self.precision)

    def agrees_with(self, other, k):
        """Equality of residues mod p^k (requires both precisions >= k)."""
        return self.truncate(k).digits == other.truncate(k).digits

    def __repr__(self):
        return f"Zp({self.p}; {list(self.digits)})"

    def to_json(self):
        return {"p": self.p, "digits": list(self.digits)}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], tuple(data["digits"]))


# ---------------------------------------------------------------------------
# Lucas binomials, extended to Z_p upper argument


def _base_p_digits(n, p):
    if n == 0:
        return [0]
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


def lucas_binom(c, n, p=None):
    """binom(c, n) mod p for c a ZpApprox or an integer, n a non-negative integer.

    Computed digit by digit over base-p expansions; for integer c this equals
    the exact integer binomial coefficient reduced mod p (negative c uses the
    generalized binomial, consistent with the p-adic limit of truncations).
    Returns an integer in [0, p).
    """
    if n < 0:
        raise ValueError("lower index must be non-negative")
    if isinstance(c, ZpApprox):
        if p is not None and p != c.p:
            raise ValueError("mixed primes")
        p = c.p
        if n >= p**c.precision:
            raise InsufficientPrecision(
                f"binom needs {len(_base_p_digits(n, p))} digits, have {c.precision}"
            )
        c_digits = c.digits
    else:
        if p is None:
            raise ValueError("prime required for integer upper argument")
        nd = len(_base_p_digits(n, p))
        c_digits = _base_p_digits(c % p**nd, p)
    out = 1
    for i, ni in enumerate(_base_p_digits(n, p)):
        ci = c_digits[i] if i < len(c_digits) else 0
        if ni > ci:
            return 0
        if ni:
            out = (out * comb(ci, ni)) % p
    return out
