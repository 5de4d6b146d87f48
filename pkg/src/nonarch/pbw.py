"""The universal enveloping algebra of gl_{d+1} over Q, in PBW normal form.

The fixed basis lists the root elements L_{(u,v)}, u != v, in lexicographic
order of (u, v), followed by the torus elements L_0, ..., L_d; elements are
rational linear combinations of normally ordered monomials in that basis.
Products are normalized through the gl commutation relations
[E_ab, E_cd] = delta_bc E_ad - delta_da E_cb, with L_{(u,v)} = E_uv and
L_j = E_jj.

The algebra acts on Laurent monomial sections through
L_{(u,v)}^k . X^mu = mu_v (mu_v - 1) ... (mu_v - k + 1) X^(mu + k alpha_uv)
and L_j^k . X^mu = mu_j^k X^mu.

Norms at radius eps = p^(-e) weigh a PBW monomial by its total degree:
|sum a_k x^k|_eps = sup |a_k|_p p^(e |k|), recorded as an integer base-p log.

``good_preimage`` lifts a monomial X^mu regular on U_I to an element of the
free module over the enveloping algebra with one generator e_nu per weight
nu in Lambda_I within the box Delta_d: outside the box there is always a
pivot pair u, v in I with mu_u > 1, mu_v < -1, and
Y_mu = (mu_v + 1)^(-1) L_{(u,v)} Y_{mu - alpha_uv} applies the action map
back to exactly X^mu.  The denominators accumulated this way are controlled
by the p-power constants A(mu) built from Legendre valuations of factorials,
giving the norm certificate |Y_mu|_eps <= A(mu) p^(e |max(0, mu)|).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PivotFailure
from .projcoh import NormValue, _vp, max0_total

INF = math.inf


# ---------------------------------------------------------------------------
# basis bookkeeping


@functools.lru_cache(maxsize=None)
def basis_elements(d):
    """Root elements lexicographically, then the torus, as tagged tuples."""
    gens = [("root", u, v) for u in range(d + 1) for v in range(d + 1) if u != v]
    gens += [("torus", j) for j in range(d + 1)]
    return tuple(gens)


@functools.lru_cache(maxsize=None)
def _basis_index(d):
    return {g: i for i, g in enumerate(basis_elements(d))}


def root_index(d, u, v):
    return _basis_index(d)[("root", u, v)]


def torus_index(d, j):
    return _basis_index(d)[("torus", j)]


def _as_matrix_unit(gen):
    """Identify a basis element with E_ab."""
    if gen[0] == "root":
        return gen[1], gen[2]
    return gen[1], gen[1]


@functools.lru_cache(maxsize=None)
def _bracket(d, i, j):
    """[x_i, x_j] as a dict basis-index -> integer coefficient."""
    gens = basis_elements(d)
    a, b = _as_matrix_unit(gens[i])
    c, e = _as_matrix_unit(gens[j])
    out = {}
    if b == c:
        key = ("root", a, e) if a != e else ("torus", a)
        out[_basis_index(d)[key]] = out.get(_basis_index(d)[key], 0) + 1
    if e == a:
        key = ("root", c, b) if c != b else ("torus", c)
        out[_basis_index(d)[key]] = out.get(_basis_index(d)[key], 0) - 1
    return {k: v for k, v in out.items() if v}


@functools.lru_cache(maxsize=None)
def _normalize_word(d, word):
    """Rewrite a product of generators into normal order.

    Returns a tuple of (exponent tuple, integer coefficient) pairs; all
    structure constants are integers so no denominators appear here.
    """
    s = len(basis_elements(d))
    for pos in range(len(word) - 1):
        a, b = word[pos], word[pos + 1]
        if a > b:
            out = {}
            swapped = word[:pos] + (b, a) + word[pos + 2 :]
            for exps, coeff in _normalize_word(d, swapped):
                out[exps] = out.get(exps, 0) + coeff
            for gen, cf in _bracket(d, a, b).items():
                shorter = word[:pos] + (gen,) + word[pos + 2 :]
                for exps, coeff in _normalize_word(d, shorter):
                    out[exps] = out.get(exps, 0) + cf * coeff
            return tuple((e, c) for e, c in out.items() if c)
    exps = [0] * s
    for idx in word:
        exps[idx] += 1
    return ((tuple(exps), 1),)


class PBWElement:
    """Rational combination of normally ordered monomials in the fixed basis."""

    __slots__ = ("d", "terms")

    def __init__(self, d, terms=None):
        self.d = d
        self.terms = {}
        if terms:
            for exps, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    self.terms[tuple(exps)] = coeff

    @classmethod
    def zero(cls, d):
        return cls(d)

    @classmethod
    def one(cls, d):
        s = len(basis_elements(d))
        return cls(d, {(0,) * s: Fraction(1)})

    @classmethod
    def generator(cls, d, gen):
        s = len(basis_elements(d))
        idx = _basis_index(d)[gen]
        exps = [0] * s
        exps[idx] = 1
        return cls(d, {tuple(exps): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return PBWElement(self.d, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return PBWElement(self.d, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            w1 = _word_of(e1)
            for e2, c2 in other.terms.items():
                word = w1 + _word_of(e2)
                for exps, cf in _normalize_word(self.d, word):
                    key = exps
                    out[key] = out.get(key, Fraction(0)) + c1 * c2 * cf
        return PBWElement(self.d, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def _check(self, other):
        if not isinstance(other, PBWElement) or other.d != self.d:
            raise ValueError("mixing enveloping algebras of different rank")

    def __eq__(self, other):
        return isinstance(other, PBWElement) and self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        gens = basis_elements(self.d)
        bits = []
        for exps, coeff in sorted(self.terms.items()):
            factors = []
            for idx, k in enumerate(exps):
                if k:
                    g = gens[idx]
                    name = f"L({g[1]},{g[2]})" if g[0] == "root" else f"L{g[1]}"
                    factors.append(name if k == 1 else f"{name}^{k}")
            mono = "*".join(factors) if factors else "1"
            bits.append(f"({coeff})*{mono}")
        return " + ".join(bits)

    def to_json(self):
        return [
            {"exponents": list(e), "coeff": str(c)}
            for e, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, d, data):
        return cls(d, {tuple(item["exponents"]): Fraction(item["coeff"]) for item in data})


def _word_of(exps):
    word = []
    for idx, k in enumerate(exps):
        word.extend([idx] * k)
    return tuple(word)


def pbw_mul(x: PBWElement, y: PBWElement) -> PBWElement:
    return x * y


def pbw_norm(x: PBWElement, e: int, p: int) -> NormValue:
    """sup over monomials of |coeff|_p * p^(e * total degree)."""
    if e < 1:
        raise ValueError("radius exponent must be >= 1")
    best = -INF
    for exps, coeff in x.terms.items():
        best = max(best, -_vp(coeff, p) + e * sum(exps))
    return NormValue(best)


# ---------------------------------------------------------------------------
# action on monomial sections (sections as dicts weight -> Fraction)


def _apply_generator_power(gen, power, section):
    out = {}
    if gen[0] == "torus":
        j = gen[1]
        for mu, coeff in section.items():
            c = coeff * (mu[j] ** power)
            if c:
                out[mu] = out.get(mu, Fraction(0)) + c
        return out
    _, u, v = gen
    for mu, coeff in section.items():
        scale = 1
        for step in range(power):
            scale *= mu[v] - step
        if scale:
            nu = list(mu)
            nu[u] += power
            nu[v] -= power
            nu = tuple(nu)
            out[nu] = out.get(nu, Fraction(0)) + coeff * scale
    return {m: c for m, c in out.items() if c}


def act(x: PBWElement, section) -> dict:
    """Left action on a section (dict weight -> Fraction); module axioms hold exactly."""
    gens = basis_elements(x.d)
    result = {}
    for exps, coeff in x.terms.items():
        cur = dict(section)
        for idx in range(len(exps) - 1, -1, -1):
            if exps[idx] and cur:
                cur = _apply_generator_power(gens[idx], exps[idx], cur)
        for mu, c in cur.items():
            val = result.get(mu, Fraction(0)) + coeff * c
            result[mu] = val
    return {m: c for m, c in result.items() if c}


# ---------------------------------------------------------------------------
# auxiliary constants and good preimages


def legendre_vp_factorial(n: int, p: int) -> int:
    """v_p(n!) by Legendre's formula."""
    if n < 0:
        raise ValueError("factorial valuation needs n >= 0")
    v = 0
    q = p
    while q <= n:
        v += n // q
        q *= p
    return v


@dataclass(frozen=True)
class AuxLog:
    """Base-p logarithm of the p-power constant A(mu)."""

    logp: int


def aux_A(mu, I, N: int, p: int) -> AuxLog:
    """A(mu) = prod_{k=0..N} prod_j 1/|min(0, mu_j + 1 - [j in I] k)!|_p as a log.

    The sign convention (-n)! = (-1)^n n! makes |min(0, x)!|_p = |(-min(0,x))!|_p,
    so each factor contributes a Legendre valuation.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    I = set(I)
    total = 0
    for k in range(N + 1):
        for j in range(len(mu)):
            shift = k if j in I else 0
            n = -min(0, mu[j] + 1 - shift)
            total += legendre_vp_factorial(n, p)
    return AuxLog(total)


@dataclass
class FreeModuleElement:
    """Finitely supported map from generators e_nu to enveloping algebra elements."""

    d: int
    components: dict  # weight tuple -> PBWElement

    def __post_init__(self):
        self.components = {
            tuple(nu): x for nu, x in self.components.items() if not x.is_zero()
        }

    def scale(self, c):
        return FreeModuleElement(
            self.d, {nu: x.scale(c) for nu, x in self.components.items()}
        )

    def __add__(self, other):
        out = dict(self.components)
        for nu, x in other.components.items():
            out[nu] = out.get(nu, PBWElement.zero(self.d)) + x
        return FreeModuleElement(self.d, out)

    def left_mul(self, g: PBWElement):
        return FreeModuleElement(
            self.d, {nu: g * x for nu, x in self.components.items()}
        )

    def norm(self, e: int, p: int) -> NormValue:
        best = -INF
        for x in self.components.values():
            best = max(best, pbw_norm(x, e, p).logp)
        return NormValue(best)

    def apply(self) -> dict:
        """The image under e_nu -> X^nu followed by the action."""
        out = {}
        for nu, x in self.components.items():
            for mu, c in act(x, {tuple(nu): Fraction(1)}).items():
                val = out.get(mu, Fraction(0)) + c
                out[mu] = val
        return {m: c for m, c in out.items() if c}

    def to_json(self):
        return [
            {"nu": list(nu), "element": x.to_json()}
            for nu, x in sorted(self.components.items())
        ]


def in_lambda(mu, I, d) -> bool:
    """mu in Lambda_I: zero entry sum and non-negative off I."""
    I = set(I)
    return sum(mu) == 0 and all(mu[j] >= 0 for j in range(d + 1) if j not in I)


@functools.lru_cache(maxsize=None)
def _good_preimage_cached(d, mu, I):
    if max(abs(x) for x in mu) <= d:
        return FreeModuleElement(d, {mu: PBWElement.one(d)})
    u = max(range(d + 1), key=lambda j: (mu[j], -j))
    candidates = [j for j in I]
    v = min(candidates, key=lambda j: (mu[j], j))
    if mu[u] <= 1 or mu[v] >= -1:
        raise PivotFailure(
            f"no pivot with mu_u > 1 and mu_v < -1 inside I for mu={mu}, I={I}"
        )
    nu = list(mu)
    nu[u] -= 1
    nu[v] += 1
    prev = _good_preimage_cached(d, tuple(nu), I)
    gen = PBWElement.generator(d, ("root", u, v))
    return prev.left_mul(gen).scale(Fraction(1, mu[v] + 1))


def good_preimage(mu, I, d) -> FreeModuleElement:
    """A preimage of X^mu under e_nu -> X^nu with the p-power norm certificate.

    Requires mu in Lambda_I.  The result Y satisfies apply(Y) = X^mu exactly
    and |Y|_eps <= A(mu) p^(e |max(0, mu)|) for every e >= 1 (with N = 0 in
    the constants, matching the structure sheaf's single generator of
    homogeneous degree zero).
    """
    mu = tuple(int(x) for x in mu)
    I = tuple(sorted(set(I)))
    if not I:
        raise ValueError("chart set must be non-empty")
    if not in_lambda(mu, I, d):
        raise ValueError(f"mu={mu} is not in Lambda_I for I={I}")
    return _good_preimage_cached(d, mu, I)


def norm_certificate_bound(mu, e: int, p: int) -> int:
    """log_p of A(mu) * p^(e |max(0, mu)|) with N = 0 (I-independent)."""
    base = aux_A(mu, range(len(mu)), 0, p).logp
    return base + e * max0_total(mu)
