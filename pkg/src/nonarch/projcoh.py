"""Weight-graded sections of O(k) on P^d and their Cech/local cohomology.

Sections over an intersection of standard charts U_I are rational
multiples of Laurent monomials X^mu with sum(mu) = k and mu_j >= 0 for
every j outside I.  Everything here is graded by the diagonal torus:
a monomial X^mu has weight mu, so each weight space of a chart is at most
one-dimensional and whole Cech complexes split into tiny per-weight
complexes with incidence differentials.

Norms are Gauss norms at radius eps = p^(-e): a monomial with rational
coefficient a has |a X^mu| = |a|_p * p^(e * |max(0, mu)|), always an exact
power of p, tracked as an integer base-p logarithm.

The covering of P^d minus the linear subvariety P^r by the charts
U_{r+1}, ..., U_d computes the cohomology of the complement; the local
cohomology along P^r comes out of the long exact sequence relating it to
the cohomology of P^d, with the comparison map realized as the literal
projection of Cech cochains onto the subcovering.

For weights far outside the box Delta_N, N = (2d+1)|k| + d, subtracting
the root alpha_{u,v} = eps_u - eps_v at the extreme entries (u maximal,
v minimal, smallest indices on ties) walks the weight back into Delta_N
without ever changing any chart presence bit, shrinking the Gauss norm by
exactly p^(-e) per step.  This reduces strictness of the per-weight Cech
differentials to the finitely many weights in Delta_N: the strictness
modulus of a differential is p^(-v) with v the largest p-valuation of an
elementary divisor of its incidence matrix, +infinity when the image is 0.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exactla import max_p_valuation, nullspace, rank, smith_normal_form

INF = math.inf


# ---------------------------------------------------------------------------
# weights, monomial sections, norms


def weight_norm(mu):
    """One-norm sum |mu_j|."""
    return sum(abs(x) for x in mu)


def max0_total(mu):
    """|max(0, mu)| = sum of the positive entries."""
    return sum(x for x in mu if x > 0)


@dataclass(frozen=True)
class MonomialSection:
    """coeff * X^mu; the twist is sum(mu)."""

    mu: tuple
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(x) for x in self.mu))
        object.__setattr__(self, "coeff", Fraction(self.coeff))

    @property
    def twist(self):
        return sum(self.mu)

    def on_chart(self, I):
        """Regular on U_I: exponents outside I are non-negative."""
        return chart_presence(self.mu, I, self.twist, len(self.mu) - 1)


def chart_presence(mu, I, k, d):
    """X^mu is a section of O(k) on U_I."""
    if sum(mu) != k:
        return False
    I = set(I)
    return all(mu[j] >= 0 for j in range(d + 1) if j not in I)


def lie_action(kind, power, m: MonomialSection) -> MonomialSection:
    """Action of the k-th power of a Lie algebra basis element on a monomial.

    Root elements shift the weight by alpha_{u,v} per power and scale by a
    falling factorial of the v-entry; torus elements scale diagonally.
    """
    if power < 0:
        raise ValueError("power must be non-negative")
    tag = kind[0]
    mu = list(m.mu)
    if tag == "root":
        u, v = kind[1], kind[2]
        scale = 1
        for step in range(power):
            scale *= mu[v] - step
        mu[u] += power
        mu[v] -= power
        return MonomialSection(tuple(mu), m.coeff * scale)
    if tag == "torus":
        j = kind[1]
        return MonomialSection(m.mu, m.coeff * (mu[j] ** power))
    raise ValueError(f"unknown generator kind {tag!r}")


@dataclass(frozen=True)
class NormValue:
    """A p-power absolute value p^logp; -inf encodes 0, +inf a vacuous bound."""

    logp: float  # int-valued when finite

    def is_zero(self):
        return self.logp == -INF

    def is_infinite(self):
        return self.logp == INF

    def __le__(self, other):
        return self.logp <= other.logp

    def __lt__(self, other):
        return self.logp < other.logp


def _vp(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("zero has infinite valuation")
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def gauss_norm(section, e: int, p: int) -> NormValue:
    """sup over monomials of |coeff|_p * p^(e * |max(0, mu)|), as a base-p log."""
    if e < 1:
        raise ValueError("radius exponent must be >= 1")
    if isinstance(section, MonomialSection):
        monomials = [(section.mu, section.coeff)]
    elif isinstance(section, dict):
        monomials = list(section.items())
    else:
        monomials = [(m.mu, m.coeff) for m in section]
    best = -INF
    for mu, coeff in monomials:
        if coeff == 0:
            continue
        best = max(best, -_vp(coeff, p) + e * max0_total(mu))
    return NormValue(best)


# ---------------------------------------------------------------------------
# per-weight Cech complexes


@dataclass
class CechData:
    """Per-weight Cech complex over ordered chart tuples.

    tuples[q] lists the present (q+1)-element chart tuples; differentials[q]
    is the incidence matrix C^q -> C^(q+1) with entries in {-1, 0, 1}.
    """

    d: int
    k: int
    weight: tuple
    charts: tuple
    tuples: list
    differentials: list

    def dim(self, q):
        if 0 <= q < len(self.tuples):
            return len(self.tuples[q])
        return 0

    def differential(self, q):
        if 0 <= q < len(self.differentials):
            return self.differentials[q]
        return []

    def cohomology_dim(self, q):
        if not 0 <= q < len(self.tuples):
            return 0
        n = len(self.tuples[q])
        if n == 0:
            return 0
        r_out = rank(self.differentials[q]) if q < len(self.differentials) else 0
        r_in = rank(self.differentials[q - 1]) if q >= 1 else 0
        return n - r_out - r_in


@functools.lru_cache(maxsize=None)
def _pattern_complex(charts, support):
    """Tuples and differentials for presence pattern: I present iff I >= support."""
    charts = list(charts)
    support = set(support)
    n = len(charts)
    tuples = []
    for q in range(n):
        tq = [
            I
            for I in combinations(charts, q + 1)
            if support.issubset(I)
        ]
        tuples.append(tq)
    index = [{I: idx for idx, I in enumerate(tq)} for tq in tuples]
    diffs = []
    for q in range(n - 1):
        mat = [[0] * len(tuples[q]) for _ in tuples[q + 1]]
        for row, J in enumerate(tuples[q + 1]):
            for pos in range(len(J)):
                I = J[:pos] + J[pos + 1 :]
                col = index[q].get(I)
                if col is not None:
                    mat[row][col] = -1 if pos % 2 else 1
        diffs.append(mat)
    return tuples, diffs


def cech_complex(d, k, weight, charts) -> CechData:
    """The weight-graded Cech complex of O(k) over the given charts of P^d."""
    weight = tuple(weight)
    charts = tuple(sorted(charts))
    outside = [j for j in range(d + 1) if j not in charts]
    admissible = sum(weight) == k and all(weight[j] >= 0 for j in outside)
    if not admissible:
        tuples = [[] for _ in charts]
        diffs = [[] for _ in range(max(len(charts) - 1, 0))]
        return CechData(d, k, weight, charts, tuples, diffs)
    support = tuple(sorted(j for j in charts if weight[j] < 0))
    tuples, diffs = _pattern_complex(charts, support)
    return CechData(d, k, weight, charts, tuples, diffs)


def _complement_charts(d, r):
    if not 0 <= r < d:
        raise ValueError("need 0 <= r < d")
    return tuple(range(r + 1, d + 1))


def weight_cohomology(d, r, k, weight, q) -> int:
    """dim of H^q(P^d minus P^r, O(k)) in the given weight."""
    data = cech_complex(d, k, weight, _complement_charts(d, r))
    return data.cohomology_dim(q)


def global_cohomology_dim(d, k, i, weight=None) -> int:
    """dim H^i(P^d, O(k)), or its single weight piece.

    Without a weight the per-weight dimensions are summed over the box of
    radius |k| + d + 1, which contains every contributing weight: a nonzero
    piece needs either all entries >= 0 (so bounded by k) or all <= -1
    (so bounded below by k + d).
    """
    if weight is not None:
        data = cech_complex(d, k, tuple(weight), tuple(range(d + 1)))
        return data.cohomology_dim(i)
    radius = abs(k) + d + 1
    total = 0
    for w in weights_with_sum(d, k, radius):
        total += global_cohomology_dim(d, k, i, w)
    return total


def weights_with_sum(d, k, radius):
    """All integer weights in the radius box with entry sum k."""
    def rec(prefix, remaining):
        if remaining == 1:
            last = k - sum(prefix)
            if -radius <= last <= radius:
                yield tuple(prefix) + (last,)
            return
        for v in range(-radius, radius + 1):
            yield from rec(prefix + [v], remaining - 1)

    yield from rec([], d + 1)


# ---------------------------------------------------------------------------
# local cohomology along P^r via the long exact sequence


@functools.lru_cache(maxsize=None)
def _restriction_rank_pattern(d, r, gate, support_full):
    """Rank of H^j(P^d) -> H^j(complement) for a presence pattern, all j at once.

    gate: weight admissible on the subcovering side (entries 0..r all >= 0).
    support_full: chart indices with negative weight entries.
    """
    full = tuple(range(d + 1))
    sub = tuple(range(r + 1, d + 1))
    tuples_X, diffs_X = _pattern_complex(full, support_full)
    if gate:
        support_sub = tuple(j for j in support_full if j > r)
        tuples_U, diffs_U = _pattern_complex(sub, support_sub)
    else:
        tuples_U = [[] for _ in sub]
        diffs_U = [[] for _ in range(len(sub) - 1)]
    ranks = {}
    for j in range(len(tuples_X)):
        nX = len(tuples_X[j])
        nU = len(tuples_U[j]) if j < len(tuples_U) else 0
        if nX == 0 or nU == 0:
            ranks[j] = 0
            continue
        dX = diffs_X[j] if j < len(diffs_X) else [[0] * nX]
        cocycles = nullspace(dX) if dX and dX[0] else [
            [Fraction(int(a == b)) for b in range(nX)] for a in range(nX)
        ]
        index_U = {I: idx for idx, I in enumerate(tuples_U[j])}
        proj = []
        for z in cocycles:
            v = [Fraction(0)] * nU
            for col, I in enumerate(tuples_X[j]):
                if I in index_U and z[col]:
                    v[index_U[I]] = z[col]
            proj.append(v)
        boundaries = []
        if j >= 1 and j - 1 < len(diffs_U) and diffs_U[j - 1] and tuples_U[j - 1]:
            mat = diffs_U[j - 1]
            for col in range(len(tuples_U[j - 1])):
                boundaries.append([Fraction(mat[row][col]) for row in range(nU)])
        if not proj:
            ranks[j] = 0
            continue
        base = rank([list(v) for v in boundaries]) if boundaries else 0
        combined = rank([list(v) for v in boundaries + proj])
        ranks[j] = combined - base
    return ranks


def _restriction_rank(d, r, k, weight, j) -> int:
    weight = tuple(weight)
    if sum(weight) != k or j < 0:
        return 0
    gate = all(weight[t] >= 0 for t in range(r + 1))
    support_full = tuple(sorted(t for t in range(d + 1) if weight[t] < 0))
    return _restriction_rank_pattern(d, r, gate, support_full).get(j, 0)


def local_cohomology_dim(d, r, k, weight, i) -> int:
    """dim of H^i along P^r inside P^d with coefficients O(k), in one weight.

    Exactness of ... -> H^(i-1)(X) -> H^(i-1)(U) -> H^i_Z(X) -> H^i(X) -> H^i(U) -> ...
    gives dim H^i_Z = coker(H^(i-1)(X) -> H^(i-1)(U)) + ker(H^i(X) -> H^i(U)),
    with the comparison maps realized on cochains.
    """
    if not 0 <= r < d:
        raise ValueError("need 0 <= r < d")
    weight = tuple(weight)
    if sum(weight) != k or i < 0:
        return 0
    coker = 0
    if i >= 1:
        coker = weight_cohomology(d, r, k, weight, i - 1) - _restriction_rank(
            d, r, k, weight, i - 1
        )
    kern = global_cohomology_dim(d, k, i, weight) - _restriction_rank(d, r, k, weight, i)
    return coker + kern


# ---------------------------------------------------------------------------
# weight reduction into Delta_N and strictness moduli


def delta_bound(d, k):
    """N = (2d+1)|k| + d: the box the reduction walks weights into."""
    return (2 * d + 1) * abs(k) + d


def in_delta(mu, N):
    return all(abs(x) <= N for x in mu)


@dataclass(frozen=True)
class WeightChangeResult:
    nu: tuple
    steps: int
    trace: tuple
    eps_exp: int

    def norm_drop_logp(self):
        """gauss_norm(X^mu) - gauss_norm(X^nu) in base-p log units."""
        return self.eps_exp * self.steps


def weight_change(d, k, mu, e=1) -> WeightChangeResult:
    """Walk mu into Delta_N by repeatedly subtracting alpha_{u,v} at the extremes.

    Pivots take u maximal and v minimal (smallest index on ties); every step
    preserves all chart presence bits and lowers |max(0, .)| by exactly one,
    so the Gauss norm scales by exactly p^(-e) per step.
    """
    mu = tuple(int(x) for x in mu)
    if len(mu) != d + 1:
        raise ValueError("weight has wrong length")
    if sum(mu) != k:
        raise ValueError("weight does not match the twist")
    N = delta_bound(d, k)
    cur = list(mu)
    trace = []
    while not in_delta(cur, N):
        u = max(range(d + 1), key=lambda j: (cur[j], -j))
        v = min(range(d + 1), key=lambda j: (cur[j], j))
        cur[u] -= 1
        cur[v] += 1
        trace.append((u, v))
        if len(trace) > weight_norm(mu):
            raise RuntimeError("weight reduction failed to terminate")
    return WeightChangeResult(tuple(cur), len(trace), tuple(trace), e)


def presence_bits(d, k, mu):
    """Presence bit of X^mu on every nonempty chart set I of P^d."""
    bits = {}
    for size in range(1, d + 2):
        for I in combinations(range(d + 1), size):
            bits[I] = chart_presence(mu, I, k, d)
    return bits


@functools.lru_cache(maxsize=None)
def _strictness_pattern(charts, support, q, p):
    tuples, diffs = _pattern_complex(charts, support)
    if not 0 <= q < len(tuples) or not tuples[q]:
        return INF
    if q >= len(diffs) or not diffs[q] or not diffs[q][0]:
        return INF
    mat = diffs[q]
    if not any(any(row) for row in mat):
        return INF
    divisors = smith_normal_form(mat)
    return -max_p_valuation(divisors, p)


def strictness_modulus(d, r, k, q, e, weight, p) -> NormValue:
    """Largest p-power R with B_R intersect Im(d^q) inside d^q(unit ball), at one weight.

    In the per-weight monomial basis every present chart contributes a basis
    vector of one common norm, so after rescaling to unit norm the
    differential keeps its incidence matrix and R = p^(-v) for v the largest
    p-valuation among its elementary divisors.  A zero image gives the
    +infinity sentinel.  R does not depend on e; the argument is kept so the
    call site states which Gauss norm is certified.
    """
    if e < 1:
        raise ValueError("radius exponent must be >= 1")
    weight = tuple(weight)
    charts = _complement_charts(d, r)
    outside = [j for j in range(d + 1) if j not in charts]
    if sum(weight) != k or any(weight[j] < 0 for j in outside):
        return NormValue(INF)
    support = tuple(sorted(j for j in charts if weight[j] < 0))
    return NormValue(_strictness_pattern(charts, support, q, p))


@dataclass(frozen=True)
class StrictnessCertificate:
    """Uniform strictness modulus over Delta_N, transportable to all weights."""

    d: int
    r: int
    k: int
    q: int
    eps_exp: int
    p: int
    R_logp: float
    witness_weight: tuple | None
    weights_checked: int


def uniform_strictness(d, r, k, q, e, p) -> StrictnessCertificate:
    """Minimum strictness modulus over all admissible weights in Delta_N.

    Weight reduction preserves presence patterns, hence per-weight moduli,
    so this minimum bounds every weight of X(T).
    """
    N = delta_bound(d, k)
    best = INF
    witness = None
    count = 0
    for w in weights_with_sum(d, k, N):
        count += 1
        val = strictness_modulus(d, r, k, q, e, w, p).logp
        if val < best:
            best = val
            witness = w
    return StrictnessCertificate(d, r, k, q, e, p, best, witness, count)
