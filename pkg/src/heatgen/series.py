"""Exact truncated series machinery for the generating function.

The group average needs the expansion of

    log det( sinh(X)/X )  with  X = sqrt(t)/2 * (generator matrix),

which reduces to trace powers: log(sinh z / z) = sum_m c_m z^{2m} with
c_m = 2^{2m} B_{2m} / (2m (2m)!), so c_1 = 1/6 and c_2 = -1/180.  The
coefficients are computed twice, from that closed form and from a formal
logarithm of the sinh z / z series, and must agree exactly.

Trace powers of the omega-linear matrices D(omega) and F(omega) are
enumerated over index words of length 2m.  Words are grouped into cyclic
equivalence classes generated directly in lexicographic order, each class
weighted by its period (its number of distinct rotations), and each trace
is assembled from two cached half-word products.  All arithmetic is exact:
generator matrices are rescaled to integer entries with the denominator
tracked per generator.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm

from .curvature import HolonomyRealization
from .errors import InternalInconsistency, OrderTooLarge

__all__ = [
    "bernoulli",
    "log_sinh_ratio_series",
    "TSeries",
    "OmegaPolynomial",
    "integrand_log_expansion",
    "exponentiate_with_prefactor",
    "DEFAULT_WORD_BUDGET",
    "enumeration_budget",
]

DEFAULT_WORD_BUDGET = 10**8
_BUDGET_ENV = "HEATGEN_BUDGET"


def enumeration_budget() -> int:
    """Word budget for trace enumeration, overridable via HEATGEN_BUDGET."""
    raw = os.environ.get(_BUDGET_ENV)
    if raw is None:
        return DEFAULT_WORD_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise OrderTooLarge(f"{_BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise OrderTooLarge(f"{_BUDGET_ENV} must be positive, got {value}")
    return value


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (B_1 = -1/2), by the defining recurrence
    sum_{j=0}^{m} binom(m+1, j) B_j = 0."""
    if m < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 2)
    if m % 2:
        return Fraction(0)
    acc = sum(
        (comb(m + 1, j) * bernoulli(j) for j in range(m)), Fraction(0)
    )
    return -acc / (m + 1)


def _useries_mul(a: list[Fraction], b: list[Fraction], k: int) -> list[Fraction]:
    out = [Fraction(0)] * (k + 1)
    for i, x in enumerate(a[: k + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: k + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def log_sinh_ratio_series(k: int) -> tuple[Fraction, ...]:
    """Coefficients (c_1, ..., c_k) of log(sinh z / z) in powers of z^2.

    Computed from the closed Bernoulli form and independently from the
    formal logarithm of the sinh z / z series; the two must agree exactly.
    """
    closed = tuple(
        Fraction(4**m) * bernoulli(2 * m) / (2 * m * factorial(2 * m))
        for m in range(1, k + 1)
    )
    # sinh z / z = sum_m u^m / (2m+1)!  with u = z^2; log via the
    # alternating series applied to the tail s - 1.
    s = [Fraction(1, factorial(2 * m + 1)) for m in range(k + 1)]
    tail = [Fraction(0)] + s[1:]
    logs = [Fraction(0)] * (k + 1)
    power = [Fraction(1)] + [Fraction(0)] * k
    for j in range(1, k + 1):
        power = _useries_mul(power, tail, k)
        sign = Fraction((-1) ** (j + 1), j)
        for idx in range(k + 1):
            logs[idx] += sign * power[idx]
    formal = tuple(logs[1:])
    if formal != closed:
        raise InternalInconsistency(
            "log(sinh z/z) series mismatch between the Bernoulli closed "
            "form and the formal logarithm"
        )
    return closed


@dataclass(frozen=True)
class TSeries:
    """Truncated power series in t with exact rational coefficients."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count must be order + 1")

    @classmethod
    def constant(cls, value, order: int) -> "TSeries":
        c = [Fraction(0)] * (order + 1)
        c[0] = Fraction(value)
        return cls(order, tuple(c))

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __add__(self, other: "TSeries") -> "TSeries":
        k = min(self.order, other.order)
        return TSeries(
            k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __mul__(self, other: "TSeries") -> "TSeries":
        k = min(self.order, other.order)
        out = [Fraction(0)] * (k + 1)
        for i, a in enumerate(self.coeffs[: k + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: k + 1 - i]):
                if b:
                    out[i + j] += a * b
        return TSeries(k, tuple(out))

    def scale(self, c) -> "TSeries":
        f = Fraction(c)
        return TSeries(self.order, tuple(f * x for x in self.coeffs))

    def exp(self) -> "TSeries":
        """exp of a series with zero constant term, truncated exactly."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a vanishing constant term")
        result = TSeries.constant(1, self.order)
        power = TSeries.constant(1, self.order)
        for j in range(1, self.order + 1):
            power = power * self
            result = result + power.scale(Fraction(1, factorial(j)))
        return result

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + float(c)
        return acc


class OmegaPolynomial:
    """Polynomial in the holonomy average variables with an attached
    t-grade per monomial, truncated beyond a fixed t order.

    Terms map (t_grade, exponent tuple) to an exact coefficient.  The
    t-grade is explicit rather than inferred from the monomial degree
    because scalar prefactor terms carry t without any omega content.
    """

    __slots__ = ("p", "order", "terms")

    def __init__(self, p: int, order: int, terms=None):
        self.p = p
        self.order = order
        cleaned = {}
        for key, val in (terms or {}).items():
            grade, exps = key
            if val and grade <= order:
                cleaned[(grade, tuple(exps))] = Fraction(val)
        self.terms = cleaned

    @classmethod
    def constant(cls, p: int, order: int, value=1) -> "OmegaPolynomial":
        return cls(p, order, {(0, (0,) * p): Fraction(value)})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OmegaPolynomial)
            and self.p == other.p
            and self.order == other.order
            and self.terms == other.terms
        )

    def __add__(self, other: "OmegaPolynomial") -> "OmegaPolynomial":
        if self.p != other.p:
            raise ValueError("mixed variable counts")
        out = dict(self.terms)
        for key, val in other.terms.items():
            acc = out.get(key, Fraction(0)) + val
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return OmegaPolynomial(self.p, min(self.order, other.order), out)

    def __mul__(self, other: "OmegaPolynomial") -> "OmegaPolynomial":
        if self.p != other.p:
            raise ValueError("mixed variable counts")
        order = min(self.order, other.order)
        out: dict = {}
        for (g1, e1), v1 in self.terms.items():
            for (g2, e2), v2 in other.terms.items():
                g = g1 + g2
                if g > order:
                    continue
                key = (g, tuple(a + b for a, b in zip(e1, e2)))
                acc = out.get(key, Fraction(0)) + v1 * v2
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return OmegaPolynomial(self.p, order, out)

    def scale(self, c) -> "OmegaPolynomial":
        f = Fraction(c)
        if not f:
            return OmegaPolynomial(self.p, self.order, {})
        return OmegaPolynomial(
            self.p, self.order, {k: f * v for k, v in self.terms.items()}
        )

    def min_grade(self) -> int:
        return min((g for g, _ in self.terms), default=self.order + 1)

    def exp(self) -> "OmegaPolynomial":
        """exp as a truncated Taylor sum; needs every term to carry t."""
        if self.min_grade() < 1:
            raise ValueError("exp needs strictly positive t-grades")
        result = OmegaPolynomial.constant(self.p, self.order)
        power = OmegaPolynomial.constant(self.p, self.order)
        for j in range(1, self.order + 1):
            power = power * self
            if not power.terms:
                break
            result = result + power.scale(Fraction(1, factorial(j)))
        return result

    def omega_free_series(self) -> TSeries:
        """The t-series obtained by setting every omega variable to zero."""
        zero_key = (0,) * self.p
        coeffs = [Fraction(0)] * (self.order + 1)
        for (g, exps), val in self.terms.items():
            if exps == zero_key:
                coeffs[g] = val
        return TSeries(self.order, tuple(coeffs))


# ---------------------------------------------------------------------------
# Trace enumeration over cyclic index words
# ---------------------------------------------------------------------------


def _necklaces(length: int, alphabet: int):
    """Yield (word, period) for each cyclic class of words of the given
    length, the word being the lexicographically least representative and
    the period its number of distinct rotations.  Periods over all classes
    sum to alphabet**length."""
    a = [0] * (length + 1)

    def gen(t: int, q: int):
        if t > length:
            if length % q == 0:
                yield tuple(a[1:]), q
            return
        a[t] = a[t - q]
        yield from gen(t + 1, q)
        for j in range(a[t - q] + 1, alphabet):
            a[t] = j
            yield from gen(t + 1, t)

    if alphabet > 0 and length > 0:
        yield from gen(1, 1)


def _integerize(mats) -> tuple[list[list[list[int]]], list[int]]:
    """Rescale Fraction matrices to integer matrices, one denominator per
    matrix, so word traces stay in integer arithmetic."""
    out, dens = [], []
    for mat in mats:
        den = 1
        for row in mat:
            for x in row:
                den = lcm(den, Fraction(x).denominator)
        out.append([[int(x * den) for x in row] for row in mat])
        dens.append(den)
    return out, dens


def _imatmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def _product_tables(mats: list[list[list[int]]], upto: int) -> list[dict]:
    """tables[L] maps each index word of length L to its matrix product."""
    p = len(mats)
    tables: list[dict] = [dict() for _ in range(upto + 1)]
    dim = len(mats[0]) if mats else 0
    tables[0] = {(): [[int(i == j) for j in range(dim)] for i in range(dim)]}
    if upto >= 1:
        tables[1] = {(i,): mats[i] for i in range(p)}
    for length in range(2, upto + 1):
        prev = tables[length - 1]
        cur = {}
        for word, mat in prev.items():
            for i in range(p):
                cur[word + (i,)] = _imatmul(mat, mats[i])
        tables[length] = cur
    return tables


def _split_trace(tables: list[dict], word: tuple[int, ...]) -> int:
    half = len(word) // 2
    a = tables[half][word[:half]]
    b = tables[half][word[half:]]
    return sum(
        a[i][j] * b[j][i] for i in range(len(a)) for j in range(len(a))
    )


def _word_denominator(dens: list[int], exps: tuple[int, ...]) -> int:
    acc = 1
    for d, e in zip(dens, exps):
        if e and d != 1:
            acc *= d**e
    return acc


def integrand_log_expansion(
    hol: HolonomyRealization, order: int, budget: int | None = None
) -> OmegaPolynomial:
    """Logarithm of the omega-dependent part of the generating integrand.

    Returns sum over m of t^m (c_m / 4^m) [ tr F(omega)^{2m}/2
    - tr D(omega)^{2m}/2 ] as an OmegaPolynomial of the given t order,
    where D(omega) and F(omega) are the omega-linear generator matrices
    and c_m are the log(sinh z/z) coefficients.  The number of index words
    sum_m p^{2m} must stay within the enumeration budget."""
    p = hol.p
    if order < 0:
        raise ValueError("order must be nonnegative")
    result = OmegaPolynomial(p, order, {})
    if p == 0 or order == 0:
        return result
    limit = enumeration_budget() if budget is None else budget
    total_words = sum(p ** (2 * m) for m in range(1, order + 1))
    if total_words > limit:
        raise OrderTooLarge(
            f"trace enumeration needs {total_words} index words for p={p}, "
            f"order {order}, exceeding the budget of {limit}; lower the "
            f"order, use a numeric average, or raise {_BUDGET_ENV}"
        )
    cs = log_sinh_ratio_series(order)
    d_int, d_dens = _integerize(hol.D)
    f_int, f_dens = _integerize(hol.F_mats)
    d_tables = _product_tables(d_int, order)
    f_tables = _product_tables(f_int, order)
    terms: dict = {}
    for m in range(1, order + 1):
        coef = cs[m - 1] / Fraction(4**m) / 2
        sums_d: dict[tuple[int, ...], int] = {}
        sums_f: dict[tuple[int, ...], int] = {}
        for word, period in _necklaces(2 * m, p):
            counts = [0] * p
            for ch in word:
                counts[ch] += 1
            exps = tuple(counts)
            td = _split_trace(d_tables, word)
            if td:
                sums_d[exps] = sums_d.get(exps, 0) + period * td
            tf = _split_trace(f_tables, word)
            if tf:
                sums_f[exps] = sums_f.get(exps, 0) + period * tf
        for exps in set(sums_d) | set(sums_f):
            tf = Fraction(
                sums_f.get(exps, 0), _word_denominator(f_dens, exps)
            )
            td = Fraction(
                sums_d.get(exps, 0), _word_denominator(d_dens, exps)
            )
            val = coef * (tf - td)
            if val:
                terms[(m, exps)] = terms.get((m, exps), Fraction(0)) + val
    return OmegaPolynomial(p, order, terms)


def exponentiate_with_prefactor(
    log_poly: OmegaPolynomial, scalar_r: Fraction, scalar_rh: Fraction
) -> OmegaPolynomial:
    """exp((R/8 + R_H/6) t) * exp(log_poly), truncated at the t order of
    log_poly.  This is the full integrand of the group average."""
    order = log_poly.order
    p = log_poly.p
    s = Fraction(scalar_r) / 8 + Fraction(scalar_rh) / 6
    zero_key = (0,) * p
    pref_terms = {
        (m, zero_key): s**m / factorial(m) for m in range(order + 1)
    }
    prefactor = OmegaPolynomial(p, order, pref_terms)
    return prefactor * log_poly.exp()
