"""Gaussian averages over the holonomy variables, exact and numeric.

The group average integrates against the centered Gaussian whose
covariance is Cov(omega^i, omega^j) = 2 beta^{ij}, where beta^{ij} are the
entries of the inverse of beta.  That normalization is pinned down by the
one-dimensional quadrature oracle: for p = 1, beta = 1 the even moments
must be <omega^{2k}> = (2k-1)!! 2^k.

Two independent exact engines compute the moments.  wick_moment sums over
pairings by a memoized recursion; fock_moment runs a normal-ordering
calculus in which each variable acts on a creation-operator polynomial as
(2 sum_k beta^{ik} b*_k .) + d/d b*_i, with the overall normalization
calibrated once per beta on the degree-2 moment.  The two must agree
exactly on every key.

The numeric path evaluates the full (not truncated) integrand in floating
point, by Monte Carlo or tensorized Gauss-Hermite quadrature, restricted
to the ball where the largest singular value of sqrt(t) D(omega)/2 stays
below pi minus a margin; the factor determinants are computed without any
eigendecomposition, via scaling-and-squaring of the (sinh X / X, cosh X)
pair followed by an LU determinant.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .curvature import HolonomyRealization, SpaceSpec, curvature_scalars
from .errors import HeatgenError, NonPositiveT
from .rational import Matrix
from .series import OmegaPolynomial, TSeries

__all__ = [
    "wick_moment",
    "fock_moment",
    "average",
    "NumericAverage",
    "numeric_average",
    "DetFactorizationReport",
    "check_det_factorization",
    "random_rational_omegas",
]

_BETA_REGISTRY: dict[tuple, int] = {}
_BETA_BY_ID: list[tuple] = []


def _intern_matrix(mat: Matrix) -> int:
    key = tuple(tuple(Fraction(x) for x in row) for row in mat)
    ident = _BETA_REGISTRY.get(key)
    if ident is None:
        ident = len(_BETA_BY_ID)
        _BETA_REGISTRY[key] = ident
        _BETA_BY_ID.append(key)
    return ident


@lru_cache(maxsize=None)
def _wick(beta_id: int, key: tuple[int, ...]) -> Fraction:
    if not key:
        return Fraction(1)
    if len(key) % 2:
        return Fraction(0)
    binv = _BETA_BY_ID[beta_id]
    first, rest = key[0], key[1:]
    total = Fraction(0)
    for idx in range(len(rest)):
        cov = 2 * binv[first][rest[idx]]
        if cov:
            total += cov * _wick(beta_id, rest[:idx] + rest[idx + 1 :])
    return total


def wick_moment(key, beta_inv: Matrix) -> Fraction:
    """Exact Gaussian moment <omega_{i1} ... omega_{id}> by a memoized sum
    over pairings, with covariance 2 * beta_inv."""
    idx = tuple(sorted(int(i) for i in key))
    p = len(beta_inv)
    if any(i < 0 or i >= p for i in idx):
        raise ValueError("moment index out of range")
    return _wick(_intern_matrix(beta_inv), idx)


def _fock_apply(state: dict, i: int, binv) -> dict:
    """One variable acting on a creation polynomial: create against the
    covariance row, plus differentiate in the i-th creator."""
    p = len(binv)
    out: dict = {}
    for mono, coef in state.items():
        for k in range(p):
            w = 2 * binv[i][k]
            if w:
                up = list(mono)
                up[k] += 1
                key = tuple(up)
                acc = out.get(key, Fraction(0)) + w * coef
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        if mono[i]:
            down = list(mono)
            down[i] -= 1
            key = tuple(down)
            acc = out.get(key, Fraction(0)) + mono[i] * coef
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return out


@lru_cache(maxsize=None)
def _fock_raw(beta_id: int, key: tuple[int, ...]) -> Fraction:
    binv = _BETA_BY_ID[beta_id]
    p = len(binv)
    state: dict = {(0,) * p: Fraction(1)}
    for i in reversed(key):
        state = _fock_apply(state, i, binv)
    return state.get((0,) * p, Fraction(0))


@lru_cache(maxsize=None)
def _fock_scale(beta_id: int) -> Fraction:
    """Normalization fixed once per beta by matching the degree-2 moment
    from the pairing engine."""
    raw = _fock_raw(beta_id, (0, 0))
    want = _wick(beta_id, (0, 0))
    if raw == 0:
        if want == 0:
            return Fraction(1)
        raise HeatgenError("degenerate covariance in moment calibration")
    return want / raw


def fock_moment(key, beta_inv: Matrix) -> Fraction:
    """The same Gaussian moment via the normal-ordering engine."""
    idx = tuple(sorted(int(i) for i in key))
    p = len(beta_inv)
    if any(i < 0 or i >= p for i in idx):
        raise ValueError("moment index out of range")
    if not idx:
        return Fraction(1)
    if len(idx) % 2:
        return Fraction(0)
    beta_id = _intern_matrix(beta_inv)
    return _fock_raw(beta_id, idx) * _fock_scale(beta_id) ** (len(idx) // 2)


def average(poly: OmegaPolynomial, beta_inv: Matrix) -> TSeries:
    """Average an OmegaPolynomial term by term, keeping the explicit
    t-grade of each monomial.  Odd monomials vanish."""
    coeffs = [Fraction(0)] * (poly.order + 1)
    for (grade, exps), val in poly.terms.items():
        degree = sum(exps)
        if degree == 0:
            coeffs[grade] += val
            continue
        if degree % 2:
            continue
        key = tuple(i for i, e in enumerate(exps) for _ in range(e))
        moment = wick_moment(key, beta_inv)
        if moment:
            coeffs[grade] += val * moment
    return TSeries(poly.order, tuple(coeffs))


# ---------------------------------------------------------------------------
# Floating-point evaluation of the untruncated integrand
# ---------------------------------------------------------------------------

_SINH_RATIO_COEFFS = [1.0 / math.factorial(2 * m + 1) for m in range(7)]
_COSH_COEFFS = [1.0 / math.factorial(2 * m) for m in range(7)]
_SCALE_TARGET = 0.5


def _sinh_ratio_dets(mats: np.ndarray) -> np.ndarray:
    """det(sinh(X)/X) for a batch of square matrices, eigenvalue-free.

    X is halved until its Frobenius norm is small, sinh(X)/X and cosh(X)
    are summed as short even series, the halving is undone with the
    doubling rules T(2X) = T(X) cosh(X), cosh(2X) = 2 cosh(X)^2 - 1, and
    the determinant comes from an LU factorization.
    """
    if mats.size == 0:
        return np.ones(mats.shape[0])
    d = mats.shape[-1]
    if d == 0:
        return np.ones(mats.shape[0])
    fro = np.sqrt((mats * mats).sum(axis=(-2, -1)))
    fmax = float(fro.max())
    halvings = max(0, math.ceil(math.log2(fmax / _SCALE_TARGET))) if fmax > _SCALE_TARGET else 0
    y = mats / (2.0**halvings)
    y2 = y @ y
    eye = np.broadcast_to(np.eye(d), y2.shape)
    ratio = np.zeros_like(y2)
    cosh = np.zeros_like(y2)
    for c_r, c_c in zip(reversed(_SINH_RATIO_COEFFS), reversed(_COSH_COEFFS)):
        ratio = ratio @ y2 + c_r * eye
        cosh = cosh @ y2 + c_c * eye
    for _ in range(halvings):
        ratio = ratio @ cosh
        cosh = 2.0 * (cosh @ cosh) - eye
    return np.linalg.det(ratio)


def _max_singular_value_below(mats: np.ndarray, bound: float) -> np.ndarray:
    """Boolean mask: largest singular value strictly below the bound.
    The Frobenius norm certifies most rows without an SVD."""
    if mats.size == 0:
        return np.ones(mats.shape[0], dtype=bool)
    fro = np.sqrt((mats * mats).sum(axis=(-2, -1)))
    ok = fro < bound
    unsure = np.flatnonzero(~ok)
    if unsure.size:
        tops = np.linalg.svd(mats[unsure], compute_uv=False)[..., 0]
        ok[unsure] = tops < bound
    return ok


@dataclass(frozen=True)
class NumericAverage:
    """Result of a floating-point group average."""

    value: float
    std_error: float
    singularity_hits: int
    evaluations: int
    method: str


def _float_stack(mats) -> np.ndarray:
    return np.array(
        [[[float(x) for x in row] for row in m] for m in mats], dtype=float
    )


def _inv_sqrt(sym: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(sym)
    return (v / np.sqrt(w)) @ v.T


class _Integrand:
    """Shared evaluation core for both numeric methods."""

    def __init__(self, spec: SpaceSpec, hol: HolonomyRealization, t: float,
                 margin: float):
        self.t = t
        self.bound = math.pi - margin
        self.D = _float_stack(hol.D) if hol.p else np.zeros((0, hol.n, hol.n))
        self.F = _float_stack(hol.F_mats) if hol.p else np.zeros((0, 0, 0))
        self.half_sqrt_t = math.sqrt(t) / 2.0

    def __call__(self, omegas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Returns (values at accepted rows, acceptance mask)."""
        x = np.einsum("si,iab->sab", omegas, self.D) * self.half_sqrt_t
        y = np.einsum("si,ijk->sjk", omegas, self.F) * self.half_sqrt_t
        ok = _max_singular_value_below(x, self.bound)
        ok &= _max_singular_value_below(y, self.bound)
        det_d = _sinh_ratio_dets(x[ok])
        det_f = _sinh_ratio_dets(y[ok])
        positive = (det_d > 0.0) & (det_f > 0.0)
        if not positive.all():
            keep = np.flatnonzero(ok)
            ok[keep[~positive]] = False
            det_d = det_d[positive]
            det_f = det_f[positive]
        return np.sqrt(det_f) / np.sqrt(det_d), ok


def numeric_average(
    spec: SpaceSpec,
    hol: HolonomyRealization,
    t: float,
    method: str = "auto",
    *,
    samples: int = 100_000,
    nodes: int = 40,
    seed: int = 0,
    margin: float = 0.01,
) -> NumericAverage:
    """Evaluate the full generating average at time t in floating point.

    Samples falling where a factor matrix has a singular value within the
    margin of pi (or where the holonomy factor loses positivity) are
    rejected, counted, and resampled; the result is the scalar-prefactor
    times the mean over the retained domain, with the Monte Carlo standard
    error or a quadrature refinement delta as std_error.
    """
    if t <= 0:
        raise NonPositiveT(f"t must be positive, got {t}")
    if method == "auto":
        method = "quadrature" if spec.p <= 3 else "mc"
    if method not in ("mc", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    curv = curvature_scalars(spec, hol)
    try:
        prefactor = math.exp(float(curv.R / 8 + curv.R_H / 6) * t)
    except OverflowError:
        raise HeatgenError(
            f"the scalar prefactor overflows at t={t}; this t is far too "
            f"large for a numeric average"
        ) from None
    if spec.p == 0:
        return NumericAverage(prefactor, 0.0, 0, 0, method)

    beta_f = np.array([[float(x) for x in row] for row in spec.beta])
    integrand = _Integrand(spec, hol, t, margin)

    if method == "mc":
        transform = math.sqrt(2.0) * _inv_sqrt(beta_f)
        rng = np.random.default_rng(seed)
        values = np.empty(samples)
        filled = hits = 0
        empty_rounds = 0
        while filled < samples:
            draw = min(65536, samples - filled)
            z = rng.standard_normal((draw, spec.p))
            vals, ok = integrand(z @ transform.T)
            accepted = int(ok.sum())
            values[filled : filled + accepted] = vals
            filled += accepted
            hits += draw - accepted
            empty_rounds = empty_rounds + 1 if accepted == 0 else 0
            if empty_rounds >= 8:
                raise HeatgenError(
                    f"the regularity ball rejects essentially every sample "
                    f"at t={t}; this t is too large for a numeric average"
                )
        mean = float(values.mean())
        sem = float(values.std(ddof=1) / math.sqrt(samples))
        return NumericAverage(
            prefactor * mean, prefactor * sem, hits, samples + hits, "mc"
        )

    if spec.p > 3:
        raise ValueError(
            "tensorized quadrature is limited to p <= 3; use mc"
        )

    transform = 2.0 * _inv_sqrt(beta_f)

    def tensor_value(k: int) -> tuple[float, int, int]:
        x1, w1 = np.polynomial.hermite.hermgauss(k)
        grids = np.meshgrid(*([x1] * spec.p), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*([w1] * spec.p), indexing="ij")
        weight = np.prod(np.stack([w.ravel() for w in wgrids]), axis=0)
        vals, ok = integrand(pts @ transform.T)
        full = np.zeros(len(pts))
        full[ok] = vals
        total = float((weight * full).sum()) * math.pi ** (-spec.p / 2)
        return total, int((~ok).sum()), len(pts)

    value, hits, used = tensor_value(nodes)
    if nodes >= 12:
        coarse, _, extra = tensor_value(nodes - 4)
        err = abs(value - coarse)
        used += extra
    else:
        err = 0.0
    return NumericAverage(
        prefactor * value, prefactor * err, hits, used, "quadrature"
    )


@dataclass(frozen=True)
class DetFactorizationReport:
    """Outcome of the combined-determinant factorization identity check."""

    samples: int
    max_rel_err: float
    failures: tuple[int, ...]

    @property
    def all_pass(self) -> bool:
        return not self.failures


def check_det_factorization(
    hol: HolonomyRealization, omega_samples, tol: float = 1e-10
) -> DetFactorizationReport:
    """det T(sum_i omega_i C_i / 2) = det T(D(omega)/2) det T(F(omega)/2)
    with T(X) = sinh(X)/X, checked in floating point per sample."""
    n, p = hol.n, hol.p
    rows = [tuple(float(Fraction(x)) for x in s) for s in omega_samples]
    count = len(rows)
    if count == 0:
        return DetFactorizationReport(0, 0.0, ())
    omegas = np.array(rows, dtype=float).reshape(count, p)
    big_n = n + p
    c_hol = (
        _float_stack(hol.C[n:]) if p else np.zeros((0, big_n, big_n))
    )
    d_stack = _float_stack(hol.D) if p else np.zeros((0, n, n))
    f_stack = _float_stack(hol.F_mats) if p else np.zeros((0, 0, 0))
    combined = np.einsum("si,iAB->sAB", omegas, c_hol) / 2.0
    tangent = np.einsum("si,iab->sab", omegas, d_stack) / 2.0
    holonomy = np.einsum("si,ijk->sjk", omegas, f_stack) / 2.0
    lhs = _sinh_ratio_dets(combined)
    rhs = _sinh_ratio_dets(tangent) * _sinh_ratio_dets(holonomy)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
    rel = np.abs(lhs - rhs) / scale
    failures = tuple(int(i) for i in np.flatnonzero(rel > tol))
    return DetFactorizationReport(count, float(rel.max()), failures)


def random_rational_omegas(
    p: int, count: int, seed: int = 0, denominator: int = 64
) -> tuple[tuple[Fraction, ...], ...]:
    """Deterministic rational sample vectors in [-1, 1]^p."""
    rng = random.Random(seed)
    return tuple(
        tuple(
            Fraction(rng.randint(-denominator, denominator), denominator)
            for _ in range(p)
        )
        for _ in range(count)
    )
