"""Real-argument special functions: Gamma, log-Gamma, Kummer 1F1, Gauss 2F1.

The confluent hypergeometric function is the workhorse of the whole solver:
stiffness entries need 1F1(a; b; z) at z = -(eps*r)^2, which reaches z ~ -1e6
once the shape parameter is coupled to the grid spacing.  A naive Taylor sum
is catastrophically cancellative already near z = -40 in double precision, so
evaluation is split into two regimes (Taylor / large-negative-z asymptotics)
with an overlap window used for consistency testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "Z_SWITCH",
    "PoleError",
    "AccuracyLossError",
    "gamma",
    "ln_gamma",
    "sinpi",
    "cospi",
    "kummer_1f1",
    "gauss_2f1",
]


class PoleError(ValueError):
    """A parameter sits on a pole of the function (e.g. Gamma at 0, -1, ...)."""


class AccuracyLossError(ArithmeticError):
    """No evaluation regime reached the requested relative tolerance."""


@dataclass(frozen=True)
class SeriesControl:
    """Termination control for hypergeometric series evaluation."""

    rel_tol: float = 1e-14
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_CONTROL = SeriesControl()

# Taylor/asymptotic handoff for 1F1 at negative z; overlap tested in [30, 50].
Z_SWITCH = 40.0

_MAX_GAMMA_ARG = 171.62437695630272  # largest x with Gamma(x) finite in double


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function for real x off the poles {0, -1, -2, ...}."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at x = {x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise OverflowError(
            f"gamma({x}) exceeds floating range; use ln_gamma"
        ) from exc


def ln_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def sinpi(x: float) -> float:
    """sin(pi*x), exact at integers and half-integers.

    fmod is exact and so is r - round(r) for |r| <= 2, so tiny fractional
    parts survive the reduction at full precision.
    """
    r = math.fmod(x, 2.0)
    n = round(r)
    d = r - n
    if d == 0.0:
        return 0.0
    s = math.sin(math.pi * d)
    return -s if n % 2 else s


def cospi(x: float) -> float:
    """cos(pi*x), exact at integer and half-integer x."""
    return sinpi(x + 0.5)


def _signed_ln_gamma(x: float) -> tuple[float, float]:
    """(sign, log|Gamma(x)|) for real x off the poles; reflection for x < 0."""
    if x > 0:
        return 1.0, math.lgamma(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at x = {x}")
    # Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    s = sinpi(x)
    sign = 1.0 if s > 0 else -1.0
    return sign, math.log(math.pi) - math.log(abs(s)) - math.lgamma(1.0 - x)


def _gamma_ratio(p: float, q: float) -> float:
    """Gamma(p) / Gamma(q) via log-space differences (overflow-safe)."""
    sp, lp = _signed_ln_gamma(p)
    sq, lq = _signed_ln_gamma(q)
    return sp * sq * math.exp(lp - lq)


def _rgamma(x: float) -> float:
    """1 / Gamma(x); zero at the poles."""
    if _is_nonpositive_integer(x):
        return 0.0
    s, l = _signed_ln_gamma(x)
    return s * math.exp(-l)


def _poch(x: float, n: int) -> float:
    """Pochhammer (x)_n as a finite product."""
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


# ---------------------------------------------------------------------------
# Kummer 1F1
# ---------------------------------------------------------------------------


def _series_1f1(c: float, b: float, w: np.ndarray, ctrl: SeriesControl,
                n_terms: int | None = None) -> np.ndarray:
    """Taylor sum of 1F1(c; b; w) for w >= 0, vectorized over w.

    With w >= 0 the tail of the series is single-signed (any sign changes in
    (c)_k die out after ceil(-c) terms), so the floating-point sum carries no
    catastrophic cancellation.  ``n_terms`` forces exact termination for
    polynomial cases.
    """
    w = np.asarray(w, dtype=float)
    term = np.ones_like(w)
    total = np.ones_like(w)
    if n_terms is not None:
        for k in range(n_terms):
            term = term * ((c + k) / ((b + k) * (k + 1.0))) * w
            total = total + term
        return total
    active = np.ones(w.shape, dtype=bool)
    prev_small = np.zeros(w.shape, dtype=bool)
    for k in range(ctrl.max_terms):
        term = term * ((c + k) / ((b + k) * (k + 1.0))) * w
        total = np.where(active, total + term, total)
        small = np.abs(term) <= ctrl.rel_tol * np.abs(total)
        done = small & prev_small
        active &= ~done
        prev_small = small
        if not active.any():
            return total
    worst = float(np.max(np.abs(term[active]) / np.abs(total[active])))
    raise AccuracyLossError(
        f"1F1 Taylor series not converged after {ctrl.max_terms} terms "
        f"(worst relative term {worst:.2e})"
    )


def _series_2f0(p: float, q: float, w: np.ndarray, ctrl: SeriesControl
                ) -> tuple[np.ndarray, np.ndarray]:
    """Asymptotic sum S = sum_k (p)_k (q)_k / (k! w^k), truncated at the
    smallest term per element.  Returns (S, achieved relative error bounds).
    """
    w = np.asarray(w, dtype=float)
    term = np.ones_like(w)
    total = np.ones_like(w)
    active = np.ones(w.shape, dtype=bool)
    achieved = np.zeros(w.shape, dtype=float)
    for k in range(ctrl.max_terms):
        new = term * ((p + k) * (q + k)) / ((k + 1.0) * w)
        growing = (np.abs(new) >= np.abs(term)) & active
        # stop before the divergent tail; first omitted term bounds the error
        achieved[growing] = np.abs(term[growing]) / np.abs(total[growing])
        active &= ~growing
        total = np.where(active, total + new, total)
        small = (np.abs(new) <= ctrl.rel_tol * np.abs(total)) & active
        achieved[small] = np.abs(new[small]) / np.abs(total[small])
        active &= ~small
        term = new
        if not active.any():
            break
    else:
        achieved[active] = np.abs(term[active]) / np.abs(total[active])
    return total, achieved


def kummer_1f1(a: float, b: float, z, ctrl: SeriesControl | None = None):
    """Confluent hypergeometric 1F1(a; b; z) for real arguments.

    Vectorized over ``z``.  Regimes: Taylor series (through the e^z-stabilized
    Kummer transform for z < 0) when |z| <= Z_SWITCH, large-|z| asymptotic
    expansion truncated at the smallest term otherwise.  Polynomial cases
    (a or b-a a non-positive integer) are summed exactly.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    if _is_nonpositive_integer(b):
        raise PoleError(f"1F1 parameter pole: b = {b}")
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    zf = np.atleast_1d(z_arr).ravel()
    out = _kummer_many(float(a), float(b), zf, ctrl)
    if scalar:
        return float(out[0])
    return out.reshape(z_arr.shape)


def _kummer_many(a: float, b: float, z: np.ndarray, ctrl: SeriesControl
                 ) -> np.ndarray:
    if a == 0.0:
        return np.ones_like(z)
    if a == b:
        return np.exp(z)
    if _is_nonpositive_integer(a):
        return _series_1f1(a, b, z, ctrl, n_terms=int(-a))
    if _is_nonpositive_integer(b - a):
        # Kummer transform lands on a terminating series: exact for any z.
        m = int(a - b)
        return np.exp(z) * _series_1f1(b - a, b, -z, ctrl, n_terms=m)

    out = np.empty_like(z)
    neg = z < 0.0
    pos = ~neg

    small_n = neg & (z >= -Z_SWITCH)
    large_n = neg & (z < -Z_SWITCH)
    if small_n.any():
        w = -z[small_n]
        # 1F1(a;b;z) = e^z 1F1(b-a;b;-z): the transformed series has a
        # single-signed tail, avoiding the cancellation of the direct sum.
        out[small_n] = np.exp(z[small_n]) * _series_1f1(b - a, b, w, ctrl)
    if large_n.any():
        w = -z[large_n]
        s, achieved = _series_2f0(a, a - b + 1.0, w, ctrl)
        vals = _gamma_ratio(b, b - a) * np.exp(-a * np.log(w)) * s
        rough = achieved > ctrl.rel_tol
        if rough.any():
            # near the regime boundary the optimally-truncated expansion can
            # fall short of rel_tol; the Taylor regime still converges there
            redo = rough & (w <= 700.0)
            if redo.any():
                vals[redo] = np.exp(-w[redo]) * _series_1f1(b - a, b, w[redo], ctrl)
            if (rough & ~redo).any():
                worst = float(np.max(achieved[rough & ~redo]))
                raise AccuracyLossError(
                    f"1F1 asymptotic branch reached only {worst:.2e} relative "
                    "accuracy and |z| is too large for the Taylor regime"
                )
        out[large_n] = vals

    small_p = pos & (z <= Z_SWITCH)
    large_p = pos & (z > Z_SWITCH)
    if small_p.any():
        out[small_p] = _series_1f1(a, b, z[small_p], ctrl)
    if large_p.any():
        w = z[large_p]
        s, achieved = _series_2f0(b - a, 1.0 - a, w, ctrl)
        vals = _gamma_ratio(b, a) * np.exp(w + (a - b) * np.log(w)) * s
        rough = achieved > ctrl.rel_tol
        if rough.any():
            redo = rough & (w <= 700.0)
            if redo.any():
                vals[redo] = _series_1f1(a, b, w[redo], ctrl)
            if (rough & ~redo).any():
                worst = float(np.max(achieved[rough & ~redo]))
                raise AccuracyLossError(
                    f"1F1 asymptotic branch reached only {worst:.2e} relative "
                    "accuracy and |z| is too large for the Taylor regime"
                )
        out[large_p] = vals
    return out


# ---------------------------------------------------------------------------
# Gauss 2F1
# ---------------------------------------------------------------------------


def _gauss_series(a: float, b: float, c: float, z: float, ctrl: SeriesControl
                  ) -> float:
    """Direct Gauss series, |z| < 1 (used for z in [0, 1/2) after transforms)."""
    term = 1.0
    total = 1.0
    prev_small = False
    for k in range(ctrl.max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        small = abs(term) <= ctrl.rel_tol * abs(total)
        if small and prev_small:
            return total
        prev_small = small
    raise AccuracyLossError(
        f"2F1 series not converged after {ctrl.max_terms} terms at z = {z}"
    )


def _gauss_poly(a: float, b: float, c: float, z: float) -> float:
    """Terminating 2F1 when a or b is a non-positive integer."""
    if _is_nonpositive_integer(b) and not _is_nonpositive_integer(a):
        a, b = b, a
    n = int(-a)
    term = 1.0
    total = 1.0
    for k in range(n):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
    return total


def _gauss_1mz_generic(a: float, b: float, c: float, z: float,
                       ctrl: SeriesControl) -> float:
    """Connection z -> 1-z for non-integer c-a-b."""
    w = 1.0 - z
    delta = c - a - b
    coef1 = gamma(c) * gamma(delta) * _rgamma(c - a) * _rgamma(c - b)
    coef2 = gamma(c) * gamma(-delta) * _rgamma(a) * _rgamma(b)
    t1 = coef1 * _gauss_series(a, b, a + b - c + 1.0, w, ctrl) if coef1 else 0.0
    t2 = coef2 * w ** delta * _gauss_series(c - a, c - b, delta + 1.0, w, ctrl) \
        if coef2 else 0.0
    return t1 + t2


def _gauss_1mz_integer(a: float, b: float, c: float, m: int, z: float,
                       ctrl: SeriesControl) -> float:
    """Limit form of the z -> 1-z connection for c - a - b = m in {0, 1, ...}.

    Degenerate-parameter expansion with logarithmic terms; the infinite sum
    converges geometrically since 1 - z <= 1/2 on this branch.
    """
    w = 1.0 - z
    lw = math.log(w)
    finite = 0.0
    if m >= 1:
        s = 0.0
        term = 1.0
        for n in range(m):
            if n > 0:
                term *= (a + n - 1.0) * (b + n - 1.0) / (n * (n - m)) * w
            s += term
        finite = gamma(float(m)) * gamma(c) * _rgamma(a + m) * _rgamma(b + m) * s

    # logarithmic series
    pref = gamma(c) * _rgamma(a) * _rgamma(b) * (-1.0) ** m * w ** m
    total = 0.0
    coef = 1.0 / math.factorial(m)
    for n in range(ctrl.max_terms):
        if n > 0:
            coef *= (a + m + n - 1.0) * (b + m + n - 1.0) / (n * (n + m)) * w
        bracket = (lw - digamma(n + 1.0) - digamma(n + m + 1.0)
                   + digamma(a + m + n) + digamma(b + m + n))
        term = coef * bracket
        total += term
        if n > 2 and abs(term) <= ctrl.rel_tol * max(abs(total), 1e-300):
            break
    else:
        raise AccuracyLossError("2F1 logarithmic branch did not converge")
    return finite - pref * total


def gauss_2f1(a: float, b: float, c: float, z: float,
              ctrl: SeriesControl | None = None) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) on the real line z <= 1.

    Branches: direct series for z in [0, 1/2); connection to argument 1-z for
    z in [1/2, 1] (with the limit form when c-a-b is an integer); Pfaff
    transform z -> z/(z-1) for z < 0.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    a, b, c, z = float(a), float(b), float(c), float(z)
    if _is_nonpositive_integer(c):
        raise PoleError(f"2F1 parameter pole: c = {c}")
    if z > 1.0:
        raise ValueError(f"2F1 real branch requires z <= 1, got {z}")
    if z == 0.0:
        return 1.0
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        return _gauss_poly(a, b, c, z)
    if z == 1.0:
        if c - a - b <= 0:
            raise ValueError(
                f"2F1 diverges at z = 1 for c - a - b = {c - a - b} <= 0"
            )
        return _gamma_ratio(c, c - a) * _gamma_ratio(c - a - b, c - b)
    if z < 0.0:
        if a > b:
            a, b = b, a
        return (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, z / (z - 1.0), ctrl)
    if z < 0.5:
        return _gauss_series(a, b, c, z, ctrl)
    delta = c - a - b
    m = round(delta)
    if abs(delta - m) < 1e-8:
        if m < 0:
            return (1.0 - z) ** delta * gauss_2f1(c - a, c - b, c, z, ctrl)
        return _gauss_1mz_integer(a, b, c, int(m), z, ctrl)
    return _gauss_1mz_generic(a, b, c, z, ctrl)
