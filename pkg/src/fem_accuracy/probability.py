"""Comparing two element degrees through a probabilistic accuracy law.

Given the error-bound constants of two degrees k1 < k2 on the same mesh
family, their bound curves C h^{k+1-m} cross at a single critical mesh
size h_star.  Below h_star the higher degree wins; the two laws here turn
that crossing into a probability that degree k2 is at least as accurate
as degree k1 at a given h:

* the nonlinear law decays smoothly from 1 toward 0 with exponent
  k2 - k1 on each side of h_star;
* the step law is its sharp-interface limit, taking the value 1/2 exactly
  at h_star by convention.

As the degree gap q = k2 - k1 grows with k1 fixed, h_star(q) grows
without bound (factorially induced), and the nonlinear laws converge to
the step law in the weak-* sense; weak_star_test measures that pairing
against smooth bumps.  Everything factorial is done in log space so q up
to 10^4 stays finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .norms import SobolevIndex

# Absolute tolerance for the weak-* pairing integrals.
PAIRING_ABS_TOL = 1e-10


@dataclass(frozen=True)
class ElementPair:
    """Two competing degrees with their error-bound constants.

    c_k1 and c_k2 are the full constants multiplying h^{k+1-m}, i.e.
    script_C(k) times the matching solution seminorm.
    """

    k1: int
    k2: int
    c_k1: float
    c_k2: float

    def __post_init__(self):
        if not self.k1 < self.k2:
            raise ValueError("need k1 < k2")
        if not (self.c_k1 > 0 and self.c_k2 > 0):
            raise ValueError("constants must be positive")

    @property
    def exponent(self):
        return self.k2 - self.k1


def h_star(pair):
    """Critical mesh size (c_k1 / c_k2)^(1/(k2-k1)).

    The ratio is formed first so that common scalings of the two constants
    cancel; if the ratio itself over- or underflows the computation falls
    back to the difference of logs.
    """
    ratio = pair.c_k1 / pair.c_k2
    if 0.0 < ratio < math.inf:
        return math.exp(math.log(ratio) / pair.exponent)
    return math.exp((math.log(pair.c_k1) - math.log(pair.c_k2)) / pair.exponent)


def h_star_explicit(n, m, p, k1, k2, seminorm_ratio=1.0, cea_quotient=1.0):
    """Critical mesh size from the k-explicit constant formula.

    seminorm_ratio is |u|_{k1+1,p} / |u|_{k2+1,p}; cea_quotient the ratio
    of the two quasi-optimality factors.  Equals h_star applied to
    script_C-built constants because every k-independent factor cancels.
    """
    if not k1 < k2:
        raise ValueError("need k1 < k2")
    if seminorm_ratio <= 0 or cea_quotient <= 0:
        raise ValueError("ratios must be positive")
    idx = SobolevIndex(m=m, p=p, n=n)
    idx.require(k1)
    idx.require(k2)
    q = k2 - k1
    log_h = (
        math.log(cea_quotient)
        + n * (math.log(k1 + n) - math.log(k2 + n))
        + m * (n + 2) * (math.log(k1) - math.log(k2))
        + math.lgamma(k2 - m + 1)
        - math.lgamma(k1 - m + 1)
        + math.log(k2 + 1 - m - n / p)
        - math.log(k1 + 1 - m - n / p)
        + math.log(seminorm_ratio)
    ) / q
    return math.exp(log_h)


@dataclass(frozen=True)
class AccuracyLaw:
    """Probability that the higher degree is at least as accurate at h.

    kind is "nonlinear" (smooth decay with the stated exponent) or "step"
    (sharp interface, 1/2 exactly at h_star).
    """

    h_star: float
    exponent: int
    kind: str = "nonlinear"

    def __post_init__(self):
        if self.h_star <= 0 or self.exponent < 1:
            raise ValueError("need h_star > 0 and exponent >= 1")
        if self.kind not in ("nonlinear", "step"):
            raise ValueError("kind must be 'nonlinear' or 'step'")

    @classmethod
    def from_pair(cls, pair, kind="nonlinear"):
        return cls(h_star=h_star(pair), exponent=pair.exponent, kind=kind)

    def __call__(self, h):
        h = np.asarray(h, dtype=np.float64)
        scalar = h.ndim == 0
        h = np.atleast_1d(h)
        if np.any(h < 0):
            raise ValueError("mesh size must be nonnegative")
        out = np.empty_like(h)
        if self.kind == "step":
            out[h < self.h_star] = 1.0
            out[h > self.h_star] = 0.0
            out[h == self.h_star] = 0.5
        else:
            below = h <= self.h_star
            # log/exp form so huge exponents underflow to 0 instead of
            # overflowing; at h = h_star both branches give exactly 1/2.
            with np.errstate(divide="ignore"):
                logr = np.log(h / self.h_star)
            decay = np.exp(self.exponent * np.where(below, logr, -logr))
            out[below] = 1.0 - 0.5 * decay[below]
            out[~below] = 0.5 * decay[~below]
        return float(out[0]) if scalar else out


class SinPiSeminormModel:
    """Seminorm sequence of u(x) = sin(pi x) on (0,1) in closed form.

    |u|_{r,p} = pi^r c_p: every derivative is a shifted sine with the same
    L^p size, so consecutive seminorms have ratio exactly pi.
    """

    ratio_limit = math.pi

    def __init__(self, p=2.0):
        if p <= 0:
            raise ValueError("p must be positive")
        self.p = p
        self._log_cp = (
            math.lgamma((p + 1.0) / 2.0)
            - 0.5 * math.log(math.pi)
            - math.lgamma(p / 2.0 + 1.0)
        ) / p

    def log_seminorm(self, r):
        return r * math.log(math.pi) + self._log_cp


class GeometricSeminormModel:
    """|u|_{r,p} = base * ratio^r; covers exp(a x) (ratio a) and friends."""

    def __init__(self, ratio, base=1.0):
        if ratio <= 0 or base <= 0:
            raise ValueError("ratio and base must be positive")
        self.ratio = float(ratio)
        self.base = float(base)
        self.ratio_limit = float(ratio)

    def log_seminorm(self, r):
        return math.log(self.base) + r * math.log(self.ratio)


def h_star_sequence(k, q_max, model, n=1, m=0, p=2.0, cea_quotient=None):
    """Critical mesh sizes h_star(q) for degree pairs (k, k+q), q = 1..q_max.

    model supplies log |u|_{r,p}; cea_quotient is an optional callable
    q -> ratio of quasi-optimality factors (default 1).  Returns an array
    of length q_max with h_star(q) at index q-1.  Log-space throughout, so
    q_max of order 10^4 is fine.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    idx = SobolevIndex(m=m, p=p, n=n)
    idx.require(k)
    out = np.empty(q_max)
    base = (
        n * math.log(k + n)
        + m * (n + 2) * math.log(k)
        - math.lgamma(k - m + 1)
        - math.log(k + 1 - m - n / p)
        + model.log_seminorm(k + 1)
    )
    for q in range(1, q_max + 1):
        kq = k + q
        log_pow = (
            base
            - n * math.log(kq + n)
            - m * (n + 2) * math.log(kq)
            + math.lgamma(kq - m + 1)
            + math.log(kq + 1 - m - n / p)
            - model.log_seminorm(kq + 1)
        )
        if cea_quotient is not None:
            log_pow += math.log(cea_quotient(q))
        out[q - 1] = math.exp(log_pow / q)
    return out


class Bump:
    """Smooth bump exp(-1/(1-u^2)) rescaled to the support (a, b).

    The declared support is part of the object; pairings integrate over it
    and reject bare callables without one.
    """

    def __init__(self, a, b):
        if not b > a:
            raise ValueError("need b > a")
        self.a = float(a)
        self.b = float(b)

    def __call__(self, h):
        h = np.asarray(h, dtype=np.float64)
        u = (2.0 * h - self.a - self.b) / (self.b - self.a)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out if out.ndim else float(out)

    def integral(self):
        val, _ = quad(lambda t: float(self(np.array(t))), self.a, self.b, epsabs=PAIRING_ABS_TOL, limit=200)
        return val


def weak_star_pairing(law, bump):
    """Integral of law(h) bump(h) dh over the bump support, h <= 0 excluded."""
    lo = max(bump.a, 0.0)
    hi = bump.b
    if hi <= lo:
        return 0.0
    breakpoints = [law.h_star] if lo < law.h_star < hi else None

    def integrand(h):
        return float(law(h)) * float(bump(np.array(h)))

    val, _ = quad(integrand, lo, hi, points=breakpoints, epsabs=PAIRING_ABS_TOL, limit=200)
    return val


def weak_star_test(k, q_list, bump, model, n=1, m=0, p=2.0, cea_quotient=None):
    """Pairing error of the nonlinear laws against the step-law limit.

    For each q in q_list the nonlinear law of the pair (k, k+q) is paired
    with the bump; the target is the step-law pairing, which equals the
    bump integral over (0, infinity) once h_star(q) clears the support.
    Returns a list of records (q, h_star, pairing, target, error).
    """
    if not hasattr(bump, "a") or not hasattr(bump, "b"):
        raise TypeError("bump must declare its support (use Bump)")
    q_list = sorted(set(int(q) for q in q_list))
    if not q_list or q_list[0] < 1:
        raise ValueError("q_list must contain positive integers")
    hs = h_star_sequence(k, q_list[-1], model, n=n, m=m, p=p, cea_quotient=cea_quotient)
    lo = max(bump.a, 0.0)
    # The step-law limit pairs to the full bump mass over (0, inf).
    limit_target, _ = quad(lambda t: float(bump(np.array(t))), lo, bump.b, epsabs=PAIRING_ABS_TOL, limit=200)
    records = []
    for q in q_list:
        law = AccuracyLaw(h_star=float(hs[q - 1]), exponent=q, kind="nonlinear")
        pairing = weak_star_pairing(law, bump)
        records.append(
            {
                "q": q,
                "h_star": float(hs[q - 1]),
                "pairing": pairing,
                "target": limit_target,
                "error": abs(pairing - limit_target),
            }
        )
    return records
