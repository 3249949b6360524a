"""Sobolev seminorms and norms by element-wise quadrature.

A field supplies derivative values on each element; the engine loops over
the mesh, applies a reference-simplex rule, and accumulates the p-th powers
with exact (fsum) summation so the element order never matters.  For
integrands that are not polynomial (absolute values with noninteger p,
analytic error terms) a second rule of higher degree gives a Richardson
style quadrature error estimate that is reported, never silently dropped.

Parallelism: FEM_ACCURACY_THREADS > 1 maps elements onto a thread pool;
results are reduced in element order so the value is identical to the
sequential one.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import interpolate, spatial_derivative
from .geometry import Simplex, SimplexMesh
from .quadrature import simplex_rule

# Extra rule degree used for the Richardson quadrature error estimate.
ESTIMATE_DEGREE_STEP = 4


class AdmissibilityError(ValueError):
    """A Sobolev/degree combination that the error theory does not cover."""

    def __init__(self, message, inequality):
        super().__init__(message)
        self.inequality = inequality


@dataclass(frozen=True)
class SobolevIndex:
    """W^{m,p} index on an n-dimensional domain.

    p <= 1 is accepted for raw norm computation but flagged: the duality
    and coercivity arguments behind the error constants need p > 1.
    """

    m: int
    p: float
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 1 or self.p <= 0:
            raise ValueError("need m >= 0, n >= 1, p > 0")
        if self.p <= 1:
            warnings.warn(
                f"p = {self.p} is outside the variational framework (need p > 1)",
                stacklevel=2,
            )

    def seminorm_conditions(self, k):
        """Per-order flags: k + 1 > l + n/p for l = 0..m."""
        return {l: self.k_condition(k, l) for l in range(self.m + 1)}

    def k_condition(self, k, l):
        return k + 1 > l + self.n / self.p

    def admissible(self, k):
        """Full admissibility of degree k for this index."""
        if not all(self.seminorm_conditions(k).values()):
            return False
        if self.n / self.p < 1:
            return self.m <= k
        return self.m <= k - 1 and k + 1 - self.n / self.p > 0

    def require(self, k):
        """Raise AdmissibilityError naming the first violated inequality."""
        for l, ok in self.seminorm_conditions(k).items():
            if not ok:
                raise AdmissibilityError(
                    f"k + 1 > l + n/p fails: k={k}, l={l}, n={self.n}, p={self.p}",
                    inequality="k+1 > l + n/p",
                )
        if self.n / self.p < 1:
            if self.m > k:
                raise AdmissibilityError(
                    f"n/p < 1 requires m <= k: m={self.m}, k={k}",
                    inequality="m <= k",
                )
        else:
            if self.m > k - 1:
                raise AdmissibilityError(
                    f"n/p >= 1 requires m <= k - 1: m={self.m}, k={k}",
                    inequality="m <= k-1",
                )
            if not k + 1 - self.n / self.p > 0:
                raise AdmissibilityError(
                    f"n/p >= 1 requires k + 1 - n/p > 0: k={k}, n={self.n}, p={self.p}",
                    inequality="k+1 - n/p > 0",
                )


def derivative_multi_indices(n, l):
    """Spatial multi-indices of total order l in n variables."""
    if l == 0:
        return [(0,) * n]
    out = set()
    for combo in itertools.combinations_with_replacement(range(n), l):
        alpha = [0] * n
        for j in combo:
            alpha[j] += 1
        out.add(tuple(alpha))
    return sorted(out)


class AnalyticField:
    """Field backed by an AnalyticFunction; derivatives in closed form."""

    def __init__(self, fn):
        self.fn = fn

    def deriv_on_element(self, index, simplex, alpha, bary, phys):
        return self.fn.deriv_values(alpha, phys)

    def max_degree(self):
        return None


class PiecewisePolynomialField:
    """One barycentric polynomial per mesh element."""

    def __init__(self, polynomials):
        self.polynomials = list(polynomials)
        self._deriv_cache = {}

    def deriv_on_element(self, index, simplex, alpha, bary, phys):
        key = (index, tuple(alpha))
        d = self._deriv_cache.get(key)
        if d is None:
            d = spatial_derivative(self.polynomials[index], simplex, alpha)
            self._deriv_cache[key] = d
        return d.eval_points(bary)

    def max_degree(self):
        return max((p.degree() for p in self.polynomials), default=0)


class DifferenceField:
    """Pointwise difference of two fields (error fields)."""

    def __init__(self, left, right):
        self.left = left
        self.right = right

    def deriv_on_element(self, index, simplex, alpha, bary, phys):
        return self.left.deriv_on_element(index, simplex, alpha, bary, phys) - self.right.deriv_on_element(index, simplex, alpha, bary, phys)

    def max_degree(self):
        return None


def _elements(domain):
    if isinstance(domain, SimplexMesh):
        return list(domain.simplices)
    if isinstance(domain, Simplex):
        return [domain]
    raise TypeError("domain must be a Simplex or SimplexMesh")


def _thread_count():
    raw = os.environ.get("FEM_ACCURACY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _seminorm_power(field, elements, l, p, degree):
    """Sum over elements of sum_{|alpha|=l} integral |d^alpha field|^p."""
    n = elements[0].n
    rule = simplex_rule(n, degree)
    alphas = derivative_multi_indices(n, l)
    ref_measure = float(rule.weights.sum())

    def element_power(item):
        index, simplex = item
        phys = rule.points @ simplex.vertices
        scale = simplex.measure / ref_measure
        parts = []
        for alpha in alphas:
            vals = field.deriv_on_element(index, simplex, alpha, rule.points, phys)
            parts.append(scale * float(rule.weights @ np.abs(vals) ** p))
        return math.fsum(parts)

    items = list(enumerate(elements))
    workers = _thread_count()
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
            powers = list(pool.map(element_power, items))
    else:
        powers = [element_power(item) for item in items]
    return math.fsum(powers)


def _default_degree(field, l, p):
    d = field.max_degree()
    if d is not None and float(p).is_integer() and int(p) % 2 == 0:
        return max(int(p) * max(d - l, 0), 1)
    base = d if d is not None else 5
    return 2 * base + 6


def seminorm(field_or_fn, domain, l, p, degree=None):
    """Order-l seminorm in L^p over a simplex or mesh.

    Parameters
    ----------
    field_or_fn : field object or AnalyticFunction
    domain : Simplex or SimplexMesh
    l : int, derivative order (all |alpha| = l summed).
    p : float > 0.
    degree : int, optional
        Quadrature exactness; defaults from the field's degree and p.

    Returns
    -------
    float
    """
    field = _as_field(field_or_fn)
    elements = _elements(domain)
    if degree is None:
        degree = _default_degree(field, l, p)
    return _seminorm_power(field, elements, l, p, degree) ** (1.0 / p)


def seminorm_with_estimate(field_or_fn, domain, l, p, degree=None):
    """Seminorm plus a two-rule quadrature error estimate."""
    field = _as_field(field_or_fn)
    elements = _elements(domain)
    if degree is None:
        degree = _default_degree(field, l, p)
    coarse = _seminorm_power(field, elements, l, p, degree) ** (1.0 / p)
    fine = _seminorm_power(field, elements, l, p, degree + ESTIMATE_DEGREE_STEP) ** (1.0 / p)
    return fine, abs(fine - coarse)


def sobolev_norm(field_or_fn, domain, m, p, degree=None):
    """Full W^{m,p} norm: p-th root of the summed seminorm powers."""
    field = _as_field(field_or_fn)
    elements = _elements(domain)
    if degree is None:
        degree = max(_default_degree(field, l, p) for l in range(m + 1))
    powers = [_seminorm_power(field, elements, l, p, degree) for l in range(m + 1)]
    return math.fsum(powers) ** (1.0 / p)


def norm_record(field_or_fn, domain, l, p, degree=None):
    """JSON-ready record for one seminorm evaluation."""
    value, est = seminorm_with_estimate(field_or_fn, domain, l, p, degree)
    return {"l": l, "p": p, "value": value, "quad_error_estimate": est}


def _as_field(obj):
    if hasattr(obj, "deriv_on_element"):
        return obj
    if hasattr(obj, "deriv_values"):
        return AnalyticField(obj)
    raise TypeError("expected a field or an AnalyticFunction")


def interpolant_field(fn, mesh, basis):
    """PiecewisePolynomialField of the element-wise Lagrange interpolant of fn."""
    polys = [interpolate(basis, s, fn).as_polynomial() for s in mesh.simplices]
    return PiecewisePolynomialField(polys)


def interpolation_error(fn, mesh, basis, l, p, degree=None, with_estimate=False):
    """Seminorm of fn minus its element-wise interpolant.

    The default rule degree is 2k + 6 with the Richardson step on top when
    with_estimate is set, matching the treatment of noninteger p.
    """
    err = DifferenceField(AnalyticField(fn), interpolant_field(fn, mesh, basis))
    if degree is None:
        degree = 2 * basis.k + 6
    if with_estimate:
        return seminorm_with_estimate(err, mesh, l, p, degree)
    return seminorm(err, mesh, l, p, degree)
