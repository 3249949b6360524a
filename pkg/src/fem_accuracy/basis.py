"""Lagrange shape functions of degree k on an n-simplex.

The basis is indexed by multi-indices (i_1, ..., i_{n+1}) with |i| = k; the
node of index i has barycentric coordinates (i_1/k, ..., i_{n+1}/k).  Each
shape function is a product over the barycentric variables of univariate
factors built from the node spacing 1/k, expanded here into an explicit
term list with exact rational coefficients.  Construction, differentiation
in the barycentric variables, and evaluation at rational points are all
exact; floating point enters only when evaluating at float points or when
chaining through the (float) barycentric gradients of a physical simplex.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels

# Refuse bases whose size would be absurd to materialize.
MAX_BASIS_SIZE = 200_000


def multi_indices(n, k):
    """All (n+1)-tuples of nonnegative integers summing to k, descending lex order."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for v in range(remaining, -1, -1):
            rec(prefix + (v,), remaining - v, slots - 1)

    rec((), k, n + 1)
    return out


class BarycentricPolynomial:
    """Polynomial in the barycentric variables as a term map.

    terms maps an exponent tuple (one entry per variable) to a nonzero
    coefficient, Fraction for exact polynomials or float after chaining
    through physical gradients.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_arrays")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has wrong length for {nvars} variables")
            if c == 0:
                continue
            clean[tuple(int(e) for e in exps)] = c
        self.terms = clean
        self._arrays = None

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: value}) if value != 0 else cls(nvars)

    @classmethod
    def variable(cls, nvars, var):
        e = [0] * nvars
        e[var] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __add__(self, other):
        if isinstance(other, BarycentricPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            terms = dict(self.terms)
            for e, c in other.terms.items():
                s = terms.get(e, 0) + c
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
            return BarycentricPolynomial(self.nvars, terms)
        return self + BarycentricPolynomial.constant(self.nvars, other)

    __radd__ = __add__

    def __neg__(self):
        return BarycentricPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, BarycentricPolynomial):
            return self + (-other)
        return self + BarycentricPolynomial.constant(self.nvars, -other)

    def __mul__(self, other):
        if isinstance(other, BarycentricPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            terms = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    s = terms.get(e, 0) + c1 * c2
                    if s == 0:
                        terms.pop(e, None)
                    else:
                        terms[e] = s
            return BarycentricPolynomial(self.nvars, terms)
        if other == 0:
            return BarycentricPolynomial(self.nvars)
        return BarycentricPolynomial(self.nvars, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def derivative(self, var):
        """Partial derivative with respect to barycentric variable `var`."""
        terms = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                continue
            d = list(e)
            d[var] -= 1
            terms[tuple(d)] = c * e[var]
        return BarycentricPolynomial(self.nvars, terms)

    def lambda_derivative(self, orders):
        """Iterated derivative; orders[v] counts derivatives in variable v."""
        cur = self
        for var, times in enumerate(orders):
            for _ in range(times):
                cur = cur.derivative(var)
        return cur

    def evaluate(self, lam):
        """Evaluate at one barycentric point; exact for Fraction inputs."""
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, p in zip(lam, e):
                if p:
                    term = term * x**p
            total = total + term
        return total

    def _float_arrays(self):
        if self._arrays is None:
            if self.terms:
                exps = np.array(list(self.terms.keys()), dtype=np.int64).reshape(-1, self.nvars)
                coeffs = np.array([float(c) for c in self.terms.values()], dtype=np.float64)
            else:
                exps = np.zeros((0, self.nvars), dtype=np.int64)
                coeffs = np.zeros(0, dtype=np.float64)
            self._arrays = (exps, coeffs)
        return self._arrays

    def eval_points(self, points):
        """Evaluate at float points, shape (npts, nvars) -> (npts,)."""
        exps, coeffs = self._float_arrays()
        return kernels.eval_terms(points, exps, coeffs)

    def max_abs_on(self, points):
        exps, coeffs = self._float_arrays()
        return kernels.max_abs_eval(points, exps, coeffs)

    def reduced(self):
        """Canonical form with the last variable eliminated.

        Substitutes lambda_last = 1 - sum(others) and expands exactly; two
        polynomials agree on the barycentric plane iff their reduced term
        maps are equal.  Exponent tuples in the result have nvars-1 slots.
        """
        nfree = self.nvars - 1
        out = {}
        for e, c in self.terms.items():
            last = e[-1]
            base = e[:-1]
            # (1 - sum lam_i)^last expanded over compositions alpha.
            for alpha in itertools.product(range(last + 1), repeat=nfree):
                s = sum(alpha)
                if s > last:
                    continue
                coef = c * Fraction(math.factorial(last), math.prod(map(math.factorial, alpha)) * math.factorial(last - s)) * (-1) ** s
                key = tuple(b + a for b, a in zip(base, alpha))
                tot = out.get(key, 0) + coef
                if tot == 0:
                    out.pop(key, None)
                else:
                    out[key] = tot
        return out

    def __repr__(self):
        return f"BarycentricPolynomial(nvars={self.nvars}, nterms={len(self.terms)})"


def auxiliary_factor(i, k):
    """Univariate node factor: product of (k*t - c + 1)/c for c = 1..i.

    The empty product (i = 0) is the constant one.  Coefficients are exact
    Fractions; the result is a BarycentricPolynomial in a single variable.
    """
    if i < 0 or k < 1:
        raise ValueError("need i >= 0 and k >= 1")
    coeffs = [Fraction(1)]
    for c in range(1, i + 1):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for e, a in enumerate(coeffs):
            nxt[e + 1] += a * Fraction(k, c)
            nxt[e] += a * Fraction(1 - c, c)
        coeffs = nxt
    return BarycentricPolynomial(1, {(e,): a for e, a in enumerate(coeffs) if a != 0})


def _embed(poly1d, nvars, var):
    terms = {}
    for (e,), c in poly1d.terms.items():
        key = [0] * nvars
        key[var] = e
        terms[tuple(key)] = c
    return BarycentricPolynomial(nvars, terms)


@dataclass(frozen=True)
class PkBasis:
    """Degree-k Lagrange basis on the n-simplex.

    Attributes
    ----------
    n, k : int
    indices : list of multi-index tuples, descending lex order.
    nodes : list of barycentric node coordinates as Fraction tuples.
    polynomials : list of BarycentricPolynomial with Fraction coefficients.
    """

    n: int
    k: int
    indices: list = field(repr=False)
    nodes: list = field(repr=False)
    polynomials: list = field(repr=False)

    @property
    def size(self):
        return len(self.indices)

    def node_coordinates(self, simplex):
        """Physical coordinates of the basis nodes on a given simplex, (N, n)."""
        lam = np.array([[float(x) for x in node] for node in self.nodes])
        return lam @ simplex.vertices

    def evaluation_matrix(self):
        """Exact values polynomials[i] at nodes[j]; identity iff unisolvent."""
        return [[p.evaluate(node) for node in self.nodes] for p in self.polynomials]

    def sum_polynomial(self):
        total = BarycentricPolynomial(self.n + 1)
        for p in self.polynomials:
            total = total + p
        return total


def build_basis(n, k):
    """Construct the PkBasis for degree k on the n-simplex.

    Raises
    ------
    ValueError
        For k < 1, n < 1, or a basis size beyond MAX_BASIS_SIZE.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    size = math.comb(n + k, n)
    if size > MAX_BASIS_SIZE:
        raise ValueError(f"basis of dimension {size} exceeds cap {MAX_BASIS_SIZE}")
    idx = multi_indices(n, k)
    nodes = [tuple(Fraction(i, k) for i in mi) for mi in idx]
    polys = []
    for mi in idx:
        poly = BarycentricPolynomial.constant(n + 1, Fraction(1))
        for var, i in enumerate(mi):
            if i:
                poly = poly * _embed(auxiliary_factor(i, k), n + 1, var)
        polys.append(poly)
    return PkBasis(n=n, k=k, indices=idx, nodes=nodes, polynomials=polys)


def spatial_derivative(poly, simplex, alpha):
    """Derivative of a barycentric polynomial in physical coordinates.

    Applies d/dx_j = sum_q (grad lambda_q)_j d/dlambda_q once per unit of
    alpha[j].  The gradients are floats, so the result has float
    coefficients.  Orders beyond the polynomial degree give the zero
    polynomial.

    Parameters
    ----------
    poly : BarycentricPolynomial in n+1 variables
    simplex : Simplex
    alpha : tuple of n nonnegative ints, one order per spatial direction
    """
    n = simplex.n
    if poly.nvars != n + 1:
        raise ValueError("polynomial variable count does not match the simplex")
    if len(alpha) != n:
        raise ValueError(f"alpha must have {n} entries")
    if sum(alpha) > poly.degree():
        return BarycentricPolynomial(n + 1)
    grads = simplex.barycentric_gradients()
    cur = poly
    for j, times in enumerate(alpha):
        for _ in range(times):
            acc = BarycentricPolynomial(n + 1)
            for q in range(n + 1):
                g = float(grads[q, j])
                if g != 0.0:
                    acc = acc + cur.derivative(q) * g
            cur = acc
            if cur.is_zero():
                return cur
    return cur


class LocalInterpolant:
    """Lagrange interpolant of a function on one simplex.

    Holds the basis, the simplex, and the nodal values; the underlying
    polynomial (float coefficients) is assembled lazily.
    """

    def __init__(self, basis, simplex, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (basis.size,):
            raise ValueError(f"expected {basis.size} nodal values, got {values.shape}")
        self.basis = basis
        self.simplex = simplex
        self.values = values
        self._poly = None

    def as_polynomial(self):
        if self._poly is None:
            acc = BarycentricPolynomial(self.basis.n + 1)
            for v, p in zip(self.values, self.basis.polynomials):
                if v != 0.0:
                    acc = acc + p * float(v)
            self._poly = acc
        return self._poly

    def __call__(self, x):
        lam = self.simplex.barycentric(x)
        pts = lam.reshape(1, -1) if lam.ndim == 1 else lam
        vals = self.as_polynomial().eval_points(pts)
        return float(vals[0]) if lam.ndim == 1 else vals


def interpolate(basis, simplex, f):
    """LocalInterpolant of f, sampling f at the mapped basis nodes.

    f is called with an (N, n) array of physical points; a callable taking
    n scalars is accepted as a fallback.
    """
    pts = basis.node_coordinates(simplex)
    try:
        vals = np.asarray(f(pts), dtype=np.float64).reshape(-1)
        if vals.shape != (basis.size,):
            raise TypeError
    except TypeError:
        vals = np.array([float(f(*row)) for row in pts])
    return LocalInterpolant(basis, simplex, vals)
