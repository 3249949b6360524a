"""Analytic test functions with derivatives of every order.

The norm engine needs partial derivatives of the exact solution at
arbitrary points; the classes here supply them in closed form.  Callables
without closed-form derivatives can be wrapped in FiniteDifferenceFunction
at reduced accuracy.
"""

from __future__ import annotations

import math

import numpy as np


class AnalyticFunction:
    """Scalar function on R^n with closed-form partial derivatives.

    Subclasses implement deriv_values(alpha, x) for an (npts, n) point
    array; __call__ evaluates the function itself.
    """

    n = 1

    def deriv_values(self, alpha, x):
        raise NotImplementedError

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1 and self.n == 1:
            x = x.reshape(-1, 1)
        return self.deriv_values((0,) * self.n, x)


class SinPiProduct(AnalyticFunction):
    """Product of sin(pi x_i) over the coordinates.

    Any derivative is again a product of shifted sines:
    d^r/dt^r sin(pi t) = pi^r sin(pi t + r pi/2).
    """

    def __init__(self, n=1):
        self.n = n

    def deriv_values(self, alpha, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.ones(x.shape[0])
        for i, r in enumerate(alpha):
            out = out * np.sin(np.pi * x[:, i] + r * np.pi / 2.0)
        return out * np.pi ** sum(alpha)

    def seminorm_1d(self, r, p):
        """Exact order-r seminorm on (0,1) for the 1D case.

        |sin(pi .)|_{r,p} = pi^r * c_p with c_p^p the integral of
        |sin(pi t)|^p over (0,1); shifted sines integrate to the same c_p.
        """
        if self.n != 1:
            raise ValueError("closed form kept for n = 1 only")
        log_cp = (
            math.lgamma((p + 1.0) / 2.0)
            - 0.5 * math.log(math.pi)
            - math.lgamma(p / 2.0 + 1.0)
        ) / p
        return math.exp(r * math.log(math.pi) + log_cp)


class Polynomial1D(AnalyticFunction):
    """Univariate polynomial sum(c_j x^j) with exact derivatives."""

    n = 1

    def __init__(self, coefficients):
        self.coefficients = [float(c) for c in coefficients]

    def deriv_values(self, alpha, x):
        (r,) = alpha
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))[:, 0]
        out = np.zeros_like(x)
        for j, c in enumerate(self.coefficients):
            if j >= r and c != 0.0:
                out += c * math.perm(j, r) * x ** (j - r)
        return out


class Exp1D(AnalyticFunction):
    """exp(a x); derivatives multiply by a^r."""

    n = 1

    def __init__(self, a=1.0):
        self.a = float(a)

    def deriv_values(self, alpha, x):
        (r,) = alpha
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))[:, 0]
        return self.a**r * np.exp(self.a * x)


class FiniteDifferenceFunction(AnalyticFunction):
    """Central-difference derivatives for a plain callable.

    Step is cbrt(eps) scaled per differentiation, so only low orders are
    usable; intended for quick experiments, not for the bound checks.
    """

    def __init__(self, f, n=1, step=None):
        self.f = f
        self.n = n
        self.step = float(step) if step is not None else float(np.cbrt(np.finfo(float).eps))

    def deriv_values(self, alpha, x):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))

        def rec(order, pts):
            for i, r in enumerate(order):
                if r > 0:
                    lo = order[:i] + (r - 1,) + order[i + 1 :]
                    hp = pts.copy()
                    hp[:, i] += self.step
                    hm = pts.copy()
                    hm[:, i] -= self.step
                    return (rec(lo, hp) - rec(lo, hm)) / (2.0 * self.step)
            vals = np.asarray(self.f(pts), dtype=np.float64)
            return vals.reshape(pts.shape[0])

        return rec(tuple(alpha), x)
