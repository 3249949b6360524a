import math
from fractions import Fraction

import numpy as np
import pytest

from fem_accuracy.basis import BarycentricPolynomial, build_basis
from fem_accuracy.functions import Exp1D, Polynomial1D, SinPiProduct
from fem_accuracy.geometry import reference_simplex, structured_mesh_2d, uniform_mesh_1d
from fem_accuracy.norms import (
    AdmissibilityError,
    AnalyticField,
    DifferenceField,
    PiecewisePolynomialField,
    SobolevIndex,
    derivative_multi_indices,
    interpolation_error,
    norm_record,
    seminorm,
    seminorm_with_estimate,
    sobolev_norm,
)


class TestSobolevIndex:
    def test_validation(self):
        with pytest.raises(ValueError):
            SobolevIndex(-1, 2.0, 1)
        with pytest.raises(ValueError):
            SobolevIndex(0, 0.0, 1)
        with pytest.raises(ValueError):
            SobolevIndex(0, 2.0, 0)

    def test_p_at_most_one_warns(self):
        with pytest.warns(UserWarning):
            SobolevIndex(0, 1.0, 1)
        with pytest.warns(UserWarning):
            SobolevIndex(0, 0.5, 1)

    @pytest.mark.parametrize(
        "m,p,n,k,expected",
        [
            (0, 2.0, 1, 1, True),
            (1, 2.0, 1, 1, True),
            (2, 2.0, 1, 1, False),
            (1, 2.0, 2, 1, False),
            (1, 2.0, 2, 2, True),
            (1, 1.5, 2, 2, True),
            (0, 1.5, 2, 1, True),
            (2, 3.0, 1, 2, True),
            (2, 3.0, 1, 1, False),
            (1, 2.0, 3, 2, True),
            (2, 2.0, 3, 2, False),
        ],
    )
    def test_admissibility_table(self, m, p, n, k, expected):
        assert SobolevIndex(m, p, n).admissible(k) is expected

    def test_require_names_order_inequality(self):
        with pytest.raises(AdmissibilityError) as exc:
            SobolevIndex(2, 2.0, 1).require(1)
        assert exc.value.inequality == "k+1 > l + n/p"
        assert "l=2" in str(exc.value)

    def test_require_passes_when_admissible(self):
        SobolevIndex(1, 2.0, 1).require(1)
        SobolevIndex(1, 2.0, 2).require(2)

    def test_seminorm_conditions_per_order(self):
        # n/p = 1: order l is covered iff k > l.
        idx = SobolevIndex(2, 2.0, 2)
        assert idx.seminorm_conditions(2) == {0: True, 1: True, 2: False}


class TestDerivativeMultiIndices:
    @pytest.mark.parametrize("n,l", [(1, 0), (1, 3), (2, 2), (3, 2), (3, 3)])
    def test_count(self, n, l):
        out = derivative_multi_indices(n, l)
        assert len(out) == math.comb(n + l - 1, l)
        assert all(sum(a) == l for a in out)
        assert len(set(out)) == len(out)

    def test_explicit_second_order_2d(self):
        assert derivative_multi_indices(2, 2) == [(0, 2), (1, 1), (2, 0)]


class TestSeminormValues:
    def test_linear_l2_interval(self):
        # |x|_{0,2} on (0,1): integral of x^2 is 1/3.
        mesh = uniform_mesh_1d(0.0, 1.0, 4)
        got = seminorm(Polynomial1D([0.0, 1.0]), mesh, 0, 2.0)
        assert got == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-13)

    def test_sine_h1_interval(self):
        # |sin(pi.)|_{1,2} on (0,1) = pi/sqrt(2).
        mesh = uniform_mesh_1d(0.0, 1.0, 8)
        got = seminorm(SinPiProduct(), mesh, 1, 2.0)
        assert got == pytest.approx(math.pi / math.sqrt(2.0), rel=1e-12)

    @pytest.mark.parametrize("r,p", [(0, 1.5), (0, 2.0), (1, 2.0), (2, 3.0), (1, 1.5)])
    def test_sine_closed_form_all_orders(self, r, p):
        # Dual route: quadrature against the gamma-function closed form.
        # Noninteger p makes the integrand non-smooth where the derivative
        # vanishes, so the rate is algebraic; 1e-7 is attainable at this
        # degree for every combination.
        mesh = uniform_mesh_1d(0.0, 1.0, 16)
        fn = SinPiProduct()
        got = seminorm(fn, mesh, r, p, degree=20)
        assert got == pytest.approx(fn.seminorm_1d(r, p), rel=1e-7)

    def test_constant_on_triangle_mesh(self):
        mesh = structured_mesh_2d(3)
        got = seminorm(ConstantOneField(), mesh, 0, 3.0)
        assert got == pytest.approx(1.0, rel=1e-12)

    def test_single_simplex_domain(self):
        tri = reference_simplex(2)
        field = PiecewisePolynomialField([BarycentricPolynomial.constant(3, Fraction(2))])
        assert seminorm(field, tri, 0, 2.0) == pytest.approx(2.0 * math.sqrt(0.5), rel=1e-13)

    def test_piecewise_gradient(self):
        # Field equal to x on each element of a 1D mesh has |.|_{1,p} = 1.
        mesh = uniform_mesh_1d(0.0, 1.0, 5)
        polys = []
        for s in mesh.simplices:
            a, b = float(s.vertices[0, 0]), float(s.vertices[1, 0])
            lam0 = BarycentricPolynomial.variable(2, 0)
            lam1 = BarycentricPolynomial.variable(2, 1)
            polys.append(lam0 * a + lam1 * b)
        field = PiecewisePolynomialField(polys)
        assert seminorm(field, mesh, 1, 2.5) == pytest.approx(1.0, rel=1e-12)

    def test_mesh_additivity(self):
        # The p-th power over the mesh is the sum of single-element powers.
        mesh = uniform_mesh_1d(0.0, 1.0, 3)
        fn = Exp1D(0.7)
        p = 2.0
        whole = seminorm(fn, mesh, 0, p, degree=24) ** p
        parts = math.fsum(seminorm(fn, s, 0, p, degree=24) ** p for s in mesh.simplices)
        assert whole == pytest.approx(parts, rel=1e-13)

    def test_domain_type_validation(self):
        with pytest.raises(TypeError):
            seminorm(SinPiProduct(), [0.0, 1.0], 0, 2.0)
        with pytest.raises(TypeError):
            seminorm(lambda x: x, uniform_mesh_1d(0.0, 1.0, 2), 0, 2.0)


class ConstantOneField:
    """Constant-one field on any mesh, for measure checks."""

    def deriv_on_element(self, index, simplex, alpha, bary, phys):
        if sum(alpha) == 0:
            return np.ones(bary.shape[0])
        return np.zeros(bary.shape[0])

    def max_degree(self):
        return 0


class TestSobolevNorm:
    def test_combines_orders(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 4)
        fn = Polynomial1D([0.0, 1.0])
        got = sobolev_norm(fn, mesh, 1, 2.0)
        assert got == pytest.approx(math.sqrt(1.0 / 3.0 + 1.0), rel=1e-13)

    def test_m_zero_matches_seminorm(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 4)
        fn = SinPiProduct()
        assert sobolev_norm(fn, mesh, 0, 2.0, degree=16) == pytest.approx(
            seminorm(fn, mesh, 0, 2.0, degree=16), rel=1e-14
        )


class TestQuadratureEstimate:
    def test_estimate_near_zero_for_polynomials(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 4)
        value, est = seminorm_with_estimate(Polynomial1D([0.0, 0.0, 1.0]), mesh, 0, 2.0)
        assert value == pytest.approx(1.0 / math.sqrt(5.0), rel=1e-13)
        assert est < 1e-14

    def test_estimate_shrinks_with_degree(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 2)
        fn = Exp1D(3.0)
        _, est_low = seminorm_with_estimate(fn, mesh, 0, 2.0, degree=2)
        _, est_high = seminorm_with_estimate(fn, mesh, 0, 2.0, degree=12)
        assert est_high < est_low
        assert est_high < 1e-10

    def test_norm_record_fields(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 2)
        rec = norm_record(SinPiProduct(), mesh, 1, 2.0)
        assert set(rec) == {"l", "p", "value", "quad_error_estimate"}
        assert rec["value"] == pytest.approx(math.pi / math.sqrt(2.0), rel=1e-10)


class TestInterpolationError:
    def test_zero_for_reproduced_polynomial(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 4)
        basis = build_basis(1, 2)
        err = interpolation_error(Polynomial1D([1.0, -2.0, 1.0]), mesh, basis, 0, 2.0)
        assert err < 1e-13

    @pytest.mark.parametrize("k,l", [(1, 0), (1, 1), (2, 0), (2, 1)])
    def test_refinement_rate(self, k, l):
        # Halving h must shrink the error by about 2^(k+1-l).
        fn = SinPiProduct()
        basis = build_basis(1, k)
        coarse = interpolation_error(fn, uniform_mesh_1d(0.0, 1.0, 8), basis, l, 2.0)
        fine = interpolation_error(fn, uniform_mesh_1d(0.0, 1.0, 16), basis, l, 2.0)
        rate = math.log2(coarse / fine)
        assert rate == pytest.approx(k + 1 - l, abs=0.1)

    def test_with_estimate_option(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 8)
        basis = build_basis(1, 1)
        value, est = interpolation_error(SinPiProduct(), mesh, basis, 0, 2.0, with_estimate=True)
        plain = interpolation_error(SinPiProduct(), mesh, basis, 0, 2.0)
        assert est < 1e-8
        assert value == pytest.approx(plain, rel=1e-6)

    def test_difference_field_direct(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 3)
        fn = SinPiProduct()
        zero = DifferenceField(AnalyticField(fn), AnalyticField(fn))
        assert seminorm(zero, mesh, 0, 2.0, degree=8) == 0.0


class TestThreading:
    def test_thread_count_matches_serial_bitwise(self, monkeypatch):
        mesh = uniform_mesh_1d(0.0, 1.0, 16)
        fn = SinPiProduct()
        basis = build_basis(1, 2)

        monkeypatch.setenv("FEM_ACCURACY_THREADS", "1")
        serial = interpolation_error(fn, mesh, basis, 0, 2.0)
        monkeypatch.setenv("FEM_ACCURACY_THREADS", "4")
        threaded = interpolation_error(fn, mesh, basis, 0, 2.0)
        assert serial == threaded

    def test_malformed_env_falls_back(self, monkeypatch):
        monkeypatch.setenv("FEM_ACCURACY_THREADS", "many")
        mesh = uniform_mesh_1d(0.0, 1.0, 2)
        assert seminorm(SinPiProduct(), mesh, 0, 2.0, degree=8) > 0.0
