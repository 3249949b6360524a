import json
import math

import numpy as np
import pytest
from hypothesis import given, seed, strategies as st

from fem_accuracy.geometry import (
    DegenerateSimplexError,
    Simplex,
    SimplexMesh,
    reference_simplex,
    structured_mesh_2d,
    uniform_mesh_1d,
)

COORD_TOL = 1e-12


class TestSimplex:
    def test_reference_interval(self):
        s = reference_simplex(1)
        assert s.n == 1
        assert s.measure == pytest.approx(1.0, abs=COORD_TOL)
        assert s.diameter == pytest.approx(1.0, abs=COORD_TOL)

    def test_reference_triangle(self):
        s = reference_simplex(2)
        assert s.measure == pytest.approx(0.5, abs=COORD_TOL)
        assert s.diameter == pytest.approx(math.sqrt(2.0), abs=COORD_TOL)

    def test_barycentric_vertices_and_centroid(self):
        s = Simplex([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
        for q in range(3):
            lam = s.barycentric(s.vertices[q])
            expected = np.zeros(3)
            expected[q] = 1.0
            assert np.allclose(lam, expected, atol=COORD_TOL)
        centroid = s.vertices.mean(axis=0)
        assert np.allclose(s.barycentric(centroid), [1 / 3] * 3, atol=COORD_TOL)

    def test_barycentric_physical_round_trip(self):
        s = Simplex([[0.1, -0.3], [1.5, 0.2], [0.4, 2.0]])
        lam = np.array([[0.2, 0.5, 0.3], [1.0, 0.0, 0.0], [0.1, 0.1, 0.8]])
        back = s.barycentric(s.to_physical(lam))
        assert np.allclose(back, lam, atol=1e-12)

    def test_gradients_rows_sum_to_zero(self):
        s = Simplex([[0.0, 0.0], [1.3, 0.1], [0.2, 0.9]])
        g = s.barycentric_gradients()
        assert np.allclose(g.sum(axis=0), 0.0, atol=1e-12)

    def test_gradient_scaling_interval(self):
        # lambda varies by one across the element, so the gradient is 1/h.
        for h in (0.25, 1.0, 3.0):
            s = Simplex([[0.0], [h]])
            assert s.gradient_max == pytest.approx(1.0 / h, rel=1e-13)

    def test_gradient_scaling_triangle(self):
        base = Simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        scaled = Simplex([[0.0, 0.0], [0.1, 0.0], [0.0, 0.1]])
        assert scaled.gradient_max == pytest.approx(10.0 * base.gradient_max, rel=1e-12)

    def test_inscribed_diameter_interval(self):
        assert Simplex([[1.0], [3.5]]).inscribed_diameter() == pytest.approx(2.5, rel=1e-13)

    def test_inscribed_diameter_right_triangle(self):
        s = Simplex([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert s.inscribed_diameter() == pytest.approx(2.0 - math.sqrt(2.0), rel=1e-12)

    def test_inscribed_diameter_equilateral(self):
        s = Simplex([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]])
        assert s.inscribed_diameter() == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)

    def test_inscribed_diameter_tetrahedron(self):
        # Regular tetrahedron with edge a: inradius a / (2 sqrt(6)).
        a = 1.0
        s = Simplex(
            [
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.5, math.sqrt(3.0) / 2.0, 0.0],
                [0.5, math.sqrt(3.0) / 6.0, math.sqrt(6.0) / 3.0],
            ]
        )
        assert s.inscribed_diameter() == pytest.approx(a / math.sqrt(6.0), rel=1e-10)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateSimplexError):
            Simplex([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        with pytest.raises(DegenerateSimplexError):
            Simplex([[0.5], [0.5]])

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            Simplex([[0.0, 0.0], [1.0, 0.0]])


@seed(20240817)
@given(
    st.lists(st.floats(-5, 5), min_size=6, max_size=6),
    st.lists(st.floats(0.05, 1.0), min_size=3, max_size=3),
)
def test_barycentric_partition_property(coords, raw):
    verts = np.array(coords).reshape(3, 2)
    try:
        s = Simplex(verts)
    except DegenerateSimplexError:
        return
    lam = np.array(raw) / sum(raw)
    x = s.to_physical(lam)
    lam_back = s.barycentric(x)
    assert abs(lam_back.sum() - 1.0) < 1e-9
    assert np.allclose(lam_back, lam, atol=1e-7 * max(1.0, s.gradient_max))


class TestMesh:
    def test_uniform_1d(self):
        mesh = uniform_mesh_1d(0.0, 1.0, 7)
        assert len(mesh) == 7
        assert mesh.h == pytest.approx(1.0 / 7.0, rel=1e-13)
        assert mesh.sigma == pytest.approx(1.0, rel=1e-13)
        assert mesh.check_cover(tol=1e-12)

    def test_uniform_1d_validation(self):
        with pytest.raises(ValueError):
            uniform_mesh_1d(0.0, 1.0, 0)
        with pytest.raises(ValueError):
            uniform_mesh_1d(1.0, 0.0, 4)

    @pytest.mark.parametrize("per_side", [1, 2, 4])
    def test_structured_2d(self, per_side):
        mesh = structured_mesh_2d(per_side)
        assert len(mesh) == 2 * per_side**2
        assert mesh.check_cover(tol=1e-12)
        assert mesh.h == pytest.approx(math.sqrt(2.0) / per_side, rel=1e-12)
        # Right isoceles triangles have h/rho = 1 + sqrt(2) at any scale.
        assert mesh.sigma == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-12)

    def test_mesh_measure_additivity(self):
        mesh = structured_mesh_2d(3)
        assert mesh.measure() == pytest.approx(1.0, abs=1e-13)

    def test_gradient_max_tracks_refinement(self):
        coarse = uniform_mesh_1d(0.0, 1.0, 4)
        fine = uniform_mesh_1d(0.0, 1.0, 16)
        assert fine.gradient_max == pytest.approx(4.0 * coarse.gradient_max, rel=1e-12)

    def test_json_round_trip(self):
        mesh = structured_mesh_2d(2)
        text = mesh.to_json()
        back = SimplexMesh.from_json(text)
        assert back.n == mesh.n
        assert back.h == pytest.approx(mesh.h, rel=1e-15)
        assert back.sigma == pytest.approx(mesh.sigma, rel=1e-15)
        assert back.measure() == pytest.approx(mesh.measure(), rel=1e-15)
        payload = json.loads(text)
        assert payload["n"] == 2
        assert len(payload["simplices"]) == 8

    def test_json_round_trip_without_table(self):
        mesh = SimplexMesh([Simplex([[0.0], [0.5]]), Simplex([[0.5], [1.0]])], domain_measure=1.0)
        back = SimplexMesh.from_json(mesh.to_json())
        assert back.measure() == pytest.approx(1.0, abs=1e-15)

    def test_mixed_dimension_rejected(self):
        with pytest.raises(ValueError):
            SimplexMesh([Simplex([[0.0], [1.0]]), reference_simplex(2)])
