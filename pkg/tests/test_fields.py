import math

import numpy as np
import pytest

from panmean import (
    EquationKind,
    ScalarField,
    catalogue,
    field_by_label,
    finite_difference_laplacian,
    residual,
)

PAN = EquationKind.panharmonic(1.0)
MET = EquationKind.metaharmonic(1.0)
HAR = EquationKind.harmonic()


def interior_points(m, n=100, seed=0, scale=0.8):
    rng = np.random.default_rng(seed)
    return scale * (2.0 * rng.random((n, m)) - 1.0)


class TestCatalogue:
    @pytest.mark.parametrize("m", [2, 3])
    def test_expected_labels(self, m):
        labels = {f.label for f in catalogue(m)}
        assert {"const_one", "coord_x1", "harmonic_xy", "harmonic_saddle",
                "exp_mu_x1", "cos_lambda_x1", "sin_lambda_x1",
                "sq_norm", "exp_plus_linear", "exp_2mu_x1"} <= labels
        if m == 2:
            assert {"pan_radial_i0", "meta_radial_j0"} <= labels
        else:
            assert {"pan_radial_sinh", "meta_radial_sinc",
                    "harmonic_newtonian"} <= labels

    def test_high_dimension_has_plane_waves_only(self):
        labels = {f.label for f in catalogue(5)}
        assert "exp_mu_x1" in labels and "cos_lambda_x1" in labels
        assert not any("radial" in lab for lab in labels)
        with pytest.raises(ValueError, match="not available in dimension"):
            field_by_label(5, "pan_radial_i0")

    def test_unknown_label(self):
        with pytest.raises(KeyError):
            field_by_label(2, "no_such_field")

    def test_negative_controls_unlabeled(self):
        for f in catalogue(2):
            if f.label in ("sq_norm", "exp_plus_linear", "exp_2mu_x1"):
                assert f.kind is None

    def test_evaluators_deterministic_and_vectorized(self):
        pts = interior_points(3, 20)
        for f in catalogue(3):
            first, second = f(pts), f(pts)
            assert np.array_equal(first, second)
            assert np.shape(first) == (20,)
            assert np.shape(f(pts[0])) == ()

    @pytest.mark.parametrize("m", [2, 3])
    def test_labeled_fields_satisfy_equation_exact_path(self, m):
        for f in catalogue(m, mu=1.3, lam=0.7):
            if f.kind is None:
                continue
            res = residual(f, f.kind, interior_points(m))
            assert np.max(np.abs(res)) <= 1e-12, f.label

    @pytest.mark.parametrize("m", [2, 3])
    def test_negative_controls_violate_both_kinds(self, m):
        pts = interior_points(m, 200, seed=4)
        for label in ("sq_norm", "exp_plus_linear", "exp_2mu_x1"):
            f = field_by_label(m, label)
            for kind in (PAN, MET):
                assert np.max(np.abs(residual(f, kind, pts))) >= 0.1, (label, kind)

    def test_radial_fields_even_and_finite_at_origin(self):
        for m, labels in ((2, ("pan_radial_i0", "meta_radial_j0")),
                          (3, ("pan_radial_sinh", "meta_radial_sinc"))):
            for label in labels:
                f = field_by_label(m, label)
                x = np.full(m, 0.3)
                assert f(x) == f(-x)
                assert np.isfinite(f(np.zeros(m)))
                assert f(np.zeros(m)) == 1.0  # normalized series at t=0
                # continuity through the origin
                tiny = np.full(m, 1e-9)
                assert f(tiny) == pytest.approx(1.0, abs=1e-12)

    def test_sinh_radial_value(self):
        f = field_by_label(3, "pan_radial_sinh")
        x = np.array([0.6, 0.0, 0.0])
        assert f(x) == pytest.approx(math.sinh(0.6) / 0.6, rel=1e-13)


class TestResidual:
    def test_exact_path_examples(self):
        x = np.array([0.4, -0.2])
        exp_f = field_by_label(2, "exp_mu_x1")
        assert float(residual(exp_f, PAN, x)) == 0.0

        sq = field_by_label(3, "sq_norm")
        assert float(residual(sq, PAN, np.zeros(3))) == pytest.approx(6.0)

        sin_f = field_by_label(3, "sin_lambda_x1")
        assert float(residual(sin_f, MET, np.zeros(3))) == pytest.approx(0.0, abs=1e-12)

    def test_fd_path_truncation_bound(self):
        # a field without an attached Laplacian exercises the stencil;
        # second-order: residual ~ h^2 at h = 1e-3
        bare = ScalarField("bare_exp", 2, lambda x: np.exp(x[..., 0]))
        res = residual(bare, PAN, np.zeros(2), h=1e-3)
        assert abs(float(res)) <= 1e-6

    def test_fd_laplacian_matches_exact(self):
        pts = interior_points(2, 30, seed=9)
        f = field_by_label(2, "exp_mu_x1")
        fd = finite_difference_laplacian(f, pts, h=3e-4)
        assert np.max(np.abs(fd - f.laplacian(pts))) <= 5e-7

    def test_fd_exact_on_quadratics(self):
        sq = field_by_label(2, "sq_norm")
        fd = finite_difference_laplacian(sq, np.array([0.2, 0.3]), h=1e-3)
        assert float(fd) == pytest.approx(4.0, abs=1e-9)

    def test_step_validation(self):
        f = field_by_label(2, "sq_norm")
        with pytest.raises(ValueError):
            finite_difference_laplacian(f, np.zeros(2), h=0.0)


class TestEquationKind:
    def test_constructors_and_coefficients(self):
        assert PAN.zeroth_order_coefficient == -1.0
        assert MET.zeroth_order_coefficient == 1.0
        assert HAR.zeroth_order_coefficient == 0.0
        assert PAN.defect_sign == 1 and MET.defect_sign == -1 and HAR.defect_sign == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            EquationKind.panharmonic(0.0)
        with pytest.raises(ValueError):
            EquationKind.metaharmonic(0.0)
        with pytest.raises(ValueError):
            EquationKind("harmonic", 2.0)
        with pytest.raises(ValueError):
            EquationKind("weird")
