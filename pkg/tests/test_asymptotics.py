import math

import numpy as np
import pytest

from panmean import (
    BALL,
    SPHERE,
    STATUS_DEGENERATE,
    STATUS_INCONSISTENT,
    STATUS_OK,
    DefectEstimate,
    EquationKind,
    ball_domain,
    catalogue,
    classify_point,
    defect_sequence,
    extrapolate_limit,
    field_by_label,
    laplacian_estimate,
    mean_coefficient,
    mixed_defect_limit,
    self_referential_check,
    shared_ratio_check,
)
from panmean.asymptotics import InadmissibleRadiusError

RADII = [0.2, 0.1, 0.05, 0.025]


class TestDefectSequence:
    def test_constant_field_zero_defects(self):
        f = field_by_label(2, "const_one")
        est = defect_sequence(f, np.array([0.1, -0.3]), BALL, RADII)
        assert est.defects == (0.0, 0.0, 0.0, 0.0)

    def test_square_norm_ball_defect_constant(self):
        # ball mean of |y-x|^2 is r^2 m/(m+2): defect = m/(m+2) at every r
        for m in (2, 3):
            x = np.full(m, 0.2)
            u = lambda p: np.sum((p - x) ** 2, axis=-1)
            est = defect_sequence(u, x, BALL, RADII)
            assert np.allclose(est.defects, m / (m + 2), atol=1e-12)

    def test_harmonic_sphere_defects_tiny(self):
        f = field_by_label(2, "harmonic_saddle")
        est = defect_sequence(f, np.array([0.3, 0.4]), SPHERE, RADII)
        assert np.max(np.abs(est.defects)) <= 1e-12

    def test_radii_validation(self):
        f = field_by_label(2, "const_one")
        with pytest.raises(ValueError):
            defect_sequence(f, np.zeros(2), BALL, [0.1, 0.2])
        with pytest.raises(ValueError):
            defect_sequence(f, np.zeros(2), BALL, [0.1, -0.05])

    def test_admissibility_enforced(self):
        f = field_by_label(2, "const_one")
        dom = ball_domain(np.zeros(2), 1.0)
        with pytest.raises(InadmissibleRadiusError):
            defect_sequence(f, np.array([0.9, 0.0]), BALL, [0.2, 0.1, 0.05],
                            domain=dom)


class TestExtrapolation:
    def test_exact_on_quadratic_model(self):
        radii = (0.2, 0.1, 0.05)
        L = 0.7321
        est = DefectEstimate(BALL, radii, tuple(L + r * r for r in radii))
        out = extrapolate_limit(est)
        assert out.limit_value == pytest.approx(L, abs=1e-14)
        assert out.convergence_order == pytest.approx(2.0, abs=1e-6)

    def test_constant_defects_saturated(self):
        est = DefectEstimate(BALL, (0.2, 0.1, 0.05), (0.5, 0.5, 0.5))
        out = extrapolate_limit(est)
        assert out.limit_value == 0.5
        assert out.convergence_order == math.inf

    def test_exp_field_limit(self):
        f = field_by_label(2, "exp_mu_x1")
        est = extrapolate_limit(defect_sequence(f, np.zeros(2), BALL, RADII))
        assert est.limit_value == pytest.approx(1 / 8, abs=1e-9)
        assert 1.9 <= est.convergence_order <= 2.1

    def test_insufficient_radii(self):
        est = DefectEstimate(BALL, (0.2, 0.1), (1.0, 1.0))
        with pytest.raises(ValueError, match="at least 3"):
            extrapolate_limit(est)


class TestLaplacianRecovery:
    def test_square_norm(self):
        f = field_by_label(3, "sq_norm")
        got = laplacian_estimate(f, np.zeros(3) + 0.1, BALL, RADII)
        assert got == pytest.approx(6.0, rel=1e-10)

    def test_harmonic_zero(self):
        f = field_by_label(2, "harmonic_saddle")
        got = laplacian_estimate(f, np.array([0.3, 0.4]), SPHERE, RADII)
        assert abs(got) <= 1e-10

    def test_exp_at_shifted_point(self):
        f = field_by_label(2, "exp_mu_x1")
        got = laplacian_estimate(f, np.array([1.0, 0.0]), BALL, RADII)
        assert got == pytest.approx(math.e, abs=1e-6)

    @pytest.mark.parametrize("m", [2, 3])
    def test_both_geometries_match_exact(self, m):
        points = [np.full(m, 0.15), np.linspace(-0.2, 0.25, m)]
        for f in catalogue(m):
            for x in points:
                exact = float(f.laplacian(x))
                for geom in (BALL, SPHERE):
                    got = laplacian_estimate(f, x, geom, RADII)
                    if abs(exact) > 1e-6:
                        assert got == pytest.approx(exact, rel=1e-5), (f.label, geom)
                    else:
                        assert abs(got) <= 1e-8, (f.label, geom)


class TestClassifier:
    def test_panharmonic_parameter_recovery(self):
        f = field_by_label(2, "exp_mu_x1")
        c = classify_point(f, np.zeros(2), RADII)
        assert c.status == STATUS_OK
        assert c.kind.family == "panharmonic"
        assert c.recovered_parameter == pytest.approx(1.0, abs=1e-4)

    def test_metaharmonic_parameter_two(self):
        f = field_by_label(3, "cos_lambda_x1", lam=2.0)
        c = classify_point(f, np.zeros(3), RADII)
        assert c.kind.family == "metaharmonic"
        assert c.recovered_parameter == pytest.approx(2.0, abs=1e-3)

    def test_harmonic_branch(self):
        f = field_by_label(2, "harmonic_xy")
        c = classify_point(f, np.array([0.3, 0.4]), RADII)
        assert c.status == STATUS_OK and c.kind.family == "harmonic"
        assert c.recovered_parameter == 0.0

    def test_degenerate_point(self):
        f = field_by_label(3, "sq_norm")
        c = classify_point(f, np.zeros(3), RADII)
        assert c.status == STATUS_DEGENERATE and c.kind is None
        # raw limits still reported
        assert c.ball_limit == pytest.approx(3 / 5, rel=1e-8)
        assert c.sphere_limit == pytest.approx(1.0, rel=1e-8)

    def test_non_solutions_rejected_at_generic_points(self):
        for label in ("sq_norm", "exp_plus_linear"):
            f = field_by_label(2, label)
            c = classify_point(f, np.array([0.3, 0.4]), RADII)
            assert c.status == STATUS_INCONSISTENT, label
            assert c.kind is None

    def test_rescaled_solution_recovers_its_own_parameter(self):
        # exp(2 mu x1) IS panharmonic with parameter 2 mu; a pointwise
        # classifier must say so rather than reject it
        f = field_by_label(2, "exp_2mu_x1", mu=1.0)
        c = classify_point(f, np.array([0.1, -0.2]), RADII)
        assert c.status == STATUS_OK
        assert c.kind.family == "panharmonic"
        assert c.recovered_parameter == pytest.approx(2.0, abs=1e-4)

    @pytest.mark.parametrize("m", [2, 3])
    def test_sign_discipline_over_catalogue(self, m):
        x = np.full(m, 0.21)
        for f in catalogue(m, mu=1.2, lam=0.8):
            if f.kind is None or f.kind.family == "harmonic":
                continue
            c = classify_point(f, x, RADII)
            assert c.status == STATUS_OK, f.label
            assert c.kind.family == f.kind.family, f.label
            expected = abs(f.kind.parameter)
            assert c.recovered_parameter == pytest.approx(expected, rel=5e-3), f.label

    @pytest.mark.parametrize("m", [2, 3])
    def test_necessity_per_radius_profile(self, m):
        # ball defect of a panharmonic field equals
        # u(x) (a(mu r) - 1)/r^2 at every admissible radius
        x = np.full(m, 0.1)
        for label in ("exp_mu_x1", "pan_radial_i0" if m == 2 else "pan_radial_sinh"):
            f = field_by_label(m, label, mu=1.4)
            ux = float(f(x))
            est = defect_sequence(f, x, BALL, RADII)
            for r, d in zip(est.radii, est.defects):
                predicted = ux * (mean_coefficient("panharmonic", BALL, m, 1.4 * r) - 1.0) / r**2
                assert abs(d - predicted) <= 1e-9, (label, r)


class TestIdentities:
    def test_mixed_limit_harmonic(self):
        f = field_by_label(2, "harmonic_saddle")
        assert abs(mixed_defect_limit(f, np.array([0.3, 0.4]), RADII)) <= 1e-10

    def test_mixed_limit_square_norm(self):
        f = field_by_label(2, "sq_norm")
        got = mixed_defect_limit(f, np.array([0.2, -0.3]), RADII)
        assert got == pytest.approx(-0.5, rel=1e-9)

    def test_mixed_limit_exp_m3(self):
        f = field_by_label(3, "exp_mu_x1")
        got = mixed_defect_limit(f, np.zeros(3), RADII)
        assert got == pytest.approx(-1 / 15, abs=1e-6)

    def test_shared_ratio_solutions(self):
        assert shared_ratio_check(
            field_by_label(2, "exp_mu_x1"), np.zeros(2), RADII
        ) <= 1e-8
        assert shared_ratio_check(
            field_by_label(2, "meta_radial_j0"), np.array([0.2, 0.0]), RADII
        ) <= 1e-8

    def test_shared_ratio_does_not_certify(self):
        # |y|^2 also satisfies the shared ratio: both sides are lap(u)/2
        f = field_by_label(2, "sq_norm")
        assert shared_ratio_check(f, np.array([0.3, 0.1]), RADII) <= 1e-8

    def test_self_referential_panharmonic(self):
        f = field_by_label(2, "exp_mu_x1")
        rb, rs = self_referential_check(
            f, EquationKind.panharmonic(1.0), np.zeros(2), 0.5
        )
        assert rb <= 1e-8 and rs <= 1e-8

    def test_self_referential_radial_m3(self):
        f = field_by_label(3, "pan_radial_sinh")
        x = np.array([0.15, -0.1, 0.2])
        rb, rs = self_referential_check(
            f, EquationKind.panharmonic(1.0), x, 0.3
        )
        assert rb <= 1e-8 and rs <= 1e-8

    def test_self_referential_metaharmonic(self):
        f = field_by_label(2, "cos_lambda_x1", lam=1.5)
        x = np.array([0.2, 0.1])
        rb, rs = self_referential_check(
            f, EquationKind.metaharmonic(1.5), x, 0.2
        )
        assert rb <= 1e-8 and rs <= 1e-8

    def test_self_referential_harmonic_trivial(self):
        f = field_by_label(2, "harmonic_saddle")
        rb, rs = self_referential_check(
            f, EquationKind.harmonic(), np.array([0.3, 0.4]), 0.2
        )
        assert rb <= 1e-10 and rs <= 1e-10
