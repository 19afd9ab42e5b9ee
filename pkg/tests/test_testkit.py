import warnings

import numpy as np
import pytest

from dynfractal.analysis import AnalysisConfig, analyze_sequence, decimation_sequence
from dynfractal.generators import (QUADRIC_VERTICAL, TRIADIC, KochGenerator, SelfSimilarCurve,
                                   WMParams, koch_iterate, make_rng, wm_curve)
from dynfractal.geometry import PlanarCurve, straight
from dynfractal.mechanics import OscillatorConstants, flexibility_matrix
from dynfractal.testkit import (OracleConfig, OracleError, UnsupportedOracleError,
                                box_counting_dimension, compare_compliances, koch_closed_forms,
                                moment_identity_gap, quadrature_compliances, quadrature_matrix,
                                random_polyline)


class TestQuadrature:
    def test_straight(self):
        c = quadrature_compliances(straight(), OscillatorConstants(EI=2.0))
        assert (c.c_M, c.c_H, c.c_V) == pytest.approx((0.5, 0.0, 1 / 6), rel=1e-12, abs=1e-15)

    @pytest.mark.parametrize("curve", [
        koch_iterate(KochGenerator(), 2),
        koch_iterate(KochGenerator(), 3),
        koch_iterate(KochGenerator(rigid_segments=QUADRIC_VERTICAL), 3),
        koch_iterate(KochGenerator(TRIADIC, random_orientation=True, seed=8), 5),
    ], ids=["quadric2", "quadric3", "rigid3", "random_triadic5"])
    def test_koch_families(self, curve):
        assert compare_compliances(curve) <= 1e-10

    def test_hierarchical_curve_is_materialised(self):
        s = SelfSimilarCurve(KochGenerator(), 3)
        assert np.allclose(quadrature_matrix(s), flexibility_matrix(s), rtol=1e-10)

    def test_wm(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            c = wm_curve(WMParams(n_points=1 << 10))
        assert compare_compliances(c) <= 1e-10

    def test_clamp_last(self):
        c = random_polyline(make_rng(3), 30, rigid_fraction=0.2)
        assert compare_compliances(c, OscillatorConstants(clamp_end="last")) <= 1e-10

    def test_all_rigid(self):
        with pytest.raises(OracleError):
            quadrature_matrix(PlanarCurve([[0, 0], [1, 0]], [False]))

    def test_depth_limit(self):
        # a single bisection level cannot certify a tolerance below round-off
        with pytest.raises(OracleError):
            quadrature_matrix(koch_iterate(KochGenerator(), 2), cfg=OracleConfig(rtol=1e-30, max_depth=1))


class TestClosedForms:
    def test_quadric(self):
        cf = koch_closed_forms(KochGenerator(), 3)
        assert cf.arc_length == pytest.approx(8.0)
        assert cf.shortest == pytest.approx(4.0**-3)
        assert cf.dimension == pytest.approx(1.5)
        assert cf.m_slope == pytest.approx(-0.25)

    def test_triadic(self):
        assert koch_closed_forms(TRIADIC, 2).dimension == pytest.approx(1.26186, abs=1e-5)

    def test_single_segment(self):
        cf = koch_closed_forms(((0, 0), (1, 0)), 5)
        assert (cf.dimension, cf.m_slope, cf.arc_length) == (1.0, 0.0, 1.0)

    def test_unequal_segments(self):
        with pytest.raises(UnsupportedOracleError):
            koch_closed_forms(((0, 0), (0.3, 0), (1, 0)), 1)

    def test_moment_identity(self):
        for k in range(6):
            assert moment_identity_gap(koch_iterate(KochGenerator(TRIADIC), k)) <= 1e-12


class TestBoxCounting:
    def test_straight(self):
        assert box_counting_dimension(straight()).dimension == pytest.approx(1.0, abs=0.05)

    def test_quadric(self):
        assert box_counting_dimension(koch_iterate(KochGenerator(), 8)).dimension == pytest.approx(
            1.5, abs=0.1)

    def test_triadic(self):
        assert box_counting_dimension(koch_iterate(KochGenerator(TRIADIC), 8)).dimension == \
            pytest.approx(1.26186, abs=0.1)

    def test_wm_against_dynamical(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            c = wm_curve(WMParams())
            rep = analyze_sequence(decimation_sequence(c, (7, 14)),
                                   AnalysisConfig(model="graph", levels=(7, 14)))
        box = box_counting_dimension(c).dimension
        assert abs(box - rep.covers["M"].estimate) <= 0.15

    def test_reports_offsets(self):
        bc = box_counting_dimension(straight(), OracleConfig(box_offsets=2, box_levels=(1, 4)))
        assert bc.offsets == 2 and len(bc.sizes) == 4

    def test_needs_four_scales(self):
        with pytest.raises(ValueError):
            OracleConfig(box_levels=(1, 3))
