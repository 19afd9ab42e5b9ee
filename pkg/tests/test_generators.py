import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynfractal.generators import (QUADRIC, QUADRIC_HORIZONTAL, QUADRIC_VERTICAL, TRIADIC,
                                   CompositeCurve, KochGenerator, SelfSimilarCurve,
                                   StochasticParams, WMParams, curve_from_spec, koch_iterate,
                                   random_walk, white_noise, wm_curve, wm_values)
from dynfractal.geometry import CurveError, arc_length, cut_sample


class TestKochGenerator:
    def test_quadric_properties(self):
        g = KochGenerator()
        assert g.n_segments == 8
        assert g.ratio == pytest.approx(0.25)
        assert g.dimension == pytest.approx(1.5)

    def test_triadic_dimension(self):
        assert KochGenerator(TRIADIC).dimension == pytest.approx(1.26186, abs=1e-5)

    def test_single_segment_motif(self):
        assert KochGenerator(((0, 0), (1, 0))).dimension == 1.0

    @pytest.mark.parametrize("motif", [
        ((0.1, 0), (1, 0)),
        ((0, 0), (0.5, 0.1), (1, 0), (1.2, 0)),
        ((0, 0), (0.3, 0), (1, 0)),
    ])
    def test_rejects_bad_motifs(self, motif):
        with pytest.raises(CurveError):
            KochGenerator(motif)

    def test_rigid_index_range(self):
        with pytest.raises(CurveError):
            KochGenerator(rigid_segments=(8,))

    def test_vertical_and_horizontal_bars(self):
        m = np.asarray(QUADRIC)
        d = np.diff(m, axis=0)
        assert all(d[i, 0] == 0 for i in QUADRIC_VERTICAL)
        assert all(d[i, 1] == 0 for i in QUADRIC_HORIZONTAL)


class TestKochIterate:
    def test_generation_zero(self):
        c = koch_iterate(KochGenerator(), 0, 2.0)
        assert c.vertices.tolist() == [[0, 0], [2, 0]]

    def test_generation_one_is_motif(self):
        c = koch_iterate(KochGenerator(), 1)
        assert np.allclose(c.vertices, QUADRIC)
        assert arc_length(c) == pytest.approx(2.0)

    @pytest.mark.parametrize("k", range(6))
    def test_triadic_length(self, k):
        c = koch_iterate(KochGenerator(TRIADIC), k)
        assert arc_length(c) == pytest.approx((4 / 3) ** k, rel=1e-12)
        assert c.n_segments == 4**k

    def test_self_similar_first_cell(self):
        g = KochGenerator()
        c3, c2 = koch_iterate(g, 3), koch_iterate(g, 2)
        head = c3.vertices[:65]
        assert np.allclose(head, c2.vertices * 0.25, atol=1e-15)

    def test_rigid_flags_propagate(self):
        g = KochGenerator(rigid_segments=QUADRIC_VERTICAL)
        c = koch_iterate(g, 2)
        assert c.flexibility.sum() == 32
        d = np.diff(c.vertices, axis=0)
        # in generation 2 the pattern follows the motif copy, not the world direction
        assert np.array_equal(c.flexibility, np.tile(g.flex_mask, 8))
        assert np.all(np.abs(d[c.flexibility]).max(axis=1) > 0)

    def test_random_orientation_is_seeded(self):
        g = KochGenerator(TRIADIC, random_orientation=True, seed=5)
        a, b = koch_iterate(g, 4), koch_iterate(g, 4)
        assert np.array_equal(a.vertices, b.vertices)
        other = koch_iterate(KochGenerator(TRIADIC, random_orientation=True, seed=6), 4)
        assert not np.array_equal(a.vertices, other.vertices)

    def test_random_orientation_preserves_lengths(self):
        a = koch_iterate(KochGenerator(TRIADIC, random_orientation=True, seed=1), 5)
        b = koch_iterate(KochGenerator(TRIADIC, random_orientation=True, seed=2), 5)
        assert np.array_equal(a.segment_lengths, b.segment_lengths)
        assert np.min(a.vertices[:, 1]) < 0 < np.max(a.vertices[:, 1])

    def test_too_many_segments(self):
        with pytest.raises(ValueError):
            koch_iterate(KochGenerator(), 12)


class TestSelfSimilarCurve:
    @pytest.mark.parametrize("rigid", [(), QUADRIC_VERTICAL])
    @pytest.mark.parametrize("k", [0, 1, 2, 4])
    def test_gram_matches_explicit(self, k, rigid):
        g = KochGenerator(rigid_segments=rigid)
        s, e = SelfSimilarCurve(g, k), koch_iterate(g, k)
        assert np.allclose(s.flex_gram(), e.flex_gram(), rtol=1e-12, atol=1e-15)
        assert s.arc_length() == pytest.approx(arc_length(e), rel=1e-12)
        assert s.min_segment_length() == pytest.approx(e.min_segment_length(), rel=1e-12)

    @pytest.mark.parametrize("gen", [KochGenerator(), KochGenerator(TRIADIC),
                                     KochGenerator(rigid_segments=QUADRIC_HORIZONTAL)])
    @pytest.mark.parametrize("b", [1.0, 0.7, 1 / 3, 0.25, 0.1234, 1e-3])
    def test_cut_matches_explicit(self, gen, b):
        k = 4
        hier = SelfSimilarCurve(gen, k).cut(b)
        expl = cut_sample(koch_iterate(gen, k), b)
        assert isinstance(hier, CompositeCurve)
        assert hier.n_segments == expl.n_segments
        assert np.allclose(hier.end, expl.end, atol=1e-13)
        assert np.allclose(hier.flex_gram(), expl.flex_gram(), rtol=1e-10, atol=1e-15)
        mat = hier.materialize()
        assert np.allclose(mat.vertices, expl.vertices, atol=1e-13)
        assert np.array_equal(mat.flexibility, expl.flexibility)

    def test_generation_twelve_is_cheap(self):
        s = SelfSimilarCurve(KochGenerator(), 12)
        assert s.n_segments == 8**12
        assert s.arc_length() == pytest.approx(2.0**12, rel=1e-12)
        sample = s.cut(3.0**-7)
        assert sample.span == pytest.approx(3.0**-7, rel=1e-9)

    def test_rejects_random(self):
        with pytest.raises(ValueError):
            SelfSimilarCurve(KochGenerator(random_orientation=True), 3)


class TestWM:
    def test_zero_at_origin_and_nonnegative(self):
        t, w = wm_values(WMParams(n_points=512))
        assert w[0] == 0.0
        assert np.all(w >= 0.0)

    def test_curve_scaling(self):
        c = wm_curve(WMParams(n_points=512), base_span=2.0)
        assert c.span == pytest.approx(2.0)
        assert np.max(np.abs(c.vertices[:, 1])) == pytest.approx(2.0)
        assert c.meta["wm_normalization"] > 0

    def test_overflow_terms_dropped_with_warning(self):
        with pytest.warns(UserWarning):
            wm_values(WMParams(b=1e5, D=1.0, m=100, n_points=16))

    def test_truncation_matches_direct_sum(self):
        p = WMParams(b=1.5, D=1.3, m=5, n_points=7, t_range=(0.1, 2.0))
        t, w = wm_values(p)
        direct = sum((1 - np.cos(p.b**n * t)) / p.b ** ((2 - p.D) * n) for n in range(-5, 6))
        assert np.allclose(w, direct, rtol=1e-12)

    @pytest.mark.parametrize("kw", [{"b": 1.0}, {"D": 2.5}, {"m": 0}, {"t_range": (1, 1)}])
    def test_param_validation(self, kw):
        with pytest.raises(ValueError):
            WMParams(**kw)


class TestStochastic:
    def test_random_walk_steps(self):
        c = random_walk(StochasticParams())
        dy = np.diff(c.vertices[:, 1])
        assert np.allclose(np.abs(dy), 0.01)
        assert c.vertices[0].tolist() == [0.0, 0.0]
        assert len(c.vertices) == 2**14

    def test_random_walk_deterministic(self):
        a, b = random_walk(StochasticParams(seed=3)), random_walk(StochasticParams(seed=3))
        assert np.array_equal(a.vertices, b.vertices)

    def test_white_noise_ranges(self):
        c = white_noise(StochasticParams(n_points=4096, seed=2))
        x, y = c.vertices.T
        assert np.all(np.diff(x) > 0)
        assert np.all((y >= 0) & (y <= 1))
        assert len(x) == 4096

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_any_seed_valid(self, seed):
        white_noise(StochasticParams(n_points=64, seed=seed))
        random_walk(StochasticParams(n_points=64, seed=seed))


class TestSpecs:
    def test_koch_spec(self):
        s = curve_from_spec({"kind": "koch", "motif": "quadric", "k": 3})
        assert isinstance(s, SelfSimilarCurve)
        e = curve_from_spec({"kind": "koch", "motif": "quadric", "k": 3}, explicit=True)
        assert e.n_segments == 512

    def test_custom_motif_and_rigid(self):
        spec = {"kind": "koch", "motif": [list(v) for v in TRIADIC], "k": 2,
                "rigid_segments": [0]}
        e = curve_from_spec(spec, explicit=True)
        assert e.flexibility.sum() == 12

    def test_other_kinds(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert curve_from_spec({"kind": "wm", "n_points": 64}).n_segments == 63
        assert curve_from_spec({"kind": "random_walk", "n_points": 10}).n_segments == 9
        assert curve_from_spec({"kind": "white_noise", "n_points": 10}).n_segments == 9

    @pytest.mark.parametrize("spec", [{"kind": "spiral"}, {"kind": "koch", "motif": "nope"},
                                      {"kind": "koch", "k": -1}])
    def test_bad_specs(self, spec):
        with pytest.raises(CurveError):
            curve_from_spec(spec)


def test_generation_length_matches_closed_form():
    g = KochGenerator()
    for k in range(5):
        assert koch_iterate(g, k).arc_length() == pytest.approx(2.0**k, rel=1e-12)
        assert math.isclose(SelfSimilarCurve(g, k).arc_length(), 2.0**k, rel_tol=1e-12)
