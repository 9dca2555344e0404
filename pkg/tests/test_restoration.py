import numpy as np
import pytest

from defog.restoration import (
    RestoreConfig,
    SceneSpec,
    restore,
    synth_scene,
    synthesize_fog,
)


class TestSynthesizeFog:
    def test_full_transmission_is_identity(self):
        scene = np.random.default_rng(40).random((8, 8, 3))
        out = synthesize_fog(scene, np.ones((8, 8)), np.array([0.9, 0.9, 0.9]))
        np.testing.assert_array_equal(out, scene)

    def test_zero_transmission_is_airlight(self):
        scene = np.random.default_rng(41).random((8, 8, 3))
        a = np.array([0.7, 0.8, 0.9])
        out = synthesize_fog(scene, np.zeros((8, 8)), a)
        np.testing.assert_allclose(out, np.broadcast_to(a, out.shape))

    def test_convex_midpoint(self):
        out = synthesize_fog(np.zeros((4, 4, 3)), np.full((4, 4), 0.5),
                             np.array([1.0, 1.0, 1.0]))
        np.testing.assert_allclose(out, 0.5)

    def test_output_in_range_without_clamping(self):
        rng = np.random.default_rng(42)
        out = synthesize_fog(rng.random((10, 10, 3)), rng.random((10, 10)),
                             rng.random(3))
        assert out.min() >= 0.0 and out.max() <= 1.0


class TestRestore:
    def test_t_one_recovers_input(self):
        img = np.random.default_rng(43).random((8, 8, 3))
        out = restore(img, np.ones((8, 8)), np.array([0.8, 0.8, 0.8]))
        np.testing.assert_allclose(out, img, atol=1e-12)

    def test_image_equals_airlight(self):
        a = np.array([0.6, 0.7, 0.8])
        img = np.broadcast_to(a, (6, 6, 3)).copy()
        out = restore(img, np.full((6, 6), 0.3), a)
        np.testing.assert_allclose(out, img, atol=1e-12)

    def test_round_trip_oracle(self):
        rng = np.random.default_rng(44)
        a = np.array([0.85, 0.9, 0.95])
        scene = rng.random((16, 16, 3))
        t = rng.uniform(0.2, 1.0, (16, 16))
        hazy = synthesize_fog(scene, t, a)
        back = restore(hazy, t, a, clamp=False)
        assert np.abs(back - scene).max() <= 1e-9

    def test_monotone_in_input(self):
        rng = np.random.default_rng(45)
        a = np.array([0.5, 0.5, 0.5])
        t = rng.uniform(0.1, 1.0, (8, 8))
        img1 = rng.random((8, 8, 3)) * 0.5
        img2 = img1 + rng.random((8, 8, 3)) * 0.5
        assert np.all(restore(img1, t, a, clamp=False) <= restore(img2, t, a, clamp=False) + 1e-12)

    def test_t0_floor_applies(self):
        img = np.full((4, 4, 3), 0.2)
        a = np.array([0.9, 0.9, 0.9])
        out_low_t = restore(img, np.zeros((4, 4)), a, RestoreConfig(t0=0.1), clamp=False)
        out_at_t0 = restore(img, np.full((4, 4), 0.1), a, RestoreConfig(t0=0.1), clamp=False)
        np.testing.assert_array_equal(out_low_t, out_at_t0)

    def test_t0_bounds(self):
        with pytest.raises(ValueError):
            RestoreConfig(t0=0.0)


class TestSynthScene:
    def test_beta_zero_means_no_fog(self):
        spec = SceneSpec(height=40, width=50, sky_rows=10, beta=0.0, seed=1)
        hazy, truth, t_true = synth_scene(spec)
        np.testing.assert_array_equal(hazy, truth)
        np.testing.assert_array_equal(t_true, 1.0)

    def test_infinite_sky_depth_is_pure_airlight(self):
        spec = SceneSpec(height=40, width=50, sky_rows=12, beta=0.6, seed=2)
        hazy, _, t_true = synth_scene(spec)
        assert np.all(t_true[:12] == 0.0)
        np.testing.assert_allclose(hazy[:12], np.broadcast_to(spec.airlight, (12, 50, 3)))

    def test_deterministic(self):
        spec = SceneSpec(seed=42, distractor_rect=(60, 40, 20, 20), sky_noise=0.01)
        a = synth_scene(spec)
        b = synth_scene(spec)
        for x, y in zip(a, b):
            assert x.tobytes() == y.tobytes()

    def test_depth_ramp_orientation(self):
        # fog thickens with distance: transmission grows toward the bottom row
        spec = SceneSpec(height=60, width=40, sky_rows=20, beta=0.5, seed=3)
        _, _, t_true = synth_scene(spec)
        ground = t_true[20:, 0]
        assert np.all(np.diff(ground) >= 0)
        assert t_true[59, 0] == pytest.approx(np.exp(-0.5 * 1.0))

    def test_distractor_painted(self):
        spec = SceneSpec(height=50, width=50, sky_rows=10, seed=4,
                         distractor_rect=(30, 20, 5, 7), distractor_color=(1.0, 1.0, 1.0))
        _, truth, _ = synth_scene(spec)
        np.testing.assert_array_equal(truth[30:35, 20:27], 1.0)

    def test_invalid_geometry(self):
        with pytest.raises(ValueError):
            synth_scene(SceneSpec(height=40, width=40, distractor_rect=(35, 35, 10, 10)))
        with pytest.raises(ValueError):
            synth_scene(SceneSpec(height=40, width=40, sky_rows=41))
        with pytest.raises(ValueError):
            synth_scene(SceneSpec(beta=-0.1))

    def test_spec_dict_round_trip(self):
        spec = SceneSpec(height=30, width=20, distractor_rect=(10, 5, 4, 4), seed=9)
        assert SceneSpec.from_dict(spec.to_dict()) == spec
