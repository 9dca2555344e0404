import numpy as np
import pytest

from defog.restoration import synthesize_fog
from defog.transmission import (
    RefineConfig,
    SolverError,
    build_matting_laplacian,
    build_matting_system,
    refine_transmission,
    rough_transmission,
    solve_refined,
)


def naive_rough_transmission(img, airlight, omega, radius):
    """Triple-loop evaluation of the windowed-minimum transmission."""
    a = np.maximum(np.asarray(airlight, dtype=float), 0.05)
    h, w = img.shape[:2]
    out = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            window = img[max(0, i - radius):i + radius + 1,
                         max(0, j - radius):j + radius + 1, :]
            out[i, j] = 1.0 - omega * (window / a).min()
    return np.clip(out, 0.0, 1.0)


def naive_matting_laplacian(img, eps=1e-7):
    """Per-window accumulation of the matting Laplacian, dense and slow."""
    h, w = img.shape[:2]
    n = h * w
    colors = img.reshape(n, 3)
    L = np.zeros((n, n))
    for r in range(h - 2):
        for c in range(w - 2):
            idx = [(r + dr) * w + (c + dc) for dr in range(3) for dc in range(3)]
            win = colors[idx]
            mu = win.mean(axis=0)
            diff = win - mu
            cov = diff.T @ diff / 9.0
            inv = np.linalg.inv(cov + (eps / 9.0) * np.eye(3))
            for a_ in range(9):
                for b_ in range(9):
                    val = (1.0 + diff[a_] @ inv @ diff[b_]) / 9.0
                    L[idx[a_], idx[b_]] += (1.0 if a_ == b_ else 0.0) - val
    return L


class TestRoughTransmission:
    def test_image_equals_airlight(self):
        a = np.array([0.8, 0.85, 0.9])
        img = np.broadcast_to(a, (8, 8, 3)).copy()
        t = rough_transmission(img, a, omega=0.95, radius=2)
        np.testing.assert_allclose(t, 0.05, atol=1e-12)

    def test_black_image(self):
        t = rough_transmission(np.zeros((6, 6, 3)), np.array([0.9, 0.9, 0.9]),
                               omega=0.95, radius=2)
        np.testing.assert_array_equal(t, 1.0)

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(20)
        for _ in range(10):
            img = rng.random((11, 13, 3))
            a = rng.uniform(0.3, 1.0, 3)
            got = rough_transmission(img, a, 0.95, 3)
            expected = naive_rough_transmission(img, a, 0.95, 3)
            np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_airlight_floor_guard(self):
        # near-zero airlight components must not blow up the division
        img = np.random.default_rng(21).random((6, 6, 3))
        t = rough_transmission(img, np.array([1e-9, 0.5, 0.5]), 0.95, 1)
        assert np.all((t >= 0.0) & (t <= 1.0))

    def test_monotone_in_fog_density(self):
        # scene textured below the airlight: thicker fog never raises t-rough
        rng = np.random.default_rng(22)
        scene = rng.uniform(0.1, 0.6, (16, 16, 3))
        a = np.array([0.85, 0.88, 0.9])
        t_thin = rng.uniform(0.4, 1.0, (16, 16))
        t_thick = t_thin * 0.6
        rough_thin = rough_transmission(synthesize_fog(scene, t_thin, a), a, 0.95, 2)
        rough_thick = rough_transmission(synthesize_fog(scene, t_thick, a), a, 0.95, 2)
        assert np.all(rough_thick <= rough_thin + 1e-12)


class TestMattingLaplacian:
    def test_rows_sum_to_zero(self):
        img = np.random.default_rng(23).random((7, 9, 3))
        L = build_matting_laplacian(img)
        assert np.abs(np.asarray(L.sum(axis=1))).max() <= 1e-8

    def test_symmetric(self):
        img = np.random.default_rng(24).random((6, 6, 3))
        L = build_matting_laplacian(img)
        assert np.abs((L - L.T).toarray()).max() <= 1e-10

    def test_single_window_constant_image(self):
        L = build_matting_laplacian(np.full((3, 3, 3), 0.5)).toarray()
        assert np.abs(L @ np.ones(9)).max() <= 1e-12
        np.testing.assert_allclose(L, L.T, atol=1e-14)
        # constant window: quadratic term vanishes, entries are I - 1/9
        np.testing.assert_allclose(L, np.eye(9) - 1.0 / 9.0, atol=1e-6)

    def test_matches_naive_assembly(self):
        img = np.random.default_rng(25).random((8, 8, 3))
        got = build_matting_laplacian(img).toarray()
        np.testing.assert_allclose(got, naive_matting_laplacian(img), atol=1e-10)

    def test_positive_definite_with_regularizer(self):
        rng = np.random.default_rng(26)
        img = rng.random((6, 7, 3))
        system = build_matting_system(img, rng.random((6, 7)), RefineConfig())
        for _ in range(5):
            x = rng.standard_normal(system.n)
            assert x @ (system.matrix @ x) > 0.0

    def test_too_small_image_gives_identity_system(self):
        # no full window fits: L = 0, the solve returns the rough map
        img = np.random.default_rng(27).random((2, 2, 3))
        rough = np.random.default_rng(28).random((2, 2))
        system = build_matting_system(img, rough, RefineConfig())
        out = solve_refined(system, RefineConfig())
        np.testing.assert_allclose(out, np.clip(rough, 0, 1), atol=1e-10)


class TestSolve:
    def test_large_lambda_pins_to_rough(self):
        rng = np.random.default_rng(29)
        img = rng.random((10, 10, 3))
        rough = rng.random((10, 10))
        cfg = RefineConfig(lam=1e3)
        t = solve_refined(build_matting_system(img, rough, cfg), cfg)
        assert np.abs(t - np.clip(rough, 0, 1)).max() <= 0.01

    def test_constant_system(self):
        cfg = RefineConfig()
        img = np.full((9, 9, 3), 0.4)
        rough = np.full((9, 9), 0.37)
        t = solve_refined(build_matting_system(img, rough, cfg), cfg)
        np.testing.assert_allclose(t, 0.37, atol=1e-6)

    def test_matches_dense_solve(self):
        rng = np.random.default_rng(30)
        cfg = RefineConfig(solver_tol=1e-9)
        for _ in range(3):
            img = rng.random((16, 16, 3))
            rough = rng.random((16, 16))
            system = build_matting_system(img, rough, cfg)
            got = solve_refined(system, cfg, clamp=False)
            dense = np.linalg.solve(system.matrix.toarray(), system.rhs).reshape(16, 16)
            assert np.abs(got - dense).max() <= 1e-6

    def test_residual_bound_on_return(self):
        rng = np.random.default_rng(31)
        cfg = RefineConfig()
        img = rng.random((12, 14, 3))
        rough = rng.random((12, 14))
        system = build_matting_system(img, rough, cfg)
        x = solve_refined(system, cfg, clamp=False)
        rel = np.linalg.norm(system.rhs - system.matrix @ x.ravel()) / np.linalg.norm(system.rhs)
        assert rel <= cfg.solver_tol

    def test_non_convergence_raises_with_residual(self):
        rng = np.random.default_rng(32)
        cfg = RefineConfig(solver_max_iter=1, solver_tol=1e-14)
        system = build_matting_system(rng.random((10, 10, 3)), rng.random((10, 10)), cfg)
        with pytest.raises(SolverError) as exc:
            solve_refined(system, cfg)
        assert exc.value.residual > 0.0

    def test_zero_rhs(self):
        cfg = RefineConfig()
        system = build_matting_system(np.random.default_rng(33).random((5, 5, 3)),
                                      np.zeros((5, 5)), cfg)
        np.testing.assert_array_equal(solve_refined(system, cfg), 0.0)


class TestRefine:
    def test_mode_none_is_identity(self):
        rng = np.random.default_rng(34)
        img = rng.random((10, 10, 3))
        rough = rng.random((10, 10))
        out = refine_transmission(img, rough, RefineConfig(mode="none"))
        np.testing.assert_array_equal(out, rough)

    def test_small_image_downscale_equals_matting(self):
        rng = np.random.default_rng(35)
        img = rng.random((20, 24, 3))
        rough = rng.random((20, 24))
        full = refine_transmission(img, rough, RefineConfig(mode="matting"))
        ds = refine_transmission(img, rough, RefineConfig(mode="downscale_matting",
                                                          max_solve_dim=64))
        np.testing.assert_allclose(ds, full, atol=1e-6)

    def test_downscale_path_resamples(self):
        rng = np.random.default_rng(36)
        img = rng.random((40, 60, 3))
        rough = rng.random((40, 60))
        out = refine_transmission(img, rough, RefineConfig(mode="downscale_matting",
                                                           max_solve_dim=24))
        assert out.shape == (40, 60)
        assert np.all((out >= 0.0) & (out <= 1.0))

    def test_output_in_unit_interval(self):
        rng = np.random.default_rng(37)
        img = rng.random((15, 15, 3))
        rough = rng.random((15, 15))
        out = refine_transmission(img, rough, RefineConfig(mode="matting"))
        assert np.all((out >= 0.0) & (out <= 1.0))


class TestRefineConfig:
    def test_omega_bounds(self):
        with pytest.raises(ValueError):
            RefineConfig(omega=0.0)
        with pytest.raises(ValueError):
            RefineConfig(omega=1.5)

    def test_positive_lambda_epsilon(self):
        with pytest.raises(ValueError):
            RefineConfig(lam=0.0)
        with pytest.raises(ValueError):
            RefineConfig(epsilon=-1.0)

    def test_mode_checked(self):
        with pytest.raises(ValueError):
            RefineConfig(mode="guided")
