"""End-to-end defogging pipeline and its configuration.

Wires the stages together: dark channel -> atmospheric light -> rough
transmission -> matting refinement -> restoration, with per-stage
wall-clock timing. The CLI is a thin wrapper around this module; library
users can call run_defog directly on a decoded image.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import airlight as al
from .image import dark_channel
from .metrics import DEFAULT_EDGE_THRESHOLD, DEFAULT_EME_BLOCKS
from .restoration import RestoreConfig, restore
from .transmission import RefineConfig, refine_transmission, rough_transmission

AIRLIGHT_METHODS = ("clustered", "baseline")


@dataclass
class PipelineConfig:
    window_radius: int = 7
    omega: float = 0.95
    fraction: float = 0.001
    k: int = 5
    seed: int = 0
    t0: float = 0.1
    lam: float = 1e-4
    epsilon: float = 1e-7
    matting_window_radius: int = 1
    refine_mode: str = "downscale_matting"
    max_solve_dim: int = 200
    solver_tol: float = 1e-5
    solver_max_iter: int = 2000
    airlight_method: str = "clustered"
    eme_blocks_r: int = DEFAULT_EME_BLOCKS
    eme_blocks_c: int = DEFAULT_EME_BLOCKS
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD
    sigma_black_only: bool = False

    def __post_init__(self):
        if self.window_radius < 0:
            raise ValueError("window_radius must be >= 0")
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError("fraction must be in (0, 1]")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.airlight_method not in AIRLIGHT_METHODS:
            raise ValueError(f"unknown airlight method: {self.airlight_method!r}")
        # these re-check their own bounds (omega, lambda, epsilon, mode, t0)
        self.refine_config()
        self.restore_config()

    def refine_config(self) -> RefineConfig:
        return RefineConfig(
            omega=self.omega,
            lam=self.lam,
            epsilon=self.epsilon,
            matting_window_radius=self.matting_window_radius,
            max_solve_dim=self.max_solve_dim,
            solver_tol=self.solver_tol,
            solver_max_iter=self.solver_max_iter,
            mode=self.refine_mode,
        )

    def restore_config(self) -> RestoreConfig:
        return RestoreConfig(t0=self.t0)

    def to_dict(self) -> dict:
        return {
            "window_radius": self.window_radius,
            "omega": self.omega,
            "fraction": self.fraction,
            "k": self.k,
            "seed": self.seed,
            "t0": self.t0,
            "lambda": self.lam,
            "epsilon": self.epsilon,
            "matting_window_radius": self.matting_window_radius,
            "refine_mode": self.refine_mode,
            "max_solve_dim": self.max_solve_dim,
            "solver_tol": self.solver_tol,
            "solver_max_iter": self.solver_max_iter,
            "airlight_method": self.airlight_method,
            "eme_blocks_r": self.eme_blocks_r,
            "eme_blocks_c": self.eme_blocks_c,
            "edge_threshold": self.edge_threshold,
            "sigma_black_only": self.sigma_black_only,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        return cls(**d)


@dataclass
class DefogResult:
    restored: np.ndarray
    transmission: np.ndarray
    rough_transmission: np.ndarray
    dark: np.ndarray
    estimate: al.AirlightEstimate
    stage_seconds: dict = field(default_factory=dict)


def estimate_airlight(img: np.ndarray, dark: np.ndarray,
                      cfg: PipelineConfig) -> al.AirlightEstimate:
    if cfg.airlight_method == "clustered":
        return al.estimate_airlight_clustered(img, dark, cfg.fraction, cfg.k, cfg.seed)
    return al.estimate_airlight_baseline(img, dark, cfg.fraction)


def run_defog(img: np.ndarray, cfg: PipelineConfig | None = None) -> DefogResult:
    """Run the full pipeline on a decoded image; timings exclude I/O."""
    cfg = cfg or PipelineConfig()
    stages: dict[str, float] = {}

    tic = time.perf_counter()
    dark = dark_channel(img, cfg.window_radius)
    stages["dark_channel"] = time.perf_counter() - tic

    tic = time.perf_counter()
    estimate = estimate_airlight(img, dark, cfg)
    stages["airlight"] = time.perf_counter() - tic

    tic = time.perf_counter()
    rough = rough_transmission(img, estimate.brightness, cfg.omega, cfg.window_radius)
    stages["rough_transmission"] = time.perf_counter() - tic

    tic = time.perf_counter()
    refined = refine_transmission(img, rough, cfg.refine_config())
    stages["refine"] = time.perf_counter() - tic

    tic = time.perf_counter()
    restored = restore(img, refined, estimate.brightness, cfg.restore_config())
    stages["restore"] = time.perf_counter() - tic

    return DefogResult(
        restored=restored,
        transmission=refined,
        rough_transmission=rough,
        dark=dark,
        estimate=estimate,
        stage_seconds=stages,
    )
