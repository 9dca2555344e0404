"""Scene radiance recovery and the forward scattering model.

The forward model I = J*t + A*(1 - t) doubles as the oracle for testing
the inverse J = (I - A) / max(t, t0) + A, and drives a deterministic
synthetic-scene generator used throughout the test suite: a textured
ground plane under an exponential-in-depth fog, an optional sky band,
and an optional bright distractor patch.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np


@dataclass
class RestoreConfig:
    t0: float = 0.1

    def __post_init__(self):
        if not 0.0 < self.t0 <= 1.0:
            raise ValueError("t0 must be in (0, 1]")


def restore(img: np.ndarray, t: np.ndarray, airlight: np.ndarray,
            cfg: RestoreConfig | None = None, clamp: bool = True) -> np.ndarray:
    """Invert the scattering model: J = (I - A) / max(t, t0) + A per channel."""
    cfg = cfg or RestoreConfig()
    if img.shape[:2] != t.shape:
        raise ValueError("image and transmission dimensions differ")
    a = np.asarray(airlight, dtype=np.float64).reshape(3)
    denom = np.maximum(t, cfg.t0)[:, :, None]
    out = (np.asarray(img, dtype=np.float64) - a) / denom + a
    return np.clip(out, 0.0, 1.0) if clamp else out


def synthesize_fog(scene: np.ndarray, t: np.ndarray, airlight: np.ndarray) -> np.ndarray:
    """Apply the scattering model I = J*t + A*(1 - t) per channel.

    With t in [0, 1] the output is a convex combination and needs no
    clamping.
    """
    if scene.shape[:2] != t.shape:
        raise ValueError("scene and transmission dimensions differ")
    a = np.asarray(airlight, dtype=np.float64).reshape(3)
    tt = np.asarray(t, dtype=np.float64)[:, :, None]
    return np.asarray(scene, dtype=np.float64) * tt + a * (1.0 - tt)


@dataclass
class SceneSpec:
    """Parameters of a synthetic fog scene.

    The ground plane (rows below the sky band) is seeded uniform texture
    with depth ramping linearly from `depth_near` at the bottom row to
    `depth_far` at the sky boundary; sky rows sit at `sky_depth` (infinite
    by default, i.e. pure airlight). Transmission is exp(-beta * depth).
    `distractor_rect` is (row, col, height, width) or None.
    """

    height: int = 120
    width: int = 160
    sky_rows: int = 40
    sky_color: tuple = (0.6, 0.65, 0.7)
    airlight: tuple = (0.85, 0.88, 0.92)
    beta: float = 0.5
    distractor_rect: tuple | None = None
    distractor_color: tuple = (1.0, 1.0, 1.0)
    depth_near: float = 1.0
    depth_far: float = 6.0
    sky_depth: float = float("inf")
    texture_range: tuple = (0.15, 0.65)
    sky_noise: float = 0.0
    seed: int = 0

    def validate(self):
        if self.height < 1 or self.width < 1:
            raise ValueError("scene dimensions must be >= 1")
        if not 0 <= self.sky_rows <= self.height:
            raise ValueError("sky_rows out of bounds")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.distractor_rect is not None:
            r, c, rh, rw = self.distractor_rect
            if rh < 1 or rw < 1 or r < 0 or c < 0 or r + rh > self.height or c + rw > self.width:
                raise ValueError("distractor_rect out of bounds")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sky_depth"] = "inf" if np.isinf(self.sky_depth) else self.sky_depth
        if self.distractor_rect is not None:
            d["distractor_rect"] = list(self.distractor_rect)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SceneSpec":
        d = dict(d)
        if d.get("sky_depth") == "inf":
            d["sky_depth"] = float("inf")
        for key in ("sky_color", "airlight", "distractor_color", "texture_range"):
            if key in d and d[key] is not None:
                d[key] = tuple(d[key])
        if d.get("distractor_rect") is not None:
            d["distractor_rect"] = tuple(d["distractor_rect"])
        return cls(**d)


def synth_scene(spec: SceneSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Generate (hazy, truth, t_true) for a scene spec, deterministically."""
    spec.validate()
    h, w = spec.height, spec.width
    rng = np.random.default_rng(spec.seed)

    lo, hi = spec.texture_range
    truth = rng.uniform(lo, hi, size=(h, w, 3))
    if spec.sky_rows > 0:
        sky = np.asarray(spec.sky_color, dtype=np.float64)
        band = np.broadcast_to(sky, (spec.sky_rows, w, 3)).copy()
        if spec.sky_noise > 0.0:
            band += rng.uniform(-spec.sky_noise, spec.sky_noise, size=band.shape)
        truth[: spec.sky_rows] = np.clip(band, 0.0, 1.0)
    if spec.distractor_rect is not None:
        r, c, rh, rw = spec.distractor_rect
        truth[r:r + rh, c:c + rw] = np.asarray(spec.distractor_color, dtype=np.float64)

    depth = np.empty((h, w), dtype=np.float64)
    depth[: spec.sky_rows] = spec.sky_depth
    ground_rows = h - spec.sky_rows
    if ground_rows > 0:
        if ground_rows > 1:
            ramp = np.linspace(spec.depth_far, spec.depth_near, ground_rows)
        else:
            ramp = np.array([spec.depth_near])
        depth[spec.sky_rows:] = ramp[:, None]

    if spec.beta == 0.0:
        t_true = np.ones((h, w), dtype=np.float64)
    else:
        t_true = np.exp(-spec.beta * depth)

    hazy = synthesize_fog(truth, t_true, np.asarray(spec.airlight, dtype=np.float64))
    return hazy, truth, t_true
