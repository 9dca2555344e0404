"""Objective defogging quality indicators.

Three no-reference indicators quantify how much a restoration improved
an image: the contrast enhancement ratio (relative gain in luminance
standard deviation), EME (mean over tiles of the log max/min luminance
ratio), and the blind assessment triple (e, r, sigma) built on visible
edges, gradient ratios, and newly saturated pixels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import min_filter

EME_GUARD = 1.0 / 255.0
GRADIENT_GUARD = 1e-9
DEFAULT_EDGE_THRESHOLD = 0.05
DEFAULT_EME_BLOCKS = 8
EDGE_WINDOW_RADIUS = 2   # 5x5 Michelson contrast window


class DegenerateInputError(ValueError):
    """Raised when an indicator is undefined on the given pair.

    Carries whatever parts of the report were still computable (e.g. the
    saturation fraction sigma when no visible edges exist).
    """

    def __init__(self, message: str, sigma: float | None = None, e: float | None = None):
        super().__init__(message)
        self.sigma = sigma
        self.e = e


@dataclass
class MetricsReport:
    contrast_ratio: float
    eme_original: float
    eme_restored: float
    e: float
    r: float
    sigma: float
    params: dict

    def to_dict(self) -> dict:
        return {
            "contrast_ratio": self.contrast_ratio,
            "eme": {"original": self.eme_original, "restored": self.eme_restored},
            "blind": {"e": self.e, "r": self.r, "sigma": self.sigma},
            "params": dict(self.params),
        }


def luminance(img: np.ndarray) -> np.ndarray:
    """Rec.601 luma: Y = 0.299 R + 0.587 G + 0.114 B."""
    img = np.asarray(img, dtype=np.float64)
    return 0.299 * img[:, :, 0] + 0.587 * img[:, :, 1] + 0.114 * img[:, :, 2]


def contrast_enhancement_ratio(original: np.ndarray, restored: np.ndarray) -> float:
    """(C_restored - C_original) / C_original with C the luminance std."""
    if original.shape != restored.shape:
        raise ValueError("image dimensions differ")
    c_o = float(luminance(original).std())
    c_r = float(luminance(restored).std())
    if c_o < 1e-9:
        raise DegenerateInputError("original image has no luminance contrast")
    return (c_r - c_o) / c_o


def eme(img: np.ndarray, blocks_r: int = DEFAULT_EME_BLOCKS,
        blocks_c: int = DEFAULT_EME_BLOCKS) -> float:
    """Mean over tiles of 20*log10((Ymax + g) / (Ymin + g)), g = 1/255.

    The image is partitioned into blocks_r x blocks_c near-equal tiles
    (block counts are clamped to the image dimensions so every tile is
    nonempty). Uniform images score exactly 0.
    """
    if blocks_r < 1 or blocks_c < 1:
        raise ValueError("block counts must be >= 1")
    y = luminance(img)
    h, w = y.shape
    blocks_r = min(blocks_r, h)
    blocks_c = min(blocks_c, w)
    row_edges = [i * h // blocks_r for i in range(blocks_r + 1)]
    col_edges = [j * w // blocks_c for j in range(blocks_c + 1)]
    total = 0.0
    for i in range(blocks_r):
        for j in range(blocks_c):
            tile = y[row_edges[i]:row_edges[i + 1], col_edges[j]:col_edges[j + 1]]
            total += 20.0 * np.log10((tile.max() + EME_GUARD) / (tile.min() + EME_GUARD))
    return total / (blocks_r * blocks_c)


def _michelson_contrast(y: np.ndarray, radius: int = EDGE_WINDOW_RADIUS) -> np.ndarray:
    lo = min_filter(y, radius)
    hi = -min_filter(-y, radius)
    span = hi + lo
    return np.where(span > 0.0, (hi - lo) / np.where(span > 0.0, span, 1.0), 0.0)


def _sobel_magnitude(y: np.ndarray) -> np.ndarray:
    p = np.pad(y, 1, mode="edge")
    gx = (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]) - (
        p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    gy = (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]) - (
        p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    return np.hypot(gx, gy)


def _saturated(img: np.ndarray, black_only: bool) -> np.ndarray:
    black = np.all(img <= 0.0, axis=2)
    if black_only:
        return black
    return black | np.all(img >= 1.0, axis=2)


def blind_assessment(
    original: np.ndarray,
    restored: np.ndarray,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    sigma_black_only: bool = False,
) -> tuple[float, float, float]:
    """No-reference restoration quality triple (e, r, sigma).

    A pixel is a visible edge when its Michelson contrast over a 5x5
    window exceeds `edge_threshold`. e is the relative gain in visible
    edge count; r is the geometric mean, over visible-edge pixels of the
    restored image, of the Sobel gradient ratio restored/original (both
    sides guarded by 1e-9 so identical images give exactly r = 1); sigma
    is the fraction of pixels saturated in the restored image but not in
    the original (black and white by default, black only on request).

    Raises DegenerateInputError when the original has no visible edges
    (e, r undefined) or the restored has none (r undefined); the error
    carries the still-computable parts.
    """
    if original.shape != restored.shape:
        raise ValueError("image dimensions differ")
    y_o = luminance(original)
    y_r = luminance(restored)

    visible_o = _michelson_contrast(y_o) > edge_threshold
    visible_r = _michelson_contrast(y_r) > edge_threshold
    n_o = int(visible_o.sum())
    n_r = int(visible_r.sum())

    newly = _saturated(restored, sigma_black_only) & ~_saturated(original, sigma_black_only)
    sigma = float(newly.mean())

    if n_o == 0:
        raise DegenerateInputError("no visible edges in the original image", sigma=sigma)
    e = (n_r - n_o) / n_o
    if n_r == 0:
        raise DegenerateInputError(
            "no visible edges in the restored image", sigma=sigma, e=e)

    g_o = _sobel_magnitude(y_o)
    g_r = _sobel_magnitude(y_r)
    ratios = (g_r[visible_r] + GRADIENT_GUARD) / (g_o[visible_r] + GRADIENT_GUARD)
    r = float(np.exp(np.mean(np.log(ratios))))
    return float(e), r, sigma


def compute_metrics(
    original: np.ndarray,
    restored: np.ndarray,
    eme_blocks_r: int = DEFAULT_EME_BLOCKS,
    eme_blocks_c: int = DEFAULT_EME_BLOCKS,
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD,
    sigma_black_only: bool = False,
) -> MetricsReport:
    """Assemble the full report for an original/restored pair."""
    e, r, sigma = blind_assessment(original, restored, edge_threshold, sigma_black_only)
    return MetricsReport(
        contrast_ratio=contrast_enhancement_ratio(original, restored),
        eme_original=eme(original, eme_blocks_r, eme_blocks_c),
        eme_restored=eme(restored, eme_blocks_r, eme_blocks_c),
        e=e,
        r=r,
        sigma=sigma,
        params={
            "eme_blocks": [eme_blocks_r, eme_blocks_c],
            "edge_threshold": edge_threshold,
            "sigma_black_only": sigma_black_only,
        },
    )
