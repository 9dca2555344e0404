"""Image I/O, sliding-window minimum filtering, dark channel, bicubic resize.

Images are float64 numpy arrays of shape (H, W, 3) with values in [0, 1],
row-major, RGB channel order. Scalar maps (dark channel, transmission) are
(H, W) float64 arrays in [0, 1]. Quantization happens only at encode time.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image as _PILImage
from PIL import UnidentifiedImageError


class DecodeError(ValueError):
    """Raised when an encoded image stream cannot be decoded."""


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG or JPEG bytes into an (H, W, 3) float64 array in [0, 1].

    8-bit samples map to s/255. Grayscale is replicated across the three
    channels; an alpha channel, if present, is dropped. 16-bit and exotic
    modes are rejected.
    """
    try:
        pil = _PILImage.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise DecodeError(f"container parsing failed: {exc}") from exc
    except OSError as exc:
        raise DecodeError(f"stream reading failed: {exc}") from exc
    try:
        pil.load()
    except OSError as exc:
        raise DecodeError(f"pixel data decoding failed: {exc}") from exc

    if pil.mode == "P":
        pil = pil.convert("RGBA" if "transparency" in pil.info else "RGB")
    if pil.mode not in ("RGB", "RGBA", "L", "LA"):
        raise DecodeError(f"unsupported sample format: mode {pil.mode!r}")

    arr = np.asarray(pil, dtype=np.float64) / 255.0
    if pil.mode == "L":
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    elif pil.mode == "LA":
        arr = np.repeat(arr[:, :, 0:1], 3, axis=2)
    elif pil.mode == "RGBA":
        arr = arr[:, :, :3]
    return np.ascontiguousarray(arr)


def encode_image(img: np.ndarray, format: str = "png") -> bytes:
    """Encode an image (H, W, 3) or scalar map (H, W) as PNG bytes.

    Samples are quantized with round-half-up: round(s * 255), clamped to
    [0, 255]. Scalar maps are written as 8-bit grayscale.
    """
    if format.lower() != "png":
        raise ValueError(f"unsupported encode format: {format!r}")
    img = np.asarray(img, dtype=np.float64)
    if img.ndim not in (2, 3) or (img.ndim == 3 and img.shape[2] != 3):
        raise ValueError(f"expected (H, W) or (H, W, 3) array, got shape {img.shape}")
    quant = np.clip(np.floor(img * 255.0 + 0.5), 0, 255).astype(np.uint8)
    pil = _PILImage.fromarray(quant, mode="L" if img.ndim == 2 else "RGB")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def _sliding_min_1d(arr: np.ndarray, radius: int) -> np.ndarray:
    """Windowed minimum along the last axis, window clipped to array bounds.

    van Herk / Gil-Werman: block-wise prefix and suffix minima give each
    window minimum from two lookups, independent of the radius.
    """
    n = arr.shape[-1]
    w = 2 * radius + 1
    if radius <= 0:
        return arr.copy()
    m = n + 2 * radius
    extra = (-m) % w
    padded = np.full(arr.shape[:-1] + (m + extra,), np.inf, dtype=np.float64)
    padded[..., radius:radius + n] = arr
    blocks = padded.reshape(arr.shape[:-1] + (-1, w))
    prefix = np.minimum.accumulate(blocks, axis=-1).reshape(padded.shape)
    suffix = np.minimum.accumulate(blocks[..., ::-1], axis=-1)[..., ::-1].reshape(padded.shape)
    # window [i, i+w) of the padded array: suffix of its first block,
    # prefix of its last
    return np.minimum(suffix[..., :n], prefix[..., w - 1:w - 1 + n])


def min_filter(map2d: np.ndarray, radius: int) -> np.ndarray:
    """Minimum of `map2d` over a (2*radius+1)^2 window centered per pixel.

    The window is clipped at the image borders, so no padding value can
    leak into the result. Separable: rows first, then columns.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    map2d = np.asarray(map2d, dtype=np.float64)
    rows = _sliding_min_1d(map2d, radius)
    return np.ascontiguousarray(_sliding_min_1d(rows.T, radius).T)


def dark_channel(img: np.ndarray, radius: int) -> np.ndarray:
    """Per-pixel channel minimum followed by the windowed minimum filter."""
    img = np.asarray(img, dtype=np.float64)
    return min_filter(img.min(axis=2), radius)


def _catmull_rom(x: np.ndarray) -> np.ndarray:
    # Keys cubic with a = -0.5
    a = -0.5
    x = np.abs(x)
    x2 = x * x
    x3 = x2 * x
    near = (a + 2.0) * x3 - (a + 3.0) * x2 + 1.0
    far = a * (x3 - 5.0 * x2 + 8.0 * x - 4.0)
    return np.where(x <= 1.0, near, np.where(x < 2.0, far, 0.0))


def _resample_axis(arr: np.ndarray, new_n: int, axis: int) -> np.ndarray:
    n = arr.shape[axis]
    pos = (np.arange(new_n) + 0.5) * (n / new_n) - 0.5
    base = np.floor(pos).astype(np.int64)
    taps = base[None, :] + np.arange(-1, 3)[:, None]       # (4, new_n)
    weights = _catmull_rom(pos[None, :] - taps)            # (4, new_n)
    taps = np.clip(taps, 0, n - 1)                         # replicate edges

    moved = np.moveaxis(np.asarray(arr, dtype=np.float64), axis, 0)
    wshape = (new_n,) + (1,) * (moved.ndim - 1)
    out = np.zeros((new_n,) + moved.shape[1:], dtype=np.float64)
    for t in range(4):
        out += weights[t].reshape(wshape) * moved[taps[t]]
    return np.moveaxis(out, 0, axis)


def resize(img: np.ndarray, new_h: int, new_w: int, method: str = "bicubic") -> np.ndarray:
    """Separable bicubic (Catmull-Rom) resampling to (new_h, new_w).

    Accepts (H, W, 3) images and (H, W) scalar maps; output is clamped
    to [0, 1]. Source positions follow the pixel-center convention, so
    resizing to the same size is the identity.
    """
    if method != "bicubic":
        raise ValueError(f"unsupported resize method: {method!r}")
    if new_h < 1 or new_w < 1:
        raise ValueError("target dimensions must be >= 1")
    img = np.asarray(img, dtype=np.float64)
    out = _resample_axis(img, new_h, axis=0)
    out = _resample_axis(out, new_w, axis=1)
    return np.clip(out, 0.0, 1.0)
