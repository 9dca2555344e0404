"""Parameterized distractor scenes shared by the airlight and acceptance tests.

Each scene has a hazy sky band (near-pure airlight, slightly textured so
candidate positions spread over the band), a textured ground plane, and a
bright distractor patch just larger than the dark-channel window, placed
where the fog is moderate. By construction the sky supplies well over 60%
of the airlight candidates while the distractor holds the globally
brightest pixels.
"""

import numpy as np

from defog.restoration import SceneSpec

SIZES = [(200, 300), (220, 280), (240, 320), (256, 256), (200, 320)]
AIRLIGHTS = [(0.85, 0.88, 0.92), (0.90, 0.90, 0.90), (0.82, 0.86, 0.90), (0.88, 0.84, 0.80)]
BETAS = [0.45, 0.55, 0.60, 0.50]
DISTRACTOR_SIDE = 17   # > 15x15 dark-channel window, so its dark channel stays bright


def distractor_scene_spec(i: int) -> SceneSpec:
    """Scene i of the suite (i = 0..19), fully deterministic."""
    h, w = SIZES[i % len(SIZES)]
    a = AIRLIGHTS[i % len(AIRLIGHTS)]
    beta = BETAS[i % len(BETAS)]
    sky_rows = int(h * (0.30 + 0.02 * (i % 4)))

    # place the distractor where transmission is ~0.25..0.54 so it is
    # clearly the brightest object without being fog-free
    t_target = 0.25 + 0.015 * i
    depth_near, depth_far = 1.0, 6.0
    depth_needed = -np.log(t_target) / beta
    frac = (depth_far - depth_needed) / (depth_far - depth_near)
    row = sky_rows + int(frac * (h - sky_rows - 1)) - DISTRACTOR_SIDE // 2
    row = min(max(row, sky_rows + 10), h - DISTRACTOR_SIDE - 2)
    col = 30 + (i * 37) % (w - DISTRACTOR_SIDE - 60)

    sky = tuple(max(0.0, c - 0.25) for c in a)
    return SceneSpec(
        height=h,
        width=w,
        sky_rows=sky_rows,
        sky_color=sky,
        airlight=a,
        beta=beta,
        distractor_rect=(row, col, DISTRACTOR_SIDE, DISTRACTOR_SIDE),
        depth_near=depth_near,
        depth_far=depth_far,
        sky_depth=40.0,
        sky_noise=0.01,
        seed=100 + i,
    )


def in_rect(row, col, rect) -> bool:
    r0, c0, rh, rw = rect
    return r0 <= row < r0 + rh and c0 <= col < c0 + rw
