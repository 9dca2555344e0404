"""Dark channel of a foggy scene
================================

The dark channel takes, at every pixel, the minimum over the color
channels and over a square window around the pixel. Fog-free outdoor
scenes are full of dark-in-some-channel pixels, so their dark channel
sits near zero; fog lifts it by mixing in the bright airlight. That
makes the dark channel both a fog-density probe and the source of
atmospheric-light candidates.
"""

from pathlib import Path

import numpy as np

from defog import SceneSpec, dark_channel, encode_image, select_candidates, synth_scene

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# a synthetic scene: textured ground, heavy fog toward the horizon,
# a sky band of (almost) pure airlight at the top
spec = SceneSpec(height=160, width=240, sky_rows=48, beta=0.55,
                 sky_depth=30.0, sky_noise=0.01, seed=1)
hazy, truth, t_true = synth_scene(spec)

# the dark channel of the clear scene is low; fog raises it with depth
dark_clear = dark_channel(truth, 7)
dark_hazy = dark_channel(hazy, 7)
print(f"clear scene dark channel: mean {dark_clear.mean():.3f}")
print(f"hazy  scene dark channel: mean {dark_hazy.mean():.3f}")

# rows near the top (deep fog) approach the airlight's darkest channel
for row in (150, 100, 60, 10):
    print(f"  row {row:3d}: dark {dark_hazy[row].mean():.3f}   true t {t_true[row, 0]:.3f}")

# the brightest 0.1% of the dark channel are the candidate light points;
# here they all sit in the sky band, where the fog is total
cand = select_candidates(dark_hazy, 0.001)
print(f"candidates: {len(cand.points)}, rows {cand.points[:, 0].min()}"
      f"..{cand.points[:, 0].max()} (sky band is 0..{spec.sky_rows - 1})")

(out / "01_hazy.png").write_bytes(encode_image(hazy))
(out / "01_dark_channel.png").write_bytes(encode_image(dark_hazy))
print(f"wrote {out}/01_hazy.png and 01_dark_channel.png")
