"""Single-image defogging with cluster-based atmospheric light estimation.

The pipeline inverts the atmosphere scattering model I = J*t + A*(1-t):
the dark channel prior gives a rough transmission t, a matting Laplacian
solve refines it, and the atmospheric light A is located by K-means
clustering of candidate light points rather than by picking the single
brightest pixel.
"""

from .airlight import (
    AirlightEstimate,
    CandidateSet,
    ClusterSet,
    estimate_airlight_baseline,
    estimate_airlight_clustered,
    kmeans_spatial,
    select_candidates,
)
from .image import (
    DecodeError,
    dark_channel,
    decode_image,
    encode_image,
    min_filter,
    resize,
)
from .metrics import (
    DegenerateInputError,
    MetricsReport,
    blind_assessment,
    compute_metrics,
    contrast_enhancement_ratio,
    eme,
    luminance,
)
from .pipeline import DefogResult, PipelineConfig, run_defog
from .restoration import (
    RestoreConfig,
    SceneSpec,
    restore,
    synth_scene,
    synthesize_fog,
)
from .transmission import (
    RefineConfig,
    SolverError,
    SparseSystem,
    build_matting_laplacian,
    build_matting_system,
    refine_transmission,
    rough_transmission,
    solve_refined,
)

__version__ = "0.1.0"

__all__ = [
    "AirlightEstimate",
    "CandidateSet",
    "ClusterSet",
    "DecodeError",
    "DefogResult",
    "DegenerateInputError",
    "MetricsReport",
    "PipelineConfig",
    "RefineConfig",
    "RestoreConfig",
    "SceneSpec",
    "SolverError",
    "SparseSystem",
    "blind_assessment",
    "build_matting_laplacian",
    "build_matting_system",
    "compute_metrics",
    "contrast_enhancement_ratio",
    "dark_channel",
    "decode_image",
    "eme",
    "encode_image",
    "estimate_airlight_baseline",
    "estimate_airlight_clustered",
    "kmeans_spatial",
    "luminance",
    "min_filter",
    "refine_transmission",
    "resize",
    "restore",
    "rough_transmission",
    "run_defog",
    "select_candidates",
    "solve_refined",
    "synth_scene",
    "synthesize_fog",
]
