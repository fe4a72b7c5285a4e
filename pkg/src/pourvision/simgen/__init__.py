"""Deterministic 2-D pouring simulator, labeler and renderer."""
from .dataset import (DatasetConfig, SequenceManifest, generate_dataset,
                      image_to_png, label_to_png, load_manifests, png_to_image,
                      png_to_label, write_sequence)
from .labels import (liquid_mask, make_segmented_input, polygon_mask,
                     rasterize_labels, total_liquid_mask, visible_liquid_mask)
from .render import background_pattern, render_constants, render_frame
from .scenario import (BOWL_SHAPES, CUP_SHAPES, FILL_FRACTIONS, POUR_PROFILES,
                       Scenario, SceneGeometry, build_geometry, mix_seed,
                       sample_scenario, tilt_at, validate_profile)
from .solver import PourTrajectory, SimState, simulate_pour

__all__ = [
    "BOWL_SHAPES", "CUP_SHAPES", "DatasetConfig", "FILL_FRACTIONS",
    "POUR_PROFILES", "PourTrajectory", "Scenario", "SceneGeometry",
    "SequenceManifest", "SimState", "background_pattern", "build_geometry",
    "generate_dataset", "image_to_png", "label_to_png", "liquid_mask",
    "load_manifests", "make_segmented_input", "mix_seed", "png_to_image",
    "png_to_label", "polygon_mask", "rasterize_labels", "render_constants",
    "render_frame", "sample_scenario", "simulate_pour", "tilt_at",
    "total_liquid_mask", "validate_profile", "visible_liquid_mask",
    "write_sequence",
]
