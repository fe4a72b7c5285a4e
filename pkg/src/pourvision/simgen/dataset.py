"""Sequence generation: simulate -> rasterize -> render -> write to disk.

Layout: <out_dir>/dataset.json plus one seq_%04d directory per sequence
holding frame_%04d.png (8-bit RGB), label_%04d.png (8-bit RGBA with
R=cup*255, G=bowl*255, B=liquid*255, A=visible_class*64) and
manifest.json. Byte-identical regeneration under a fixed seed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .labels import rasterize_labels, visible_liquid_mask
from .render import render_constants, render_frame
from .scenario import Scenario, mix_seed, sample_scenario
from .solver import PourTrajectory, simulate_pour

FORMAT_VERSION = 1


@dataclass
class DatasetConfig:
    n_sequences: int = 10
    negative_fraction: float = 0.2
    height: int = 48
    width: int = 64
    duration_frames: int = 90
    seed: int = 0
    out_dir: str = "dataset"

    def to_dict(self) -> dict:
        return {
            "n_sequences": self.n_sequences,
            "negative_fraction": self.negative_fraction,
            "height": self.height,
            "width": self.width,
            "duration_frames": self.duration_frames,
            "seed": self.seed,
            "out_dir": str(self.out_dir),
        }


@dataclass
class SequenceManifest:
    name: str
    scenario: Scenario
    frame_count: int
    frame_files: list[str]
    label_files: list[str]
    visible_liquid_px: list[int]
    total_liquid_px: list[int]

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "name": self.name,
            "scenario": self.scenario.to_dict(),
            "frame_count": self.frame_count,
            "frames": self.frame_files,
            "labels": self.label_files,
            "visible_liquid_px": self.visible_liquid_px,
            "total_liquid_px": self.total_liquid_px,
            "render_constants": render_constants(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SequenceManifest":
        return cls(name=d["name"], scenario=Scenario.from_dict(d["scenario"]),
                   frame_count=d["frame_count"], frame_files=d["frames"],
                   label_files=d["labels"],
                   visible_liquid_px=d["visible_liquid_px"],
                   total_liquid_px=d["total_liquid_px"])


def image_to_png(img: np.ndarray, path: Path) -> None:
    """(3, H, W) float in [0,1] -> 8-bit RGB file."""
    arr = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr.transpose(1, 2, 0), mode="RGB").save(path, format="PNG")


def label_to_png(label: np.ndarray, path: Path) -> None:
    """(4, H, W) uint8 label raster -> RGBA file mirroring the color code."""
    rgba = np.zeros(label.shape[1:] + (4,), dtype=np.uint8)
    rgba[..., 0] = label[0] * 255
    rgba[..., 1] = label[1] * 255
    rgba[..., 2] = label[2] * 255
    rgba[..., 3] = label[3] * 64
    Image.fromarray(rgba, mode="RGBA").save(path, format="PNG")


def png_to_image(path: Path) -> np.ndarray:
    arr = np.asarray(Image.open(path).convert("RGB"), dtype=np.uint8)
    return arr.transpose(2, 0, 1)


def png_to_label(path: Path) -> np.ndarray:
    arr = np.asarray(Image.open(path), dtype=np.uint8)
    label = np.zeros((4,) + arr.shape[:2], dtype=np.uint8)
    label[0] = arr[..., 0] // 255
    label[1] = arr[..., 1] // 255
    label[2] = arr[..., 2] // 255
    label[3] = arr[..., 3] // 64
    return label


def write_sequence(traj: PourTrajectory, seq_dir: Path, name: str) -> SequenceManifest:
    seq_dir.mkdir(parents=True, exist_ok=True)
    scen = traj.scenario
    frame_files, label_files = [], []
    vis_px, tot_px = [], []
    for state in traj.states:
        label = rasterize_labels(state, traj.geometry)
        img = render_frame(state, traj.geometry, scen.background_id,
                           scen.seed, label=label)
        fname = f"frame_{state.frame_index:04d}.png"
        lname = f"label_{state.frame_index:04d}.png"
        image_to_png(img, seq_dir / fname)
        label_to_png(label, seq_dir / lname)
        frame_files.append(fname)
        label_files.append(lname)
        vis_px.append(int(visible_liquid_mask(label).sum()))
        tot_px.append(int(label[2].sum()))
    manifest = SequenceManifest(name=name, scenario=scen,
                                frame_count=len(traj.states),
                                frame_files=frame_files, label_files=label_files,
                                visible_liquid_px=vis_px, total_liquid_px=tot_px)
    with open(seq_dir / "manifest.json", "w") as fh:
        json.dump(manifest.to_dict(), fh, sort_keys=True, indent=1)
        fh.write("\n")
    return manifest


def generate_dataset(config: DatasetConfig) -> list[SequenceManifest]:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = config.n_sequences
    n_neg = int(round(config.negative_fraction * n))
    placement_rng = np.random.default_rng(mix_seed("negatives", config.seed))
    negative_idx = set(placement_rng.permutation(n)[:n_neg].tolist())
    manifests = []
    for idx in range(n):
        seq_seed = mix_seed("sequence", config.seed, idx)
        rng = np.random.default_rng(seq_seed)
        scen = sample_scenario(rng, negative=idx in negative_idx, seed=seq_seed,
                               duration_frames=config.duration_frames)
        traj = simulate_pour(scen, height=config.height, width=config.width)
        name = f"seq_{idx:04d}"
        manifests.append(write_sequence(traj, out_dir / name, name))
    index = {
        "format_version": FORMAT_VERSION,
        "config": config.to_dict(),
        "sequences": [
            {"name": m.name, "has_liquid": m.scenario.has_liquid}
            for m in manifests
        ],
    }
    with open(out_dir / "dataset.json", "w") as fh:
        json.dump(index, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return manifests


def load_manifests(dataset_dir: str | Path) -> list[SequenceManifest]:
    root = Path(dataset_dir)
    with open(root / "dataset.json") as fh:
        index = json.load(fh)
    manifests = []
    for entry in index["sequences"]:
        with open(root / entry["name"] / "manifest.json") as fh:
            manifests.append(SequenceManifest.from_dict(json.load(fh)))
    return manifests
