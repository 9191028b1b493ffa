"""Seeded four-class texture benchmark.

Class 0: low-variance noise around a random mean.
Class 1: vertical stripes, period 4 (two columns bright, two dark).
Class 2: horizontal stripes, period 4.
Class 3: checkerboard, period 2.

Every image gets a random base level, amplitude, phase and additive
Gaussian noise, all drawn from a numpy generator seeded by
``derive_seed(seed, "synthetic", class * per_class + index)``.
"""

from __future__ import annotations

import os

import numpy as np

from .imaging import GrayImage, write_pgm
from .pipeline import DatasetManifest, write_manifest
from .seeding import derive_seed

CLASS_NAMES = ("noise", "vstripes", "hstripes", "checker")
NOISE_SIGMA = 6.0


def texture_image(cls: int, rng: np.random.Generator, size: int = 64) -> GrayImage:
    base = rng.uniform(80.0, 176.0)
    amp = rng.uniform(30.0, 60.0)
    phase = int(rng.integers(0, 4))
    yy, xx = np.mgrid[0:size, 0:size]
    if cls == 0:
        pattern = np.zeros((size, size))
    elif cls == 1:
        pattern = np.where(((xx + phase) // 2) % 2 == 0, amp, -amp)
    elif cls == 2:
        pattern = np.where(((yy + phase) // 2) % 2 == 0, amp, -amp)
    elif cls == 3:
        pattern = np.where((xx + yy + phase) % 2 == 0, amp, -amp)
    else:
        raise ValueError(f"no synthetic class {cls}")
    img = base + pattern + rng.normal(0.0, NOISE_SIGMA, (size, size))
    return GrayImage(np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8))


def generate_benchmark(out_dir, per_class: int = 100, size: int = 64, seed: int = 42) -> str:
    """Write PGM images plus ``manifest.csv`` under ``out_dir``; return the manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    for cls, name in enumerate(CLASS_NAMES):
        class_dir = os.path.join(out_dir, name)
        os.makedirs(class_dir, exist_ok=True)
        for i in range(per_class):
            rng = np.random.default_rng(derive_seed(seed, "synthetic", cls * per_class + i))
            path = os.path.join(class_dir, f"{name}_{i:03d}.pgm")
            write_pgm(texture_image(cls, rng, size), path)
            entries.append((path, name))
    manifest_path = os.path.join(out_dir, "manifest.csv")
    write_manifest(DatasetManifest(entries, CLASS_NAMES), manifest_path)
    return manifest_path
