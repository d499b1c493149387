# src/visualization/heatmap.py
"""Heatmaps as binary PGM (P5, grayscale) or PPM (P6, diverging blue-white-red).

Row i of the grid is image row i (top to bottom = increasing y1 bin).
"""
import logging
import os
from typing import Dict, Tuple

import numpy as np

from src.number_theory.density import Grid2D
from src.utils.helpers import dump_json

logger = logging.getLogger(__name__)

MID_GRAY = 128


def grayscale_levels(values: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """Linear map [v_min, v_max] -> [0, 255]; a constant grid maps to mid-gray"""
    v_min, v_max = float(np.min(values)), float(np.max(values))
    if v_max == v_min:
        return np.full(values.shape, MID_GRAY, dtype=np.uint8), v_min, v_max
    scaled = np.rint((values - v_min) / (v_max - v_min) * 255.0)
    return np.clip(scaled, 0, 255).astype(np.uint8), v_min, v_max


def diverging_levels(values: np.ndarray) -> Tuple[np.ndarray, float]:
    """Zero -> white, negative -> blue ramp, positive -> red ramp over +-max|v|"""
    span = float(np.max(np.abs(values))) if values.size else 0.0
    rgb = np.full(values.shape + (3,), 255, dtype=np.uint8)
    if span == 0:
        return rgb, span
    t = np.clip(values / span, -1.0, 1.0)
    fade = np.rint(255.0 * (1.0 - np.abs(t))).astype(np.uint8)
    negative, positive = t < 0, t > 0
    rgb[negative, 0] = fade[negative]
    rgb[negative, 1] = fade[negative]
    rgb[positive, 1] = fade[positive]
    rgb[positive, 2] = fade[positive]
    return rgb, span


def _write(path: str, header: bytes, pixels: np.ndarray):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as handle:
        handle.write(header)
        handle.write(np.ascontiguousarray(pixels).tobytes())


def write_heatmap(grid: Grid2D, path: str, diverging: bool = False) -> Tuple[str, str]:
    """Write a PGM (or PPM when ``diverging``) plus a JSON sidecar with the value range"""
    size = grid.resolution
    if diverging:
        pixels, span = diverging_levels(grid.values)
        _write(path, f"P6\n{size} {size}\n255\n".encode("ascii"), pixels)
        scale: Dict = {"mode": "diverging", "v_min": -span, "v_max": span}
    else:
        pixels, v_min, v_max = grayscale_levels(grid.values)
        _write(path, f"P5\n{size} {size}\n255\n".encode("ascii"), pixels)
        scale = {"mode": "linear", "v_min": v_min, "v_max": v_max}

    json_path = os.path.splitext(path)[0] + ".scale.json"
    dump_json({**scale, "resolution": size, "metadata": grid.metadata}, json_path)
    logger.info(f"Saved heatmap to {path}")
    return path, json_path


def read_pnm(path: str) -> np.ndarray:
    """Read back a P5/P6 file written by ``write_heatmap``"""
    with open(path, "rb") as handle:
        data = handle.read()
    magic, dims, depth, pixels = data.split(b"\n", 3)
    width, height = (int(v) for v in dims.split())
    if magic == b"P5":
        return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width)
    if magic == b"P6":
        return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width, 3)
    raise ValueError(f"unsupported image type {magic!r}")
