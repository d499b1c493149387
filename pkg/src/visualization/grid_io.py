# src/visualization/grid_io.py
"""Grid2D as CSV: '#'-prefixed metadata lines, then R rows of R values
(row i = y1 bin, column j = y2 bin), plus a JSON sidecar with the same metadata."""
import json
import logging
import os
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from src.number_theory.density import Grid2D
from src.utils.errors import DensityError
from src.utils.helpers import dump_json

logger = logging.getLogger(__name__)


def sidecar_path(path: str) -> str:
    return os.path.splitext(path)[0] + ".json"


def write_grid_csv(grid: Grid2D, path: str, extra_metadata: Dict = None) -> Tuple[str, str]:
    """Write the CSV and its JSON sidecar; returns both paths"""
    metadata = {"resolution": grid.resolution, **grid.metadata, **(extra_metadata or {})}
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, "w", newline="") as handle:
        for key in sorted(metadata):
            handle.write(f"# {key}: {json.dumps(metadata[key], sort_keys=True)}\n")
        pd.DataFrame(grid.values).to_csv(handle, header=False, index=False, float_format="%.17g",
                                         lineterminator="\n")

    json_path = sidecar_path(path)
    dump_json(metadata, json_path)
    logger.info(f"Saved {grid.resolution}x{grid.resolution} grid to {path}")
    return path, json_path


def read_grid_csv(path: str) -> Grid2D:
    metadata = {}
    with open(path, "r") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(": ")
            metadata[key] = json.loads(value)
    values = pd.read_csv(path, comment="#", header=None, float_precision="round_trip").to_numpy(dtype=np.float64)
    if values.shape[0] != values.shape[1]:
        raise DensityError(f"{path} holds a {values.shape} table, expected a square grid")
    return Grid2D(values.shape[0], values, metadata)
