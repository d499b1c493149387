import json

import numpy as np
import pytest

from src.number_theory.density import Grid2D, g_grid
from src.utils.errors import DensityError
from src.visualization.grid_io import read_grid_csv, sidecar_path, write_grid_csv
from src.visualization.heatmap import MID_GRAY, diverging_levels, grayscale_levels, read_pnm, write_heatmap


def test_constant_grid_is_mid_gray():
    levels, v_min, v_max = grayscale_levels(np.full((4, 4), 0.25))
    assert np.all(levels == MID_GRAY)
    assert v_min == v_max == 0.25


def test_grayscale_extremes():
    values = np.array([[-2.0, 0.0], [1.0, 2.0]])
    levels, v_min, v_max = grayscale_levels(values)
    assert (v_min, v_max) == (-2.0, 2.0)
    assert levels[0, 0] == 0 and levels[1, 1] == 255
    assert levels[0, 1] == 128


def test_diverging_colours():
    rgb, span = diverging_levels(np.array([[0.0, -3.0], [3.0, 1.5]]))
    assert span == 3.0
    assert tuple(rgb[0, 0]) == (255, 255, 255)
    assert tuple(rgb[0, 1]) == (0, 0, 255)
    assert tuple(rgb[1, 0]) == (255, 0, 0)
    assert tuple(rgb[1, 1]) == (255, 128, 128)


def test_diverging_zero_grid_is_white():
    rgb, span = diverging_levels(np.zeros((3, 3)))
    assert span == 0.0
    assert np.all(rgb == 255)


def test_pgm_file(tmp_path, example_1):
    grid = g_grid(example_1, 16)
    path, scale_path = write_heatmap(grid, str(tmp_path / "g.pgm"))
    with open(path, "rb") as handle:
        assert handle.read().startswith(b"P5\n16 16\n255\n")
    pixels = read_pnm(path)
    assert pixels.shape == (16, 16)
    assert np.array_equal(pixels, grayscale_levels(grid.values)[0])
    with open(scale_path) as handle:
        scale = json.load(handle)
    assert scale["mode"] == "linear"
    assert scale["v_min"] == pytest.approx(grid.values.min())
    assert scale["v_max"] == pytest.approx(grid.values.max())
    assert scale_path.endswith("g.scale.json")


def test_ppm_file(tmp_path, example_2):
    grid = g_grid(example_2, 8)
    path, scale_path = write_heatmap(grid, str(tmp_path / "g.ppm"), diverging=True)
    pixels = read_pnm(path)
    assert pixels.shape == (8, 8, 3)
    with open(scale_path) as handle:
        scale = json.load(handle)
    assert scale["mode"] == "diverging"
    assert scale["v_min"] == -scale["v_max"]


def test_grid_csv(tmp_path):
    values = np.arange(9, dtype=np.float64).reshape(3, 3) / 7.0
    grid = Grid2D(3, values, {"kind": "g_alpha"})
    path, json_path = write_grid_csv(grid, str(tmp_path / "grid.csv"), {"seed": 1})
    assert json_path == sidecar_path(path)

    with open(path) as handle:
        lines = handle.read().splitlines()
    assert lines[:3] == ['# kind: "g_alpha"', "# resolution: 3", "# seed: 1"]
    assert lines[3].split(",")[1] == repr(1 / 7.0)

    loaded = read_grid_csv(path)
    assert np.array_equal(loaded.values, values)
    assert loaded.metadata == {"kind": "g_alpha", "resolution": 3, "seed": 1}
    with open(json_path) as handle:
        assert json.load(handle)["seed"] == 1


def test_non_square_csv_is_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# kind: \"g_alpha\"\n1,2,3\n4,5,6\n")
    with pytest.raises(DensityError):
        read_grid_csv(str(path))
