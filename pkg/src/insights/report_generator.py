# src/insights/report_generator.py
import logging
import os
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from src.number_theory.density import Grid2D
from src.number_theory.diophantine import ContinuedFraction, ConvergentCheck
from src.number_theory.landau import LandauReport
from src.number_theory.relations import RelationSystem
from src.utils.helpers import dump_json, ensure_directory, format_table
from src.visualization.grid_io import write_grid_csv
from src.visualization.heatmap import write_heatmap

logger = logging.getLogger(__name__)


class ReportGenerator:
    """Writes command results to the output directory and renders terminal tables"""

    def __init__(self, config: Dict, out_dir: Optional[str] = None, formats: Optional[Sequence[str]] = None):
        self.config = config
        self.out_dir = out_dir or config['data']['output_dir']
        self.formats = list(formats or config['output']['format'])
        self.written: List[str] = []

    def _path(self, filename: str) -> str:
        ensure_directory(self.out_dir)
        return os.path.join(self.out_dir, filename)

    def write_grid(self, grid: Grid2D, stem: str, diverging: Optional[bool] = None,
                   extra_metadata: Optional[Dict] = None) -> List[str]:
        """Grid as CSV (+ JSON sidecar) and/or heatmap, per the selected formats"""
        if diverging is None:
            diverging = self.config['output']['diverging']
        paths = []
        if 'csv' in self.formats:
            paths.extend(write_grid_csv(grid, self._path(f"{stem}.csv"), extra_metadata))
        elif 'json' in self.formats:
            payload = {"resolution": grid.resolution, "metadata": {**grid.metadata, **(extra_metadata or {})},
                       "values": grid.values.tolist()}
            paths.append(dump_json(payload, self._path(f"{stem}.json")))
        if 'pgm' in self.formats:
            suffix = "ppm" if diverging else "pgm"
            paths.extend(write_heatmap(grid, self._path(f"{stem}.{suffix}"), diverging))
        self.written.extend(paths)
        return paths

    def write_report(self, payload: Dict, stem: str) -> str:
        path = dump_json(payload, self._path(f"{stem}.json"))
        self.written.append(path)
        logger.info(f"Report written to {path}")
        return path

    def write_table(self, df: pd.DataFrame, stem: str) -> Optional[str]:
        if 'csv' not in self.formats:
            return None
        path = self._path(f"{stem}.csv")
        df.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
        self.written.append(path)
        return path

    # Terminal tables

    @staticmethod
    def landau_table(report: LandauReport) -> pd.DataFrame:
        rows = [
            ("x", report.x), ("T", report.T), ("n_obs", report.n_obs), ("n_x", report.n_x),
            ("Lambda(n_x)", report.lambda_nx),
            ("sum.re", report.sum.real), ("sum.im", report.sum.imag),
            ("main.re", report.main_term.real), ("main.im", report.main_term.imag),
            ("residual.re", report.residual.real), ("residual.im", report.residual.imag),
            ("x log^2(2xT)", report.error_scale_x), ("log(2T)/log x", report.error_scale_log),
        ]
        return pd.DataFrame(rows, columns=["quantity", "value"])

    @staticmethod
    def continued_fraction_table(cf: ContinuedFraction, checks: Iterable[ConvergentCheck] = ()) -> pd.DataFrame:
        by_index = {check.index: check for check in checks}
        rows = []
        for n, (a, (p, q)) in enumerate(zip(cf.partial_quotients, cf.convergents)):
            check = by_index.get(n)
            rows.append({
                "n": n, "a_n": str(a), "p_n": str(p), "q_n": str(q),
                "lower_ok": None if check is None else check.lower_ok,
                "upper_ok": None if check is None else check.upper_ok,
                "flag": "" if check is None else check.flag,
            })
        return pd.DataFrame(rows, columns=["n", "a_n", "p_n", "q_n", "lower_ok", "upper_ok", "flag"])

    @staticmethod
    def relation_table(system: RelationSystem) -> pd.DataFrame:
        rows = [{"b": " ".join(str(v) for v in row.b), "a": row.a, "q": row.q, "p": row.p}
                for row in system.rows]
        return pd.DataFrame(rows, columns=["b", "a", "q", "p"])

    @staticmethod
    def print_table(df: pd.DataFrame, title: Optional[str] = None):
        if title:
            print(title)
        print(format_table(df))
