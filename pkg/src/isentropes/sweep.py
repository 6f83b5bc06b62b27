"""Entropy over parameter grids.

Three grids are supported: the quartic square (lambda, mu) in [0, 4]^2 and
the (alpha, beta) rectangles of the positive- and negative-shape cubics.
Cubic cells outside the admissible region are emitted as ``SKIPPED``; each
valid cubic cell also carries its critical values (p1, p2), the natural
plotting coordinates for the cubic family.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from isentropes import __version__
from isentropes.kneading import radulescu_entropy
from isentropes.lap_entropy import InternalConsistencyError, entropy
from isentropes.maps import (
    ANCHOR_TOL,
    MapError,
    QuarticParams,
    Shape,
    critical_values,
    cubic,
    cubic_bound,
    quartic,
)

CSV_HEADER = ("family", "algorithm", "param1", "param2", "coord1", "coord2", "entropy", "iterations", "status")
RETRY_N_SYM = 32


class SweepFamily(Enum):
    QUARTIC = "quartic"
    CUBIC_POSITIVE = "cubic-positive"
    CUBIC_NEGATIVE = "cubic-negative"


class Algorithm(Enum):
    LAP = "lap"
    KNEADING = "kneading"


class Status(Enum):
    OK = "ok"
    FAILED = "failed"
    SKIPPED = "skipped"


DEFAULT_RANGES = {
    SweepFamily.QUARTIC: ((0.0, 4.0), (0.0, 4.0)),
    SweepFamily.CUBIC_POSITIVE: ((1.0, 4.0), (-1.0, 1.0)),
    SweepFamily.CUBIC_NEGATIVE: ((-4.0, -1.0), (-1.0, 1.0)),
}


@dataclass(frozen=True)
class GridSpec:
    family: SweepFamily
    resolution: int = 41
    algorithm: Algorithm = Algorithm.LAP
    epsilon: float = 1e-4
    n_max: int = 2000
    range1: tuple | None = None
    range2: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", SweepFamily(self.family))
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if self.algorithm is Algorithm.KNEADING and self.family is not SweepFamily.QUARTIC:
            raise ValueError("the kneading algorithm only applies to the quartic family")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")
        for r in (self.range1, self.range2):
            if r is not None and not r[0] <= r[1]:
                raise ValueError(f"empty range {r}")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        d1, d2 = DEFAULT_RANGES[self.family]
        r1 = self.range1 or d1
        r2 = self.range2 or d2
        return (
            np.linspace(r1[0], r1[1], self.resolution),
            np.linspace(r2[0], r2[1], self.resolution),
        )


@dataclass(frozen=True)
class Cell:
    param1: float
    param2: float
    valid: bool


@dataclass(frozen=True)
class GridResult:
    raw_params: tuple
    derived_coords: tuple
    entropy: float
    iterations: int
    status: Status
    detail: str = ""


@dataclass(frozen=True)
class SweepSummary:
    cells: int
    ok: int
    failed: int
    skipped: int
    seconds: float

    def line(self) -> str:
        return (
            f"cells={self.cells} ok={self.ok} failed={self.failed} "
            f"skipped={self.skipped} seconds={self.seconds:.2f}"
        )


def cell_is_valid(family: SweepFamily, p1: float, p2: float) -> bool:
    """Admissibility of a lattice point; quartic cells are always valid."""
    family = SweepFamily(family)
    if family is SweepFamily.QUARTIC:
        return 0.0 <= p1 <= 4.0 and 0.0 <= p2 <= 4.0
    alpha, beta = p1, p2
    if family is SweepFamily.CUBIC_POSITIVE:
        # closed bound; the slack only absorbs rounding in the lattice itself
        return 1.0 < alpha <= 4.0 and abs(beta) <= cubic_bound(alpha) + ANCHOR_TOL
    return -4.0 <= alpha < -1.0 and abs(beta) < cubic_bound(alpha)


def enumerate_cells(spec: GridSpec) -> list[Cell]:
    """Row-major lattice: param1 is the slow index."""
    ax1, ax2 = spec.axes()
    return [
        Cell(float(p1), float(p2), cell_is_valid(spec.family, p1, p2))
        for p1 in ax1
        for p2 in ax2
    ]


def _failed(raw, coords, detail, iterations=0):
    return GridResult(raw, coords, math.nan, iterations, Status.FAILED, detail)


def compute_cell(spec: GridSpec, cell: Cell) -> GridResult:
    raw = (cell.param1, cell.param2)
    if not cell.valid:
        return GridResult(raw, (math.nan, math.nan), math.nan, 0, Status.SKIPPED, "outside region")
    try:
        if spec.family is SweepFamily.QUARTIC:
            fmap = quartic(*raw)
            coords = raw
        else:
            shape = Shape.POSITIVE if spec.family is SweepFamily.CUBIC_POSITIVE else Shape.NEGATIVE
            fmap = cubic(*raw, shape=shape)
            coords = critical_values(fmap)
    except MapError as exc:
        return GridResult(raw, (math.nan, math.nan), math.nan, 0, Status.SKIPPED, str(exc))

    if spec.algorithm is Algorithm.KNEADING:
        p = QuarticParams(*raw)
        est = radulescu_entropy(p, spec.epsilon)
        if not est.converged:
            est = radulescu_entropy(p, spec.epsilon, n_sym=RETRY_N_SYM)
        if not est.converged:
            return _failed(raw, coords, "inner search inconclusive", est.iterations)
    else:
        try:
            est = entropy(fmap, spec.epsilon, spec.n_max)
        except InternalConsistencyError as exc:
            return _failed(raw, coords, str(exc))
        if not est.converged:
            return _failed(raw, coords, "max iterations", est.iterations)
    return GridResult(raw, coords, est.value, est.iterations, Status.OK)


def _compute_chunk(args):
    spec, cells = args
    return [compute_cell(spec, c) for c in cells]


def run_sweep(spec: GridSpec, workers: int = 1) -> tuple[list[GridResult], SweepSummary]:
    """Evaluate every cell; the result order never depends on ``workers``."""
    start = time.perf_counter()
    cells = enumerate_cells(spec)
    if workers <= 1 or len(cells) < 2:
        results = [compute_cell(spec, c) for c in cells]
    else:
        # contiguous chunks, several per worker so slow rows spread out
        n_chunks = min(len(cells), workers * 8)
        bounds = np.linspace(0, len(cells), n_chunks + 1).astype(int)
        chunks = [(spec, cells[a:b]) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_compute_chunk, chunks) for r in part]
    counts = {s: 0 for s in Status}
    for r in results:
        counts[r.status] += 1
    summary = SweepSummary(
        len(results),
        counts[Status.OK],
        counts[Status.FAILED],
        counts[Status.SKIPPED],
        time.perf_counter() - start,
    )
    return results, summary


# --- output -------------------------------------------------------------------

def fmt(x: float) -> str:
    """9 significant digits; NaN as ``nan``."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.9g}"


def _num(x: float):
    if math.isnan(x):
        return "nan"
    return float(fmt(x))


def rows(spec: GridSpec, results: list[GridResult]):
    for r in results:
        yield (
            spec.family.value,
            spec.algorithm.value,
            fmt(r.raw_params[0]),
            fmt(r.raw_params[1]),
            fmt(r.derived_coords[0]),
            fmt(r.derived_coords[1]),
            fmt(r.entropy),
            str(r.iterations),
            r.status.value,
        )


def to_csv(spec: GridSpec, results: list[GridResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows(spec, results))
    return buf.getvalue()


def to_json(spec: GridSpec, results: list[GridResult]) -> str:
    """JSON mirror of the CSV with run metadata (no timestamp, so reruns match)."""
    meta = {
        "version": __version__,
        "family": spec.family.value,
        "algorithm": spec.algorithm.value,
        "resolution": spec.resolution,
        "epsilon": spec.epsilon,
        "n_max": spec.n_max,
        "unit": "nats",
    }
    cells = [
        {
            "family": spec.family.value,
            "algorithm": spec.algorithm.value,
            "param1": _num(r.raw_params[0]),
            "param2": _num(r.raw_params[1]),
            "coord1": _num(r.derived_coords[0]),
            "coord2": _num(r.derived_coords[1]),
            "entropy": _num(r.entropy),
            "iterations": r.iterations,
            "status": r.status.value,
        }
        for r in results
    ]
    return json.dumps({"metadata": meta, "cells": cells}, indent=1) + "\n"


def write_results(spec: GridSpec, results: list[GridResult], path, fmt_name: str = "csv") -> None:
    text = to_json(spec, results) if fmt_name == "json" else to_csv(spec, results)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def as_grid(results: list[GridResult], resolution: int) -> np.ndarray:
    """Entropies reshaped to (resolution, resolution), param1 along axis 0."""
    return np.array([r.entropy for r in results], dtype=float).reshape(resolution, resolution)
