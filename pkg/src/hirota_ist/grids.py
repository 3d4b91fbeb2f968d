"""Sampled field grids and their CSV/JSON exchange formats.

A FieldGrid stores Q(x, t) on a rectangular grid, row-major with t outer.
By symmetry only three complex entries are independent (q1 = Q11, q0 = Q12
= Q21, qm1 = Q22); the CSV schema stores exactly those.  Floats are written
with 17 significant digits so serialization round-trips bit-exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CSV_HEADER = ["x", "t", "re_q1", "im_q1", "re_q0", "im_q0", "re_qm1", "im_qm1"]
SCHEMA_VERSION = "1"
ARTIFACT_VERSION = "0.1.0"


@dataclass(frozen=True)
class GridSpec:
    xmin: float
    xmax: float
    nx: int
    tmin: float
    tmax: float
    nt: int

    def __post_init__(self):
        if self.nx < 2 or self.nt < 2:
            raise ValueError("grid needs at least 2 samples per axis")
        if not (self.xmax > self.xmin and self.tmax > self.tmin):
            raise ValueError("grid ranges must be increasing")

    def x_axis(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    def t_axis(self) -> np.ndarray:
        return np.linspace(self.tmin, self.tmax, self.nt)


@dataclass
class FieldGrid:
    xs: np.ndarray
    ts: np.ndarray
    values: np.ndarray  # (nt, nx, 2, 2) complex
    mask: np.ndarray  # (nt, nx) bool, True where evaluation failed
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ts = np.asarray(self.ts, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        self.mask = np.asarray(self.mask, dtype=bool)
        if np.any(np.diff(self.xs) <= 0) or np.any(np.diff(self.ts) <= 0):
            raise ValueError("grid axes must be strictly increasing")
        if self.values.shape != (len(self.ts), len(self.xs), 2, 2):
            raise ValueError("values shape must be (nt, nx, 2, 2)")
        if self.mask.shape != (len(self.ts), len(self.xs)):
            raise ValueError("mask shape must be (nt, nx)")

    @property
    def masked_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    def component(self, name: str) -> np.ndarray:
        idx = {"q1": (0, 0), "q0": (0, 1), "qm1": (1, 1)}[name]
        return self.values[:, :, idx[0], idx[1]]


def _fmt(v: float) -> str:
    return "%.17g" % v


def write_csv(grid: FieldGrid, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for it, t in enumerate(grid.ts):
            for ix, x in enumerate(grid.xs):
                if grid.mask[it, ix]:
                    q1 = q0 = qm1 = complex(float("nan"), float("nan"))
                else:
                    Q = grid.values[it, ix]
                    q1, q0, qm1 = Q[0, 0], Q[0, 1], Q[1, 1]
                w.writerow(
                    [_fmt(x), _fmt(t)]
                    + [_fmt(v) for v in (q1.real, q1.imag, q0.real, q0.imag, qm1.real, qm1.imag)]
                )


def read_csv(path) -> FieldGrid:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    data = [[float(v) for v in r] for r in rows[1:]]
    xs = sorted({r[0] for r in data})
    ts = sorted({r[1] for r in data})
    nx, nt = len(xs), len(ts)
    if len(data) != nx * nt:
        raise ValueError("row count does not match grid size")
    xi = {x: i for i, x in enumerate(xs)}
    ti = {t: i for i, t in enumerate(ts)}
    values = np.zeros((nt, nx, 2, 2), dtype=complex)
    mask = np.zeros((nt, nx), dtype=bool)
    for r in data:
        it, ix = ti[r[1]], xi[r[0]]
        q1 = complex(r[2], r[3])
        q0 = complex(r[4], r[5])
        qm1 = complex(r[6], r[7])
        if any(np.isnan(v) for v in r[2:]):
            mask[it, ix] = True
        values[it, ix] = [[q1, q0], [q0, qm1]]
    return FieldGrid(xs=np.array(xs), ts=np.array(ts), values=values, mask=mask)


def _complex_pairs(arr: np.ndarray) -> list:
    return [[v.real, v.imag] for v in arr.ravel()]


def write_json(grid: FieldGrid, path) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "x": list(map(float, grid.xs)),
        "t": list(map(float, grid.ts)),
        "values": {
            "q1": _complex_pairs(grid.component("q1")),
            "q0": _complex_pairs(grid.component("q0")),
            "qm1": _complex_pairs(grid.component("qm1")),
        },
        "mask": grid.mask.ravel().astype(int).tolist(),
        "metadata": grid.metadata,
    }
    Path(path).write_text(json.dumps(doc))


def read_json(path) -> FieldGrid:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema version")
    xs = np.array(doc["x"], dtype=float)
    ts = np.array(doc["t"], dtype=float)
    nt, nx = len(ts), len(xs)

    def unpack(name):
        flat = np.array([complex(re, im) for re, im in doc["values"][name]])
        return flat.reshape(nt, nx)

    q1, q0, qm1 = unpack("q1"), unpack("q0"), unpack("qm1")
    values = np.zeros((nt, nx, 2, 2), dtype=complex)
    values[:, :, 0, 0] = q1
    values[:, :, 0, 1] = q0
    values[:, :, 1, 0] = q0
    values[:, :, 1, 1] = qm1
    mask = np.array(doc["mask"], dtype=bool).reshape(nt, nx)
    return FieldGrid(xs=xs, ts=ts, values=values, mask=mask, metadata=doc.get("metadata", {}))
