"""Sampled temperature fields and their CSV form (``model,t,r,T``)."""

from __future__ import annotations

import csv
import enum
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ShapeError
from .params import DerivedParams


class Model(enum.Enum):
    PARABOLIC_INFINITE = "parabolic-infinite"
    HYPERBOLIC_INFINITE = "hyperbolic-infinite"
    PARABOLIC_FINITE = "parabolic-finite"
    HYPERBOLIC_FINITE = "hyperbolic-finite"
    ORACLE_PARABOLIC = "oracle-parabolic"
    ORACLE_HYPERBOLIC = "oracle-hyperbolic"


def fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass
class TemperatureProfile:
    """Samples ``(t, r, T)`` sorted by ``t`` then ``r``."""

    model: Model
    t: np.ndarray
    r: np.ndarray
    T: np.ndarray
    meta: Optional[DerivedParams] = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float).ravel()
        self.r = np.asarray(self.r, dtype=float).ravel()
        self.T = np.asarray(self.T, dtype=float).ravel()
        if not (self.t.shape == self.r.shape == self.T.shape):
            raise ShapeError("t, r and T must have the same length")
        order = np.lexsort((self.r, self.t))
        if np.any(order != np.arange(order.size)):
            self.t, self.r, self.T = self.t[order], self.r[order], self.T[order]

    @classmethod
    def from_grid(cls, model, times, radii, field, meta=None):
        """Build from a ``(len(times), len(radii))`` array."""
        times = np.asarray(times, dtype=float)
        radii = np.asarray(radii, dtype=float)
        field = np.asarray(field, dtype=float).reshape(times.size, radii.size)
        tt, rr = np.meshgrid(times, radii, indexing="ij")
        return cls(model, tt, rr, field, meta)

    def times(self) -> np.ndarray:
        return np.unique(self.t)

    def radii(self) -> np.ndarray:
        return np.unique(self.r)

    def as_grid(self):
        """Return ``(times, radii, field)``; requires a full tensor grid."""
        times, radii = self.times(), self.radii()
        if times.size * radii.size != self.T.size:
            raise ShapeError("profile is not sampled on a tensor grid")
        return times, radii, self.T.reshape(times.size, radii.size)

    def to_csv(self, stream=None) -> str:
        buf = io.StringIO() if stream is None else stream
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "t", "r", "T"])
        name = self.model.value
        for t, r, T in zip(self.t, self.r, self.T):
            w.writerow([name, fmt(t), fmt(r), fmt(T)])
        return buf.getvalue() if stream is None else ""

    @classmethod
    def from_csv(cls, text: str) -> "TemperatureProfile":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["model", "t", "r", "T"]:
            raise ShapeError("expected header model,t,r,T")
        body = rows[1:]
        models = {row[0] for row in body}
        if len(models) != 1:
            raise ShapeError(f"expected one model per profile, got {sorted(models)}")
        data = np.array([[float(v) for v in row[1:]] for row in body]).reshape(-1, 3)
        return cls(Model(models.pop()), data[:, 0], data[:, 1], data[:, 2])


def thread_count() -> int:
    """Worker count from ``ABLATION_HEAT_THREADS`` (0 or unset = auto)."""
    try:
        n = int(os.environ.get("ABLATION_HEAT_THREADS", "0"))
    except ValueError:
        n = 0
    if n <= 0:
        n = min(8, os.cpu_count() or 1)
    return n


def grid_map(fn, times, radii) -> np.ndarray:
    """Evaluate ``fn(t, r)`` on a tensor grid; order-independent result."""
    pairs = [(t, r) for t in times for r in radii]
    n = thread_count()
    if n == 1 or len(pairs) < 4:
        values = [fn(t, r) for t, r in pairs]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            values = list(pool.map(lambda tr: fn(*tr), pairs))
    return np.array(values, dtype=float).reshape(len(times), len(radii))
