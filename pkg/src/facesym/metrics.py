"""Prediction-quality metrics for one measure over a dataset.

Spearman's rho is computed as Pearson's r between average (fractional) ranks,
which stays correct under ties where the ``1 - 6*sum(d^2)/(n(n^2-1))``
shortcut does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

UNDEFINED_BAND = "undefined"


class InsufficientSampleError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureSeries:
    measure_name: str
    gt: tuple[float, ...]
    pred: tuple[float, ...]

    def __post_init__(self):
        gt = tuple(float(v) for v in self.gt)
        pred = tuple(float(v) for v in self.pred)
        if len(gt) != len(pred):
            raise ValueError(f"{self.measure_name}: {len(gt)} ground-truth values vs {len(pred)} predictions")
        if not gt:
            raise InsufficientSampleError(f"{self.measure_name}: empty series")
        if not all(math.isfinite(v) for v in gt + pred):
            raise ValueError(f"{self.measure_name}: non-finite value in series")
        object.__setattr__(self, "gt", gt)
        object.__setattr__(self, "pred", pred)

    def __len__(self) -> int:
        return len(self.gt)


@dataclass(frozen=True)
class RhoBands:
    """Interpretation bands for ``|rho|``.

    ``edges`` are the lower bounds of every band after the first; a value
    equal to an edge belongs to the higher band.
    """

    edges: tuple[float, ...] = (0.2, 0.35, 0.6, 0.8)
    labels: tuple[str, ...] = ("very weak", "weak", "moderate", "strong", "very strong")

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        labels = tuple(self.labels)
        if len(labels) != len(edges) + 1:
            raise ValueError("need exactly one more label than band edges")
        if any(not 0.0 < e <= 1.0 for e in edges) or list(edges) != sorted(set(edges)):
            raise ValueError(f"band edges must be strictly increasing within (0, 1]: {edges}")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "labels", labels)


DEFAULT_BANDS = RhoBands()


@dataclass(frozen=True)
class MetricBundle:
    spearman_rho: Optional[float]
    bca: float
    mae: float
    rmse: float
    rho_band: str
    n: int = field(default=0)

    @property
    def rho_defined(self) -> bool:
        return self.spearman_rho is not None


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks, ties sharing the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    start = 0
    while start < len(order):
        stop = start + 1
        while stop < len(order) and values[order[stop]] == values[order[start]]:
            stop += 1
        # positions start..stop-1 hold ranks start+1..stop
        shared = (start + 1 + stop) / 2.0
        for k in range(start, stop):
            ranks[order[k]] = shared
        start = stop
    return ranks


def _pearson(a: Sequence[float], b: Sequence[float]) -> Optional[float]:
    n = len(a)
    mean_a = math.fsum(a) / n
    mean_b = math.fsum(b) / n
    da = [x - mean_a for x in a]
    db = [y - mean_b for y in b]
    saa = math.fsum(x * x for x in da)
    sbb = math.fsum(y * y for y in db)
    if saa == 0.0 or sbb == 0.0:
        return None
    r = math.fsum(x * y for x, y in zip(da, db)) / math.sqrt(saa * sbb)
    return max(-1.0, min(1.0, r))


def spearman_rho(s: MeasureSeries) -> Optional[float]:
    """Rank correlation, or ``None`` when either side is entirely tied."""
    if len(s) < 2:
        raise InsufficientSampleError(f"{s.measure_name}: spearman needs at least 2 pairs, got {len(s)}")
    return _pearson(average_ranks(s.gt), average_ranks(s.pred))


def bca(s: MeasureSeries) -> float:
    """Fraction of samples on the same side of the ground-truth mean.

    "Above" is strict, so a value equal to the mean counts as not above.
    """
    mu = math.fsum(s.gt) / len(s)
    hits = sum((p > mu) == (g > mu) for g, p in zip(s.gt, s.pred))
    return hits / len(s)


def mae(s: MeasureSeries) -> float:
    return math.fsum(abs(p - g) for g, p in zip(s.gt, s.pred)) / len(s)


def rmse(s: MeasureSeries) -> float:
    # hypot scales internally, so tiny or huge errors neither underflow nor overflow
    value = math.hypot(*(p - g for g, p in zip(s.gt, s.pred))) / math.sqrt(len(s))
    # rmse >= mae holds exactly; rounding must not break it
    return max(value, mae(s))


def classify_rho(rho: float, bands: RhoBands = DEFAULT_BANDS) -> str:
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [-1, 1], got {rho}")
    magnitude = abs(rho)
    label = bands.labels[0]
    for edge, name in zip(bands.edges, bands.labels[1:]):
        if magnitude >= edge:
            label = name
    return label


def evaluate_series(s: MeasureSeries, bands: RhoBands = DEFAULT_BANDS) -> MetricBundle:
    rho = spearman_rho(s)
    band = UNDEFINED_BAND if rho is None else classify_rho(rho, bands)
    return MetricBundle(
        spearman_rho=rho,
        bca=bca(s),
        mae=mae(s),
        rmse=rmse(s),
        rho_band=band,
        n=len(s),
    )
