"""Comparing roughness maps: normalisation, Pearson r, descriptor / scale / interpolator sweeps."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import geometry
from .descriptors import (ALL_DESCRIPTORS, DEFAULT_WINDOWS, Descriptor, FieldCache, RoughnessMap,
                          check_window, roughness_map)
from .pointcloud import PointCloud, dedupe_xy
from .rasterize import DemGrid, InterpMethod, rasterize

CSV_HEADER = ("context", "label_a", "label_b", "r", "n_pixels")


@dataclass(frozen=True)
class CorrelationEntry:
    label_a: str
    label_b: str
    r: float
    n_pixels: int


@dataclass
class CorrelationReport:
    entries: list[CorrelationEntry]
    context: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def r(self, a: str, b: str) -> float:
        for e in self.entries:
            if {e.label_a, e.label_b} == {str(a), str(b)}:
                return e.r
        raise KeyError((a, b))

    @property
    def labels(self) -> list[str]:
        seen = []
        for e in self.entries:
            for lab in (e.label_a, e.label_b):
                if lab not in seen:
                    seen.append(lab)
        return sorted(seen)

    def mean_by_label(self) -> dict[str, float]:
        """Mean r of each label with all the others (one radar axis each)."""
        out = {}
        for lab in self.labels:
            rs = [e.r for e in self.entries if lab in (e.label_a, e.label_b)]
            out[lab] = float(np.mean(rs))
        return out

    def mean_r(self) -> float:
        return float(np.mean([e.r for e in self.entries]))

    def ranked(self) -> list[CorrelationEntry]:
        """Entries by decreasing r (ties by labels)."""
        return sorted(self.entries, key=lambda e: (-e.r, e.label_a, e.label_b))

    def context_string(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.context.items())


@dataclass
class SweepReport:
    reports: dict[int, CorrelationReport]

    @property
    def windows(self) -> list[int]:
        return sorted(self.reports)

    def r_ranges(self) -> dict[tuple[str, str], float]:
        """Per label pair, max minus min of r across the window sizes."""
        per_pair: dict[tuple[str, str], list[float]] = {}
        for w in self.windows:
            for e in self.reports[w]:
                per_pair.setdefault((e.label_a, e.label_b), []).append(e.r)
        return {k: float(max(v) - min(v)) for k, v in sorted(per_pair.items())}

    def mean_range(self) -> float:
        return float(np.mean(list(self.r_ranges().values())))


# ---------------------------------------------------------------------------

def _values(m) -> np.ndarray:
    if isinstance(m, (RoughnessMap, DemGrid)):
        return m.values
    return np.asarray(m, dtype=np.float64)


def normalize01(m):
    """Rescale valid pixels to [0, 1]; a constant map becomes all zeros."""
    v = _values(m)
    ok = ~np.isnan(v)
    if not ok.any():
        raise ValueError("empty map")
    lo = v[ok].min()
    hi = v[ok].max()
    out = np.full_like(v, np.nan)
    out[ok] = 0.0 if hi == lo else (v[ok] - lo) / (hi - lo)
    if isinstance(m, RoughnessMap):
        return m.with_values(out, normalized=True)
    if isinstance(m, DemGrid):
        return m.replace(out)
    return out


def pearson_n(a, b) -> tuple[float, int]:
    """Pearson r over pixels valid in both maps, and how many there were."""
    va = _values(a)
    vb = _values(b)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    ok = ~(np.isnan(va) | np.isnan(vb))
    n = int(ok.sum())
    if n < 2:
        raise ValueError("undefined correlation: fewer than 2 jointly valid pixels")
    xa = va[ok]
    xb = vb[ok]
    if xa.min() == xa.max() or xb.min() == xb.max():
        raise ValueError("undefined correlation: zero variance")
    da = xa - xa.mean()
    db = xb - xb.mean()
    den = np.sqrt(np.sum(da * da) * np.sum(db * db))
    if not den > 0:
        raise ValueError("undefined correlation: zero variance")
    return float(np.sum(da * db) / den), n


def pearson(a, b) -> float:
    return pearson_n(a, b)[0]


def correlate_maps(maps: dict, context: Optional[dict] = None) -> CorrelationReport:
    """All unordered pairs of the labelled maps, in label order."""
    labels = sorted(maps)
    entries = []
    for la, lb in itertools.combinations(labels, 2):
        r, n = pearson_n(maps[la], maps[lb])
        entries.append(CorrelationEntry(str(la), str(lb), r, n))
    return CorrelationReport(entries, dict(context or {}))


def descriptor_comparison(dem: DemGrid, w: int = 5, fields: Optional[FieldCache] = None,
                          context: Optional[dict] = None) -> CorrelationReport:
    """Pairwise r between the five descriptor maps of one DEM at window ``w``."""
    w = check_window(w)
    fields = fields or FieldCache(dem)
    maps = {d.value: roughness_map(dem, d, w, fields) for d in ALL_DESCRIPTORS}
    ctx = dict(context or {})
    ctx["w"] = w
    return correlate_maps(maps, ctx)


def scale_sweep(dem: DemGrid, windows: Iterable[int] = DEFAULT_WINDOWS,
                context: Optional[dict] = None) -> SweepReport:
    fields = FieldCache(dem)
    ws = sorted({check_window(w) for w in windows})
    return SweepReport({w: descriptor_comparison(dem, w, fields, context) for w in ws})


def interpolation_comparison(cloud: PointCloud, methods: Sequence = tuple(InterpMethod), d="rmsh",
                             w: int = 5, cell: float = 1.0, context: Optional[dict] = None,
                             backend: Optional[str] = None) -> CorrelationReport:
    """r between same-descriptor maps from DEMs built with different interpolators.

    Every DEM shares one grid geometry; a method listed twice is compared
    with itself (labels get a ``#k`` suffix).
    """
    if len(methods) < 2:
        raise ValueError("need at least two interpolation methods")
    d = Descriptor.parse(d)
    cloud = dedupe_xy(cloud)
    tri = None
    maps = {}
    for i, m in enumerate(methods):
        m = InterpMethod.parse(m)
        if m is not InterpMethod.NEAREST_NEIGHBOUR and tri is None:
            tri = geometry.delaunay(cloud, backend=backend)
        dem = rasterize(cloud, m, cell, backend=backend, tri=tri)
        label = m.value if m.value not in maps else f"{m.value}#{i}"
        maps[label] = roughness_map(dem, d, w)
    ctx = dict(context or {})
    ctx.update(descriptor=d.value, w=check_window(w))
    return correlate_maps(maps, ctx)


# ---------------------------------------------------------------------------
# CSV

def report_rows(report: CorrelationReport) -> list[tuple]:
    ctx = report.context_string()
    return [(ctx, e.label_a, e.label_b, f"{e.r:.6f}", str(e.n_pixels)) for e in report.entries]


def format_csv(reports: Iterable[CorrelationReport]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for rep in reports:
        wr.writerows(report_rows(rep))
    return buf.getvalue()


def write_csv(path, reports: Iterable[CorrelationReport]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(reports))


def read_csv(path) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
