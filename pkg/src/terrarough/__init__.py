"""Terrain surface roughness from scattered elevation points.

Scattered xyz points are interpolated onto a DEM (natural neighbour, nearest
neighbour or linear-on-triangles), summarised by five local roughness
descriptors on non-overlapping windows, and the resulting maps are compared
with Pearson correlation.
"""

from .pointcloud import DegenerateGeometryError, Plane, PointCloud, detrend, fit_plane, load_xyz, save_xyz
from .rasterize import DemGrid, InterpMethod, rasterize
from .descriptors import Descriptor, RoughnessMap, roughness_map
from .analysis import (CorrelationReport, SweepReport, descriptor_comparison, interpolation_comparison,
                       normalize01, pearson, scale_sweep)
from .synthterrain import Archetype, TerrainSpec, generate

__version__ = "0.1.0"

__all__ = [
    "Archetype", "CorrelationReport", "DegenerateGeometryError", "DemGrid", "Descriptor", "InterpMethod",
    "Plane", "PointCloud", "RoughnessMap", "SweepReport", "TerrainSpec", "descriptor_comparison", "detrend",
    "fit_plane", "generate", "interpolation_comparison", "load_xyz", "normalize01", "pearson", "rasterize",
    "roughness_map", "save_xyz", "scale_sweep",
]
