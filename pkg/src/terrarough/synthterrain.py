"""Seeded synthetic point clouds for three terrain archetypes.

* ``hilly_rough``: a few broad Gaussian hills plus white noise
* ``flat_rough``: white noise only
* ``flat_smooth``: very low hills plus faint noise

Points are jittered on a regular lattice (one uniformly placed point per
lattice cell), so the mean spacing is close to ``spacing``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .pointcloud import PointCloud


class Archetype(str, enum.Enum):
    HILLY_ROUGH = "hilly_rough"
    FLAT_ROUGH = "flat_rough"
    FLAT_SMOOTH = "flat_smooth"

    @classmethod
    def parse(cls, name) -> "Archetype":
        if isinstance(name, cls):
            return name
        return cls(str(name).lower().replace("-", "_"))


_DEFAULTS = {
    Archetype.HILLY_ROUGH: (8.0, 0.4),
    Archetype.FLAT_ROUGH: (0.0, 0.4),
    Archetype.FLAT_SMOOTH: (0.3, 0.03),
}


@dataclass(frozen=True)
class TerrainSpec:
    archetype: Archetype
    extent: float = 350.0
    spacing: float = 0.64
    seed: int = 0
    hill_height: Optional[float] = None
    noise_sigma: Optional[float] = None
    n_hills: int = 5

    def __post_init__(self):
        object.__setattr__(self, "archetype", Archetype.parse(self.archetype))
        h, s = _DEFAULTS[self.archetype]
        if self.hill_height is None:
            object.__setattr__(self, "hill_height", h)
        if self.noise_sigma is None:
            object.__setattr__(self, "noise_sigma", s)
        if not self.extent > 0:
            raise ValueError("extent must be positive")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise sigma must be non-negative")

    def with_(self, **kw) -> "TerrainSpec":
        return replace(self, **kw)


def hill_field(x, y, extent: float, height: float, n_hills: int, rng: np.random.Generator) -> np.ndarray:
    """Sum of ``n_hills`` isotropic Gaussian bumps; the tallest peaks at ``height``."""
    z = np.zeros_like(x)
    if height == 0 or n_hills == 0:
        return z
    cx = rng.uniform(0.1, 0.9, n_hills) * extent
    cy = rng.uniform(0.1, 0.9, n_hills) * extent
    sig = rng.uniform(0.08, 0.18, n_hills) * extent
    amp = rng.uniform(0.5, 1.0, n_hills)
    amp *= height / amp.max()
    for i in range(n_hills):
        z += amp[i] * np.exp(-((x - cx[i]) ** 2 + (y - cy[i]) ** 2) / (2 * sig[i] ** 2))
    return z


def generate(spec: TerrainSpec) -> PointCloud:
    rng = np.random.default_rng(spec.seed)
    n = max(2, int(round(spec.extent / spec.spacing)))
    step = spec.extent / n
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    # independent streams so changing one amplitude never reshuffles the others
    jitter_rng, hill_rng, noise_rng = rng.spawn(3)
    jit = jitter_rng.random((2, n, n))
    x = ((jj + jit[0]) * step).ravel()
    y = ((ii + jit[1]) * step).ravel()
    z = hill_field(x, y, spec.extent, spec.hill_height, spec.n_hills, hill_rng)
    if spec.noise_sigma > 0:
        z = z + noise_rng.normal(0.0, spec.noise_sigma, x.size)
    return PointCloud.from_xyz(x, y, z)
