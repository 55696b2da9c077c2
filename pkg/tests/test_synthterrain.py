import numpy as np
import pytest

from terrarough.pointcloud import detrend, fit_plane
from terrarough.synthterrain import Archetype, TerrainSpec, generate


def test_deterministic():
    a = generate(TerrainSpec("flat_rough", extent=40, seed=1))
    b = generate(TerrainSpec("flat_rough", extent=40, seed=1))
    assert np.array_equal(a.points, b.points)
    c = generate(TerrainSpec("flat_rough", extent=40, seed=2))
    assert not np.array_equal(a.points, c.points)


def test_hyphenated_names():
    assert TerrainSpec("hilly-rough").archetype is Archetype.HILLY_ROUGH


def test_full_size_point_count():
    spec = TerrainSpec("flat_smooth", seed=0)
    n = len(generate(spec))
    assert abs(n - (350 / 0.64) ** 2) / (350 / 0.64) ** 2 < 0.05


def test_points_inside_extent():
    cloud = generate(TerrainSpec("hilly_rough", extent=30, seed=4))
    assert cloud.x.min() >= 0 and cloud.x.max() <= 30
    assert cloud.y.min() >= 0 and cloud.y.max() <= 30


def test_elevation_spread_ordering():
    sd = {a: generate(TerrainSpec(a, extent=150, seed=1)).z.std(ddof=1) for a in Archetype}
    assert sd[Archetype.FLAT_SMOOTH] < sd[Archetype.FLAT_ROUGH] < sd[Archetype.HILLY_ROUGH]


@pytest.mark.parametrize("arch", ["flat_rough", "flat_smooth"])
def test_flat_archetypes_have_no_tilt(arch):
    plane = fit_plane(generate(TerrainSpec(arch, extent=150, seed=1)))
    assert abs(plane.a) < 0.005 and abs(plane.b) < 0.005


def test_hilly_residual_exceeds_flat_rough():
    def resid_sd(a):
        cloud = generate(TerrainSpec(a, extent=150, seed=1))
        return detrend(cloud, fit_plane(cloud)).z.std(ddof=1)

    assert resid_sd("hilly_rough") > resid_sd("flat_rough")


def test_amplitude_overrides():
    cloud = generate(TerrainSpec("flat_rough", extent=20, noise_sigma=0.0, seed=3))
    assert (cloud.z == 0).all()
    with pytest.raises(ValueError):
        TerrainSpec("flat_rough", noise_sigma=-1.0)
    with pytest.raises(ValueError):
        TerrainSpec("flat_rough", extent=0)
