import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from terrarough import geometry
from terrarough.pointcloud import PointCloud
from terrarough.rasterize import (DemGrid, InterpMethod, grid_for, natural_neighbour_interp, rasterize,
                                  tin_interp)

from oracles import nearest_site, random_cloud, voronoi_pixel_weights

ALL_METHODS = list(InterpMethod)


def _dense_plane_cloud(n=21, extent=20.0):
    t = np.linspace(0, extent, n)
    X, Y = np.meshgrid(t, t)
    return PointCloud.from_xyz(X.ravel(), Y.ravel(), X.ravel() + 2 * Y.ravel())


def test_grid_geometry():
    g = grid_for((1.0, 2.0, 4.5, 4.0), 1.0)
    assert (g.nrows, g.ncols) == (2, 4)
    X, Y = g.cell_centers()
    assert X[0].tolist() == [1.5, 2.5, 3.5, 4.5]
    # row 0 is the northern row
    assert Y[:, 0].tolist() == [3.5, 2.5]


def test_method_aliases():
    assert InterpMethod.parse("natural") is InterpMethod.NATURAL_NEIGHBOUR
    assert InterpMethod.parse("tin") is InterpMethod.TIN_LINEAR
    with pytest.raises(ValueError):
        InterpMethod.parse("kriging")


@pytest.mark.parametrize("method", ["natural_neighbour", "tin_linear"])
def test_planar_reproduction(backend, method):
    dem = rasterize(_dense_plane_cloud(), method, 1.0, backend=backend)
    X, Y = dem.cell_centers()
    ok = ~dem.nodata
    assert ok.sum() > 300
    assert np.abs(dem.values[ok] - (X + 2 * Y)[ok]).max() < 1e-6


@pytest.mark.parametrize("method", ALL_METHODS)
def test_constant_cloud(backend, method, rng):
    cloud = random_cloud(rng, 200, z=lambda x, y: np.full_like(x, 3.0))
    dem = rasterize(cloud, method, 0.5, backend=backend)
    ok = ~dem.nodata
    assert ok.any()
    assert (dem.values[ok] == 3.0).all()


def test_nearest_matches_exhaustive_search(backend, rng):
    cloud = random_cloud(rng, 500)
    dem = rasterize(cloud, "nearest_neighbour", 0.37, backend=backend)
    assert not dem.nodata.any()
    X, Y = dem.cell_centers()
    for x, y, v in zip(X.ravel(), Y.ravel(), dem.values.ravel()):
        assert v == cloud.z[nearest_site(cloud.xy, (x, y))]


def test_nearest_tie_goes_to_lowest_index(backend):
    cloud = PointCloud([[0, 0, 1], [2, 0, 2], [0, 2, 3], [2, 2, 4]])
    dem = rasterize(cloud, "nearest", 2.0, backend=backend)
    # the single cell centre (1, 1) is equidistant from all four sites
    assert dem.values.tolist() == [[1.0]]


def test_outside_hull_is_nodata(backend):
    cloud = PointCloud([[0, 0, 1], [10, 0, 1], [0, 10, 1]])
    for m in ("natural", "tin"):
        dem = rasterize(cloud, m, 1.0, backend=backend)
        X, Y = dem.cell_centers()
        assert np.array_equal(dem.nodata, X + Y > 10)
    assert not rasterize(cloud, "nearest", 1.0, backend=backend).nodata.any()


def test_methods_share_geometry(rng):
    cloud = random_cloud(rng, 300)
    grids = [rasterize(cloud, m, 0.7) for m in ALL_METHODS]
    assert all(g.same_geometry(grids[0]) for g in grids)


def test_tin_interp_examples(backend):
    xy = np.array([[0, 0], [4, 0], [0, 4.0]])
    tri = geometry.delaunay(xy, backend=backend)
    z = np.array([1.0, 2.0, 6.0])
    assert tin_interp(tri, z, (4, 0), backend=backend) == 2.0
    assert tin_interp(tri, z, (2, 0), backend=backend) == pytest.approx(1.5)
    assert tin_interp(tri, z, xy.mean(axis=0), backend=backend) == pytest.approx(3.0, abs=1e-12)
    assert np.isnan(tin_interp(tri, z, (5, 5), backend=backend))


def test_natural_examples(backend, rng):
    xy = np.array([[0, 0], [1, 0], [1, 1], [0, 1.0]])
    tri = geometry.delaunay(xy, backend=backend)
    assert natural_neighbour_interp(tri, [0, 0, 10, 10], (0.5, 0.5), backend=backend) == pytest.approx(5.0)
    cloud = random_cloud(rng, 60)
    tri = geometry.delaunay(cloud, backend=backend)
    for i in (0, 17, 59):
        assert natural_neighbour_interp(tri, cloud.z, cloud.xy[i], backend=backend) == cloud.z[i]


def test_natural_matches_pixel_oracle(backend):
    rng = np.random.default_rng(7)
    cloud = random_cloud(rng, 30, scale=1.0)
    tri = geometry.delaunay(cloud, backend=backend)
    q = (0.52, 0.47)
    expected = voronoi_pixel_weights(cloud.xy, q, npix=1000) @ cloud.z
    assert natural_neighbour_interp(tri, cloud.z, q, backend=backend) == pytest.approx(expected, abs=1e-2)


def test_backends_give_identical_dems(rng):
    if len(geometry.available_backends()) < 2:
        pytest.skip("compiled kernels not built")
    cloud = random_cloud(rng, 400)
    for m in ALL_METHODS:
        a = rasterize(cloud, m, 0.5, backend="python")
        b = rasterize(cloud, m, 0.5, backend="compiled")
        assert a == b


def test_duplicates_keep_last():
    cloud = PointCloud([[0, 0, 1], [2, 0, 1], [0, 2, 1], [2, 2, 1], [1, 1, 5], [1, 1, 9]])
    dem = rasterize(cloud, "nearest", 2.0)
    assert dem.values.tolist() == [[9.0]]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(ALL_METHODS))
def test_values_bounded_by_data(seed, method):
    rng = np.random.default_rng(seed)
    cloud = random_cloud(rng, 80)
    dem = rasterize(cloud, method, 0.6)
    ok = ~dem.nodata
    assert dem.values[ok].min() >= cloud.z.min() - 1e-12
    assert dem.values[ok].max() <= cloud.z.max() + 1e-12


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31), st.floats(-3, 3), st.floats(-3, 3))
def test_natural_and_tin_agree_on_planes(seed, a, b):
    rng = np.random.default_rng(seed)
    cloud = random_cloud(rng, 60, z=lambda x, y: a * x + b * y + 1)
    nat = rasterize(cloud, "natural", 0.8)
    tin = rasterize(cloud, "tin", 0.8)
    assert np.array_equal(nat.nodata, tin.nodata)
    ok = ~nat.nodata
    assert np.abs(nat.values[ok] - tin.values[ok]).max() < 1e-6


def test_dem_grid_validation():
    with pytest.raises(ValueError):
        DemGrid(np.zeros((2, 2)), 0, 0, 0.0)
    with pytest.raises(ValueError):
        DemGrid(np.zeros(4), 0, 0, 1.0)
