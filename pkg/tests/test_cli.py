import numpy as np
import pytest
from PIL import Image

from terrarough.asciigrid import read_asc, read_meta, write_asc
from terrarough.cli import build_parser, main
from terrarough.pointcloud import PointCloud, save_xyz
from terrarough.rasterize import DemGrid


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def dem_file(tmp_path):
    rng = np.random.default_rng(9)
    p = tmp_path / "dem.asc"
    write_asc(p, DemGrid(rng.normal(size=(15, 15)), 0.0, 0.0, 1.0))
    return p


def test_synth_is_byte_identical(tmp_path, capsys):
    assert run("synth", "--terrain", "flat-rough", "--seed", 1, "--extent", 20, "--out", tmp_path / "a.xyz") == 0
    assert run("synth", "--terrain", "flat-rough", "--seed", 1, "--extent", 20, "--out", tmp_path / "b.xyz") == 0
    assert (tmp_path / "a.xyz").read_bytes() == (tmp_path / "b.xyz").read_bytes()


def test_synth_reports_count(tmp_path, capsys):
    run("synth", "--terrain", "hilly-rough", "--extent", 50, "--spacing", 0.64, "--out", tmp_path / "a.xyz")
    n = int(capsys.readouterr().err.split()[1])
    assert abs(n - (50 / 0.64) ** 2) < 0.05 * (50 / 0.64) ** 2


def test_synth_missing_terrain(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run("synth", "--out", tmp_path / "a.xyz")
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_defaults():
    p = build_parser()
    assert p.parse_args(["rasterize", "--in", "a", "--out", "b"]).cell == 1.0
    assert p.parse_args(["roughness", "--dem", "a", "--descriptor", "rmsh", "--out", "b"]).window == 5
    assert p.parse_args(["sweep", "--dem", "a"]).windows == [3, 5, 7, 9, 11]
    assert p.parse_args(["render", "--map", "a", "--out", "b"]).scale == 4


@pytest.mark.parametrize("method", ["natural", "nearest", "tin"])
def test_rasterize_planar(tmp_path, method):
    t = np.linspace(0, 10, 11)
    X, Y = np.meshgrid(t, t)
    save_xyz(PointCloud.from_xyz(X.ravel(), Y.ravel(), 3 + 0.5 * X.ravel()), tmp_path / "p.xyz")
    assert run("rasterize", "--in", tmp_path / "p.xyz", "--method", method, "--out", tmp_path / "d.asc") == 0
    dem = read_asc(tmp_path / "d.asc")
    Xc, _ = dem.cell_centers()
    if method != "nearest":
        assert np.allclose(dem.values, 3 + 0.5 * Xc, atol=1e-5)
    run("rasterize", "--in", tmp_path / "p.xyz", "--method", method, "--detrend", "--out", tmp_path / "z.asc")
    assert (read_asc(tmp_path / "z.asc").values == 0).all()


def test_rasterize_roundtrip(tmp_path, rng):
    pts = np.column_stack([rng.random((300, 2)) * 20, rng.normal(size=300)])
    save_xyz(PointCloud(pts), tmp_path / "c.xyz")
    run("rasterize", "--in", tmp_path / "c.xyz", "--out", tmp_path / "d.asc")
    dem = read_asc(tmp_path / "d.asc")
    write_asc(tmp_path / "e.asc", dem)
    assert read_asc(tmp_path / "e.asc") == dem
    assert (tmp_path / "d.asc").read_bytes() == (tmp_path / "e.asc").read_bytes()


def test_rasterize_degenerate_exits_1(tmp_path, capsys):
    (tmp_path / "l.xyz").write_text("0 0 1\n1 1 2\n2 2 3\n3 3 4\n")
    assert run("rasterize", "--in", tmp_path / "l.xyz", "--out", tmp_path / "d.asc") == 1
    assert "degenerate geometry" in capsys.readouterr().err


def test_roughness_outputs(tmp_path, dem_file):
    out = tmp_path / "m.asc"
    assert run("roughness", "--dem", dem_file, "--descriptor", "slope", "--out", out) == 0
    m = read_asc(out)
    assert m.shape == (3, 3)
    assert m.cell == 5.0
    meta = read_meta(tmp_path / "m.meta")
    assert meta == {"descriptor": "slope_sd", "window": 5, "source_cell": 1.0, "units": "degrees",
                    "normalized": False}


@pytest.mark.parametrize("d", ["rmsh", "ldre", "rt", "slope", "curv"])
def test_roughness_constant_dem(tmp_path, d):
    write_asc(tmp_path / "c.asc", DemGrid(np.full((12, 12), 4.0), 0, 0, 1.0))
    run("roughness", "--dem", tmp_path / "c.asc", "--descriptor", d, "--window", 3, "--out", tmp_path / "m.asc")
    assert (read_asc(tmp_path / "m.asc").values == 0).all()


def test_roughness_even_window(tmp_path, dem_file, capsys):
    with pytest.raises(SystemExit) as exc:
        run("roughness", "--dem", dem_file, "--descriptor", "rmsh", "--window", 4, "--out", tmp_path / "m.asc")
    assert exc.value.code == 2
    assert "window must be odd" in capsys.readouterr().err


def test_compare(tmp_path, dem_file, capsys):
    for d in ("rmsh", "rt", "curv"):
        run("roughness", "--dem", dem_file, "--descriptor", d, "--window", 3, "--out", tmp_path / f"{d}.asc")
    assert run("compare", "--maps", tmp_path / "rmsh.asc", tmp_path / "rmsh.asc", "--out", tmp_path / "s.csv") == 0
    rows = (tmp_path / "s.csv").read_text().splitlines()
    assert rows[1].split(",")[3] == "1.000000"
    run("compare", "--maps", *(tmp_path / f"{d}.asc" for d in ("rmsh", "rt", "curv")), "--out", tmp_path / "c.csv")
    assert len((tmp_path / "c.csv").read_text().splitlines()) == 4


def test_compare_mismatch(tmp_path, dem_file, capsys):
    run("roughness", "--dem", dem_file, "--descriptor", "rmsh", "--window", 3, "--out", tmp_path / "a.asc")
    run("roughness", "--dem", dem_file, "--descriptor", "rmsh", "--window", 5, "--out", tmp_path / "b.asc")
    assert run("compare", "--maps", tmp_path / "a.asc", tmp_path / "b.asc") == 1
    assert "dimension mismatch" in capsys.readouterr().err


def test_sweep(tmp_path):
    rng = np.random.default_rng(2)
    write_asc(tmp_path / "d.asc", DemGrid(rng.normal(size=(33, 33)), 0, 0, 1.0))
    assert run("sweep", "--dem", tmp_path / "d.asc", "--windows", "5,3,7", "--out", tmp_path / "s.csv") == 0
    rows = [r.split(",") for r in (tmp_path / "s.csv").read_text().splitlines()[1:]]
    assert len(rows) == 30
    keys = [(int(r[0].split("=")[1]), r[1], r[2]) for r in rows]
    assert keys == sorted(keys)


def test_render(tmp_path):
    v = np.arange(12.0).reshape(3, 4)
    v[1, 2] = np.nan
    write_asc(tmp_path / "m.asc", DemGrid(v, 0, 0, 1.0))
    assert run("render", "--map", tmp_path / "m.asc", "--out", tmp_path / "m.png", "--scale", 3) == 0
    img = np.asarray(Image.open(tmp_path / "m.png"))
    assert img.shape == (9, 12, 4)
    assert (img[3:6, 6:9, 3] == 0).all()
    assert (img[0:3, 0:3, 3] == 255).all()
    run("render", "--map", tmp_path / "m.asc", "--out", tmp_path / "n.png", "--scale", 3)
    assert (tmp_path / "m.png").read_bytes() == (tmp_path / "n.png").read_bytes()


def test_render_constant_is_single_colour(tmp_path):
    write_asc(tmp_path / "c.asc", DemGrid(np.full((4, 5), 2.0), 0, 0, 1.0))
    run("render", "--map", tmp_path / "c.asc", "--out", tmp_path / "c.png")
    img = np.asarray(Image.open(tmp_path / "c.png"))
    assert img.shape == (16, 20, 4)
    assert len(np.unique(img.reshape(-1, 4), axis=0)) == 1


def test_render_bad_palette(tmp_path, dem_file, capsys):
    assert run("render", "--map", dem_file, "--out", tmp_path / "x.png", "--palette", "nope") == 1
