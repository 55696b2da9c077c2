import numpy as np
import pytest

from terrarough.asciigrid import format_asc, read_asc, read_meta, write_asc, write_meta
from terrarough.rasterize import DemGrid


def test_header_and_layout():
    g = DemGrid(np.array([[1.0, np.nan], [0.5, 1234567.0]]), 10.0, 20.5, 1.0)
    text = format_asc(g)
    assert text.splitlines() == [
        "ncols 2",
        "nrows 2",
        "xllcorner 10.0",
        "yllcorner 20.5",
        "cellsize 1.0",
        "NODATA_value -9999",
        "1 -9999",
        "0.5 1.23457e+06",
    ]


def test_roundtrip_is_stable(tmp_path, rng):
    v = rng.normal(size=(7, 5)) * 100
    v[2, 3] = np.nan
    g = DemGrid(v, 0.125, 3.0, 2.0)
    write_asc(tmp_path / "a.asc", g)
    once = read_asc(tmp_path / "a.asc")
    assert once.same_geometry(g)
    assert np.array_equal(once.nodata, g.nodata)
    ok = ~g.nodata
    assert np.allclose(once.values[ok], v[ok], rtol=1e-5)
    write_asc(tmp_path / "b.asc", once)
    assert (tmp_path / "a.asc").read_bytes() == (tmp_path / "b.asc").read_bytes()
    assert read_asc(tmp_path / "b.asc") == once


def test_reads_without_nodata_line(tmp_path):
    p = tmp_path / "n.asc"
    p.write_text("ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n3 4\n")
    g = read_asc(p)
    assert g.values.tolist() == [[3.0, 4.0]]


def test_bad_value_count(tmp_path):
    p = tmp_path / "b.asc"
    p.write_text("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n1 2 3\n")
    with pytest.raises(ValueError, match="expected 4 values"):
        read_asc(p)


def test_meta_sidecar(tmp_path):
    meta = {"descriptor": "rmsh", "window": 5, "source_cell": 1.0, "units": "m"}
    write_meta(tmp_path / "m.meta", meta)
    lines = (tmp_path / "m.meta").read_text().splitlines()
    assert lines[0] == '{"descriptor": "rmsh"}'
    assert read_meta(tmp_path / "m.meta") == meta
