import json
import math

import numpy as np
import pytest

from uncertlab import (
    BoundCheck,
    GridSpec,
    ParameterError,
    Report,
    TAGS,
    WaveFunction,
    ceiling_check,
    floor_check,
    gaussian,
    load_density,
    load_wavefunction,
    report_to_dict,
    save_density,
    save_wavefunction,
    write_checks_csv,
    write_plotdata,
    write_report_json,
    write_series_csv,
)


class TestBoundCheck:
    def test_rejects_unknown_tag(self):
        with pytest.raises(ParameterError):
            BoundCheck(tag="not-a-tag", lhs=1.0, rhs=0.0, passed=True, margin=1.0)

    def test_every_tag_has_a_description(self):
        for tag, desc in TAGS.items():
            assert isinstance(desc, str) and len(desc) > 10
            assert "." in tag

    def test_floor_semantics(self):
        assert floor_check("prep.stddev-product", 1.0, 0.5).passed
        assert not floor_check("prep.stddev-product", 0.4, 0.5).passed
        # round-off slack: barely below the floor still passes
        assert floor_check("prep.stddev-product", 0.5 - 1e-12, 0.5).passed

    def test_ceiling_semantics(self):
        assert ceiling_check("lp.probsum", 1.2, 1.5).passed
        assert not ceiling_check("lp.probsum", 1.6, 1.5).passed

    def test_coerces_numpy_scalars(self):
        chk = floor_check("prep.stddev-product", np.float64(1.0), np.float64(0.5))
        assert type(chk.lhs) is float
        assert type(chk.passed) is bool
        json.dumps(chk.margin)


class TestReportWriters:
    def make_report(self):
        return Report(
            name="demo",
            params={"a": 0.5},
            quantities={"product": 0.5000000000000001},
            checks=(floor_check("prep.stddev-product", 0.5000000000000001, 0.5),),
            notes={"comment": "reference run"},
        )

    def test_dict_shape_and_pass_flag(self):
        d = report_to_dict(self.make_report())
        assert d["all_passed"] is True
        assert d["checks"][0]["tag"] == "prep.stddev-product"

    def test_json_is_deterministic(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        write_report_json(p1, self.make_report())
        write_report_json(p2, self.make_report())
        assert p1.read_bytes() == p2.read_bytes()
        parsed = json.loads(p1.read_text())
        assert parsed["quantities"]["product"] == 0.5000000000000001

    def test_checks_csv_roundtrip(self, tmp_path):
        path = tmp_path / "checks.csv"
        chk = floor_check("cov.stderr-product", 0.5000000000000001, 0.5)
        write_checks_csv(path, [chk])
        lines = path.read_text().splitlines()
        assert lines[0] == "tag,lhs,rhs,passed,margin"
        tag, lhs, rhs, passed, margin = lines[1].split(",")
        assert tag == "cov.stderr-product"
        assert float(lhs) == chk.lhs
        assert passed == "1"

    def test_series_csv_preserves_float_repr(self, tmp_path):
        path = tmp_path / "series.csv"
        write_series_csv(path, ["x", "y"], [(0.1, 1.0 / 3.0), (0.2, 2.0 / 3.0)])
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y"
        assert lines[1].split(",")[1] == repr(1.0 / 3.0)

    def test_plotdata_blocks_and_comments(self, tmp_path):
        path = tmp_path / "grid.dat"
        write_plotdata(
            path,
            ["q", "p", "w"],
            [[(0.0, 0.0, 1.0), (0.0, 1.0, 2.0)], [(1.0, 0.0, 3.0)]],
            comments=["demo block file"],
        )
        text = path.read_text()
        lines = text.splitlines()
        assert lines[0] == "# demo block file"
        assert lines[1] == "# q p w"
        assert "" in lines
        data = np.loadtxt(path)
        assert data.shape == (3, 3)


class TestWaveFunctionFiles:
    def test_roundtrip_bitexact(self, tmp_path, grid):
        psi = gaussian(grid, 0.5, b=0.2, shift=0.3, boost=-0.7)
        path = tmp_path / "psi.csv"
        save_wavefunction(path, psi)
        back = load_wavefunction(path)
        assert back.grid == psi.grid
        assert back.rep == psi.rep
        assert np.array_equal(back.amplitudes, psi.amplitudes)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.csv"
        path.write_text("x,re,im\n0.0,1.0,0.0\n")
        with pytest.raises(ParameterError):
            load_wavefunction(path)

    def test_rejects_truncated_file(self, tmp_path, grid):
        psi = gaussian(grid, 0.5)
        path = tmp_path / "psi.csv"
        save_wavefunction(path, psi)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-5]) + "\n")
        with pytest.raises(ParameterError):
            load_wavefunction(path)


class TestDensityFiles:
    def test_roundtrip_with_meta(self, tmp_path):
        coords = np.linspace(-1, 1, 9)
        weights = np.exp(-(coords**2))
        path = tmp_path / "dens.csv"
        save_density(path, coords, weights, meta={"kind": "position", "eps": 0.05})
        c, w, meta = load_density(path)
        assert np.array_equal(c, coords)
        assert np.array_equal(w, weights)
        assert meta == {"kind": "position", "eps": 0.05}

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.csv"
        path.write_text("coordinate,density\n0.0,1.0\n")
        with pytest.raises(ParameterError):
            load_density(path)
