import json

import numpy as np
import pytest
from PIL import Image

from conftest import ellipse_mask
from softfocus import __version__
from softfocus.cli import main
from softfocus.fileio import load_clicks, load_field, read_robustness_csv, save_clicks


@pytest.fixture
def square_clickfile(tmp_path):
    path = tmp_path / "points.json"
    save_clicks(path, [(5, 5), (5, 26), (26, 5), (26, 26)], grid=(32, 32))
    return path


@pytest.fixture
def ellipse_png(tmp_path):
    mask = ellipse_mask((96, 96), (48, 48), (28, 34))
    path = tmp_path / "mask.png"
    Image.fromarray(mask.astype(np.uint8) * 255, mode="L").save(path)
    return path


class TestEncodeCommand:
    def test_encode_square(self, tmp_path, square_clickfile, capsys):
        out = tmp_path / "field.sff"
        assert main(["encode", "--points", str(square_clickfile), "--out", str(out)]) == 0
        fld = load_field(out)
        assert fld.shape == (32, 32)
        assert fld.max() == 1.0
        assert "encoded 4 extreme points" in capsys.readouterr().out

    def test_encode_with_explicit_size_and_png(self, tmp_path, square_clickfile):
        out = tmp_path / "field.sff"
        png = tmp_path / "view.png"
        code = main([
            "encode", "--points", str(square_clickfile), "--size", "40x48",
            "--out", str(out), "--png", str(png),
        ])
        assert code == 0
        assert load_field(out).shape == (40, 48)
        assert png.exists()

    def test_encode_without_grid_fails(self, tmp_path):
        path = tmp_path / "points.json"
        save_clicks(path, [(5, 5), (20, 20)])
        code = main(["encode", "--points", str(path), "--out", str(tmp_path / "f.sff")])
        assert code == 2

    def test_missing_file_is_data_error(self, tmp_path):
        code = main(["encode", "--points", str(tmp_path / "nope.json"), "--out", str(tmp_path / "f.sff")])
        assert code == 2


class TestExtractPointsCommand:
    def test_deterministic_output(self, tmp_path, ellipse_png):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        argv = ["extract-points", "--mask", str(ellipse_png), "--num", "4", "--noise", "0"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_noise_seeded(self, tmp_path, ellipse_png, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        c = tmp_path / "c.json"
        base = ["extract-points", "--mask", str(ellipse_png), "--noise", "10"]
        assert main(base + ["--seed", "5", "--out", str(a)]) == 0
        assert "seed: 5" in capsys.readouterr().out
        assert main(base + ["--seed", "5", "--out", str(b)]) == 0
        assert main(base + ["--seed", "6", "--out", str(c)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_three_points(self, tmp_path, ellipse_png):
        out = tmp_path / "p.json"
        assert main(["extract-points", "--mask", str(ellipse_png), "--num", "3", "--out", str(out)]) == 0
        doc = load_clicks(out)
        assert doc.extreme_points.shape == (3, 2)
        assert doc.seed == 0

    def test_clickfile_feeds_encode(self, tmp_path, ellipse_png):
        points = tmp_path / "p.json"
        field = tmp_path / "f.sff"
        assert main(["extract-points", "--mask", str(ellipse_png), "--out", str(points)]) == 0
        assert main(["encode", "--points", str(points), "--out", str(field)]) == 0
        assert load_field(field).shape == (96, 96)


class TestSimulateSessionCommand:
    def test_oracle_session_report(self, tmp_path, ellipse_png):
        report = tmp_path / "report.json"
        code = main([
            "simulate-session", "--mask", str(ellipse_png), "--segmenter", "oracle",
            "--flip-blobs", "2", "--flip-size", "36", "--target-iou", "1.0",
            "--seed", "3", "--report", str(report),
        ])
        assert code == 0
        doc = json.loads(report.read_text())
        assert doc["terminal"] == "target_reached"
        assert doc["final_iou"] == 1.0
        assert doc["corrective_clicks"] == 2
        assert doc["segmenter"] == "oracle"
        assert doc["seed"] == 3

    def test_threshold_session(self, tmp_path, ellipse_png):
        report = tmp_path / "report.json"
        code = main([
            "simulate-session", "--mask", str(ellipse_png), "--segmenter", "threshold",
            "--level", "0.25", "--target-iou", "0.8", "--report", str(report),
        ])
        assert code == 0
        doc = json.loads(report.read_text())
        assert doc["steps"][0]["click_kind"] == "EP"


class TestRobustnessCommand:
    def test_zero_magnitude_zero_columns(self, tmp_path):
        configs = tmp_path / "configs.json"
        configs.write_text(json.dumps([
            {"id": "sq", "points": [[0, 0], [0, 100], [100, 0], [100, 100]]}
        ]))
        out = tmp_path / "r.csv"
        code = main([
            "robustness", "--configs", str(configs), "--draws", "20",
            "--magnitude", "0", "--out", str(out),
        ])
        assert code == 0
        rows = read_robustness_csv(out)
        assert len(rows) == 20
        assert all(r[2] == 0.0 and r[3] == 0.0 for r in rows)

    def test_deterministic_csv(self, tmp_path):
        configs = tmp_path / "configs.json"
        configs.write_text(json.dumps([
            {"id": "sq", "points": [[0, 0], [0, 100], [100, 0], [100, 100]]}
        ]))
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        argv = ["robustness", "--configs", str(configs), "--draws", "25", "--seed", "7"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_config_file(self, tmp_path):
        configs = tmp_path / "configs.json"
        configs.write_text(json.dumps({"id": "x"}))
        code = main(["robustness", "--configs", str(configs), "--draws", "5", "--out", str(tmp_path / "r.csv")])
        assert code == 2


class TestRenderCommand:
    def test_render_roundtrip(self, tmp_path, square_clickfile):
        field = tmp_path / "f.sff"
        png = tmp_path / "f.png"
        assert main(["encode", "--points", str(square_clickfile), "--out", str(field)]) == 0
        assert main(["render", "--field", str(field), "--out", str(png)]) == 0
        img = np.asarray(Image.open(png))
        assert img.shape == (32, 32, 3)

    def test_bad_field_file(self, tmp_path):
        bad = tmp_path / "bad.sff"
        bad.write_bytes(b"garbage")
        assert main(["render", "--field", str(bad), "--out", str(tmp_path / "o.png")]) == 2


class TestUsageErrors:
    def test_unknown_flag_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["encode", "--bogus"])
        assert exc.value.code == 1
        assert "error" in capsys.readouterr().err

    def test_no_command_exits_one(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 1

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert __version__ in capsys.readouterr().out
