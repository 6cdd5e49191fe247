import json

import numpy as np
import pytest

from voliso import write_polytope
from voliso.cli import main
from voliso.shapes import cube, regular_simplex


@pytest.fixture()
def cube_file(tmp_path):
    path = tmp_path / "cube.json"
    write_polytope(path, cube(2))
    return str(path)


@pytest.fixture()
def square_system_file(tmp_path):
    path = tmp_path / "system.json"
    path.write_text(json.dumps({
        "dim": 2,
        "vectors": [[1, 0], [-1, 0], [0, 1], [0, -1]],
        "weights": [0.5, 0.5, 0.5, 0.5],
    }))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestJohnCommand:
    def test_cube_decomposition(self, capsys, cube_file, tmp_path):
        out_path = tmp_path / "report.json"
        code, _, _ = run(capsys, ["john", "--input", cube_file, "--symmetric",
                                  "--out", str(out_path)])
        assert code == 0
        report = json.loads(out_path.read_text())
        assert np.allclose(report["decomposition"]["weights"], 0.5, atol=1e-6)
        assert report["residuals"]["frobenius"] <= 1e-8
        assert report["residuals"]["kkt"] <= 1e-8

    def test_triangle_decomposition(self, capsys, tmp_path):
        path = tmp_path / "tri.json"
        write_polytope(path, regular_simplex(2))
        code, out, _ = run(capsys, ["john", "--input", str(path)])
        assert code == 0
        report = json.loads(out)
        assert np.allclose(report["decomposition"]["weights"], 2 / 3, atol=1e-6)
        assert report["residuals"]["barycenter"] <= 1e-8

    def test_unbounded_input_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "dim": 2, "kind": "H",
            "rows": [[1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]]}))
        code, _, err = run(capsys, ["john", "--input", str(path)])
        assert code == 2
        assert "unbounded" in err

    def test_missing_file_exits_2(self, capsys):
        code, _, err = run(capsys, ["john", "--input", "/nonexistent.json"])
        assert code == 2


class TestRevisoCommand:
    def test_small_batch_passes(self, capsys):
        code, out, _ = run(capsys, ["reviso", "--n", "2", "--count", "4",
                                    "--seed", "7"])
        assert code == 0
        report = json.loads(out)
        assert report["max_quotient"] <= report["constant"] * (1 + 1e-6)
        assert len(report["bodies"]) == 4

    def test_injected_simplex_attains_constant(self, capsys):
        code, out, _ = run(capsys, ["reviso", "--n", "2", "--count", "1",
                                    "--seed", "1", "--include-simplex"])
        assert code == 0
        report = json.loads(out)
        simplex_row = report["bodies"][0]
        assert simplex_row["body"] == "regular-simplex"
        assert simplex_row["quotient"] == pytest.approx(report["constant"],
                                                        rel=1e-6)

    def test_symmetric_flag(self, capsys):
        code, out, _ = run(capsys, ["reviso", "--n", "2", "--count", "3",
                                    "--seed", "2", "--symmetric"])
        assert code == 0
        report = json.loads(out)
        assert report["constant"] == 4.0

    def test_deterministic_output(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, ["reviso", "--n", "2", "--count", "3", "--seed", "5",
                     "--out", str(a)])
        run(capsys, ["reviso", "--n", "2", "--count", "3", "--seed", "5",
                     "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_violation_exits_1(self, capsys, monkeypatch):
        import voliso.cli as cli

        monkeypatch.setattr(cli, "reverse_isoperimetric_constant",
                            lambda n, symmetric: 1.0)
        code, out, _ = run(capsys, ["reviso", "--n", "2", "--count", "2",
                                    "--seed", "0"])
        assert code == 1
        assert json.loads(out)["passed"] is False


class TestLpCommand:
    def test_canonical_l1(self, capsys, tmp_path):
        path = tmp_path / "sub.json"
        path.write_text(json.dumps({"m": 2, "n": 2, "p": 1.0,
                                    "basis": [[1, 0], [0, 1]]}))
        code, out, _ = run(capsys, ["lp", "--input", str(path),
                                    "--samples", "100000"])
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert report["lewis_residual"] <= 1e-8
        assert report["l1_bound"]["limit"] == pytest.approx(1.31549, abs=1e-5)

    def test_random_subspace(self, capsys, tmp_path):
        rng = np.random.default_rng(0)
        path = tmp_path / "sub.json"
        path.write_text(json.dumps({"m": 5, "n": 2, "p": 1.5,
                                    "basis": rng.standard_normal((5, 2)).tolist()}))
        code, out, _ = run(capsys, ["lp", "--input", str(path),
                                    "--samples", "100000"])
        assert code == 0


class TestBlCommand:
    def test_square_gaussians(self, capsys, square_system_file):
        code, out, _ = run(capsys, ["bl", "--input", square_system_file,
                                    "--samples", "100000"])
        assert code == 0
        report = json.loads(out)
        ratio = report["ratio"]
        assert abs(ratio["value"] - 1.0) <= 3 * ratio["std_error"]

    def test_inline_densities(self, capsys, square_system_file):
        densities = json.dumps([{"tag": "indicator", "a": -1.0, "b": 1.0}] * 4)
        code, out, _ = run(capsys, ["bl", "--input", square_system_file,
                                    "--densities", densities,
                                    "--samples", "100000"])
        assert code == 0

    def test_bad_densities_exit_2(self, capsys, square_system_file):
        code, _, err = run(capsys, ["bl", "--input", square_system_file,
                                    "--densities", "/does/not/exist.json"])
        assert code == 2


class TestPettyCommand:
    def test_square_report(self, capsys, cube_file):
        code, out, _ = run(capsys, ["petty", "--input", cube_file,
                                    "--samples", "50000"])
        assert code == 0
        report = json.loads(out)
        cauchy = report["cauchy_surface_area"]
        assert abs(cauchy["value"] - report["exact_surface_area"]) <= \
            3 * cauchy["std_error"]
        assert report["petty"]["value"] >= report["petty_ball_minimum"] - \
            3 * report["petty"]["std_error"]

    def test_csv_format(self, capsys, cube_file):
        code, out, _ = run(capsys, ["petty", "--input", cube_file,
                                    "--samples", "20000", "--format", "csv"])
        assert code == 0
        assert out.startswith("key,value")
        assert "petty.value" in out

    def test_config_embedded(self, capsys, cube_file):
        code, out, _ = run(capsys, ["petty", "--input", cube_file,
                                    "--samples", "20000", "--seed", "11"])
        report = json.loads(out)
        assert report["config"]["seed"] == 11
        assert report["config"]["samples"] == 20000
