import dataclasses
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from binshape import bounds
from binshape.cli import main
from binshape.constructions import hole_lattice, square_image, theorem1_extremal
from binshape.grid import write_image

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(image, name="x.pbm", fmt="pbm"):
        path = tmp_path / name
        write_image(image, path, fmt)
        return path

    return _write


# --- analyze -------------------------------------------------------------------


def test_analyze_square(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "square5.pbm")
    doc = json.loads(out)
    assert code == 0
    assert (doc["area"], doc["boundary_length"], doc["max_ball_radius"]) == (25, 20, 2)


def test_analyze_donut(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "donut.txt")
    doc = json.loads(out)
    assert code == 0 and doc["hole_free"] is False
    (t5,) = [b for b in doc["bounds"] if b["id"] == "theorem5"]
    assert t5["applicable"] is False


def test_analyze_hole_lattice(capsys, write):
    code, out, _ = run(capsys, "analyze", write(hole_lattice(3, 2)))
    doc = json.loads(out)
    assert (doc["area"], doc["boundary_length"], doc["hole_count"]) == (364, 224, 36)


def test_analyze_document_keys_and_stability(capsys):
    _, first, _ = run(capsys, "analyze", DATA / "square5.pbm")
    _, second, _ = run(capsys, "analyze", DATA / "square5.pbm")
    assert first == second
    keys = list(json.loads(first))
    assert keys == [
        "width", "height", "area", "boundary_length", "component_count", "component_sizes",
        "largest_component", "hole_count", "hole_free", "max_ball_radius", "level_counts",
        "iboundary_lengths", "bounds",
    ]


def test_analyze_empty_image_has_null_radius(capsys, tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("...\n...\n")
    _, out, _ = run(capsys, "analyze", path)
    doc = json.loads(out)
    assert doc["max_ball_radius"] is None and doc["area"] == 0


def test_analyze_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.pbm"
    path.write_text("P1\n2 2\n1 0 1\n")
    code, out, err = run(capsys, "analyze", path)
    assert code == 2 and out == ""
    assert "line 3" in err


def test_analyze_missing_file(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", tmp_path / "nope.pbm")
    assert code == 2 and out == ""


def test_analyze_forced_format(capsys):
    code, _, _ = run(capsys, "analyze", DATA / "donut.txt", "--format", "pbm")
    assert code == 2


# --- generate ------------------------------------------------------------------


def test_generate_square_to_stdout(capsys):
    code, out, err = run(capsys, "generate", "square", "--m", 1)
    assert code == 0
    assert out == "P1\n1 1\n1\n"
    assert json.loads(err)["expected"]["boundary_length"] == 4


def test_generate_hole_lattice(capsys, tmp_path):
    path = tmp_path / "lat.pbm"
    code, out, _ = run(capsys, "generate", "hole-lattice", "--u", 3, "--c", 2, "--out", path)
    doc = json.loads(out)
    assert code == 0
    assert (doc["width"], doc["height"], doc["expected"]["area"]) == (20, 20, 364)
    code, out, _ = run(capsys, "analyze", path)
    assert json.loads(out)["area"] == 364


def test_generate_theorem2(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "theorem2", "--m", 6, "--c", 2, "--out", tmp_path / "t2.txt", "--format", "ascii")
    assert code == 0 and json.loads(out)["expected"]["boundary_length"] == 48
    assert (tmp_path / "t2.txt").read_text().startswith("###.###")


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "theorem2", "--m", "6", "--c", "4"],
        ["generate", "hole-lattice", "--u", "1", "--c", "1"],
        ["generate", "square", "--m", "0"],
        ["generate", "theorem1", "--m", "5"],
    ],
)
def test_generate_invalid_parameters(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


# --- verify --------------------------------------------------------------------


def test_verify_square(capsys, write):
    code, out, _ = run(capsys, "verify", write(square_image(5)))
    assert code == 0 and json.loads(out)["ok"] is True


def test_verify_theorem1_sharp(capsys, write):
    code, out, err = run(capsys, "verify", write(theorem1_extremal(10, 2)), "--m", 10, "--c", 2)
    assert code == 0
    assert "theorem1" in err and "sharp" in err


def test_verify_reports_violation_from_corrupted_metrics(capsys, write, monkeypatch):
    real = bounds.measure

    def corrupted(image):
        return dataclasses.replace(real(image), max_ball_radius=0)

    monkeypatch.setattr(bounds, "measure", corrupted)
    code, out, err = run(capsys, "verify", write(square_image(8)))
    doc = json.loads(out)
    assert code == 1 and doc["ok"] is False
    assert {f["id"] for f in doc["failures"]} >= {"theorem5"}
    assert "violated" in err


def test_verify_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("#.\n#x\n")
    code, _, _ = run(capsys, "verify", path)
    assert code == 2


def test_verify_needs_both_hints(capsys):
    code, _, _ = run(capsys, "verify", DATA / "square5.pbm", "--m", 5)
    assert code == 2


# --- sweep ---------------------------------------------------------------------


def test_sweep_1x1(capsys):
    code, out, _ = run(capsys, "sweep", "--width", 1, "--height", 1)
    doc = json.loads(out)
    assert code == 0 and doc["images_checked"] == 2 and doc["violation_count"] == 0


def test_sweep_cap(capsys):
    code, out, _ = run(capsys, "sweep", "--width", 5, "--height", 6)
    assert code == 2 and out == ""


def test_sweep_bad_jobs(capsys):
    code, _, _ = run(capsys, "sweep", "--width", 2, "--height", 2, "--jobs", 0)
    assert code == 2


def test_sweep_jobs_independent(capsys):
    _, one, _ = run(capsys, "sweep", "--width", 3, "--height", 3, "--jobs", 1)
    _, many, _ = run(capsys, "sweep", "--width", 3, "--height", 3, "--jobs", 8)
    assert one == many


def test_usage_error_exit_code(capsys):
    assert main(["sweep"]) == 2
    assert main([]) == 2


# --- entry points ---------------------------------------------------------------


def _python(*args, env=None):
    return subprocess.run([sys.executable, *args], capture_output=True, text=True, env=env)


def test_module_entry_point():
    proc = _python("-m", "binshape", "generate", "square", "--m", "2")
    assert proc.returncode == 0 and proc.stdout == "P1\n2 2\n1 1\n1 1\n"


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, BINSHAPE_DISABLE_NUMBA="1")
    code = "from binshape import kernels; print(kernels.BACKEND)"
    assert _python("-c", code, env=env).stdout.strip() == "numpy"
    env.pop("BINSHAPE_DISABLE_NUMBA")
    expected = "numba" if _python("-c", "import numba").returncode == 0 else "numpy"
    assert _python("-c", code, env=env).stdout.strip() == expected


def test_backends_give_identical_analysis(tmp_path):
    path = tmp_path / "lat.pbm"
    write_image(hole_lattice(3, 1), path, "pbm")
    env = dict(os.environ, BINSHAPE_DISABLE_NUMBA="1")
    slow = _python("-m", "binshape", "analyze", str(path), env=env)
    fast = _python("-m", "binshape", "analyze", str(path))
    assert slow.returncode == fast.returncode == 0
    assert slow.stdout == fast.stdout
