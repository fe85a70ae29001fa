import csv
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from heisenberg_mf import cli
from heisenberg_mf.meanfield import numeric

HEADER = ",".join(cli.CSV_HEADER)
SVG_NS = "{http://www.w3.org/2000/svg}"


def run(argv):
    try:
        return cli.main(argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_curve_time_zero(tmp_path, capsys):
    assert run(["curve", "--n", "3", "--tau-min", "0", "--tau-max", "0", "--steps", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,t,tau,log_Z,m2,m2_over_n,m2_over_n2"
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(row["m2"]) == pytest.approx(3, rel=1e-12)
    assert float(row["log_Z"]) == pytest.approx(math.log(8), rel=1e-12)


@pytest.mark.parametrize("exact", [False, True])
def test_curve_n2_closed_form(tmp_path, exact):
    out = tmp_path / "c.csv"
    argv = ["curve", "--n", "2", "--tau-min", "2", "--tau-max", "2", "--out", str(out)]
    assert run(argv + (["--exact"] if exact else [])) == 0
    (row,) = read_rows(out)
    assert float(row["t"]) == 1.0
    assert float(row["m2"]) == pytest.approx(8 / (3 + math.exp(-2)), rel=1e-11)


def test_curve_rows_sorted_and_counted(tmp_path):
    out = tmp_path / "c.csv"
    assert run(["curve", "--n", "300", "--tau-min", "0.5", "--tau-max", "4", "--steps", "8", "--out", str(out)]) == 0
    rows = read_rows(out)
    taus = [float(r["tau"]) for r in rows]
    assert len(rows) == 8 and taus == sorted(taus)
    ratios = [float(r["m2_over_n2"]) for r in rows]
    assert ratios == sorted(ratios)


def test_curve_serial_runs_are_byte_identical(tmp_path):
    argv = ["curve", "--n", "120", "--tau-min", "0.5", "--tau-max", "3", "--steps", "6"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(argv + ["--out", str(a), "--threads", "1"]) == 0
    assert run(argv + ["--out", str(b), "--threads", "4"]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["curve", "--n", "1", "--tau-min", "0", "--tau-max", "1", "--steps", "3"],
        ["curve", "--n", "5", "--tau-min", "2", "--tau-max", "1", "--steps", "3"],
        ["curve", "--n", "5", "--tau-min", "1", "--tau-max", "2", "--steps", "0"],
        ["curve", "--n", "5", "--tau-min", "-1", "--tau-max", "2", "--steps", "3"],
        ["curve", "--n", "50", "--tau-min", "1", "--tau-max", "2", "--steps", "3", "--exact"],
        ["curve", "--n", "5", "--tau-min", "1", "--tau-max", "2", "--threads", "0", "--steps", "3"],
        ["curve", "--n", "five", "--tau-min", "1", "--tau-max", "2"],
        ["nonsense"],
    ],
)
def test_curve_usage_errors(argv):
    assert run(argv) == 2


def test_curve_route_disagreement_exits_3(monkeypatch):
    monkeypatch.setattr(numeric, "ROUTE_REL_TOL", -1.0)
    assert run(["curve", "--n", "20", "--tau-min", "1", "--tau-max", "1"]) == 3


def test_verify_passes_small(capsys):
    assert run(["verify", "--max-n", "3"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_verify_rejects_large_max_n(capsys):
    assert run(["verify", "--max-n", "9"]) == 2
    assert "max-n must be <= 8" in capsys.readouterr().err


def test_verify_injected_failure(capsys):
    assert run(["verify", "--max-n", "3", "--inject-failure"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "n=3" in out


def test_simulate_fix_n2(capsys):
    assert run(["simulate", "--n", "2", "--tau", "2", "--samples", "100000", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    fix_line = next(line for line in out.splitlines() if line.startswith("fix"))
    assert abs(float(fix_line.split()[-1])) <= 3


@pytest.mark.parametrize(
    "argv",
    [
        ["simulate", "--n", "5", "--tau", "1", "--samples", "10"],
        ["simulate", "--n", "50", "--tau", "1", "--samples", "10000"],
        ["simulate", "--n", "5", "--tau", "-1", "--samples", "10000"],
    ],
)
def test_simulate_usage_errors(argv):
    assert run(argv) == 2


def test_transition_small_scan(tmp_path, capsys):
    out = tmp_path / "t.csv"
    argv = ["transition", "--n-list", "100,200,400", "--tau-min", "1", "--tau-max", "3", "--steps", "5", "--out", str(out)]
    assert run(argv) == 0
    rows = read_rows(out)
    assert len(rows) == 15
    summary = capsys.readouterr().out
    assert summary.strip().splitlines()[-1].startswith("tau_hat=")
    assert "decreasing" in summary


@pytest.mark.parametrize("n_list", ["100", "100,abc", "100,100", "1,100"])
def test_transition_usage_errors(n_list):
    assert run(["transition", "--n-list", n_list, "--tau-min", "1", "--tau-max", "3", "--steps", "3"]) == 2


def _curve_csv(tmp_path, ns, taus):
    out = tmp_path / "curve.csv"
    points = [cli.evaluate.curve_point(n, tau) for n in ns for tau in taus]
    with open(out, "w", newline="") as fh:
        cli.write_curve_csv(points, fh)
    return out


def test_svg_two_series(tmp_path):
    src = _curve_csv(tmp_path, [20, 40], [1.0, 2.0, 3.0])
    dst = tmp_path / "plot.svg"
    assert run(["svg", "--in", str(src), "--out", str(dst)]) == 0
    root = ET.parse(dst).getroot()
    polylines = root.findall(f"{SVG_NS}polyline")
    assert sorted(p.get("data-n") for p in polylines) == ["20", "40"]
    assert len(root.findall(f"{SVG_NS}line[@class='reference']")) == 1
    assert "href" not in dst.read_text()


def test_svg_single_row(tmp_path):
    src = _curve_csv(tmp_path, [10], [1.5])
    dst = tmp_path / "plot.svg"
    assert run(["svg", "--in", str(src), "--out", str(dst)]) == 0
    root = ET.parse(dst).getroot()
    assert len(root.findall(f"{SVG_NS}polyline")) == 1
    assert len(root.findall(f"{SVG_NS}circle")) == 1


def test_svg_empty_data_section(tmp_path):
    src = tmp_path / "empty.csv"
    src.write_text(HEADER + "\n")
    assert run(["svg", "--in", str(src), "--out", str(tmp_path / "x.svg")]) == 2


@pytest.mark.parametrize(
    "text",
    [
        "a,b,c\n1,2,3\n",
        HEADER + "\n3,0.1,0.3,1.0\n",
        HEADER + "\n3,0.1,0.3,1.0,2.0,x,0.2\n",
        "",
    ],
)
def test_svg_malformed_csv(tmp_path, text):
    src = tmp_path / "bad.csv"
    src.write_text(text)
    assert run(["svg", "--in", str(src), "--out", str(tmp_path / "x.svg")]) == 2


def test_svg_missing_file(tmp_path):
    assert run(["svg", "--in", str(tmp_path / "nope.csv")]) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heisenberg_mf", "curve", "--n", "2", "--tau-min", "0", "--tau-max", "0"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.startswith("n,t,tau,log_Z")
