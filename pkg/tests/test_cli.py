import json
import subprocess
import sys

import numpy as np
import pytest

from holderscan import dgp
from holderscan.cli import main
from holderscan.dataio import emit_histogram, ingest_curves, ingest_panel
from holderscan.errors import FormatError
from holderscan.report import DetectionReport
from holderscan.scan import Detection, DetectionSet


def write_curves(path, data, labels=None, header=None):
    lines = []
    if header is not None:
        lines.append(",".join(([""] if labels else []) + [str(h) for h in header]))
    for i, row in enumerate(data):
        cells = [f"{float(v):.12g}" for v in row]
        lines.append(",".join(([labels[i]] if labels else []) + cells))
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def ha1_curves(seed, N=200, scale=10.0):
    errors = dgp.iid_errors(N, D=21, seed=seed)
    sample = dgp.curve_sample(dgp.mean_scenario("HA1", N, 21).scaled(scale), errors)
    return sample.data


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ingest_minimal(tmp_path):
    sample, labels = ingest_curves(write_curves(tmp_path / "a.csv", np.arange(12.0).reshape(4, 3)))
    assert (sample.N, sample.D) == (4, 3)
    assert labels == ["1", "2", "3", "4"]


def test_ingest_header_grid_and_labels(tmp_path):
    data = np.random.default_rng(0).normal(size=(5, 3))
    dates = [f"2020-02-{d:02d}" for d in range(10, 15)]
    path = write_curves(tmp_path / "b.csv", data, labels=dates, header=[0.0, 0.5, 2.0])
    sample, labels = ingest_curves(path, labels=True)
    assert labels == dates
    np.testing.assert_allclose(sample.grid.points, [0.0, 0.5, 2.0])
    np.testing.assert_allclose(sample.grid.quad_weights, [0.25, 1.0, 0.75])
    np.testing.assert_allclose(sample.data, data, rtol=1e-11)


def test_ingest_errors(tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("1,2,3\n4,5,6\n7,8\n1,1,1\n2,2,2\n")
    with pytest.raises(FormatError, match="line 3"):
        ingest_curves(ragged)
    bad = tmp_path / "n.csv"
    bad.write_text("1,2,3\n4,x,6\n7,8,9\n1,1,1\n")
    with pytest.raises(FormatError, match="line 2, column 2"):
        ingest_curves(bad, header=False)
    short = tmp_path / "s.csv"
    short.write_text("1,2\n3,4\n")
    with pytest.raises(FormatError, match="at least 4"):
        ingest_curves(short)


def test_ingest_panel(tmp_path):
    ok = tmp_path / "p.csv"
    ok.write_text("n,m,y\n1,1,0.5\n1,2,0.1\n2,1,-1\n2,2,3\n3,1,0\n3,2,2\n")
    np.testing.assert_array_equal(ingest_panel(ok), [[0.5, 0.1], [-1, 3], [0, 2]])
    dup = tmp_path / "d.csv"
    dup.write_text("1,1,0.5\n1,1,0.1\n")
    with pytest.raises(FormatError, match="duplicate"):
        ingest_panel(dup)
    gap = tmp_path / "g.csv"
    gap.write_text("1,1,0\n1,2,0\n3,1,0\n3,2,0\n5,1,0\n5,2,0\n")
    with pytest.raises(FormatError, match=r"\[2, 4\]"):
        ingest_panel(gap)
    hole = tmp_path / "h.csv"
    hole.write_text("1,1,0\n1,2,0\n2,1,0\n")
    with pytest.raises(FormatError, match="missing"):
        ingest_panel(hole)


def test_report_interval_arithmetic():
    report = DetectionReport(DetectionSet([Detection(100, 7, 95.2)], q=91.09), 91.09)
    table = report.to_table()
    assert "[94," in table and "107]" in table
    assert "critical threshold q = 91.09" in table
    row = report.rows()[0]
    assert (row["lo"], row["hi"]) == (94, 107)
    assert row["hi"] - row["lo"] + 1 == 2 * row["h"]


def test_report_labels():
    labels = [f"d{i}" for i in range(1, 121)]
    report = DetectionReport(DetectionSet([Detection(100, 7, 95.2)], q=1.0), 1.0, labels=labels)
    row = report.rows()[0]
    assert (row["label"], row["lo_label"], row["hi_label"]) == ("d100", "d94", "d107")
    assert "[d94," in report.to_table()


def test_histogram(tmp_path, caplog):
    p = tmp_path / "h.csv"
    assert emit_histogram([150], p) == [(150, 1)]
    assert p.read_text() == "location,count\n150,1\n"
    emit_histogram([], p)
    assert p.read_text() == "location,count\n"
    assert "no detections" in caplog.text


def test_detect_large_signal(tmp_path, capsys):
    for seed in range(20):
        path = write_curves(tmp_path / f"s{seed}.csv", ha1_curves(seed))
        code, out, _ = run(["detect", path, "--B", "100", "--seed", str(seed)], capsys)
        assert code == 0
        rows = json.loads(out)["detections"]
        assert len(rows) == 1
        assert rows[0]["lo"] <= 100 <= rows[0]["hi"]
        assert rows[0]["gamma"] > json.loads(out)["q"]


def test_detect_table_with_dates(tmp_path, capsys):
    labels = [f"2020-{1 + i // 28:02d}-{1 + i % 28:02d}" for i in range(200)]
    path = write_curves(tmp_path / "v.csv", ha1_curves(3), labels=labels, header=np.linspace(0, 1, 21))
    code, out, _ = run(["detect", path, "--labels", "--B", "100", "--table"], capsys)
    assert code == 0
    assert "n_max" in out and "critical threshold q =" in out
    assert labels[99] in out or labels[100] in out


def test_constant_input_gives_empty_report(tmp_path, capsys):
    path = write_curves(tmp_path / "c.csv", np.ones((20, 3)))
    code, out, _ = run(["detect", path, "--B", "20"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["detections"] == [] and doc["q"] == 0


def test_threshold_output(tmp_path, capsys):
    path = write_curves(tmp_path / "t.csv", ha1_curves(1, N=60))
    code, out, _ = run(["threshold", path, "--B", "30", "--alpha", "0.1", "--replicates"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert set(doc) >= {"q", "alpha", "B", "seed", "replicates"}
    assert len(doc["replicates"]) == 30 and doc["alpha"] == 0.1


def test_panel_detect(tmp_path, capsys):
    spec = dgp.panel_scenario("HA1*", 30, M=20)
    Y = dgp.simulate_panel(spec, seed=2)
    Y[15:] += 3.0  # make a visible change
    p = tmp_path / "panel.csv"
    p.write_text("n,m,y\n" + "".join(f"{n + 1},{m + 1},{float(Y[n, m])!r}\n" for n in range(30) for m in range(20)))
    code, out, _ = run(["detect", str(p), "--panel", "--B", "40"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["cov"] == "ecdf"
    assert any(r["lo"] <= 15 <= r["hi"] for r in doc["detections"])


def test_exit_codes(tmp_path, capsys, caplog):
    path = write_curves(tmp_path / "e.csv", ha1_curves(0, N=40))
    assert run(["detect", str(tmp_path / "missing.csv")], capsys)[0] == 2
    ragged = tmp_path / "r.csv"
    ragged.write_text("1,2\n1\n1,2\n1,2\n")
    assert run(["detect", str(ragged)], capsys)[0] == 2
    assert run(["detect", path, "--weight", "poly:0.5"], capsys)[0] == 3
    assert "configuration error" in caplog.text
    assert run(["detect", path, "--index-set", "pyramid:1"], capsys)[0] == 3
    assert run(["detect", path, "--cov", "ecdf"], capsys)[0] == 3
    assert run(["detect", path, "--cov", "block:30"], capsys)[0] == 3
    assert run(["detect", path, "--alpha", "1.5"], capsys)[0] == 3
    assert run(["simulate", "--scenario", "HA7"], capsys)[0] == 3
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_stage_named_in_errors(tmp_path, capsys, caplog):
    path = write_curves(tmp_path / "e.csv", ha1_curves(0, N=40))
    run(["detect", path, "--cov", "block:30"], capsys)
    assert "covariance: block estimator" in caplog.text


def test_simulate_outputs(tmp_path, capsys):
    hist = tmp_path / "hist.csv"
    argv = ["simulate", "--scenario", "HA1", "--N", "60", "--R", "4", "--B", "30", "--jump-scale", "10"]
    code, out, _ = run(argv + ["--histogram", str(hist)], capsys)
    row = json.loads(out)
    assert code == 0 and row["power"] == 1.0 and row["strong_loc"] == 1.0
    assert hist.read_text().startswith("location,count\n")
    code, out, _ = run(["simulate", "--N", "40", "--R", "3", "--B", "20", "--format", "csv"], capsys)
    header, values = out.strip().split("\n")
    assert "size" in header.split(",") and "power" not in header


def test_histogram_mode_near_change(tmp_path, capsys):
    hist = tmp_path / "mode.csv"
    argv = ["simulate", "--scenario", "HA1", "--N", "300", "--R", "100", "--B", "30", "--jump-scale", "10",
            "--index-set", "pyramid:2", "--histogram", str(hist)]
    assert run(argv, capsys)[0] == 0
    rows = [tuple(map(int, line.split(","))) for line in hist.read_text().split("\n")[1:] if line]
    mode = max(rows, key=lambda r: r[1])[0]
    assert abs(mode - 150) <= 5


@pytest.mark.parametrize("command", ["detect", "threshold"])
def test_byte_identical_across_threads(tmp_path, capsys, command):
    path = write_curves(tmp_path / "d.csv", ha1_curves(5, N=80))
    outputs = []
    for threads in ("1", "3", "1"):
        out = tmp_path / f"{command}{threads}{len(outputs)}.json"
        assert main([command, path, "--B", "70", "--seed", "4", "--threads", threads, "-o", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "holderscan", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "detect" in proc.stdout
