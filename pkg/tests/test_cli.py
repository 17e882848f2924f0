import math
import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergerflow import __version__
from bergerflow.cli import main
from bergerflow.export import CSV_COLUMNS, dumps_kv, loads_kv, read_csv


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def tree(d):
    return {name: read(os.path.join(d, name)) for name in sorted(os.listdir(d))}


@pytest.fixture
def fixed_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


def test_geodesic_csv(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["geodesic", "--c", "5", "--theta", "1.0472", "--t-end", "10", "--n", "1000", "--out", str(out)]) == 0
    header, rows = read_csv(out.read_text())
    assert tuple(header) == CSV_COLUMNS
    assert len(rows) == 1000
    assert rows[0][0] == 0.0 and rows[-1][0] == 10.0
    col = header.index("C")
    assert max(r[col] for r in rows) - min(r[col] for r in rows) <= 1e-15
    assert abs(rows[0][col] - math.cos(1.0472)) <= 1e-15
    m = loads_kv((tmp_path / "g.csv.manifest").read_text())
    assert m["command"] == "geodesic" and m["version"] == __version__
    assert m["params"]["c"] == 5.0 and m["params"]["n"] == 1000


def test_csv_values_round_trip(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["magnetic", "--c", "2.5", "--q", "0.3", "--n", "50", "--out", str(out)]) == 0
    text = out.read_text()
    header, rows = read_csv(text)
    assert "\r" not in text and text.endswith("\n")
    body = text.splitlines()[1:]
    for line, row in zip(body, rows):
        assert line == ",".join(repr(x) for x in row)


def test_magnetic_at_zero_charge_matches_geodesic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    common = ["--c", "5", "--theta", "0.7", "--psi", "0.2", "--t-end", "7", "--n", "300"]
    assert main(["geodesic", *common, "--out", str(a)]) == 0
    assert main(["magnetic", "--q", "0", *common, "--out", str(b)]) == 0
    assert read(a) == read(b)


def test_stdout_output(capsys):
    assert main(["magnetic", "--n", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 4


def test_omega_is_normalized_with_warning(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["geodesic", "--omega", "0,3,4", "--n", "2", "--out", str(out)]) == 0
    assert "normalized" in capsys.readouterr().err
    header, rows = read_csv(out.read_text())
    assert rows[0][header.index("B")] == pytest.approx(0.6) and rows[0][header.index("C")] == pytest.approx(0.8)


def test_domain_error(capsys):
    assert main(["geodesic", "--c", "-4"]) == 2
    assert "c must exceed -3" in capsys.readouterr().err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["geodesic", "--n", "0"])
    assert exc.value.code == 2
    assert main(["geodesic", "--omega", "0,0,0"]) == 2
    capsys.readouterr()


def test_verify_curvature(capsys):
    assert main(["verify", "--suite", "curvature", "--c", "5"]) == 0
    out = capsys.readouterr().out
    assert "PASS curvature[c=5.0]" in out
    assert "K12=5.0" in out or "K12=5.00000000" in out
    assert "scal=14.0" in out or "scal=14.0000" in out
    assert "1/1 checks passed" in out


def test_verify_lorentz_with_report(tmp_path, capsys):
    report = tmp_path / "r.kv"
    assert main(["verify", "--suite", "lorentz", "--c", "5", "--q", "0.7", "--theta", "1.0", "--report", str(report)]) == 0
    assert "1/1 checks passed" in capsys.readouterr().out
    m = loads_kv(report.read_text())
    assert m["report"]["passed"] is True
    assert m["report"]["checks"]["0"]["deviation"] <= 1e-8


def test_verify_failure_exit_code(capsys):
    assert main(["verify", "--suite", "gyrostat", "--c", "5", "--q", "1", "--theta", "1", "--quiet"]) == 1
    assert "checks passed" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv,key,expected",
    [
        (["diameter", "--c", "5"], "diameter", math.pi / 2),
        (["lambda", "--c", "5", "--theta", "0"], "lambda", 4.0),
        (["length-bound", "--c", "1", "--theta", "0.3"], "length_bound", 2 * math.pi),
    ],
)
def test_analyze_scalars(capsys, argv, key, expected):
    assert main(["analyze", *argv]) == 0
    assert loads_kv(capsys.readouterr().out)[key] == pytest.approx(expected, abs=1e-14)


def test_analyze_periodicity(capsys):
    assert main(["analyze", "period-magnetic", "--q", "4", "--theta", "0"]) == 0
    r = loads_kv(capsys.readouterr().out)
    assert r["rational"] == "3/1" and r["periodic"] is True and r["verdict"] == "yes"
    assert main(["analyze", "period-geodesic", "--c", "1"]) == 0
    r = loads_kv(capsys.readouterr().out)
    assert r["verdict"] == "degenerate" and r["period"] == pytest.approx(2 * math.pi)


def test_analyze_conjugate(capsys):
    assert main(["analyze", "conjugate", "--c=-3", "--theta", str(math.pi / 2), "--n", "2"]) == 0
    r = loads_kv(capsys.readouterr().out)
    assert r["roots"][0] == pytest.approx(8.986818915818128, abs=1e-12)
    assert r["lambda"] <= 1e-30 and "roots_rescaled" not in r
    assert main(["analyze", "conjugate", "--c", "5", "--theta", "1", "--n", "3"]) == 0
    r = loads_kv(capsys.readouterr().out)
    assert r["roots_rescaled"][0] == pytest.approx(r["roots"][0] / math.sqrt(r["lambda"]))
    assert r["pi_family"] == pytest.approx([math.pi, 2 * math.pi, 3 * math.pi])


def test_analyze_domain_error(capsys):
    assert main(["analyze", "diameter", "--c=-5"]) == 2
    assert "c must exceed -3" in capsys.readouterr().err


def test_sweep_counts_and_index(tmp_path, fixed_epoch, capsys):
    out = tmp_path / "s"
    argv = ["sweep", "--c=-2,1,5", "--q", "0,0.5,1", "--theta", "0,0.5,1", "--n", "20", "--out", str(out)]
    assert main(argv) == 0
    names = os.listdir(out)
    assert len([n for n in names if n.endswith(".csv")]) == 27
    assert "index.manifest" in names
    idx = loads_kv((out / "index.manifest").read_text())
    assert len(idx["tuples"]) == 27 and idx["failed"] == []
    assert all(e["lorentz_residual"] <= 1e-12 for e in idx["tuples"].values())
    assert "27/27 tuples ok" in capsys.readouterr().out


def test_sweep_bit_identical_runs(tmp_path, fixed_epoch):
    argv = ["--c=-2,5", "--q", "0,1", "--theta", "0.3,1.2", "--n", "30"]
    assert main(["sweep", *argv, "--out", str(tmp_path / "a")]) == 0
    assert main(["sweep", *argv, "--out", str(tmp_path / "b"), "--workers", "3"]) == 0
    assert tree(tmp_path / "a") == tree(tmp_path / "b")


def test_sweep_data_files_identical_without_fixed_epoch(tmp_path, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    argv = ["--c", "5", "--q", "0,1", "--theta", "0.3", "--n", "30"]
    assert main(["sweep", *argv, "--out", str(tmp_path / "a")]) == 0
    assert main(["sweep", *argv, "--out", str(tmp_path / "b")]) == 0
    a, b = tree(tmp_path / "a"), tree(tmp_path / "b")
    assert a.keys() == b.keys()
    for name in a:
        if name.endswith(".manifest"):
            strip = lambda s: [ln for ln in s.splitlines() if not ln.startswith(b"timestamp")]  # noqa: E731
            assert strip(a[name]) == strip(b[name])
        else:
            assert a[name] == b[name]


def test_sweep_isolates_invalid_tuple(tmp_path, fixed_epoch, capsys):
    out = tmp_path / "s"
    assert main(["sweep", "--c=-4,5", "--q", "0.5", "--theta", "1", "--n", "10", "--out", str(out)]) == 1
    idx = loads_kv((out / "index.manifest").read_text())
    assert idx["failed"] == ["t0000"]
    assert "c must exceed -3" in idx["tuples"]["t0000"]["error"]
    assert idx["tuples"]["t0001"]["status"] == "ok"
    assert (out / "t0001.csv").exists() and not (out / "t0000.csv").exists()
    assert "failed t0000" in capsys.readouterr().err


def test_sweep_unwritable_directory(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["sweep", "--c", "5", "--q", "0", "--theta", "0", "--out", str(blocker / "sub")]) == 2
    assert "not writable" in capsys.readouterr().err


def test_replay_trajectory(tmp_path, fixed_epoch):
    out = tmp_path / "m.csv"
    assert main(["magnetic", "--c", "3", "--q", "1.3", "--theta", "2", "--n", "200", "--out", str(out)]) == 0
    again = tmp_path / "again.csv"
    assert main(["replay", str(out) + ".manifest", "--out", str(again)]) == 0
    assert read(out) == read(again)


def test_replay_sweep(tmp_path, fixed_epoch):
    a = tmp_path / "a"
    assert main(["sweep", "--c", "5", "--q", "0,2", "--theta", "1", "--n", "15", "--out", str(a)]) == 0
    before = tree(a)
    assert main(["replay", str(a / "index.manifest"), "--out", str(tmp_path / "b")]) == 0
    assert tree(tmp_path / "b") == before


def test_replay_verify(tmp_path, fixed_epoch, capsys):
    report = tmp_path / "r.kv"
    assert main(["verify", "--suite", "natred", "--c", "0,5", "--report", str(report)]) == 0
    before = read(report)
    assert main(["replay", str(report)]) == 0
    assert read(report) == before
    capsys.readouterr()


keys = st.text("abcdefghij_", min_size=1, max_size=6)
leaves = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(-(10**12), 10**12),
    st.floats(allow_nan=False, allow_infinity=False),
    st.text(max_size=10),
    st.lists(st.floats(allow_nan=False, allow_infinity=False), max_size=4),
)
trees = st.recursive(leaves, lambda children: st.dictionaries(keys, children, min_size=1, max_size=4), max_leaves=12)


@given(st.dictionaries(keys, trees, min_size=1, max_size=5))
def test_manifest_round_trip(d):
    assert loads_kv(dumps_kv(d)) == d
    assert dumps_kv(loads_kv(dumps_kv(d))) == dumps_kv(d)


def test_manifest_rejects_unrepresentable():
    with pytest.raises(ValueError):
        dumps_kv({"a.b": 1})
    with pytest.raises(ValueError):
        dumps_kv({"a": {}})
    with pytest.raises(ValueError):
        dumps_kv({"x": float("nan")})
