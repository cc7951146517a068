import csv
import io
import json
import subprocess
import sys

import pytest

from quandlekit.algebra import dihedral_quandle, parse_quandle
from quandlekit.cli import main, render_record


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_quandle_make_writes_r3(tmp_path, capsys):
    path = tmp_path / "r3.qnd"
    code, _, _ = run(capsys, "quandle", "make", "dihedral", 3, "-o", path)
    assert code == 0
    assert parse_quandle(path.read_text()) == dihedral_quandle(3)


def test_quandle_check_names_the_failing_axiom(tmp_path, capsys):
    bad = tmp_path / "bad.qnd"
    bad.write_text("quandle 2\n0 0\n0 1\n")
    code, out, _ = run(capsys, "quandle", "check", bad)
    assert code == 1 and "II" in out
    code, out, _ = run(capsys, "quandle", "check", "r3.qnd")
    assert code == 0


def test_extend_then_iso_with_r4(tmp_path, capsys):
    e = tmp_path / "e.qnd"
    assert run(capsys, "extend", "--quandle", "t2.qnd", "--group", 2, "--cocycle", "phi_t2.coc", "-o", e)[0] == 0
    code, out, _ = run(capsys, "quandle", "iso", e, "r4.qnd")
    assert code == 0 and out.startswith("isomorphic") and "->" in out
    code, out, _ = run(capsys, "quandle", "iso", "t3.qnd", "r3.qnd")
    assert code == 1 and "not isomorphic" in out


@pytest.mark.parametrize("argv,expected", [
    (["--quandle", "r3.qnd", "--degree", 2, "--coeff", "Z3", "--cohomology", "--theory", "Q"], "0"),
    (["--quandle", "r3.qnd", "--degree", 3, "--coeff", "Z3", "--cohomology"], "Z_3"),
    (["--quandle", "x4.qnd", "--degree", 3, "--coeff", "Z2", "--cohomology"], "Z_2^3"),
    (["--quandle", "x4.qnd", "--degree", 2, "--coeff", "Z2", "--cohomology"], "Z_2"),
    (["--quandle", "r3.qnd", "--degree", 3, "--coeff", "Z"], "Z_3"),
])
def test_homology_examples(capsys, argv, expected):
    code, out, _ = run(capsys, "homology", *argv)
    assert code == 0 and out.strip() == expected


@pytest.mark.parametrize("source,expected", [
    (["--family", "torus2:9"], "27"),
    (["--braid", "1 1 1", "--strands", 2], "9 + 18t"),
    (["--braid", "1 1 1", "--strands", 2, "--mirror"], "9 + 18t^2"),
    (["--family", "doubled:4"], "27"),
])
def test_invariant_examples(capsys, source, expected):
    code, out, _ = run(capsys, "invariant", *source, "--quandle", "r3.qnd", "--cocycle", "xi", "--shadow")
    assert code == 0 and out.strip() == expected


def test_invariant_from_pd_file(tmp_path, capsys):
    pd = tmp_path / "k.pd"
    pd.write_text("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]\n")
    code, out, _ = run(capsys, "invariant", "--pd", f"@{pd}", "--quandle", "r3.qnd", "--cocycle", "xi",
                       "--shadow")
    assert code == 0 and out.strip() in ("9 + 18t", "9 + 18t^2")


def test_json_output_round_trips(capsys):
    args = ["invariant", "--family", "torus2:3", "--quandle", "r3.qnd", "--cocycle", "xi", "--shadow"]
    _, text, _ = run(capsys, *args)
    _, js, _ = run(capsys, *args, "--format", "json")
    record = json.loads(js)
    assert set(record) >= {"name", "quandle", "cocycle", "shadow", "mirror", "value", "colorings"}
    assert record["colorings"] == 9 and record["shadow"] is True
    assert render_record(record) == text.strip()


def test_cocycle_degree_mismatch(capsys):
    code, _, err = run(capsys, "invariant", "--family", "torus2:3", "--quandle", "r3.qnd", "--cocycle", "xi")
    assert code == 2 and "degree" in err
    code, _, err = run(capsys, "invariant", "--family", "torus2:3", "--quandle", "x4.qnd", "--cocycle", "xi")
    assert code == 2


def test_non_cocycle_is_a_domain_error(tmp_path, capsys):
    c = tmp_path / "bad.coc"
    c.write_text("cochain deg=2 mod=3 quandle=3\n0 1 : 1\n")
    code, _, err = run(capsys, "invariant", "--family", "torus2:3", "--quandle", "r3.qnd", "--cocycle", c)
    assert code == 1 and "cocycle" in err


def test_missing_file_and_bad_pd_are_usage_errors(capsys):
    assert run(capsys, "homology", "--quandle", "nope.qnd", "--degree", 2)[0] == 2
    code, _, err = run(capsys, "invariant", "--pd", "X[1,2,3", "--quandle", "r3.qnd", "--cocycle", "xi",
                       "--shadow")
    assert code == 2 and "error" in err


def _table_args(tmp_path, *extra, src="knots.csv"):
    return ["table", "run", "--input", src, "--quandle", "r3.qnd", "--cocycle", "xi", "--shadow",
            "--cache-dir", tmp_path / "cache", *extra]


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table_run_and_warm_cache(tmp_path, capsys):
    code, cold, err = run(capsys, *_table_args(tmp_path), "-v")
    assert code == 0 and "cache hits: 0/5" in err
    values = {r["name"]: r["value"] for r in _rows(cold)}
    assert values["6_1"] == "27" and values["4_1"] == "9"
    for name in ("3_1", "7_4", "7_7"):
        assert values[name] in ("9 + 18t", "9 + 18t^2")
    code, warm, err = run(capsys, *_table_args(tmp_path), "-v")
    assert code == 0 and warm == cold and "cache hits: 5/5" in err


def test_table_cache_is_keyed_by_content(tmp_path, capsys):
    src = tmp_path / "renamed.csv"
    src.write_text('name,pd\ntrefoil,"X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"\n')
    run(capsys, *_table_args(tmp_path, src=src))
    other = tmp_path / "again.csv"
    other.write_text(src.read_text().replace("trefoil", "another name"))
    _, out, err = run(capsys, *_table_args(tmp_path, "-v", src=other))
    assert "cache hits: 1/1" in err and _rows(out)[0]["name"] == "another name"


def test_table_mirror_flips_chiral_rows(tmp_path, capsys):
    _, plain, _ = run(capsys, *_table_args(tmp_path))
    _, mirrored, _ = run(capsys, *_table_args(tmp_path, "--mirror"))
    flip = {"9 + 18t": "9 + 18t^2", "9 + 18t^2": "9 + 18t", "27": "27", "9": "9"}
    for a, b in zip(_rows(plain), _rows(mirrored)):
        assert flip[a["value"]] == b["value"]


def test_table_malformed_row(tmp_path, capsys):
    src = tmp_path / "t.csv"
    src.write_text('name,pd\nok,"X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"\nbroken,"X[1,2,3,4];X[1,2,3,4]"\n'
                   'also,"X[6,4,1,3];X[4,2,5,1];X[2,6,3,5]"\n')
    code, out, _ = run(capsys, *_table_args(tmp_path, src=src))
    rows = _rows(out)
    assert code == 1
    assert [r["name"] for r in rows] == ["ok", "broken", "also"]
    assert rows[1]["error"] and not rows[1]["value"]
    # the first trefoil is left-handed in our sign convention, the last one right-handed
    assert rows[0]["value"] == "9 + 18t^2" and not rows[0]["error"]
    assert rows[2]["value"] == "9 + 18t"


def test_table_jobs_are_deterministic(tmp_path, capsys):
    out = tmp_path / "serial.csv"
    par = tmp_path / "parallel.csv"
    run(capsys, *_table_args(tmp_path / "a", "--out", out))
    run(capsys, *_table_args(tmp_path / "b", "--out", par, "--jobs", 3))
    assert out.read_bytes() == par.read_bytes()


def test_table_json(tmp_path, capsys):
    _, out, _ = run(capsys, *_table_args(tmp_path, "--format", "json"))
    records = json.loads(out)
    assert [r["name"] for r in records] == ["3_1", "4_1", "6_1", "7_4", "7_7"]
    assert all(render_record(r) for r in records)


def test_cache_dir_environment_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CACHE_DIR", str(tmp_path / "envcache"))
    run(capsys, "table", "run", "--input", "knots.csv", "--quandle", "r3.qnd", "--cocycle", "xi", "--shadow")
    assert len(list((tmp_path / "envcache").glob("*.json"))) == 5


def test_obstruction_on_trivial_base(tmp_path, capsys):
    lift = tmp_path / "lift.qnd"
    code, out, _ = run(capsys, "obstruction", "--quandle", "t2.qnd", "--ses", "2,4,2", "--section", "0:0,1:1",
                       "--cocycle", "phi_t2.coc", "--lift-out", lift)
    assert code == 0 and "coboundary: yes" in out and "quandle axioms ok" in out
    assert len(parse_quandle(lift.read_text())) == 8


def test_obstruction_on_x4(tmp_path, capsys):
    code, out, _ = run(capsys, "obstruction", "--quandle", "x4.qnd", "--ses", "2,4,2", "--section", "0:0,1:1",
                       "--cocycle", "phi_x4.coc", "--format", "json")
    record = json.loads(out)
    assert code == 0 and record["cocycle"] is True and record["coboundary"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quandlekit", "invariant", "--family", "torus2:3",
                           "--quandle", "r3.qnd", "--cocycle", "xi", "--shadow"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "9 + 18t"
