import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ggmperfect.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)

    return write


@pytest.fixture
def path3(files):
    return files("path3.json", {"d": 3, "edges": [[1, 2], [2, 3]]})


@pytest.fixture
def cycle4(files):
    return files("c4.json", {"d": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]})


@pytest.fixture
def cancel_delta(files):
    return files("delta.json", {"1-2": "1", "2-3": "1", "3-4": "1", "1-4": "-1"})


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_records_and_determinism(path3, capsys):
    code, out, _ = run(["sample", "--graph", path3, "--seed", "1", "--trials", "10"], capsys)
    assert code == 0
    lines = out.splitlines()
    manifest = json.loads(lines[0])["manifest"]
    assert manifest["seed"] == 1 and manifest["rng"] == "numpy.random.PCG64"
    recs = [json.loads(l) for l in lines[1:]]
    assert len(recs) == 10 and [r["seed_index"] for r in recs] == list(range(10))
    for r in recs:
        assert set(r) >= {"seed_index", "delta", "eps", "eps_max", "matrix_ref"}
        assert max(abs(Fraction(v)) for v in r["delta"].values()) == 1
    _, again, _ = run(["sample", "--graph", path3, "--seed", "1", "--trials", "10"], capsys)
    assert again == out


def test_sample_csv_and_out_file(path3, tmp_path, capsys):
    target = tmp_path / "s.csv"
    code, out, _ = run(["sample", "--graph", path3, "--trials", "3", "--format", "csv", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    text = target.read_text().splitlines()
    assert text[0].startswith("# manifest")
    assert text[1] == "seed_index,delta_1_2,delta_2_3,eps,eps_max"
    assert len(text) == 5


def test_sample_is_byte_identical_across_processes(path3, tmp_path):
    cmd = [sys.executable, "-m", "ggmperfect", "sample", "--graph", path3, "--seed", "7", "--trials", "5"]
    env = {"SOURCE_DATE_EPOCH": "1700000000", "PATH": ""}
    a = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    assert a == b and b'"timestamp":1700000000' in a


def test_perfect_identity_on_empty_graph(files, capsys):
    g = files("e.json", {"d": 3, "edges": []})
    m = files("I.json", {"n": 3, "entries": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    code, out, _ = run(["perfect", "--graph", g, "--matrix", m], capsys)
    assert code == 0 and json.loads(out)["perfect"] is True


def test_perfect_cancelling_cycle_exits_three(cycle4, files, capsys):
    e = "1/10"
    rows = [["1", e, "0", "-" + e], [e, "1", e, "0"], ["0", e, "1", e], ["-" + e, "0", e, "1"]]
    m = files("A.json", {"n": 4, "entries": rows})
    code, out, _ = run(["perfect", "--graph", cycle4, "--matrix", m], capsys)
    assert code == 3
    verdict = json.loads(out)
    assert verdict["status"] == "exact"
    assert any(w["i"] == 1 and w["j"] == 3 and w["K"] == [2, 4] for w in verdict["witnesses"])


def test_perfect_float_backend_is_indicative(path3, files, capsys):
    m = files("A.csv", "1,0.25,0\n0.25,1,0.35\n0,0.35,1\n")
    code, out, _ = run(["perfect", "--graph", path3, "--matrix", m, "--backend", "float"], capsys)
    assert code == 0 and json.loads(out)["status"] == "indicative"


def test_perfect_support_mismatch_exits_two(path3, files, capsys):
    m = files("I.csv", "1,0,0\n0,1,0\n0,0,1\n")
    code, _, err = run(["perfect", "--graph", path3, "--matrix", m], capsys)
    assert code == 2 and "support" in err


def test_check_d(cycle4, path3, files, cancel_delta, capsys):
    code, out, _ = run(["check-d", "--graph", cycle4, "--delta", cancel_delta], capsys)
    rep = json.loads(out)
    assert code == 3 and not rep["in_D"]
    assert {"i": 1, "j": 3, "t": 1, "sum": "0"} in rep["violations"]
    good = files("good.json", {"1-2": "1/2", "2-3": "7/10"})
    code, out, _ = run(["check-d", "--graph", path3, "--delta", good, "--restricted"], capsys)
    assert code == 0 and json.loads(out)["in_D"]


def test_bad_eps(cycle4, cancel_delta, path3, files, capsys):
    code, out, _ = run(["bad-eps", "--graph", cycle4, "--delta", cancel_delta], capsys)
    res = json.loads(out)
    assert code == 3 and not res["finite"] and len(res["degenerate"]) == 2
    good = files("good.json", {"1-2": "1/2", "2-3": "-7/10"})
    code, out, _ = run(["bad-eps", "--graph", path3, "--delta", good, "--decimal"], capsys)
    assert code == 0 and json.loads(out)["roots"] == []


def test_montecarlo_path_graph(path3, capsys):
    code, out, err = run(["montecarlo", "--graph", path3, "--trials", "100", "--seed", "5"], capsys)
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0].startswith("# manifest")
    header, row = lines[1].split(","), lines[2].split(",")
    assert dict(zip(header, row))["perfect_fraction"] == "1.0"


def test_cycle_lemma(files, capsys):
    H = files("H.json", {"r": 2, "arcs": []})
    w = files("w.json", {})
    code, out, _ = run(["cycle-lemma", "--digraph", H, "--weights", w], capsys)
    v = json.loads(out)
    assert code == 0 and v["det_is_zero"] and not v["has_cycles"] and v["consistent"]
    H = files("H2.json", {"r": 3, "arcs": [[1, 2], [2, 1], [1, 3], [3, 1]]})
    w = files("w2.json", {"1-2": "1", "2-1": "1", "1-3": "1", "3-1": "-1"})
    code, out, _ = run(["cycle-lemma", "--digraph", H, "--weights", w], capsys)
    v = json.loads(out)
    assert code == 0 and v["violated_t"] == [1] and not v["sums_nonzero"]
    w = files("w3.json", {"1-2": "1"})
    code, _, err = run(["cycle-lemma", "--digraph", H, "--weights", w], capsys)
    assert code == 2 and "no weight" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["sample", "--graph", "/nonexistent.json"],
        ["check-d", "--graph", "/nonexistent.json", "--delta", "/nonexistent.json"],
    ],
)
def test_missing_files_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_malformed_inputs_exit_two(files, path3, capsys):
    bad_graph = files("bad.json", {"d": 3, "edges": [[1, 2], [1, 2]]})
    assert run(["sample", "--graph", bad_graph], capsys)[0] == 2
    bad_json = files("bad2.json", "{not json")
    assert run(["sample", "--graph", bad_json], capsys)[0] == 2
    zero = files("zero.json", {"1-2": "0", "2-3": "1"})
    assert run(["check-d", "--graph", path3, "--delta", zero], capsys)[0] == 2
    floaty = files("floaty.json", {"1-2": 0.5, "2-3": 1})
    assert run(["bad-eps", "--graph", path3, "--delta", floaty], capsys)[0] == 2


def test_usage_errors_exit_two(path3, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--graph", path3, "--trials", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
