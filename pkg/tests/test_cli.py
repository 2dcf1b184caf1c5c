import json

import pytest

from apfree.cli import main
from apfree.lifting import lift_size


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_area(capsys):
    code, out, _ = run(capsys, "area")
    assert code == 0
    assert out.splitlines() == ["7/24", "T1 71/288", "T2 13/288"]
    code, out, _ = run(capsys, "area", "--format", "json")
    assert json.loads(out) == {"total": "7/24", "T1": "71/288", "T2": "13/288", "integration_agrees": True}


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--m", "12", "--alpha", "1/576", "--beta", "1/576")
    obj = json.loads(out)
    assert code == 0 and obj["m"] == 12 and obj["d"] == 2
    assert len(obj["points"]) == 43
    assert obj["config"]["alpha"] == "1/576"


def test_explicit_zero_parameters(capsys):
    code, out, _ = run(capsys, "construct", "--m", "30", "--alpha", "0", "--beta", "0")
    assert code == 0 and json.loads(out)["alpha"] == "0/1"


def test_verify_apfree_example(capsys, tmp_path):
    _, out, _ = run(capsys, "construct", "--m", "2", "--alpha", "1/24", "--beta", "1/24")
    s = write(tmp_path, "s.json", out)
    _, out, _ = run(capsys, "lift", "--input", s, "--ell", "2")
    a = write(tmp_path, "a.json", out)
    assert json.loads(out)["lift"] == {"n": 8, "n_prime": 8, "padding": 0, "size": 6}
    code, out, _ = run(capsys, "verify-apfree", "--input", a, "--format", "text")
    assert code == 0 and out.strip() == "6 points, 0 progressions"


def test_pipeline_for_small_moduli(capsys, tmp_path):
    for m in range(1, 13):
        _, out, _ = run(capsys, "construct", "--m", str(m), "--search")
        s = write(tmp_path, f"s{m}.json", out)
        size = len(json.loads(out)["points"])
        code, out, _ = run(capsys, "peel", "--input", s, "--assert-reducible")
        assert code == 0
        c = write(tmp_path, f"c{m}.json", out)
        code, _, _ = run(capsys, "verify-certificate", "--input", c, "--assert-reducible")
        assert code == 0
        ell = max((e for e in range(1, 8) if lift_size(size, e) <= 10**4), default=None)
        if ell is None:
            code, _, err = run(capsys, "lift", "--input", c, "--ell", "1", "--budget", "10000")
            assert code == 3 and json.loads(err)["error"] == "budget"
            continue
        code, out, _ = run(capsys, "lift", "--input", c, "--ell", str(ell))
        assert code == 0
        a = write(tmp_path, f"a{m}.json", out)
        code, out, _ = run(capsys, "verify-apfree", "--input", a)
        assert code == 0 and json.loads(out)["progressions"] == 0


def test_text_lift_and_negative_control(capsys, tmp_path):
    z3 = write(tmp_path, "z3.json", '{"m":3,"d":1,"points":[[0],[1],[2]]}')
    code, _, err = run(capsys, "lift", "--input", z3, "--ell", "1")
    assert code == 2 and "not reducible" in json.loads(err)["message"]
    code, out, err = run(capsys, "lift", "--input", z3, "--ell", "1", "--override", "--format", "text")
    assert code == 0 and json.loads(err)["info"]["size"] == 6
    t = write(tmp_path, "a.txt", out)
    code, out, _ = run(capsys, "verify-apfree", "--input", t, "--m", "3")
    rep = json.loads(out)
    assert code == 1 and not rep["progression_free"] and rep["progressions"] > 0
    code, _, _ = run(capsys, "verify-apfree", "--input", t)
    assert code == 2


def test_peel_certificate_accepted_and_tampering_rejected(capsys, tmp_path):
    s = write(tmp_path, "s.json", '{"m":5,"d":1,"points":[[0],[1],[2]]}')
    code, out, _ = run(capsys, "peel", "--input", s)
    cert = json.loads(out)
    assert cert["removed"] == [[0], [1], [2]] and cert["core"] == []
    c = write(tmp_path, "c.json", out)
    code, out, _ = run(capsys, "verify-certificate", "--input", c)
    assert code == 0 and json.loads(out)["valid"]
    cert["removed"] = [[1], [0], [2]]
    bad = write(tmp_path, "bad.json", json.dumps(cert))
    code, out, _ = run(capsys, "verify-certificate", "--input", bad)
    assert code == 1 and not json.loads(out)["valid"]


def test_peel_strategies(capsys, tmp_path):
    _, out, _ = run(capsys, "construct", "--m", "7", "--alpha", "1/336", "--beta", "1/336")
    s = write(tmp_path, "s.json", out)
    code, out, _ = run(capsys, "peel", "--input", s, "--strategy", "sorted_potential")
    assert code == 0 and json.loads(out)["core"] == []
    code, out, _ = run(capsys, "peel", "--input", s, "--strategy", "random", "--seed", "4")
    assert code == 0 and json.loads(out)["seed"] == 4
    z3 = write(tmp_path, "z3.json", '{"m":3,"d":1,"points":[[0],[1],[2]]}')
    code, out, _ = run(capsys, "peel", "--input", z3, "--assert-reducible")
    assert code == 1
    code, out, _ = run(capsys, "peel", "--input", z3, "--strategy", "relaxed")
    assert code == 0 and json.loads(out)["strategy"] == "relaxed"
    code, _, _ = run(capsys, "peel", "--input", z3, "--strategy", "sorted_potential",
                     "--alpha", "0", "--beta", "0")
    assert code == 2


def test_outputs_are_byte_identical(capsys):
    for argv in (
        ("construct", "--m", "9"),
        ("search", "--m", "11"),
        ("table", "--m-max", "5", "--format", "json"),
    ):
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first


def test_search_and_table(capsys):
    code, out, _ = run(capsys, "search", "--m", "25")
    obj = json.loads(out)
    assert code == 0 and obj["success"] and obj["count"] >= 183
    code, out, _ = run(capsys, "search", "--m", "2", "--step", "1/2", "--max-refine", "0")
    assert code == 1 and not json.loads(out)["success"]
    code, out, _ = run(capsys, "table", "--m-max", "4")
    assert code == 0 and out.splitlines()[0].startswith("m,box_size,threshold")


def test_facts_and_svg(capsys, tmp_path):
    code, out, _ = run(capsys, "facts-test", "--denominators", "12")
    assert code == 0 and json.loads(out)["ok"]
    svg = tmp_path / "t.svg"
    code, _, _ = run(capsys, "export-svg", "-o", str(svg))
    assert code == 0 and svg.read_text().startswith("<svg")
    _, out, _ = run(capsys, "construct", "--m", "6")
    s = write(tmp_path, "s.json", out)
    code, out, _ = run(capsys, "export-svg", "--input", s)
    assert code == 0 and out.count("<circle") == len(json.loads(open(s).read())["points"])


@pytest.mark.parametrize(
    "argv",
    [
        ("construct", "--m", "3", "--alpha", "0.25"),
        ("construct",),
        ("search", "--m", "-1"),
        ("verify-certificate", "--input", "/nonexistent"),
        ("facts-test", "--denominators", "a,b"),
        ("bogus",),
        ("--threads", "0", "area"),
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert json.loads(err)["exit"] == 2


def test_budget_refusal_exit_3(capsys, tmp_path):
    s = write(tmp_path, "s.json", '{"m":5,"d":1,"points":[[0],[1],[2]]}')
    code, _, err = run(capsys, "lift", "--input", s, "--ell", "3", "--budget", "10")
    assert code == 3 and json.loads(err)["error"] == "budget"


def test_stdin_is_read_once(capsys, monkeypatch):
    import io
    _, out, _ = run(capsys, "construct", "--m", "12", "--search")
    monkeypatch.setattr("sys.stdin", io.StringIO(out))
    code, cert, _ = run(capsys, "peel", "--strategy", "sorted_potential")
    assert code == 0 and json.loads(cert)["core"] == []
    monkeypatch.setattr("sys.stdin", io.StringIO(out))
    code, svg, _ = run(capsys, "export-svg", "--input", "-")
    assert code == 0 and svg.count("<circle") == len(json.loads(out)["points"])
