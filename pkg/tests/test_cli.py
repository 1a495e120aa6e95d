import json

import pytest

from chgldpc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def layout_file(tmp_path_factory, layout3):
    path = tmp_path_factory.mktemp("cli") / "layout.json"
    path.write_text(layout3.to_json())
    return str(path)


@pytest.fixture(scope="module")
def c1_file(tmp_path_factory, layout_file):
    path = str(tmp_path_factory.mktemp("cli") / "c1.json")
    assert main(["hybridize", "--layout", layout_file, "--alpha", "2", "--component", "rep5",
                 "--output", path]) == 0
    return path


def test_construct(capsys, tmp_path):
    alist = str(tmp_path / "h.alist")
    code, out, _ = run(capsys, "--seed", "1", "construct", "--gamma", "3", "--rho", "5", "--p", "13",
                       "--girth", "8", "--alist", alist)
    assert code == 0
    d = json.loads(out)
    assert d["girth"] == 8 and d["layout"]["p"] == 13
    code, out, _ = run(capsys, "decode", "--code", alist, "--errors", "3")
    assert code == 0 and json.loads(out)["converged"]


def test_construct_refusal(capsys):
    code, _, err = run(capsys, "construct", "--gamma", "3", "--rho", "5", "--p", "5", "--girth", "12",
                       "--max-tries", "20")
    assert code == 2 and "refused" in err


def test_missing_file_is_error(capsys, tmp_path):
    code, _, err = run(capsys, "decode", "--code", str(tmp_path / "none.json"))
    assert code == 1 and "error" in err


def test_hybridize_and_decode(capsys, c1_file):
    d = json.loads(open(c1_file).read())
    assert d["plan"]["kappa"] == 26 and len(d["super_checks"]) == 26
    code, out, _ = run(capsys, "decode", "--code", c1_file, "--errors", "0,1,2", "--alg", "galb")
    assert code == 0 and json.loads(out)["residual_support"] == []


def test_hybridize_ts_guided(capsys, layout_file):
    code, out, _ = run(capsys, "hybridize", "--layout", layout_file, "--strategy", "ts",
                       "--component", "rep5", "--a-max", "5", "--b-max", "3", "--labels", "5,3")
    assert code == 0
    plan = json.loads(out)["plan"]
    assert plan["strategy"] == "ts_guided" and plan["unresolved"] == [] and plan["kappa"] > 0


def test_enumerate(capsys, layout_file):
    code, out, _ = run(capsys, "enumerate-ts", "--code", layout_file, "--a-max", "5", "--b-max", "3")
    sets = json.loads(out)
    code2, out2, _ = run(capsys, "enumerate-ts", "--code", layout_file, "--a-max", "5", "--b-max", "3",
                         "--orbits")
    orbits = json.loads(out2)
    assert code == code2 == 0
    assert sum(o["orbit_size"] for o in orbits) == len(sets) > 0


def test_critical_set_fixture(capsys):
    code, out, _ = run(capsys, "critical-set", "--fixture", "ts53", "--exact")
    d = json.loads(out)
    assert code == 0 and d["size"] == d["min_size"] == 2


def test_critical_set_from_code(capsys, layout_file):
    code, out, _ = run(capsys, "enumerate-ts", "--code", layout_file, "--a-max", "4", "--b-max", "4")
    vs = json.loads(out)[0]["variables"]
    code, out, _ = run(capsys, "critical-set", "--code", layout_file, "--variables",
                       ",".join(map(str, vs)), "--component", "rep5")
    assert code == 0 and json.loads(out)["size"] == 1


def test_splitting(capsys, layout_file):
    code, out, _ = run(capsys, "splitting", "--code", layout_file, "--labels", "4,4", "--component",
                       "rep5", "--a-max", "4", "--b-max", "4")
    d = json.loads(out)
    assert code == 0 and d["instances"] > 0 and d["row_bounds"]["p"] == 13


def test_verify_gec(capsys, c1_file):
    code, out, _ = run(capsys, "--threads", "2", "verify-gec", "--code", c1_file, "--weight", "2")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "pass" and d["patterns_tested"] == 65 + 2080


def test_rate(capsys, c1_file):
    code, out, _ = run(capsys, "rate", "--bound", "3", "31", "961", "31", "21/31")
    assert code == 0 and json.loads(out)["lower_bound"] == "18/31"
    code, out, _ = run(capsys, "rate", "--code", c1_file)
    d = json.loads(out)
    assert code == 0 and "single_row_precondition" in d


def test_simulate_csv(capsys, c1_file, tmp_path):
    path = tmp_path / "sim.csv"
    code, _, _ = run(capsys, "--seed", "3", "simulate", "--code", c1_file, "--alphas", "0.01,0.02",
                     "--max-frames", "300", "--output", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0].startswith("alpha,frames") and len(lines) == 3


def test_simulate_bad_alpha_is_error(capsys, c1_file):
    code, _, err = run(capsys, "simulate", "--code", c1_file, "--alphas", "0.7")
    assert code == 1


def test_fixtures(capsys):
    code, out, _ = run(capsys, "fixtures")
    names = {f["name"] for f in json.loads(out)}
    assert code == 0 and {"ts53", "six_error_c1", "root3_f"} <= names
    code, _, _ = run(capsys, "fixtures", "--name", "nope")
    assert code == 2
