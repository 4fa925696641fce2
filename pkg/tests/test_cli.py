import json
import subprocess
import sys

import pytest

from cremona import cli
from cremona.reproduce import digest

FERMAT = "x0^3 + x1^3 + x2^3 + x3^3"


def ok(*argv):
    code, rep = cli.run(list(argv))
    assert code == 0, argv
    return rep["results"]


def without_timings(rep):
    return {k: v for k, v in rep.items() if k != "timings"}


def test_sigma_build_fermat():
    res = ok("sigma", "build", "--cubic", FERMAT, "--point", "3,4,5,-6")
    assert res["is_involution"] and res["fixes_cubic_pointwise"]
    assert res["effective_degree"] == 3


def test_sigma_check_config():
    res = ok("sigma", "check-config", "--cubic", FERMAT, "--points", "3,4,5,-6;1,6,8,-9;9,10,-1,-12")
    assert res["configuration_ok"] is True


def test_sigma_plane():
    res = ok("sigma", "plane", "--abc", "2,3,5")
    assert res["is_involution"] and res["fixes_cubic_pointwise"]


def test_sigma_plane_bad_configuration_is_domain_error():
    assert cli.run(["sigma", "plane", "--abc", "1,1,2"])[0] == 1


def test_map_commands_on_builtin_maps():
    assert ok("map", "identity-check", "--file", "chi", "--file", "chi-inv")["is_identity"]
    assert ok("map", "degree", "--file", "chi")["degree"] == 6
    assert ok("map", "degree", "--file", "chi", "--file", "chi")["degree"] == 36
    seq = ok("map", "seq", "--file", "y*z;x*z;x*y", "--iters", "3")
    assert seq["degrees"] == [2, 1, 2]


def test_map_compose_json_file(tmp_path):
    path = tmp_path / "std.json"
    path.write_text(json.dumps({"n": 2, "components": ["x1*x2", "x0*x2", "x0*x1"]}))
    res = ok("map", "compose", "--file", str(path), "--file", str(path))
    assert res["composite"]["components"] == ["x", "y", "z"]
    assert ok("map", "degree", "--file", str(path))["degree"] == 2


def test_map_jacobian_of_chi():
    jac = ok("map", "jac", "--file", "chi")["jacobian"]
    assert jac.replace(" ", "").endswith("z^15")


def test_field_option_and_env(monkeypatch):
    code, rep = cli.run(["map", "degree", "--file", "chi", "--field", "GF(1000003)"])
    assert code == 0 and rep["config"]["field"] == "GF(1000003)"
    monkeypatch.setenv(cli.FIELD_ENV, "GF(10007)")
    code, rep = cli.run(["map", "degree", "--file", "chi"])
    assert code == 0 and rep["config"]["field"] == "GF(10007)"


def test_word_commands():
    res = ok("word", "dyndeg", "--letters", "1,2,3")
    assert res["dyndeg"]["approx"].startswith("17.944271909")
    assert ok("word", "degree", "--letters", "1,2")["predicted_degree"] == 9
    assert ok("word", "classify", "--letters", "1,2,1,2")["verdict"] == "InfiniteDynDegOne"
    assert ok("word", "alpha", "--letters", "1,2,3", "--k", "3")["alpha"] == [9, 3, 1]


def test_plane_commands():
    bp = ok("plane", "basepoints", "--file", "chi")
    assert [nd["multiplicity"] for nd in bp["nodes"]] == [4, 2, 2, 2, 2, 1, 1, 1]
    prox = ok("plane", "proximity", "--file", "chi-inv")
    assert prox["extra"] == [[4, 2], [5, 3]]
    assert ok("plane", "classify2", "--file", "x^2;x*y;y^2-x*z")["class"] == "OneProperTower"
    assert ok("plane", "twist", "--case", "2")["product_matches_table"]


def test_plane_certify_identity():
    res = ok("plane", "certify-chi", "--iters", "2", "--audit", "exact")
    assert res["verdict"] == "obstruction found" and res["audit_ok"]


def test_dot_output(tmp_path, capsys):
    out = tmp_path / "g.dot"
    assert cli.main(["plane", "proximity", "--file", "chi", "--format", "dot", "--output", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("digraph proximity {") and "p3 -> p1 [style=dashed];" in text
    # DOT is only defined for proximity graphs
    assert cli.run(["map", "degree", "--file", "chi", "--format", "dot"])[0] == 2


def test_json_output_shape(capsys):
    assert cli.main(["word", "degree", "--letters", "1,2", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert set(rep) == {"command", "inputs", "config", "results", "provenance", "timings"}
    assert rep["command"] == "word degree" and rep["provenance"]["seed"] == 0


def test_text_output(capsys):
    assert cli.main(["map", "degree", "--file", "chi"]) == 0
    assert "degree: 6" in capsys.readouterr().out.splitlines()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["map"],
        ["map", "degree"],
        ["word", "dyndeg", "--letters", "1,x"],
        ["plane", "certify-chi", "--tau", "1,2,3"],
        ["map", "degree", "--file", "chi", "--work-bound", "0"],
        ["reproduce-paper", "--inject-fault", "nonsense"],
    ],
)
def test_usage_errors(argv):
    assert cli.run(argv)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["sigma", "build", "--cubic", FERMAT, "--point", "1,0,0,0"],
        ["map", "compose", "--file", "x;y", "--file", "chi"],
        ["plane", "certify-chi", "--tau", "1,2,3,2,4,6,0,0,1"],
        ["map", "degree", "--file", "chi", "--field", "GF(12)"],
    ],
)
def test_domain_errors(argv):
    assert cli.run(argv)[0] == 1


def test_reports_are_deterministic():
    for argv in (["map", "degree", "--file", "chi", "--seed", "4"],
                 ["plane", "basepoints", "--file", "chi-inv"],
                 ["word", "dyndeg", "--letters", "1,2,3,4", "--k", "4"]):
        a, b = cli.run(argv)[1], cli.run(argv)[1]
        assert without_timings(a) == without_timings(b)
        assert digest(without_timings(a)) == digest(without_timings(b))


def test_reproduce_exit_code(monkeypatch):
    def fake(seed, fault, **kw):
        crit = [{"number": 1, "name": "x", "passed": fault is None, "details": {}}]
        return {"hashable": {"criteria": crit, "all_passed": fault is None}, "digest": "d", "timings": {}}

    monkeypatch.setattr(cli, "reproduce_paper", fake)
    assert cli.run(["reproduce-paper", "--no-repeat"])[0] == 0
    assert cli.run(["reproduce-paper", "--inject-fault", "hef"])[0] == 1


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "cremona.cli", "word", "degree", "--letters", "1,2,3"],
                         capture_output=True, text=True, check=True)
    assert "predicted_degree: 27" in out.stdout
