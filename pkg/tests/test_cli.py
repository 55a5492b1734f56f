import json
import subprocess
import sys

import pytest

from frontalrec.cli import main

FILES = {
    "ce.germ": "vars: t1, t2\nf: t1\nf: t2^2\nf: t2^3\n",
    "sw.germ": "vars: t1, t2\nlabel: swallowtail\nf: t1\nf: t2^3 + t1*t2\nf: 3/4*t2^4 + 1/2*t1*t2^2\n",
    "osw.germ": "vars: t1, t2\nf: t1\nf: t2^3 + t1*t2\nf: 3/4*t2^4 + 1/2*t1*t2^2\nf: 3/5*t2^5 + 1/3*t1*t2^3\n",
    "cusp.germ": "vars: t1, t2\nf: t1\nf: t2^3 + t1*t2\n",
    "mond.germ": "vars: u, t\nf: t + u\nf: t^3 + 3*t^2*u\nf: t^4 + 4*t^3*u\n",
    "cone.germ": "vars: t1, t2, t3\nf: t1^3\nf: t1^2*t2\nf: t1*t2^2\nf: t2^3\n",
    "bad.germ": "vars: t1, t2\nf: t1\nf: t2^2\nf: t3\n",
    "corank2.germ": "vars: t1, t2\nf: t1^2\nf: t2^2\nf: 0\n",
    "unrec.germ": "vars: t1, t2\nf: t1\nf: t2^2\nf: t2^5\n",
    "sb5.germ": "vars: t1, t2\norder: 5\nf: t1\nf: t2^3 + t1*t2^2\nf: 3/5*t2^5 + 1/2*t1*t2^4\n",
}


@pytest.fixture
def files(tmp_path):
    for name, text in FILES.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_recognize_ce(files, capsys):
    code, rep = run_json(capsys, "recognize", files / "ce.germ")
    assert code == 0 and rep["verdict"] == "CuspidalEdge"
    assert rep["tool"] == "frontalrec" and rep["order"] == 12
    assert rep["input"]["components"] == ["t1", "t2^2", "t2^3"]
    assert all(e["holds"] for e in rep["certificate"])


def test_recognize_mond_reports_jacobian(files, capsys):
    code, rep = run_json(capsys, "recognize", files / "mond.germ")
    assert code == 0 and rep["verdict"] == "Mond"
    assert rep["jacobian"] == "6*u*t"


def test_cone_refused(files, capsys):
    code, rep = run_json(capsys, "recognize", files / "cone.germ")
    assert code == 5
    assert rep["verdict"] == "DegenerateJacobiIdeal" and "refused" in rep
    code, rep = run_json(capsys, "frontality", files / "cone.germ")
    assert code == 0 and rep["verdict"] == "DegenerateJacobiIdeal"


def test_exit_codes(files, capsys):
    assert run(capsys, "recognize", files / "bad.germ")[0] == 4
    assert run(capsys, "recognize", files / "missing.germ")[0] == 4
    assert run(capsys, "recognize", files / "corank2.germ")[0] == 5
    assert run(capsys, "recognize", files / "unrec.germ")[0] == 2
    code, rep = run_json(capsys, "recognize", files / "sb5.germ")
    assert code == 3 and rep["verdict"] == "Inconclusive" and rep["order"] == 5


def test_bad_file_message_has_position(files, capsys):
    code, rep = run_json(capsys, "recognize", files / "bad.germ")
    assert rep["error"] == "input error" and "line 4, column 4" in rep["message"]


def test_jacobian_mond(files, capsys):
    code, rep = run_json(capsys, "jacobian", files / "mond.germ")
    assert code == 0
    assert rep["minors"] == {"12": "6*u*t", "13": "12*u*t^2", "23": "12*u*t^4"}
    assert rep["pluecker"] == {"12": "1", "13": "2*t", "23": "2*t^3"}
    assert rep["jacobian"] == "6*u*t" and rep["front"] is True


def test_orders_sw(files, capsys):
    code, rep = run_json(capsys, "orders", files / "sw.germ")
    assert code == 0 and rep["orders"] == {"lambda": 2, "f3": 4}


def test_orders_cap(files, capsys):
    code, rep = run_json(capsys, "orders", files / "sw.germ", "--max-eta-order", "3")
    assert code == 3 and rep["orders"]["lambda"] == 2 and rep["orders"]["f3"].startswith("inconclusive")


def test_opening(files, capsys):
    code, rep = run_json(capsys, "opening", files / "osw.germ", files / "cusp.germ")
    assert code == 0 and rep["opening"] is True and rep["versal"] is True and rep["versal_order"] >= 8
    code, rep = run_json(capsys, "opening", files / "sw.germ", files / "cusp.germ")
    assert rep["opening"] is True and rep["versal"] is False
    assert run(capsys, "opening", files / "ce.germ", files / "cusp.germ")[0] == 5


def test_order_flag(files, capsys):
    code, rep = run_json(capsys, "recognize", files / "ce.germ", "--order", "6")
    assert rep["order"] == 6 and rep["verdict"] == "CuspidalEdge"


def test_json_replay_is_identical(files, capsys):
    code, out = run(capsys, "recognize", files / "sw.germ", "--format", "json")
    (files / "report.json").write_text(out)
    code2, out2 = run(capsys, "recognize", files / "report.json", "--format", "json")
    assert out2 == out and code2 == code


def test_text_and_json_agree(files, capsys):
    _, rep = run_json(capsys, "recognize", files / "sw.germ")
    _, text = run(capsys, "recognize", files / "sw.germ")
    assert f"verdict: {rep['verdict']}" in text
    for e in rep["certificate"]:
        assert f"{e['id']}: {e['criterion']}" in text


def test_rationals_are_strings(files, capsys):
    _, rep = run_json(capsys, "jacobian", files / "sw.germ")
    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, float)
    walk(rep)


def test_batch(files, capsys):
    code, out = run(capsys, "recognize", "--batch", files, "--format", "json", "--jobs", "2")
    reports = [json.loads(chunk) for chunk in out.replace("}\n{", "}\x00{").split("\x00")]
    assert len(reports) == len(FILES)
    verdicts = {r["file"].rsplit("/", 1)[-1]: r.get("verdict") for r in reports}
    assert verdicts["ce.germ"] == "CuspidalEdge" and verdicts["mond.germ"] == "Mond"
    assert code == 5


def test_selftest(capsys):
    code, rep = run_json(capsys, "selftest", "--seed", "3", "--count", "1", "--order", "8")
    assert code == 0 and rep["verdict"] == "pass"
    assert set(rep["agreement"].values()) == {"1/1"}


def test_module_entry_point(files):
    out = subprocess.run([sys.executable, "-m", "frontalrec", "recognize", str(files / "ce.germ")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "verdict: CuspidalEdge" in out.stdout
