import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from compjac.cli import main
from compjac.families import banana, dollar_sign, nodal_irreducible

ROOT = Path(__file__).resolve().parent.parent
SCHEMAS = ROOT / "docs" / "schemas"


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv + ["--format", "json"])
    return code, json.loads(text)


@pytest.fixture
def write_graph(tmp_path):
    def write(graph, name="g.json"):
        path = tmp_path / name
        path.write_text(json.dumps(graph.to_dict()))
        return str(path)

    return write


@pytest.fixture
def dollar(write_graph):
    return write_graph(dollar_sign(), "dollar.json")


def schema(name):
    return json.loads((SCHEMAS / name).read_text())


def test_info(dollar, write_graph):
    code, rep = run_json(["info", "-i", dollar])
    assert code == 0
    assert rep["h"] == 2 and rep["g"] == 2
    assert rep["genera"] == {"C1": 0, "C2": 0}
    assert rep["det_gram"] == 3
    assert rep["schema_version"] == 1
    _, rep = run_json(["info", "-i", write_graph(nodal_irreducible(3), "loops.json")])
    assert rep["h"] == 3
    _, rep = run_json(["info", "-i", write_graph(banana(0), "bare.json")])
    assert rep["h"] == 0 and len(rep["components"]) == 2


def test_info_table(dollar):
    code, text = run(["info", "-i", dollar])
    assert code == 0
    assert "det_gram" in text and "genus[C1]" in text


def test_check_stable(dollar):
    code, rep = run_json(["check", "-i", dollar, "--e", "2,1"])
    assert code == 0
    assert rep["verdict"] == "stable"
    assert rep["conditions"] == {"abs": "stable", "edges": "stable", "orientation": "stable"}
    assert rep["witness"] is None
    heads = [h for _, _, h in rep["orientation"]]
    assert sorted(heads) == ["C1", "C1", "C2"]
    assert rep["d"] == [1, 0]


def test_check_semistable_and_unstable(dollar):
    _, rep = run_json(["check", "-i", dollar, "--e", "3,0"])
    assert rep["verdict"] == "strictly_semistable"
    assert rep["witness"] == ["C1"]
    _, rep = run_json(["check", "-i", dollar, "--e", "4,-1"])
    assert rep["verdict"] == "unstable"
    assert rep["witness"] == ["C1"]
    assert rep["orientation"] is None
    _, rep = run_json(["check", "-i", dollar, "--d", "0,0", "--edges", "0,1"])
    assert rep["e"] == [1, 1] and rep["verdict"] == "stable"


def test_check_table_output(dollar):
    code, text = run(["check", "-i", dollar, "--e", "3,0"])
    assert code == 0
    assert "verdict strictly_semistable" in text
    assert "witness D = {C1}" in text


def test_check_sum_mismatch(dollar, capsys):
    code, _ = run(["check", "-i", dollar, "--e", "1,1"])
    assert code == 2
    assert "SumMismatchError" in capsys.readouterr().err


def test_strata_and_schema(dollar):
    code, rep = run_json(["strata", "-i", dollar, "--full"])
    assert code == 0
    assert rep["table"] == [{"codim": 0, "count": 2}, {"codim": 1, "count": 3}, {"codim": 2, "count": 1}]
    assert rep["total"] == 6
    jsonschema.validate(rep, schema("strata_report.schema.json"))
    _, brief = run_json(["strata", "-i", dollar])
    jsonschema.validate(brief, schema("strata_report.schema.json"))
    assert "strata" not in brief


def test_strata_table(dollar):
    code, text = run(["strata", "-i", dollar])
    assert code == 0
    assert "total 6" in text


def test_cells_and_schema(dollar):
    code, rep = run_json(["cells", "-i", dollar, "--full"])
    assert code == 0
    assert rep["gram"] == [[2, 1], [1, 2]]
    assert rep["cells"] == [{"dim": 2, "count": 2}, {"dim": 1, "count": 3}, {"dim": 0, "count": 1}]
    assert rep["match_strata"] is True
    assert rep["saturated"] is True
    jsonschema.validate(rep, schema("cells_report.schema.json"))
    assert [r["sign"] for r in rep["representatives"]] == ["++-", "+--", "0+-", "+0-", "+-0", "000"]


def test_compare(dollar):
    code, rep = run_json(["compare", "-i", dollar])
    assert code == 0 and rep["match"] is True
    assert rep["rows"] == [
        {"codim": 0, "strata": 2, "cells": 2},
        {"codim": 1, "strata": 3, "cells": 3},
        {"codim": 2, "strata": 1, "cells": 1},
    ]
    code, text = run(["compare", "-i", dollar])
    assert text.strip().endswith("PASS")


def test_compare_mismatch_exit_code(dollar, monkeypatch, capsys):
    import compjac.cli as cli
    from compjac.lattice import Comparison

    monkeypatch.setattr(cli, "compare_with_strata", lambda *a, **k: Comparison(2, {0: 2}, {0: 3}, [0]))
    code, text = run(["compare", "-i", dollar])
    assert code == 4
    assert "FAIL at codim [0]" in text
    assert "codimension(s) [0]" in capsys.readouterr().err


def test_stability(dollar):
    code, rep = run_json(["stability", "-i", dollar, "--dprime", "1,0", "--lambda", "1,3"])
    assert code == 0
    assert rep["verdict"] == "stable" and rep["degree"] == 1 and rep["chi"] == 0
    _, rep = run_json(["stability", "-i", dollar, "--dprime", "2,-1", "--lambda", "2,1"])
    assert rep["verdict"] == "strictly_semistable" and rep["witness"] == ["C1"]
    _, rep = run_json(["stability", "-i", dollar, "--dprime", "0,0", "--edges", "0,1", "--lambda", "1,1"])
    assert rep["degree"] == 1 and rep["verdict"] == "stable"
    assert rep["slope"] == "0"


def test_phi(dollar):
    code, rep = run_json(["phi", "-i", dollar, "--lambda", "1,2", "--degree", "2"])
    assert code == 0
    # share = d - omega/2 = 1 and the default split of d is (1, 1)
    assert rep["phi"] == ["-1/6", "1/6"]
    assert rep["phi_reduced"] == ["5/6", "1/6"]
    assert rep["phi_sum"] == "0"


def test_phi_bad_omega(dollar, capsys):
    code, _ = run(["phi", "-i", dollar, "--lambda", "1,2", "--degree", "2", "--omega", "1,2"])
    assert code == 2
    assert "2g - 2" in capsys.readouterr().err


def test_validation_and_caps(tmp_path, write_graph, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [{"id": "a"}], "edges": [["a", "z"]]}')
    assert run(["info", "-i", str(bad)])[0] == 2
    assert "edges[0]" in capsys.readouterr().err
    assert run(["info", "-i", str(tmp_path / "missing.json")])[0] == 2
    loops = write_graph(nodal_irreducible(4))
    assert run(["cells", "-i", loops, "--max-edges", "3"])[0] == 3
    assert run(["strata", "-i", loops, "--max-edges", "0"])[0] == 2
    assert run(["strata", "-i", loops, "--jobs", "0"])[0] == 2


def test_bad_integer_list_is_argparse_error(dollar):
    with pytest.raises(SystemExit) as err:
        run(["check", "-i", dollar, "--e", "a,b"])
    assert err.value.code == 2


@pytest.mark.parametrize("command", ["strata", "cells", "compare", "info"])
def test_output_is_deterministic_across_jobs(write_graph, command):
    path = write_graph(banana(4))
    outputs = {run([command, "-i", path, "--format", "json", "--full", "--jobs", str(j)])[1] for j in (1, 2, 3)}
    outputs.add(run([command, "-i", path, "--format", "json", "--full"])[1])
    assert len(outputs) == 1


def test_examples_pass():
    code, rep = run_json(["examples"])
    assert code == 0 and rep["passed"] is True
    names = [r["name"] for r in rep["results"]]
    assert any("dollar" in n for n in names)
    assert all(r["passed"] for r in rep["results"])


def test_examples_injected_failure(capsys):
    code, text = run(["examples", "--inject-failure", "dollar"])
    assert code == 4
    failed = [line for line in text.splitlines() if line.rstrip().endswith("FAIL")]
    assert len(failed) == 1 and "dollar" in failed[0]
    assert "failed: dollar sign" in capsys.readouterr().err


def test_graph_schema_accepts_shipped_data():
    doc = json.loads((ROOT / "data" / "dollar_sign.json").read_text())
    jsonschema.validate(doc, schema("graph.schema.json"))
    jsonschema.validate(dollar_sign().to_dict(), schema("graph.schema.json"))


def test_module_entry_point(dollar):
    proc = subprocess.run(
        [sys.executable, "-m", "compjac", "info", "-i", dollar, "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["h"] == 2
