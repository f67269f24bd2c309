import json
import subprocess
import sys
from collections import Counter

import pytest
import yaml

from surfbundle import cli
from surfbundle.construction import build_section_sum, theta_graph
from surfbundle.covers import free_action_from_cover
from surfbundle.errors import EulerMismatch
from surfbundle.fileformat import dump_construction
from surfbundle.report import Report, from_json, to_json
from surfbundle.surfaces import FiniteGroup


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def family_file(tmp_path, capsys):
    def make(kind, n):
        path = tmp_path / f"{kind}{n}.yaml"
        assert run(capsys, "family", kind, str(n), "-o", str(path))[0] == 0
        return str(path)
    return make


def test_family_writes_valid_file(family_file, capsys):
    path = family_file("line", 3)
    code, _, err = run(capsys, "validate", path)
    assert code == 0 and err.startswith("ok:")


def test_family_to_stdout(capsys):
    code, out, _ = run(capsys, "family", "basic", "2")
    assert code == 0
    assert yaml.safe_load(out)["surface"]["genus"] == 2


def test_family_parameter_out_of_range(capsys):
    code, _, err = run(capsys, "family", "line", "0")
    assert code == 2 and "line family" in err
    assert run(capsys, "family", "basic", "1")[0] == 2


def test_fiberings_basic_json(family_file, capsys):
    code, out, _ = run(capsys, "fiberings", family_file("basic", 2), "--format", "json")
    rep = from_json(out)
    assert code == 0
    assert rep.construction.euler_characteristic == 12
    assert [r.id for r in rep.fiberings] == ["11", "12", "21", "22"]
    assert rep.bounds.d == 3


def test_fiberings_line_three_certified(family_file, capsys):
    code, out, _ = run(capsys, "fiberings", family_file("line", 3), "--certify", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["construction"]["euler_characteristic"] == 64
    assert len(rep["certificates"]) == 28
    assert all(c["verified"] for c in rep["certificates"])


def test_fiberings_tower(family_file, capsys):
    code, out, _ = run(capsys, "fiberings", family_file("tower", 2), "--format", "json")
    rep = from_json(out)
    assert code == 0 and len(rep.fiberings) == 3
    assert rep.construction.kind == "cover"


def test_fiberings_theta_monodromy(tmp_path, capsys):
    b = build_section_sum(theta_graph(), free_action_from_cover(FiniteGroup.cyclic(2), 3))
    path = tmp_path / "theta.yaml"
    path.write_text(dump_construction(b, include_actions=True))
    code, out, _ = run(capsys, "fiberings", str(path), "--monodromy", "--format", "json")
    rep = from_json(out)
    assert code == 0
    gens = rep.monodromy[0].generators
    assert any(not g.torelli for g in gens)
    assert all(g.symplectic and g.preserves_lagrangian for g in gens)
    assert rep.signature.value == 0


def test_table_output(family_file, capsys):
    code, out, _ = run(capsys, "fiberings", family_file("line", 2))
    assert code == 0 and "fiberings (4)" in out


def test_json_deterministic_and_round_trips(family_file, capsys):
    path = family_file("line", 2)
    outs = [run(capsys, "fiberings", path, "--certify", "--monodromy", "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert to_json(from_json(outs[0], Report)) == outs[0]


def test_bounds_commands(capsys):
    code, out, _ = run(capsys, "bounds", "4", "--format", "json")
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["upper"] == 3 * 5 ** 14 and row["lower"] == 2
    code, out, _ = run(capsys, "bounds", "--sweep", "50", "--format", "json")
    assert [r["d"] for r in json.loads(out)["rows"]] == list(range(1, 51))
    code, out, _ = run(capsys, "bounds", "2", "--hillman", "--format", "json")
    assert json.loads(out)["rows"][0]["upper"] == 2 * 2 ** 10


def test_bounds_rejects_non_positive(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bounds", "0"])
    assert exc.value.code == 2


def test_exit_code_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text("group: trivial\nsurface: {genus: 2}\n")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 3 and "parse error" in err
    assert run(capsys, "validate", str(tmp_path / "missing.yaml"))[0] == 3


def test_exit_code_domain_error_names_vertex(family_file, tmp_path, capsys):
    doc = yaml.safe_load(open(family_file("line", 3)))
    doc["graph"]["edges"][1]["label_minus"] = 0  # vertex 2 now repeats label 0
    p = tmp_path / "dup.yaml"
    p.write_text(yaml.safe_dump(doc))
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "InjectivityFailure" in err and "vertex 2" in err


def test_exit_code_riemann_hurwitz(family_file, tmp_path, capsys):
    doc = yaml.safe_load(open(family_file("line", 1)))
    doc["surface"]["genus"] = 4
    p = tmp_path / "rh.yaml"
    p.write_text(yaml.safe_dump(doc))
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "NonIntegralQuotient" in err


def test_exit_code_internal(family_file, capsys, monkeypatch):
    path = family_file("basic", 2)

    def boom(*args, **kwargs):
        raise EulerMismatch("forced")

    monkeypatch.setattr(cli, "build_report", boom)
    code, _, err = run(capsys, "fiberings", path)
    assert code == 4 and "EulerMismatch" in err


def test_relabeling_vertices_keeps_summary(family_file, tmp_path, capsys):
    doc = yaml.safe_load(open(family_file("line", 4)))
    names = {v["id"]: f"v{k}" for k, v in enumerate(reversed(doc["graph"]["vertices"]))}
    doc["graph"]["vertices"] = list(reversed(doc["graph"]["vertices"]))
    for v in doc["graph"]["vertices"]:
        v["id"] = names[v["id"]]
    for e in doc["graph"]["edges"]:
        e["plus"], e["minus"] = names[e["plus"]], names[e["minus"]]
    p = tmp_path / "relabeled.yaml"
    p.write_text(yaml.safe_dump(doc))
    a = from_json(run(capsys, "fiberings", family_file("line", 4), "--format", "json")[1])
    b = from_json(run(capsys, "fiberings", str(p), "--format", "json")[1])
    assert a.construction == b.construction
    key = lambda r: (r.base_genus, r.fiber_genus)  # noqa: E731
    assert Counter(map(key, a.fiberings)) == Counter(map(key, b.fiberings))


def test_console_script_runs(tmp_path):
    out = subprocess.run([sys.executable, "-m", "surfbundle.cli", "bounds", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and "256" in out.stdout
