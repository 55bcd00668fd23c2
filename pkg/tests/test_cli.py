import json
from pathlib import Path

import jsonschema
import pytest

from jacoscope import cli, corpus
from jacoscope.config import RunConfig
from jacoscope.criteria import decide
from jacoscope.criteria.results import CriterionResult, Verdict
from jacoscope.report import REPORT_SCHEMA, SCHEMA_ID, build_report, dumps

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- reports ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", corpus.MAP_NAMES)
def test_golden_reports_are_byte_stable(name, tmp_path):
    out = tmp_path / "report.json"
    cli.main(["check", f"corpus:{name}", "-o", str(out)])
    assert out.read_bytes() == (GOLDEN / f"check-{name}.json").read_bytes()


@pytest.mark.parametrize("name", corpus.MAP_NAMES)
def test_reports_validate(name):
    report = json.loads((GOLDEN / f"check-{name}.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["schema"] == SCHEMA_ID
    assert report["seed"] == report["config"]["seed"]


def test_full_report_with_dynamics_validates():
    cfg = RunConfig(run_monodromy=True, run_oracle=True, oracle_resolution=61)
    F = corpus.get("identity").load()
    report = build_report(F, decide(F, cfg), cfg)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["monodromy"]["verdict"] == "Monodromic"
    assert report["oracle"]["witnesses"] == []


def test_schema_rejects_bad_reports():
    report = json.loads((GOLDEN / "check-identity.json").read_text())
    report["verdict"]["outcome"] = "Probably"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(report, REPORT_SCHEMA)


def test_dumps_handles_non_finite():
    text = dumps({"a": float("inf"), "b": [float("nan")]})
    assert json.loads(text) == {"a": "inf", "b": ["nan"]}


# -- check / analyze ------------------------------------------------------------------------


def test_check_example(capsys):
    code, out, _ = run(capsys, "check", "corpus:example-1.1")
    report = json.loads(out)
    assert code == 0
    assert report["verdict"]["outcome"] == "Injective"
    status = {c["name"]: c["status"] for c in report["chain"]}
    assert status["braun"] == "fails" and status["properness"] == "holds"


def test_check_identity_exact(capsys):
    code, out, _ = run(capsys, "check", "corpus:identity")
    report = json.loads(out)
    assert code == 0 and report["verdict"]["outcome"] == "Injective"
    assert all(c["exactness"] == "exact" for c in report["chain"])


def test_check_invalid_hypothesis_writes_report(capsys):
    code, out, _ = run(capsys, "check", "corpus:invalid-hypothesis")
    assert code == 2
    assert json.loads(out)["verdict"]["invalid_hypothesis"] is True


def test_analyze_identity(capsys):
    code, out, _ = run(capsys, "analyze", "corpus:identity", "--set", "oracle_resolution=61")
    report = json.loads(out)
    assert code == 0
    assert report["monodromy"]["verdict"] == "Monodromic"
    assert report["config"]["oracle_resolution"] == 61


def test_analyze_unknown_exit_code(capsys, tmp_path):
    path = tmp_path / "u.pmap"
    path.write_text("f = 1/3*x^3 + 1/2*x^2*y + x*y^2 + x;\ng = y\n")
    code, out, _ = run(capsys, "analyze", str(path), "--no-monodromy", "--set", "oracle_resolution=61")
    assert code == 5
    assert json.loads(out)["verdict"]["outcome"] == "Unknown"


def test_analyze_not_injective_exit_code(capsys, monkeypatch):
    def fake_decide(F, cfg):
        chain = [CriterionResult("jacobian", "holds", "exact", {})]
        return Verdict("NotInjective", chain, {"translation": ["0", "0"], "applied": False}, "oracle")

    monkeypatch.setattr("jacoscope.criteria.decide", fake_decide)
    code, _, _ = run(capsys, "analyze", "corpus:identity")
    assert code == 4


def test_config_file_and_flag_precedence(capsys, tmp_path):
    conf = tmp_path / "jacoscope.toml"
    conf.write_text("max_weight = 3\nseed = 9\n")
    code, out, _ = run(capsys, "check", "corpus:identity", "--config", str(conf), "--seed", "4")
    cfg = json.loads(out)["config"]
    assert code == 0 and cfg["max_weight"] == 3 and cfg["seed"] == 4


def test_bad_config_key(capsys):
    code, _, err = run(capsys, "check", "corpus:identity", "--set", "bogus=1")
    assert code == 1 and "bogus" in err


# -- other subcommands ------------------------------------------------------------------------


def test_parse_error_exit(capsys, tmp_path):
    path = tmp_path / "bad.pmap"
    path.write_text("f = x +* y; g = y\n")
    code, _, err = run(capsys, "parse", str(path))
    assert code == 1 and "column 8" in err


def test_parse_prints_canonical(capsys, tmp_path):
    path = tmp_path / "m.pmap"
    path.write_text("g = x*y^2 + x ; h = y^3 + y")
    code, out, _ = run(capsys, "parse", str(path))
    assert code == 0 and out == "g = x*y^2 + x;\nh = y^3 + y\n"


def test_missing_file(capsys):
    code, _, err = run(capsys, "parse", "/nonexistent/file.pmap")
    assert code == 1 and "cannot read" in err


def test_unknown_corpus_entry(capsys):
    code, _, err = run(capsys, "check", "corpus:nope")
    assert code == 1 and "example-1.1" in err


def test_compactify_center_field(capsys):
    code, out, _ = run(capsys, "compactify", "corpus:center-field")
    text, _, block = out.partition("\n\n")
    assert code == 0
    assert text == "p = -u^2*v - v^3;\nq = u^3 + u*v^2"
    info = json.loads(block)
    assert info["provenance"] == "bendixson" and info["degree"] == 3 and info["time_rescale_exponent"] == 1


def test_compactify_map(capsys):
    code, out, _ = run(capsys, "compactify", "corpus:example-1.1")
    info = json.loads(out.partition("\n\n")[2])
    assert info["matches_generic_transform"] is True


def test_charts(capsys):
    code, out, _ = run(capsys, "charts", "corpus:example-1.1")
    info = json.loads(out[out.index("{"):])
    assert code == 0
    assert info["U"]["time_rescale_exponent"] == 11
    assert info["infinity"]["free"] is True


def test_index(capsys):
    code, out, _ = run(capsys, "index", "corpus:saddle-field")
    first, _, rest = out.partition("\n")
    assert code == 0 and first == "-1"
    assert json.loads(rest)["index"] == -1


def test_index_zero_on_curve(capsys):
    code, _, err = run(capsys, "index", "corpus:saddle-field", "--center", "1,0")
    assert code == 1 and "vanishes" in err


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "corpus:invalid-hypothesis", "--box", "2", "--resolution", "101")
    w = json.loads(out)["witnesses"][0]
    assert code == 0 and set(w) == {"p", "q", "residual", "separation"}


def test_portrait(capsys, tmp_path):
    code, out, _ = run(capsys, "portrait", "corpus:center-field", "--radii", "0.5", "--set", "probe_angles=2",
                       "--csv-dir", str(tmp_path), "--svg")
    summary = json.loads(out)
    assert code == 0 and len(summary["probes"]) == 4
    lines = (tmp_path / "probe_000.csv").read_text().splitlines()
    assert lines[0] == "t,u,v" and len(lines) > 10
    assert all(p["termination"] == "closed" for p in summary["probes"])
    assert (tmp_path / "portrait.svg").read_text().startswith("<svg")


def test_corpus_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == 0 and "example-1.1" in out
    code, out, _ = run(capsys, "corpus", "show", "example-1.1")
    assert out == "f = y + y^3;\ng = x + x*y^2\n"
    code, out, _ = run(capsys, "corpus", "build", str(tmp_path))
    files = sorted(p.name for p in tmp_path.glob("*.pmap"))
    assert len(files) == len(corpus.ENTRIES)
    from jacoscope.parser import parse_map

    assert parse_map((tmp_path / "example-1.1.pmap").read_text()).components == \
        corpus.get("example-1.1").load().components


def test_budget_exit(capsys, tmp_path):
    path = tmp_path / "big.pmap"
    path.write_text(";\n".join(f"f{i} = x{i}" for i in range(1, 8)) + "\n")
    code, _, err = run(capsys, "check", str(path))
    assert code == 3 and "budget" in err
