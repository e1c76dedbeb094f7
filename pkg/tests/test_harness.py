import copy
import json
import os
import subprocess
import sys

import pytest

from regrading import (
    DocumentError,
    parse_and_validate,
    random_module,
    run_campaign,
    validate_module,
)
from regrading.harness import document_digest

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def load_fixture(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return json.load(fh)


@pytest.fixture(scope="module")
def kxx_doc():
    return load_fixture("kxx.json")


# ---- parsing -------------------------------------------------------------------

def test_empty_document_gives_empty_graph():
    resolved = parse_and_validate({})
    assert not resolved.groups and not resolved.modules and not resolved.jobs


def test_shipped_fixture_parses(kxx_doc):
    resolved = parse_and_validate(kxx_doc)
    assert set(resolved.algebras) == {"A"}
    assert set(resolved.modules) == {"P", "S"}
    assert resolved.morphisms["collapse"].codomain.is_trivial
    assert len(resolved.jobs) == 2


def test_dangling_module_reference_names_the_reference(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["modules"]["bad"] = {"algebra": "missing", "construct": "simple", "vertex": "v"}
    with pytest.raises(DocumentError) as err:
        parse_and_validate(doc)
    assert "modules/bad" in str(err.value)
    assert "missing" in str(err.value)


def test_dangling_job_reference(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["jobs"] = [{"id": "j", "kind": "inequality", "module": "nope", "morphism": "collapse"}]
    with pytest.raises(DocumentError, match="jobs/j"):
        parse_and_validate(doc)


def test_invalid_raw_algebra_is_rejected(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["algebras"]["bad"] = {
        "raw": {
            "group": "Z",
            "labels": ["e", "x"],
            "degrees": [[0], [1]],
            # x * x = e violates degree additivity
            "structure": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
            "unit": [1, 0],
            "radical": [1],
            "vertices": [0],
        }
    }
    with pytest.raises(DocumentError, match="algebras/bad"):
        parse_and_validate(doc)


def test_module_constructions(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["modules"]["Pshift"] = {"construct": "shift", "module": "P", "degree": [2]}
    doc["modules"]["Pdual"] = {"construct": "dual", "module": "P"}
    doc["modules"]["Ppush"] = {"construct": "pushforward", "module": "P", "morphism": "collapse"}
    doc["modules"]["I"] = {"algebra": "A", "construct": "injective", "vertex": "v"}
    doc["modules"]["R"] = {"algebra": "A", "construct": "random", "seed": 5,
                           "max_dim": 4, "support_radius": 1}
    doc["modules"]["Z0"] = {"algebra": "A", "construct": "zero"}
    doc["modules"]["Raw"] = {
        "algebra": "A", "construct": "raw",
        "components": [{"degree": [0], "dim": 1}],
        "action": [{"basis": 0, "degree": [0], "matrix": [[1]]}],
    }
    resolved = parse_and_validate(doc)
    assert resolved.modules["Pshift"].total_dim == 2
    assert resolved.modules["Ppush"].total_dim == 2
    assert resolved.modules["I"].total_dim == 2
    assert resolved.modules["Z0"].is_zero
    assert resolved.modules["Raw"].total_dim == 1


# ---- random modules ---------------------------------------------------------------

def test_random_module_determinism(kronecker):
    a = random_module(kronecker, 11, max_dim=6, support_radius=2)
    b = random_module(kronecker, 11, max_dim=6, support_radius=2)
    assert a.dims == b.dims and a.action == b.action


def test_random_modules_all_validate(kronecker, csquare, dual_numbers):
    count = 0
    for algebra in (kronecker, csquare, dual_numbers):
        for seed in range(17):
            m = random_module(algebra, seed, max_dim=6, support_radius=2)
            assert validate_module(m).passed
            assert 1 <= m.total_dim <= 6
            count += 1
    assert count >= 50


def test_random_module_zero_budget(kronecker):
    assert random_module(kronecker, 3, max_dim=0).is_zero


# ---- campaigns ----------------------------------------------------------------------

def test_campaign_pid_only_exits_clean():
    resolved = parse_and_validate({"jobs": [{"id": "pid", "kind": "pid-demo"}]})
    report = run_campaign(resolved, seed=1)
    assert report.passed
    assert report.job_results[0]["id"] == "pid"


def test_campaign_reports_are_byte_identical(kxx_doc):
    r1 = run_campaign(parse_and_validate(kxx_doc), seed=42)
    r2 = run_campaign(parse_and_validate(kxx_doc), seed=42)
    assert r1.to_json() == r2.to_json()


def test_campaign_digest_tracks_inputs(kxx_doc):
    doc2 = copy.deepcopy(kxx_doc)
    doc2["jobs"] = doc2["jobs"][:1]
    assert document_digest(kxx_doc, 1) != document_digest(doc2, 1)
    assert document_digest(kxx_doc, 1) != document_digest(kxx_doc, 2)
    assert document_digest(kxx_doc, 1) == document_digest(copy.deepcopy(kxx_doc), 1)


def test_campaign_planted_false_expectation_fails_naming_check(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["jobs"] = [{"id": "planted", "kind": "inequality", "module": "P",
                    "morphism": "collapse", "expect_graded": 1}]
    report = run_campaign(parse_and_validate(doc), seed=0)
    assert not report.passed
    failing = [c for j in report.job_results for c in j["checks"]
               if c["outcome"] == "fail"]
    assert any(c["name"] == "expected-graded-dimension" for c in failing)


def test_campaign_job_errors_are_captured_not_raised(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["jobs"] = [{"id": "boom", "kind": "resolution", "module": "S",
                    "morphism": "collapse", "algebra": "A", "window": 2}]
    # S is graded by Z, not by the codomain: the job itself errors
    report = run_campaign(parse_and_validate(doc), seed=0)
    assert not report.passed
    checks = report.job_results[0]["checks"]
    assert checks[0]["name"] == "job-executes"


def test_campaign_timings_are_opt_in(kxx_doc):
    resolved = parse_and_validate(kxx_doc)
    without = run_campaign(resolved, seed=5)
    with_t = run_campaign(resolved, seed=5, include_timings=True)
    assert without.to_dict()["timings"] == {"recorded": False}
    assert with_t.to_dict()["timings"]["recorded"] is True


def test_unknown_job_kind(kxx_doc):
    doc = copy.deepcopy(kxx_doc)
    doc["jobs"] = [{"id": "weird", "kind": "frobnicate"}]
    report = run_campaign(parse_and_validate(doc), seed=0)
    assert not report.passed


# ---- command line ----------------------------------------------------------------------

def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "regrading.cli", *args],
                          capture_output=True, text=True)


def test_cli_validate_and_demo(tmp_path):
    out = run_cli("validate", os.path.join(FIXTURES, "kxx.json"))
    assert out.returncode == 0
    assert "all objects validated" in out.stdout
    out = run_cli("demo-pid")
    assert out.returncode == 0
    assert "RESULT: pass" in out.stdout


def test_cli_campaign_roundtrip(tmp_path):
    target = tmp_path / "report.json"
    out = run_cli("campaign", os.path.join(FIXTURES, "kxx.json"),
                  "--seed", "9", "--json", str(target))
    assert out.returncode == 0
    payload = json.loads(target.read_text())
    assert payload["summary"]["failed"] == 0
    assert payload["timings"] == {"recorded": False}


def test_cli_bad_file_is_usage_error(tmp_path):
    missing = tmp_path / "nope.json"
    out = run_cli("validate", str(missing))
    assert out.returncode == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    out = run_cli("validate", str(broken))
    assert out.returncode == 2
    assert "line" in out.stderr


def test_cli_failing_verification_exits_one(tmp_path):
    doc = load_fixture("kxx.json")
    doc["jobs"] = [{"id": "planted", "kind": "inequality", "module": "P",
                    "morphism": "collapse", "expect_graded": 3}]
    f = tmp_path / "doc.json"
    f.write_text(json.dumps(doc))
    out = run_cli("campaign", str(f))
    assert out.returncode == 1


def test_cli_cap_environment_variable(tmp_path):
    env = dict(os.environ, REGRADING_CAP="2")
    out = subprocess.run(
        [sys.executable, "-m", "regrading.cli", "resolve",
         os.path.join(FIXTURES, "kxx.json"), "--module", "S"],
        capture_output=True, text=True, env=env)
    assert out.returncode == 0
    assert "cap 2" in out.stdout
