"""
Tests for the command line: exit codes, output documents and settings.
"""
import io
import json

import pytest

from app.errors import CapExceeded, PreconditionError
from app.fixtures import FIXTURE_NAMES, ExpectationResult, load_fixture
from app.market import instance_to_document
from cli.commands import RunConfig, main, run
from tests.generators import linear_document


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Keeps a quotamatch.toml in the repository from leaking into the tests."""
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def fixture_path(write_json):
    def writer(name):
        return write_json(f"{name}.json", instance_to_document(load_fixture(name).instance))
    return writer


def output(capsys):
    return json.loads(capsys.readouterr().out)


def test_validate_reports_agents(fixture_path, capsys):
    assert main(["validate", fixture_path("prop1-nonexistence")]) == 0
    doc = output(capsys)
    assert doc["valid"] is True
    assert doc["workers"] == ["w1", "w2", "w3"]
    assert doc["firms"] == ["f1", "f2"]


def test_malformed_instance_exits_invalid(write_json, capsys):
    """
    Tests the error document for a broken instance.

    Why: Scripts branch on the exit code and read the error kind.
    """
    path = write_json("broken.json", {"version": 1, "mode": "linear"})

    assert main(["validate", path]) == 2
    assert output(capsys)["error"]["kind"] == "SchemaError"


def test_missing_file_exits_invalid(capsys):
    assert main(["validate", "nowhere.json"]) == 2
    assert output(capsys)["error"]["kind"] == "FileNotFoundError"


def test_long_decimal_values_are_solved_exactly(write_json, capsys):
    ones = "1" * 5000
    path = write_json("long.json", linear_document({"f": {"w": ones}}))

    assert main(["validate", path]) == 0
    capsys.readouterr()
    assert main(["solve", path]) == 0
    doc = output(capsys)
    assert doc["assignment"] == {"w": "f"}
    assert doc["lp_objective"] == ones


def test_solve_hierarchy_certificate(fixture_path, capsys):
    """
    Tests the certificate of the LP route.

    Why: It carries the arrangement together with everything needed to
    audit it: payoffs, duals and the verification flags.
    """
    assert main(["solve", fixture_path("example2-hierarchy")]) == 0
    doc = output(capsys)

    assert doc["assignment"] == {"w1": "f", "w2": None, "w3": "f", "w4": None}
    assert doc["flags"] == {"integral": True, "stable": True, "r_stable": True, "efficient": True}
    assert "notes" not in doc
    assert doc["lp_objective"] == "3.5"
    assert set(doc["duals"]) == {"alloc[w1]", "alloc[w2]", "alloc[w3]", "alloc[w4]",
                                 "ub[f:w1,w2,w3,w4]", "ub[f:w1,w2]", "ub[f:w3,w4]"}


def test_certificate_feeds_back_into_check(fixture_path, tmp_path, capsys):
    instance = fixture_path("example2-hierarchy")
    certificate = tmp_path / "certificate.json"

    assert main(["solve", instance, "--output", str(certificate)]) == 0
    assert main(["check", instance, str(certificate)]) == 0
    doc = output(capsys)
    assert doc["stable"] is True
    assert doc["failure"] is None


def test_check_reports_firm_ir(fixture_path, write_json, capsys):
    arrangement = write_json("arr.json", {"version": 1, "assignment": {"w": "f"},
                                          "salaries": {"f": {"w": "2"}}})

    assert main(["check", fixture_path("appB2-nonunique"), arrangement]) == 3
    doc = output(capsys)
    assert doc["failure"] == {"kind": "firm_ir", "firm": "f", "payoff": "-1"}
    assert doc["payoffs"] == {"workers": {"w": "2.5"}, "firms": {"f": "-1"}}


def test_check_rejects_partial_salaries(fixture_path, write_json, capsys):
    arrangement = write_json("arr.json", {"version": 1, "assignment": {"w": "f"}, "salaries": {}})

    assert main(["check", fixture_path("appB2-nonunique"), arrangement]) == 2
    assert output(capsys)["error"]["kind"] == "SchemaError"


def test_r_mode_check(fixture_path, write_json, capsys):
    arrangement = write_json("arr.json", {"version": 1, "assignment": {"w": "f"},
                                          "salaries": {"f": {"w": "0"}}})

    assert main(["check", fixture_path("appB3-ir-odds"), arrangement, "--r-mode"]) == 0
    assert output(capsys)["notion"] == "r-stable"


def test_solve_fractional_outside_integral_classes(fixture_path, capsys):
    """
    Tests the exit code for a fractional optimum.

    Why: Pairwise limits that are no polymatroid get their own code so
    callers can fall back to another method.
    """
    assert main(["solve", fixture_path("appB1-nonintegral")]) == 4
    doc = output(capsys)
    assert doc["integral"] is False
    assert doc["constraints"] == "other"
    assert [c["value"] for c in doc["fractional"]] == ["0.5", "0.5", "0.5"]


def test_solve_one_firm_route(fixture_path, capsys):
    assert main(["solve", fixture_path("appB1-nonintegral"), "--one-firm"]) == 0
    doc = output(capsys)
    assert doc["lp_objective"] is None
    assert doc["flags"]["stable"] is True
    assert doc["notes"]["integral"].startswith("vacuous")


def test_solve_r_mode(fixture_path, capsys):
    assert main(["solve", fixture_path("appB3-ir-odds"), "--r-mode"]) == 0
    doc = output(capsys)
    assert doc["payoffs"]["firms"] == {"f": "-1"}
    assert "lb[f:w]" in doc["duals"]


def test_r_mode_certificate_keeps_both_notions(fixture_path, capsys):
    """
    Tests the stability flags of an r-mode certificate.

    Why: The mandatory hire leaves the firm at a negative payoff, so the
    arrangement is r-stable but not stable and must be reported as such.
    """
    assert main(["solve", fixture_path("appB3-ir-odds"), "--r-mode"]) == 0
    assert output(capsys)["flags"] == {"integral": True, "stable": False, "r_stable": True,
                                       "efficient": True}


def test_r_stability_failure_sets_exit_code(fixture_path, mocker, capsys):
    verdict = mocker.Mock(stable=False)
    mocker.patch("cli.commands.check_r_stable", return_value=verdict)

    assert main(["solve", fixture_path("appB3-ir-odds"), "--r-mode"]) == 3
    assert output(capsys)["flags"]["r_stable"] is False


def test_dump_lp(fixture_path, capsys):
    assert main(["solve", fixture_path("appB2-nonunique"), "--dump-lp"]) == 0
    err = capsys.readouterr().err
    assert err.startswith("maximize")
    assert "alloc[w]:" in err


def test_dump_lp_to_stream(fixture_path):
    stream = io.StringIO()
    code, _ = run(RunConfig("solve", fixture_path("appB2-nonunique"), dump_lp=True,
                            dump_stream=stream))
    assert code == 0
    assert stream.getvalue().splitlines()[0].startswith("maximize")


def test_exists_without_stable_arrangement(fixture_path, capsys):
    assert main(["exists", fixture_path("prop1-nonexistence")]) == 3
    doc = output(capsys)
    assert doc["exists"] is False
    assert "witness" not in doc
    assert len(doc["obstruction"]) == 1


def test_exists_with_witness(fixture_path, capsys):
    assert main(["exists", fixture_path("example1-substitutes")]) == 0
    doc = output(capsys)
    assert doc["exists"] is True
    assert set(doc["witness"]) == {"version", "assignment", "salaries", "payoffs"}


def test_oracle_and_assignment_cap(fixture_path, capsys):
    """
    Tests brute force with and without room under the cap.

    Why: Three workers and two firms give 27 assignments.
    """
    instance = fixture_path("prop1-nonexistence")

    assert main(["oracle", instance]) == 0
    doc = output(capsys)
    assert doc["value"] == "2.9"
    assert doc["assignments"] == [{"w1": "f1", "w2": "f2", "w3": "f1"}]

    assert main(["oracle", instance, "--assign-cap", "26"]) == 5
    assert output(capsys)["error"]["kind"] == "CapExceeded"


def test_demand(fixture_path, capsys):
    args = ["demand", fixture_path("example1-substitutes"), "--firm", "f",
            "--salary", "w1=0.5", "--salary", "w2=1", "--salary", "w3=1/2"]

    assert main(args) == 0
    assert output(capsys)["demand"] == [["w1", "w3"]]


def test_demand_needs_every_salary(fixture_path, capsys):
    args = ["demand", fixture_path("example1-substitutes"), "--firm", "f", "--salary", "w1=0.5"]

    assert main(args) == 2
    assert output(capsys)["error"]["kind"] == "PreconditionError"


def test_analyze(fixture_path, capsys):
    assert main(["analyze", fixture_path("example1-substitutes")]) == 0
    firm = output(capsys)["firms"]["f"]

    assert firm["entries"] == 2
    assert firm["hierarchy"]["status"] == "violated"
    assert firm["hierarchy"]["witness"] == [["w1", "w2"], ["w2", "w3"]]
    assert firm["feasible_sets"] == 5
    assert firm["lower_quotas"] is False


def test_reproduce(capsys):
    assert main(["reproduce", "appB2-nonunique"]) == 0
    doc = output(capsys)
    assert doc["passed"] is True
    assert all(e["passed"] for e in doc["expectations"])

    assert main(["reproduce", "nope"]) == 2
    assert output(capsys)["error"]["kind"] == "UnknownFixture"


def test_reproduce_reports_failed_expectation(mocker, capsys):
    """
    Tests exit code 1 when an expectation no longer holds.

    Why: Regressions in a worked example must fail scripts that rerun it.
    """
    mocker.patch("cli.commands.run_expectations",
                 return_value=[ExpectationResult("forced", False, 1, 2)])

    assert main(["reproduce", "appB2-nonunique"]) == 1
    assert output(capsys)["passed"] is False


def test_fixtures_listing(capsys):
    assert main(["fixtures"]) == 0
    assert [f["name"] for f in output(capsys)["fixtures"]] == list(FIXTURE_NAMES)


def test_unverified_flag_on_cap(fixture_path, mocker, capsys):
    mocker.patch("cli.commands.check_efficient", side_effect=CapExceeded("too many"))

    assert main(["solve", fixture_path("example2-hierarchy")]) == 0
    assert output(capsys)["flags"]["efficient"] is None


def test_settings_file_caps(fixture_path, tmp_path, capsys):
    settings = tmp_path / "caps.toml"
    settings.write_text("assign_cap = 10\n", encoding='utf-8')

    assert main(["oracle", fixture_path("prop1-nonexistence"), "--config", str(settings)]) == 5
    assert output(capsys)["error"]["kind"] == "CapExceeded"


def test_default_settings_file_is_read(fixture_path, tmp_path, capsys):
    (tmp_path / "quotamatch.toml").write_text("enum_cap = 4\n", encoding='utf-8')

    assert main(["analyze", fixture_path("example1-substitutes")]) == 5


@pytest.mark.parametrize("text, kind", [
    ("assign_cap = 0\n", "SettingsError"),
    ("colour = true\n", "SettingsError"),
    ("assign_cap = [\n", "TomlDecodeError"),
])
def test_bad_settings_file(fixture_path, tmp_path, capsys, text, kind):
    settings = tmp_path / "bad.toml"
    settings.write_text(text, encoding='utf-8')

    assert main(["validate", fixture_path("appB2-nonunique"), "--config", str(settings)]) == 2
    assert output(capsys)["error"]["kind"] == kind


def test_cap_flag_out_of_range(fixture_path, capsys):
    assert main(["analyze", fixture_path("appB2-nonunique"), "--enum-cap", "0"]) == 2
    assert output(capsys)["error"]["kind"] == "PreconditionError"


def test_run_config_preconditions():
    with pytest.raises(PreconditionError):
        RunConfig("exists", r_mode=True)
    with pytest.raises(PreconditionError):
        RunConfig("teleport")


def test_version_banner(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert capsys.readouterr().out.strip() == "quotamatch 1.0.1 (documents v1)"
