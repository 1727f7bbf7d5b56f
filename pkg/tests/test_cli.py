import json

import pytest

from wsteen.main import build_parser, main
from wsteen.routers import get_service


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    for name in ("WSTEEN_CACHE", "WSTEEN_DEBUG", "WSTEEN_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    cache = str(tmp_path / "cache")

    def invoke(*argv):
        code = main(list(argv) + ["--cache", cache])
        out, err = capsys.readouterr()
        return code, out, err

    return invoke


def test_every_command_is_installed():
    parser = build_parser()
    args = parser.parse_args(["report", "--list"])
    assert args.router.name == "report"
    assert args.field == "qcl"


def test_basis_as_json(run):
    code, out, _ = run("basis", "--object", "dual-steenrod", "--p", "1", "--q", "0", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["basis"] == ["t0"]
    assert payload["dim"] == 1


def test_basis_as_text(run):
    code, out, _ = run("basis", "--object", "h-kw", "--p", "4", "--q", "2")
    assert code == 0
    assert "dimension 1" in out
    assert "xb1^2" in out


def test_flags_reach_the_service(run, tmp_path):
    run("basis", "--object", "h-km", "--p", "0", "--q", "0", "--gen-cap", "4", "--debug")
    config = get_service().config
    assert config.gen_cap == 4
    assert config.lift_check == "always"
    assert config.cache_dir == str(tmp_path / "cache")


def test_act(run):
    code, out, _ = run("act", "--op", "Sq2", "--side", "left", "--expr", "t1")
    assert code == 0
    assert "= t0" in out


def test_usage_errors_exit_with_two(run):
    assert run()[0] == 2
    assert run("act", "--op", "Sq3", "--side", "left", "--expr", "t0")[0] == 2
    assert run("verify")[0] == 2


def test_engine_errors_exit_with_two(run):
    code, _, err = run("act", "--op", "Sq1", "--side", "left", "--expr", "t0 +")
    assert code == 2
    assert err.startswith("error:")
    assert run("basis", "--object", "h-hw", "--p", "0", "--q", "0", "--field", "reals")[0] == 2


def test_incompatible_pair_exits_with_one(run):
    code, _, err = run("pair", "--a", "t0")
    assert code == 1
    assert "not compatible" in err


def test_pair_generator(run):
    code, out, _ = run("pair", "--generator", "t", "--json")
    assert code == 0
    assert json.loads(out)["a"] == "tau"


def test_verify_on_a_small_window(run):
    code, out, _ = run("verify", "--suite", "d-squared", "--max-p", "6", "--min-q", "-1", "--max-q", "3")
    assert code == 0
    assert "suite d-squared over qcl: PASSED" in out


def test_report_after_verify(run):
    assert run("verify", "--suite", "lemma-c", "--max-index", "2")[0] == 0
    code, out, _ = run("report", "--suite", "lemma-c")
    assert code == 0
    assert "suite lemma-c over qcl: PASSED" in out
    code, out, _ = run("report", "--list")
    assert "verify:lemma-c:qcl" in out
    assert run("report", "--suite", "action")[0] == 2


def test_empty_report_list(run):
    code, out, _ = run("report", "--list")
    assert code == 0
    assert "no stored reports" in out


@pytest.mark.slow
def test_t_relations_over_fq3_flag_the_printed_form(run):
    _, out, _ = run("verify", "--suite", "lemma-t", "--field", "fq3", "--max-index", "2", "--no-cache")
    assert "inhomogeneous" in out
    assert "tau-corrected" in out
