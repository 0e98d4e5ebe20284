import json
import subprocess
import sys

import pytest

from descent_sets import cli
from descent_sets.beta import beta_single


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("DESCENT_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


@pytest.mark.parametrize("argv,want", [
    (["beta", "--n", "4", "--set", "2"], "5"),
    (["beta", "--n", "4", "--set", ""], "1"),
    (["beta", "--n", "11", "--set", "1,9", "--mod", "3"], "1"),
    (["beta", "--n", "30", "--set", "1"], "29"),
])
def test_beta(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out == want


@pytest.mark.parametrize("spec", ["1,x", "0", "4", "1,,2"])
def test_beta_bad_set(capsys, spec):
    code, _, err = run(capsys, "beta", "--n", "4", "--set", spec)
    assert code == 2 and "error" in err


def test_beta_json(capsys):
    code, out, _ = run(capsys, "beta", "--n", "6", "--set", "1,3", "--mod", "7", "--format", "json")
    assert code == 0
    want = beta_single(6, 0b101)
    assert json.loads(out) == {"n": 6, "set": [1, 3], "beta": want, "mod": 7, "residue": want % 7}


def test_factors(capsys):
    assert run(capsys, "factors", "--n", "5", "--m-max", "100")[1] == "Φ_2(×2), Φ_10"
    assert run(capsys, "factors", "--n", "15", "--m-max", "200")[1] == "none"
    out = run(capsys, "factors", "--n", "14", "--m-max", "200")[1]
    assert "Φ_4 (unexplained)" in out and "Φ_28 (unexplained)" in out
    assert "Φ_2 (unexplained)" not in out


def test_factors_json_is_byte_stable(capsys):
    a = run(capsys, "factors", "--n", "12", "--m-max", "300", "--format", "json")[1]
    b = run(capsys, "factors", "--n", "12", "--m-max", "300", "--format", "json", "--workers", "3")[1]
    assert a == b
    data = json.loads(a)
    assert data["factors"][-1] == {"m": 198, "multiplicity": "1"}
    assert "unexplained" not in run(capsys, "factors", "--n", "14", "--m-max", "50", "--format", "json")[1]


def test_factors_csv_and_flags(capsys):
    out = run(capsys, "factors", "--n", "9", "--m-max", "30", "--format", "csv", "--no-mult")[1]
    assert out.splitlines() == ["m,multiplicity", "2,?", "6,?", "18,?"]
    out = run(capsys, "factors", "--n", "9", "--m-max", "30", "--all-m", "--format", "csv")[1]
    assert out.splitlines()[1] == "2,2+"


def test_factors_out_of_range(capsys):
    code, _, err = run(capsys, "factors", "--n", "25")
    assert code == 3 and "24" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["factors"])
    assert exc.value.code == 2
    assert run(capsys, "verify", "nonsense")[0] == 2
    assert run(capsys, "factors", "--n", "5", "--m-max", "1")[0] == 2


@pytest.mark.parametrize("target,extra", [
    ("table1", ["--n-max", "15"]),
    ("phi6-q11", []),
    ("parity", ["--n", "11"]),
    ("macmahon", ["--n-max", "8"]),
    ("middle-level", ["--n-max", "4"]),
    ("phi2-double", ["--n", "10"]),
    ("phi2p-double-2q", ["--q", "3"]),
    ("phi2p-q-plus-1", ["--q", "11"]),
    ("eleven-mod-3", []),
    ("closed-form-2q", ["--q", "5"]),
    ("closed-form-q+1", ["--q", "9"]),
    ("table3", []),
    ("table6", ["--n-max", "10", "--m-max", "200"]),
    ("witnesses", ["--n-max", "12"]),
])
def test_verify_targets_pass(capsys, target, extra):
    code, out, _ = run(capsys, "verify", target, *extra)
    assert code == 0, out
    assert out.endswith("PASS")


def test_verify_aliases_resolve():
    assert set(cli.TARGET_ALIASES.values()) <= set(cli.VERIFY_TARGETS)


def test_verify_alias_runs(capsys):
    alias = next(a for a, t in cli.TARGET_ALIASES.items() if t == "phi6-q11")
    assert run(capsys, "verify", alias)[0] == 0


def test_verify_hypothesis_gap_skips(capsys):
    code, out, _ = run(capsys, "verify", "phi2p-q-plus-1", "--q", "3")
    assert code == 0
    assert "discrepancy" in out and "SKIPPED" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    from descent_sets import expected

    monkeypatch.setitem(expected.RHO, 7, expected.RHO[15])
    code, out, _ = run(capsys, "verify", "table1")
    assert code == 1 and "FAIL" in out


def test_table_command(capsys):
    code, out, _ = run(capsys, "table", "1")
    assert code == 0 and "29/2^6" in out and "3991" not in out
    code, out, _ = run(capsys, "table", "3", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "p,g,classes,match"
    code, out, _ = run(capsys, "table", "6", "--n-max", "8", "--m-max", "100", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["rows"][-1]["factors"] == "Φ_4(×2), Φ_28"


def test_histogram(capsys):
    code, out, _ = run(capsys, "histogram", "--n", "4", "--mod", "4", "--weighted", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["j,count,weighted", "0,0,0", "1,4,12", "2,0,0", "3,4,12"]


def test_cache_lifecycle(capsys, isolated_cache):
    code, out, _ = run(capsys, "cache", "build", "--n", "12", "--format", "json")
    assert code == 0 and json.loads(out)["tables"][0]["n"] == 12
    assert (isolated_cache / "beta_12.dsbt").exists()
    assert "beta_12" in run(capsys, "cache", "list")[1]
    run(capsys, "cache", "clear")
    assert not (isolated_cache / "beta_12.dsbt").exists()
    assert run(capsys, "cache", "build")[0] == 2


def test_large_tables_are_cached(capsys, isolated_cache):
    run(capsys, "factors", "--n", "16", "--m-max", "20")
    path = isolated_cache / "beta_16.dsbt"
    assert path.exists()
    path.write_bytes(b"garbage")
    code, out, _ = run(capsys, "factors", "--n", "16", "--m-max", "20")
    assert code == 0 and out == "Φ_4(×2), Φ_12, Φ_20"
    cfg = cli.RunConfig(cache_dir=isolated_cache)
    assert cfg.get_table(16).n == 16


def test_cache_dir_resolution(tmp_path, monkeypatch):
    monkeypatch.setenv("DESCENT_CACHE_DIR", str(tmp_path / "x"))
    assert cli.default_cache_dir() == tmp_path / "x"
    monkeypatch.delenv("DESCENT_CACHE_DIR")
    assert cli.default_cache_dir().name == "descent-sets"


def test_run_config_validation(tmp_path):
    with pytest.raises(ValueError):
        cli.RunConfig(cache_dir=tmp_path, workers=0)
    with pytest.raises(ValueError):
        cli.RunConfig(cache_dir=tmp_path, m_max=1)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "descent_sets.cli", "beta", "--n", "4", "--set", "2"],
        capture_output=True, text=True, env={"DESCENT_CACHE_DIR": str(tmp_path), "PATH": ""},
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "5"
