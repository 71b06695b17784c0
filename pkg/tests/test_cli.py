import subprocess
import sys

import pytest

from compop.cli import main
from compop.experiments import parse_csv


def test_singvals_scalar(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["singvals", "--symbol", "family=scalar s=0.5", "--n-max", "5", "--out", str(out)]) == 0
    rows = parse_csv(out.read_text())
    assert [r.n for r in rows] == [1, 2, 3, 4, 5]
    assert rows[4].sigma_n == pytest.approx(1 / 16, abs=1e-14)


def test_n_max_from_spec(capsys):
    assert main(["singvals", "--symbol", "family=scalar s=0.5 n_max=3"]) == 0
    assert len(parse_csv(capsys.readouterr().out)) == 3


def test_empty_n_list_header_only(capsys):
    assert main(["bounds", "--symbol", "family=corner alpha=0.5", "--n-list", ""]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# compop v1") and parse_csv(out) == []


def test_config_error_exit_code(capsys):
    assert main(["bounds", "--symbol", "family=corner alpha=x", "--n-list", "5"]) == 2
    assert "column" in capsys.readouterr().err


def test_check_pass_and_unknown(capsys):
    assert main(["check", "rank-one"]) == 0
    assert "PASS rank-one" in capsys.readouterr().out
    assert main(["check", "nope"]) == 2


def test_fit_and_config_dump(tmp_path, capsys):
    out = tmp_path / "s.csv"
    main(["singvals", "--symbol", "family=scalar s=0.5", "--n-max", "10", "--out", str(out)])
    assert main(["fit", str(out), "--model", "sqrt_n"]) == 0
    assert main(["config-dump", "--grid", "1234", "--seed", "9"]) == 0
    dump = capsys.readouterr().out
    assert "upper_grid=1234" in dump and "seed=9" in dump


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "compop", "config-dump"], capture_output=True, text=True)
    assert r.returncode == 0 and "ref_basis=512" in r.stdout
