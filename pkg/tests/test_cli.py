import json
import pathlib
import subprocess
import sys

import numpy as np
import pytest

from golden_commands import GOLDEN
from smklab import catalog
from smklab.cli import EXIT_CERTIFICATE, EXIT_CONFIG, EXIT_NUMERIC, Grid, main
from smklab.tables import Table

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def run(args, tmp_path, name="out"):
    out = tmp_path / name
    code = main(args.split() + ["--out", str(out)])
    return code, out.read_text() if out.exists() else None


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_regenerates_bit_exact(name, tmp_path, backend):
    code, text = run(GOLDEN[name], tmp_path)
    assert code == 0
    assert text.encode() == (GOLDEN_DIR / name).read_bytes()


def test_eval_constant_column(tmp_path):
    code, text = run("--command eval --fn one --n 5 --grid 0:1:0.25", tmp_path)
    t = Table.from_csv(text)
    assert code == 0
    assert all(abs(v - 1) < 1e-11 for v in t.column("S[n=5]"))


def test_defaults_in_header(tmp_path):
    _, text = run("--command compare", tmp_path)
    t = Table.from_csv(text)
    assert t.meta["fn"] == "cube" and t.meta["n"] == "10" and t.meta["a"] == "1.5"
    _, text = run("--command bivariate --m 5 --grid 0:1:0.5", tmp_path)
    t = Table.from_csv(text)
    assert t.meta["a"] == "3.0" and t.meta["f"] == "(1+x) exp(-y) sin(x+y)"


def test_json_round_trip_and_determinism(tmp_path):
    args = "--command eval --fn cos_pi --n 7 --grid 0:1:0.1 --format json"
    _, a = run(args, tmp_path, "a")
    _, b = run(args, tmp_path, "b")
    assert a == b
    t = Table.from_json(a)
    assert Table.from_json(t.to_json()).rows == t.rows
    csv_rows = Table.from_csv(run(args.replace("json", "csv"), tmp_path, "c")[1]).rows
    assert csv_rows == t.rows


def test_moments_table(tmp_path):
    _, text = run("--command moments --n 5 --grid 0:2:0.5", tmp_path)
    t = Table.from_csv(text)
    rows = {(r[1], r[3]): r for r in t.rows}
    assert rows[(0.0, "m1")][4] == 1 / 10
    assert all(r[4] == 1.0 for r in t.rows if r[3] == "m0")
    assert max(r[6] for r in t.rows if r[3] != "c3_as_printed") <= 1e-9
    assert max(r[6] for r in t.rows if r[3] == "c3_as_printed") > 1e-2


def test_bivariate_moments_table(tmp_path):
    _, text = run("--command moments --m 5 --a 3 --grid 0:1:0.5", tmp_path)
    t = Table.from_csv(text)
    assert max(r[6] for r in t.rows if not r[3].endswith("printed")) <= 1e-9


def test_korovkin_table(tmp_path):
    _, text = run("--command korovkin", tmp_path)
    t = Table.from_csv(text)
    for col in ("dev_e1", "dev_e2"):
        vals = t.column(col)
        assert all(b < a for a, b in zip(vals, vals[1:]))
    _, text = run("--command korovkin --weighted --n 10", tmp_path)
    assert Table.from_csv(text).columns[-2:] == ["tail_e1", "tail_e2"]


def test_density_tables(tmp_path):
    _, text = run("--command density --fn squares --horizon 10000", tmp_path)
    assert Table.from_csv(text).rows[-1] == [10000, 100, 0.01]
    _, text = run("--command density --fn evens --horizon 1000", tmp_path)
    assert Table.from_csv(text).rows[-1][2] == 0.5
    _, text = run("--command density --fn counterexample --beta 0.51", tmp_path)
    t = Table.from_csv(text)
    assert t.meta["verdict"] == "consistent" and "false" in t.meta["decaying"]
    _, text = run("--command density --fn dev_e2 --epsilon 0.01 --horizon 100000", tmp_path)
    assert Table.from_csv(text).meta["verdict"] == "consistent"
    # dev_e2 is about 1.6/n, so 1594 indices exceed 1e-3 below 10**5
    _, text = run("--command density --fn dev_e2 --epsilon 0.001 --horizon 100000", tmp_path)
    t = Table.from_csv(text)
    assert t.meta["verdict"] == "inconsistent" and t.rows[-1][2] == 1594


def test_certify_and_strict(tmp_path):
    code, text = run("--command certify --fn one --strict", tmp_path)
    assert code == 0 and Table.from_csv(text).meta["failed"] == "0"
    code, text = run("--command certify --fn identity --bound lipschitz --bound-scale 0.5 --strict", tmp_path)
    assert code == EXIT_CERTIFICATE and int(Table.from_csv(text).meta["failed"]) > 0


@pytest.mark.parametrize("args", [
    "--command eval --grid 1:0:0.1",
    "--command eval --grid -1:1:0.1",
    "--command eval --grid 0:1:0",
    "--command eval --grid 0:1",
    "--command eval --fn nope",
    "--command eval --fn default2d",
    "--command eval --a 1.0",
    "--command eval --n 0",
    "--command eval --tail-eps 2",
    "--command density --fn nope",
    "--command certify --fn one2d --m 0 --grid 0:1:0.5",
    "--command frobnicate",
])
def test_config_errors(args, capsys):
    assert main(args.split()) == EXIT_CONFIG
    assert capsys.readouterr().err.strip()


def test_numerical_failure_exit(capsys, monkeypatch):
    pole = catalog.FunctionCatalogEntry("pole", 1, lambda u: np.where(u > 0.3, np.nan, u), "nan beyond 0.3")
    monkeypatch.setitem(catalog.CATALOG, "pole", pole)
    assert main("--command eval --fn pole --n 4 --grid 0:1:1".split()) == EXIT_NUMERIC
    assert "numerical failure" in capsys.readouterr().err


def test_grid_points():
    assert Grid.parse("0:1:0.25").points() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(Grid.parse("0:2:0.05").points()) == 41


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "smklab", "--command", "eval", "--fn", "one",
                           "--n", "3", "--grid", "0:1:0.5", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["columns"] == ["x", "f", "S[n=3]"]
