import json
from fractions import Fraction

import numpy as np
import pytest

from susydirac import cli
from susydirac import susyengine as se
from susydirac import verifier as vf
from susydirac.errors import ParseError

MINIMAL = """\
name = minimal
lambda = 5
mu = 6

[function]
kind = regular
n = 1

[target]
kind = regular
n = 2
"""

OFF_LATTICE = """\
name = off-lattice
lambda = 5
mu = 6
points = 121

[function]
kind = general
ky = 8.0

[target]
kind = regular
n = 2
"""


# config text ----------------------------------------------------------------------


def test_minimal_config_gets_defaults():
    cfg = cli.parse_config(MINIMAL)
    assert cfg.grid == cli.GridSpec(-6.0, 6.0, 1201)
    assert cfg.prominence_frac == vf.DEFAULT_PROMINENCE
    assert (cfg.tolerances.reality, cfg.tolerances.residual) == (1e-6, 1e-7)
    assert cfg.functions == (se.Regular(1),)
    assert cfg.target == se.Regular(2)
    assert cfg.outputs == cli.Outputs()


@pytest.mark.parametrize("name", [name for name, _ in cli.list_scenarios()])
def test_format_parse_round_trip(name):
    cfg = cli.builtin_config(name)
    assert cli.parse_config(cli.format_config(cfg)) == cfg


def test_round_trip_keeps_outputs_and_overrides():
    cfg = cli.builtin_config("fig7-right").with_overrides(points=301, csv_path="a.csv", json_path="b.json", reality_tol=1e-5)
    back = cli.parse_config(cli.format_config(cfg))
    assert back == cfg
    assert back.functions[0].ky_squared == Fraction(313, 4)


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n" + MINIMAL.replace("mu = 6", "mu = 6   # trailing")
    assert cli.parse_config(text) == cli.parse_config(MINIMAL)


def test_too_few_points_rejected():
    with pytest.raises(ParseError) as err:
        cli.parse_config(MINIMAL.replace("mu = 6", "mu = 6\npoints = 2"))
    assert err.value.field == "points"


def test_duplicate_energies_rejected_with_field_path():
    # a general seed at the energy of the regular n = 1 seed
    text = MINIMAL.replace("[target]", "[function]\nkind = general\nky_squared = 193/4\n\n[target]")
    with pytest.raises(ParseError) as err:
        cli.parse_config(text)
    assert err.value.field.startswith("functions[")


@pytest.mark.parametrize(
    "text, line, field",
    [
        ("name = a\nlambda = 5\nmu = x\n[target]\nkind = regular\nn = 0\n", 3, "mu"),
        ("name = a\nbogus = 1\n", 2, "bogus"),
        ("name = a\nlambda = 5\nlambda = 6\n", 3, "lambda"),
        ("name = a\n[section]\n", 2, None),
        ("name = a\njust text\n", 2, None),
    ],
)
def test_parse_errors_carry_location(text, line, field):
    with pytest.raises(ParseError) as err:
        cli.parse_config(text)
    assert err.value.line == line
    assert err.value.field == field
    assert f"line {line}" in str(err.value)


@pytest.mark.parametrize("missing", ["name", "lambda", "mu"])
def test_required_keys(missing):
    text = "\n".join(l for l in MINIMAL.splitlines() if not l.startswith(missing + " "))
    with pytest.raises(ParseError) as err:
        cli.parse_config(text)
    assert err.value.field == missing


def test_target_required():
    with pytest.raises(ParseError):
        cli.parse_config(MINIMAL.split("[target]")[0])


def test_load_from_path_and_stream(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text(MINIMAL)
    with open(path) as fh:
        assert cli.load_config(path) == cli.load_config(fh) == cli.parse_config(MINIMAL)
    with pytest.raises(ParseError):
        cli.load_config(tmp_path / "missing.cfg")


# catalog --------------------------------------------------------------------------


def test_catalog_size_and_names():
    names = [name for name, _ in cli.list_scenarios()]
    assert len(names) == 15 == len(set(names))
    assert {"fig1", "fig3", "fig5", "sol2", "sol2n"} <= set(names)


def test_fourth_order_nonregular_scenario():
    cfg = cli.builtin_config("fig8-right")
    assert (cfg.lam, cfg.mu) == (9, 10)
    first, *rest = cfg.functions
    assert isinstance(first, se.General) and first.ky_value == 14.5
    assert rest == [se.Regular(3), se.Regular(4), se.Regular(8)]


def test_unknown_builtin():
    with pytest.raises(ParseError):
        cli.builtin_config("nope")


@pytest.fixture(scope="module")
def catalog_results():
    return {name: cli.run_scenario(cli.builtin_config(name)) for name, _ in cli.list_scenarios()}


@pytest.mark.parametrize("name", [name for name, _ in cli.list_scenarios()])
def test_every_builtin_passes_its_gates(catalog_results, name):
    res = catalog_results[name]
    assert res.exit_code == cli.EXIT_OK
    assert res.reality.passed
    assert all(r.passed for r in res.residuals.values())


def test_first_order_summary_values(catalog_results):
    res = catalog_results["fig7-right"]
    assert res.reality.r1 == pytest.approx(57.4984, rel=1e-5)
    assert res.peaks.detected == 3


@pytest.mark.parametrize("name", ["fig2-left", "fig6-right", "fig8-right"])
def test_csv_and_summary_agree_on_peaks(catalog_results, name):
    res = catalog_results[name]
    rows = np.loadtxt(cli.csv_text(res).splitlines()[1:], delimiter=",")
    cols = cli.CSV_HEADER.split(",")
    x, v, reu = rows[:, 0], rows[:, cols.index("V")], rows[:, cols.index("ReU")]
    summary = json.loads(cli.json_text(res))
    assert vf.detect_peaks(x, reu, v, res.config.prominence_frac).detected == summary["peaks_detected"]


# outputs --------------------------------------------------------------------------


def test_csv_format(catalog_results):
    text = cli.csv_text(catalog_results["fig2-left"])
    assert "\r" not in text and text.endswith("\n")
    lines = text.splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 1202
    first = lines[1].split(",")
    assert float(first[0]) == -6.0
    for field in first:
        assert format(float(field), ".17g") == field


def test_json_keys(catalog_results):
    summary = json.loads(cli.json_text(catalog_results["fig8-right"]))
    assert set(summary) == {
        "name", "r1", "max_rel_dev", "energies", "residual_max_rel", "peaks_detected", "peaks_predicted", "exit_code",
    }
    assert summary["energies"] == [-841 / 4, -521 / 4, -481 / 4, -401 / 4]
    assert summary["peaks_predicted"] == 7


def test_runs_are_bit_identical(tmp_path, monkeypatch):
    cfg = cli.builtin_config("fig6-right").with_overrides(points=601)
    outputs = []
    for i, threads in enumerate(["1", "1", "4"]):
        monkeypatch.setenv(cli.THREADS_ENV, threads)
        run = cfg.with_overrides(csv_path=str(tmp_path / f"{i}.csv"), json_path=str(tmp_path / f"{i}.json"))
        cli.run_scenario(run)
        outputs.append(((tmp_path / f"{i}.csv").read_bytes(), (tmp_path / f"{i}.json").read_bytes()))
    assert outputs[0] == outputs[1] == outputs[2]


def test_off_lattice_seed_fails_reality(tmp_path):
    path = tmp_path / "probe.cfg"
    path.write_text(OFF_LATTICE)
    out = tmp_path / "probe.json"
    code = cli.main(["run", str(path), "--json", str(out)])
    assert code == cli.EXIT_REALITY
    summary = json.loads(out.read_text())
    assert summary["exit_code"] == cli.EXIT_REALITY
    assert summary["max_rel_dev"] > 1e-3


# command line ---------------------------------------------------------------------


def test_main_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 15 and out[0].startswith("fig1")


def test_main_validate(tmp_path, capsys):
    path = tmp_path / "c.cfg"
    path.write_text(MINIMAL)
    assert cli.main(["validate", str(path)]) == 0
    assert "minimal: ok" in capsys.readouterr().out
    path.write_text(MINIMAL.replace("points", "").replace("mu = 6", "mu = 6\npoints = 2"))
    assert cli.main(["validate", str(path)]) == cli.EXIT_CONFIG
    assert "points" in capsys.readouterr().err


def test_main_run_with_overrides(tmp_path, capsys):
    csv_path = tmp_path / "o.csv"
    code = cli.main(["run", "fig2-left", "--points", "241", "--grid-min", "-5", "--grid-max", "5", "--csv", str(csv_path)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["name"] == "fig2-left" and summary["peaks_detected"] == 1
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 242 and lines[1].startswith("-5,")


def test_main_unknown_source(capsys):
    assert cli.main(["run", "no-such-thing"]) == cli.EXIT_CONFIG


def test_main_reads_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(MINIMAL.replace("mu = 6", "mu = 6\npoints = 121")))
    assert cli.main(["run", "-"]) == 0


def test_exit_code_mapping():
    from susydirac.errors import WronskianZero

    assert cli.exit_code_for(ParseError("x")) == cli.EXIT_CONFIG
    assert cli.exit_code_for(WronskianZero("x")) == cli.EXIT_SINGULAR
    with pytest.raises(KeyError):
        cli.exit_code_for(KeyError("unexpected"))
