import pandas as pd
import pytest
import regex

from helpers.config_parser import parse_config
from helpers.csv_utils import ABORT_MARKER, SWEEP_COLUMNS
from ui.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main


FAST = """
[quadrature]
n_theta = 200
n_chi = 1600
rel_tol = 1e-4
"""

IDEAL_RUN = """
[geometry]
type = ideal
d = 10
""" + FAST


def _pressure(text: str) -> float:
    match = regex.search(r"P\| = (\S+)|P = (\S+)", text)
    assert match, text
    return float(match.group(1) or match.group(2))


def test_compute_ideal(write_run, capsys):
    assert main(["compute", str(write_run(IDEAL_RUN)), "--threads", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "-1.300" in out
    assert _pressure(out) == pytest.approx(-1.30013e5, rel=1e-3)
    assert "est_error" in out and "tail_fraction" in out


def test_compute_magnitude(write_run, capsys):
    assert main(["compute", str(write_run(IDEAL_RUN)), "--magnitude"]) == EXIT_OK
    assert _pressure(capsys.readouterr().out) == pytest.approx(1.30013e5, rel=1e-3)


def test_compute_vacuum_material(write_run, capsys):
    path = write_run("[material]\nmodel = small_density\n[geometry]\ntype = halfspaces\nd = 10\n" + FAST)
    assert main(["compute", str(path)]) == EXIT_OK
    assert _pressure(capsys.readouterr().out) == 0.0


def test_compute_zero_gap(write_run, capsys):
    path = write_run("[geometry]\ntype = ideal\nd = 0\n")
    assert main(["compute", str(path)]) == EXIT_NUMERIC
    assert "logarithmically" in capsys.readouterr().err


def test_compute_bad_config(write_run, capsys):
    path = write_run("[geometry]\ntype = wormhole\nd = 10\n")
    assert main(["compute", str(path)]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_compute_invalid_geometry_is_a_config_error(write_run, capsys):
    path = write_run("[geometry]\ntype = slabs\nd = 10\nt = -1\n")
    assert main(["compute", str(path)]) == EXIT_CONFIG
    assert "slab thickness" in capsys.readouterr().err


def test_compute_csv(write_run, capsys):
    assert main(["compute", str(write_run(IDEAL_RUN)), "--csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert lines[1].startswith("10,")


def test_dump_config_round_trip(write_run, capsys):
    path = write_run("[material]\npreset = diamond\n" + IDEAL_RUN)
    assert main(["compute", str(path), "--dump-config"]) == EXIT_OK
    dumped = capsys.readouterr().out
    assert parse_config(dumped) == parse_config(path.read_text())


SWEEP_RUN = IDEAL_RUN + """
[sweep]
variable = d
start = 5
stop = 20
points = 3
spacing = linear
"""


def test_sweep_writes_rows_in_order(write_run, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", str(write_run(SWEEP_RUN)), "--csv", str(out), "--threads", "3"]) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == SWEEP_COLUMNS
    assert list(frame["variable"]) == [5.0, 12.5, 20.0]
    assert frame["pressure_N_per_m2"].is_monotonic_increasing


def test_sweep_is_deterministic(write_run, tmp_path):
    run = write_run(SWEEP_RUN)
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", str(run), "--csv", str(first), "--threads", "1"]) == EXIT_OK
    assert main(["sweep", str(run), "--csv", str(second), "--threads", "3"]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_single_point_sweep_matches_compute(write_run, tmp_path, capsys):
    run = write_run(IDEAL_RUN + "[sweep]\nvariable = d\nstart = 10\nstop = 10\npoints = 1\n")
    out = tmp_path / "one.csv"
    assert main(["sweep", str(run), "--csv", str(out)]) == EXIT_OK
    assert main(["compute", str(run), "--csv"]) == EXIT_OK
    computed = capsys.readouterr().out.splitlines()[1]
    assert out.read_text().splitlines()[1] == computed


def test_sweep_abort_keeps_partial_output(write_run, tmp_path, capsys):
    run = write_run(IDEAL_RUN + "[sweep]\nvariable = d\nstart = 10\nstop = 1e-4\npoints = 3\nspacing = log\n")
    out = tmp_path / "partial.csv"
    assert main(["sweep", str(run), "--csv", str(out)]) == EXIT_NUMERIC
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert lines[-1].startswith(ABORT_MARKER)
    assert "logarithmically" in capsys.readouterr().err


def test_sweep_needs_sweep_section(write_run):
    assert main(["sweep", str(write_run(IDEAL_RUN))]) == EXIT_CONFIG


def test_validate_empty_filter(capsys):
    assert main(["validate", "--only", "no_check_has_this_name"]) == EXIT_OK
    assert "0/0 checks passed" in capsys.readouterr().out


def test_validate_csv(tmp_path, capsys):
    out = tmp_path / "report.csv"
    assert main(["validate", "--only", "^tail_closed_form$", "--csv", str(out), "--threads", "1"]) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame["check"]) == ["tail_closed_form"]
    assert bool(frame["passed"][0])


def test_material_table(write_run, capsys):
    path = write_run("[material]\npreset = six_oscillator\n")
    assert main(["material", str(path), "--k", "0", "--k", "1e6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "37.98" in out
    assert "eps(inf) = 1 ok" in out


def test_material_pole_is_a_row_not_a_crash(write_run, capsys):
    path = write_run("[material]\npreset = six_oscillator_drude\n")
    assert main(["material", str(path), "--k", "0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "error" in out
    assert "pole" in out


def test_material_defaults_without_material_block(write_run, capsys):
    path = write_run(IDEAL_RUN)
    assert main(["material", str(path), "--k", "0"]) == EXIT_OK
    assert "37.98" in capsys.readouterr().out


def test_material_gap_block_required(write_run, capsys):
    path = write_run(IDEAL_RUN)
    assert main(["material", str(path), "--gap"]) == EXIT_CONFIG
    assert "gap_material" in capsys.readouterr().err
