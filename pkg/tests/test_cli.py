"""Command-line entry points, run in process."""

import numpy as np
import pytest

from expcap.cli import main, read_config, _parse_atoms
from expcap.grids import load_field_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_norms_constant_field(capsys):
    code, out = run(["norms", "--shape", "square", "--n", "16",
                     "--constant", "1.0"], capsys)
    assert code == 0
    assert "luxemburg[principal]" in out
    assert "llnl" in out


def test_kernel_report(capsys):
    code, out = run(["kernel", "--shape", "square", "--n", "12"], capsys)
    assert code == 0
    assert "principal eigenvalue" in out
    assert "harmonic partition deviation" in out


def test_solve_with_dump(tmp_path, capsys):
    path = str(tmp_path / "u.csv")
    code, out = run(["solve", "--shape", "square", "--n", "12",
                     "--interior-atoms", "0.5,0.5:2.0", "--dump-u", path],
                    capsys)
    assert code == 0
    assert "monotone descent = True" in out
    u = load_field_csv(path)
    assert u.values.max() > 0.0
    # norms subcommand reads the dump back
    code, out = run(["norms", "--shape", "square", "--n", "12",
                     "--field", path], capsys)
    assert code == 0


def test_solve_rejects_mixed_sources(capsys):
    with pytest.raises(SystemExit):
        main(["solve", "--n", "8", "--interior-constant", "1.0",
              "--boundary-constant", "1.0"])


def test_capacity_pair_output(capsys):
    code, out = run(["capacity", "--shape", "square", "--n", "12",
                     "--target", "center", "--dilation", "0"], capsys)
    assert code == 0
    assert "primal =" in out and "dual   =" in out
    # weak duality surfaces as a nonnegative reported gap
    gapline = [l for l in out.splitlines() if l.startswith("gap")][0]
    assert float(gapline.split("=")[1].split("%")[0]) >= -1e-6


def test_removability_exit_code(capsys):
    code, out = run(["removability", "--ladder", "8,12,16",
                     "--masses", "4,10,16"], capsys)
    assert code == 0
    assert "threshold estimate" in out
    assert "DivergentTrend" in out
    # a bracket missing the reference window reports the failure code
    code, out = run(["removability", "--ladder", "8,12,16",
                     "--masses", "4,16"], capsys)
    assert code == 1
    assert "FAIL" in out


def test_vanishing_table(capsys):
    code, out = run(["vanishing", "--shape", "square", "--ladder", "16",
                     "--radii", "5,4,3"], capsys)
    assert code == 0
    assert "min margin" in out
    assert "boundary-charged" in out


def test_moderate_verdict(capsys):
    code, out = run(["moderate", "--ladder", "12,16,24", "--radii", "4,3,2",
                     "--charge", "20"], capsys)
    assert code == 0
    assert "verdict: OBSTRUCTED" in out


def test_boundary_probe_table(capsys):
    code, out = run(["boundary-probe", "--ladder", "12,16",
                     "--radii", "4,3"], capsys)
    assert code == 0
    assert "shrink" in out and "refine" in out


def test_converge_table(capsys):
    code, out = run(["converge", "--ladder", "12,16"], capsys)
    assert code == 0
    assert "eigenvalue" in out
    assert "green-1d" in out


def test_config_file_feeds_experiments(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "# comment line\n"
        "ladder = 8,12,16\n"
        "masses = 4,10,16\n"
        "slope-tol = 0.15\n")
    code, out = run(["removability", "--config", str(cfg)], capsys)
    assert code == 0
    parsed = read_config(str(cfg))
    assert parsed["ladder"] == "8,12,16"
    assert parsed["slope_tol"] == "0.15"


def test_read_config_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    with pytest.raises(ValueError):
        read_config(str(bad))


def test_parse_atoms():
    atoms = _parse_atoms("0.5,0.5:2.0;0.1,0.9:1.5", 2)
    assert atoms == (((0.5, 0.5), 2.0), ((0.1, 0.9), 1.5))
    assert _parse_atoms("", 2) == ()
    with pytest.raises(ValueError):
        _parse_atoms("0.5:1.0", 2)
