import subprocess
import sys
from pathlib import Path

import pytest

from sweepfigs import FigureRecipe, InputError, RecipeError, load_sweep, render
from sweepfigs.cli import main as cli_main

ARTIFACTS = Path(__file__).resolve().parents[2] / "artifacts"

TRIPLE_CONFIG = """
base_frequency_ghz = 1.0
frequencies_ghz = 7.2, 10.1, 13.2
bath_dimension = 1
gamma_ghz = 5.0
cutoff_mev = 6.58e-2
sound_speed_mps = 3000
temperature_ratio = 0.005
geometry.kind = linear
geometry.R_nm = 28.0
geometry.r_nm = 0.0
"""


def run_primary_sweep(tmp_path, name, vary, extra=()):
    """Produce a sweep CSV through the producer's command line interface."""
    cfg = tmp_path / "triple.cfg"
    cfg.write_text(TRIPLE_CONFIG)
    out = tmp_path / name
    cmd = [sys.executable, "-m", "bathent.cli", "sweep", "--config", str(cfg),
           "--threads", "1", "--rtol", "1e-7", "--out", str(out)]
    for axis in vary:
        cmd += ["--vary", axis]
    cmd += list(extra)
    subprocess.run(cmd, check=True, capture_output=True)
    return out


@pytest.fixture(scope="module")
def small_grid_csv(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("grid")
    return run_primary_sweep(tmp, "grid.csv",
                             ["r_nm=-5:5:3", "temperature_ratio=0.002:0.08:4:log"])


@pytest.fixture(scope="module")
def small_curve_csv(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("curve")
    return run_primary_sweep(tmp, "curve.csv", ["r_nm=-5:5:5"])


def test_heatmap_renders(small_grid_csv, tmp_path):
    out = tmp_path / "heat.png"
    res = render(FigureRecipe(csv_path=str(small_grid_csv), kind="heatmap",
                              x="temperature_ratio", y=["r_nm"], z="E_N.AC",
                              out_path=str(out)))
    assert out.exists() and out.stat().st_size > 1000
    # axis limits come from the data extent
    assert res.x_limits[0] < 0.002 < 0.08 < res.x_limits[1] * 1.5


def test_classmap_renders_with_legend(small_grid_csv, tmp_path):
    out = tmp_path / "classes.png"
    res = render(FigureRecipe(csv_path=str(small_grid_csv), kind="classmap",
                              x="temperature_ratio", y=["r_nm"], z="class",
                              out_path=str(out)))
    assert out.exists() and out.stat().st_size > 1000
    present = set(load_sweep(small_grid_csv).column("class"))
    assert present <= set(res.legend_labels) | {""}
    assert res.legend_labels


def test_curves_render(small_curve_csv, tmp_path):
    out = tmp_path / "curves.png"
    res = render(FigureRecipe(csv_path=str(small_curve_csv), kind="curves",
                              x="r_nm", y=["E_N.AB", "E_N.AC", "E_N.BC"],
                              out_path=str(out)))
    assert out.exists() and out.stat().st_size > 1000
    assert res.legend_labels == ["E_N.AB", "E_N.AC", "E_N.BC"]


def test_missing_column_is_recipe_error(small_curve_csv, tmp_path):
    with pytest.raises(RecipeError):
        render(FigureRecipe(csv_path=str(small_curve_csv), kind="curves",
                            x="r_nm", y=["nope"], out_path=str(tmp_path / "x.png")))


def test_empty_csv_is_input_error(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("# only a comment\n")
    with pytest.raises(InputError):
        render(FigureRecipe(csv_path=str(bad), kind="curves", x="a", y=["b"],
                            out_path=str(tmp_path / "x.png")))


def test_failed_rows_become_masked_cells(small_grid_csv, tmp_path):
    # blank numeric cells (failed sweep points) must render as holes
    text = small_grid_csv.read_text().splitlines()
    header = next(k for k, line in enumerate(text) if not line.startswith("#"))
    cells = text[header + 1].split(",")
    names = text[header].split(",")
    for col in ("E_N.AC", "status", "error"):
        idx = names.index(col)
        cells[idx] = "" if col != "status" else "failed"
    text[header + 1] = ",".join(cells)
    patched = tmp_path / "holes.csv"
    patched.write_text("\n".join(text) + "\n")
    out = tmp_path / "holes.png"
    render(FigureRecipe(csv_path=str(patched), kind="heatmap",
                        x="temperature_ratio", y=["r_nm"], z="E_N.AC",
                        out_path=str(out)))
    assert out.exists() and out.stat().st_size > 1000


def test_rendering_is_deterministic_and_nondestructive(small_curve_csv, tmp_path):
    before = small_curve_csv.read_bytes()
    outs = []
    for k in range(2):
        out = tmp_path / f"same{k}.png"
        render(FigureRecipe(csv_path=str(small_curve_csv), kind="curves",
                            x="r_nm", y=["E_N.AC"], out_path=str(out)))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert small_curve_csv.read_bytes() == before


def test_cli_render(small_curve_csv, tmp_path, capsys):
    out = tmp_path / "cli.png"
    code = cli_main(["render", "--csv", str(small_curve_csv), "--kind", "curves",
                     "--x", "r_nm", "--y", "E_N.AB", "--y", "E_N.BC",
                     "--out", str(out)])
    assert code == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_cli_error_codes(small_curve_csv, tmp_path):
    assert cli_main(["render", "--csv", str(small_curve_csv), "--kind", "curves",
                     "--x", "r_nm", "--y", "missing",
                     "--out", str(tmp_path / "n.png")]) == 2
    assert cli_main(["render", "--csv", str(tmp_path / "absent.csv"),
                     "--kind", "curves", "--x", "a", "--y", "b",
                     "--out", str(tmp_path / "n.png")]) == 3


def test_acceptance_12_three_recipe_kinds(tmp_path, tmp_path_factory):
    """The three recipe kinds render the phase-diagram, inset-curve and
    class-map CSVs without error, with legends covering the classes present."""
    if (ARTIFACTS / "pair_phase_1d.csv").exists():
        heat_csv = ARTIFACTS / "pair_phase_1d.csv"
        curve_csv = ARTIFACTS / "linear_triple_rsweep.csv"
        class_csv = ARTIFACTS / "class_map.csv"
        heat_z, heat_x, heat_y = "E_N.AB", "R_nm", "temperature_ratio"
    else:
        tmp = tmp_path_factory.mktemp("gen")
        heat_csv = run_primary_sweep(tmp, "heat.csv",
                                     ["temperature_ratio=0.002:0.08:4:log", "r_nm=-5:5:4"])
        curve_csv = run_primary_sweep(tmp, "curve.csv", ["r_nm=-5:5:5"])
        class_csv = heat_csv
        heat_z, heat_x, heat_y = "E_N.AC", "temperature_ratio", "r_nm"

    heat = render(FigureRecipe(csv_path=str(heat_csv), kind="heatmap",
                               x=heat_x, y=[heat_y], z=heat_z,
                               out_path=str(tmp_path / "a12_heat.png")))
    curves = render(FigureRecipe(csv_path=str(curve_csv), kind="curves",
                                 x="r_nm", y=["E_N.AB", "E_N.AC", "E_N.BC"],
                                 out_path=str(tmp_path / "a12_curves.png")))
    classes = render(FigureRecipe(csv_path=str(class_csv), kind="classmap",
                                  x="temperature_ratio", y=["r_nm"], z="class",
                                  out_path=str(tmp_path / "a12_classes.png")))
    for res in (heat, curves, classes):
        assert Path(res.out_path).stat().st_size > 1000
    present = set(load_sweep(class_csv).column("class")) - {""}
    assert present <= set(classes.legend_labels)
    print(f"ACCEPTANCE 12 PASS: heatmap, curves and classmap rendered; "
          f"classes {sorted(present)} all in legend", file=sys.__stdout__)
