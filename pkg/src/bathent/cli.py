"""Command line driver: single points, parameter sweeps, analytic diagnostics.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 physics-invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .covariance import QuadratureSpec, covariance_blocks, covariance_to_csv
from .errors import (BathentError, ConfigurationError, DomainError, PhysicsError,
                     QuadratureError, SingularityError, ValidityError)
from .gaussian import EntanglementReport, build_report, mode_labels, report_text
from .analytic import entanglement_condition
from .units import (GHZ, NM, PhysicalConfig, load_config, to_dimensionless,
                    with_parameter)

SWEEP_PARAMETERS = ("R_nm", "r_nm", "temperature_ratio", "gamma_ghz", "cutoff_ghz")


@dataclass
class SweepAxis:
    """One swept parameter: an inclusive linear or logarithmic grid."""

    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def validate(self) -> None:
        if self.name not in SWEEP_PARAMETERS:
            raise ConfigurationError(
                f"unknown sweep parameter {self.name!r}; choose from {SWEEP_PARAMETERS}")
        if self.count < 2:
            raise ConfigurationError("sweep axes need at least 2 points")
        if not self.start < self.stop:
            raise ConfigurationError("sweep axis needs start < stop")
        if self.spacing not in ("linear", "log"):
            raise ConfigurationError(f"spacing must be linear or log, got {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0:
            raise ConfigurationError("log spacing requires start > 0")

    def values(self) -> np.ndarray:
        self.validate()
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        """Parse KEY=START:STOP:COUNT[:log]."""
        key, _, rest = text.partition("=")
        parts = rest.split(":")
        if not key or len(parts) not in (3, 4):
            raise ConfigurationError(
                f"--vary expects KEY=START:STOP:COUNT[:log], got {text!r}")
        spacing = "linear"
        if len(parts) == 4:
            spacing = parts[3]
        try:
            axis = cls(key, float(parts[0]), float(parts[1]), int(parts[2]), spacing)
        except ValueError as exc:
            raise ConfigurationError(f"--vary {text!r}: {exc}") from exc
        axis.validate()
        return axis


@dataclass
class PointResult:
    """Entanglement report plus the run diagnostics carried into sweep rows."""

    report: EntanglementReport
    g: np.ndarray
    quad_error: float
    wall_ms: float


def run_point(cfg: PhysicalConfig, quad: QuadratureSpec | None = None) -> PointResult:
    """Full pipeline at one configuration: covariance, then entanglement report."""
    t0 = time.perf_counter()
    dcfg = to_dimensionless(cfg)
    blocks = covariance_blocks(dcfg, quad)
    g = blocks.matrix
    report = build_report(g, dcfg)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return PointResult(report=report, g=g, quad_error=blocks.error_estimate,
                       wall_ms=wall_ms)


def run_analytic(cfg: PhysicalConfig, with_numeric: bool = False,
                 quad: QuadratureSpec | None = None) -> str:
    """Weak-dissipation diagnostic for a pair of identical oscillators."""
    dcfg = to_dimensionless(cfg)
    if dcfg.n != 2:
        raise ConfigurationError("the analytic diagnostic needs exactly two oscillators")
    w1, w2 = dcfg.frequencies
    if not math.isclose(w1, w2, rel_tol=1e-9):
        raise ConfigurationError("the analytic diagnostic needs identical frequencies")
    rho = float(dcfg.rho[0, 1])
    res = entanglement_condition(dcfg.dimension, w1, dcfg.gamma, dcfg.cutoff,
                                 rho, dcfg.theta)
    lines = [
        f"omega_plus = {res.omega_plus!r}",
        f"omega_minus = {res.omega_minus!r}",
        f"occupation_plus = {res.occupation_plus!r}",
        f"occupation_minus = {res.occupation_minus!r}",
        f"lhs = {res.lhs!r}",
        f"prediction = {'entangled' if res.entangled_prediction else 'separable'}",
    ]
    if with_numeric:
        result = run_point(cfg, quad)
        lines.append(f"numeric_E_N.AB = {float(result.report.e_n[0, 1])!r}")
    return "\n".join(lines) + "\n"


# --- sweep -----------------------------------------------------------------------

@dataclass
class SweepRow:
    """One grid point: swept values plus the report columns or an error."""

    values: dict
    result: PointResult | None = None
    error: str | None = None


def _report_columns(n: int, labels: list) -> list:
    cols = []
    pair_names = [labels[i] + labels[j] for i in range(n) for j in range(i + 1, n)]
    cols += [f"E_N.{p}" for p in pair_names]
    cols += [f"nu_minus.{p}" for p in pair_names]
    if n == 3:
        cols += ["ppt.A|BC", "ppt.AB|C", "ppt.AC|B", "class"]
    elif n == 2:
        cols += ["ppt.A|B"]
    cols += ["fidelity", "quad_error", "wall_ms", "status", "error"]
    return cols


def _row_record(row: SweepRow, n: int, labels: list) -> dict:
    rec = {k: repr(float(v)) for k, v in row.values.items()}
    pair_names = [(i, j, labels[i] + labels[j])
                  for i in range(n) for j in range(i + 1, n)]
    if row.result is None:
        for _, _, p in pair_names:
            rec[f"E_N.{p}"] = ""
            rec[f"nu_minus.{p}"] = ""
        for key in (_report_columns(n, labels)):
            rec.setdefault(key, "")
        rec["status"] = "failed"
        rec["error"] = row.error or "unknown error"
        return rec
    rep = row.result.report
    for i, j, p in pair_names:
        rec[f"E_N.{p}"] = repr(float(rep.e_n[i, j]))
        rec[f"nu_minus.{p}"] = repr(float(rep.nu_min[i, j]))
    for key, verdict in rep.ppt.items():
        rec[f"ppt.{key}"] = "true" if verdict else "false"
    if rep.tri_class is not None:
        rec["class"] = rep.tri_class
    rec["fidelity"] = repr(float(rep.fidelity))
    rec["quad_error"] = repr(float(row.result.quad_error))
    rec["wall_ms"] = repr(float(row.result.wall_ms))
    rec["status"] = "ok"
    rec["error"] = ""
    return rec


def _eval_sweep_point(args) -> SweepRow:
    values, cfg, quad = args
    try:
        return SweepRow(values=values, result=run_point(cfg, quad))
    except BathentError as exc:
        return SweepRow(values=values, error=f"{type(exc).__name__}: {exc}")
    except np.linalg.LinAlgError as exc:
        return SweepRow(values=values, error=f"LinAlgError: {exc}")


def sweep_grid(cfg: PhysicalConfig, axes: list) -> list:
    """Row-major list of (values dict, configured PhysicalConfig)."""
    if not 1 <= len(axes) <= 2:
        raise ConfigurationError("sweeps take one or two --vary axes")
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ConfigurationError("sweep axes must vary distinct parameters")
    grids = [a.values() for a in axes]
    points = []
    if len(axes) == 1:
        for v in grids[0]:
            points.append(({names[0]: float(v)},
                           with_parameter(cfg, names[0], float(v))))
    else:
        for v0 in grids[0]:
            base = with_parameter(cfg, names[0], float(v0))
            for v1 in grids[1]:
                points.append(({names[0]: float(v0), names[1]: float(v1)},
                               with_parameter(base, names[1], float(v1))))
    # point-level validity (a displacement outside the geometry, say) is left
    # to the per-point evaluation so that bad grid points become failed rows
    return points


def run_sweep(cfg: PhysicalConfig, axes: list, quad: QuadratureSpec | None = None,
              threads: int | None = None, progress=None) -> list:
    """Evaluate the grid, in order, optionally with a process pool."""
    points = sweep_grid(cfg, axes)
    tasks = [(values, pcfg, quad) for values, pcfg in points]
    rows = []
    n_threads = threads if threads is not None else (os.cpu_count() or 1)
    if n_threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n_threads) as pool:
            for k, row in enumerate(pool.map(_eval_sweep_point, tasks), start=1):
                rows.append(row)
                if progress:
                    print(f"point {k}/{len(tasks)} done", file=progress, flush=True)
    else:
        for k, task in enumerate(tasks, start=1):
            rows.append(_eval_sweep_point(task))
            if progress:
                print(f"point {k}/{len(tasks)} done", file=progress, flush=True)
    return rows


def resolved_config_items(cfg: PhysicalConfig) -> list:
    """Flat key/value pairs equivalent to the configuration, for CSV metadata."""
    items = [
        ("mass_kg", repr(cfg.mass)),
        ("base_frequency_ghz", repr(cfg.base_frequency / GHZ)),
        ("frequencies_ghz", " ".join(repr(f / GHZ) for f in cfg.frequencies)),
        ("bath_dimension", str(cfg.bath_dimension)),
        ("gamma_ghz", repr(cfg.gamma / GHZ)),
        ("cutoff_ghz", repr(cfg.cutoff / GHZ)),
        ("sound_speed_mps", repr(cfg.sound_speed)),
        ("temperature_ratio", repr(cfg.temperature_ratio)),
        ("geometry.kind", cfg.geometry.kind),
    ]
    if cfg.geometry.kind != "custom":
        items.append(("geometry.R_nm", repr(cfg.geometry.R / NM)))
        items.append(("geometry.r_nm", repr(cfg.geometry.r / NM)))
    return items


def write_sweep_csv(out, cfg: PhysicalConfig, axes: list, rows: list,
                    rtol: float) -> None:
    """CSV with '#' metadata lines followed by a fixed header and the rows."""
    n = len(cfg.frequencies)
    labels = mode_labels(n)
    out.write(f"# bathent {__version__} sweep\n")
    for key, value in resolved_config_items(cfg):
        out.write(f"# {key} = {value}\n")
    for axis in axes:
        out.write(f"# vary {axis.name} = {axis.start!r}:{axis.stop!r}:{axis.count}:{axis.spacing}\n")
    out.write(f"# rtol = {rtol!r}\n")
    columns = [a.name for a in axes] + _report_columns(n, labels)
    writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(_row_record(row, n, labels))


def read_sweep_csv(path):
    """Parse a sweep CSV back into (metadata dict, list of row dicts)."""
    meta, rows = {}, []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        data_lines = []
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    meta.setdefault(key.strip(), val.strip())
                continue
            data_lines.append(line)
    reader = csv.DictReader(io.StringIO("".join(data_lines)))
    rows = list(reader)
    return meta, rows


# --- argparse front end ------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bathent",
        description="Stationary Gaussian states and bath-induced entanglement "
                    "of harmonic oscillators in a common 1D/3D environment.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, vary=False, threads=False, numeric=False):
        p.add_argument("--config", required=True, help="configuration file path")
        p.add_argument("--rtol", type=float, default=None,
                       help="relative quadrature tolerance (default 1e-8)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if vary:
            p.add_argument("--vary", action="append", default=[],
                           metavar="KEY=START:STOP:COUNT[:log]",
                           help="swept axis; may be given twice")
        if threads:
            p.add_argument("--threads", type=int, default=None,
                           help="worker processes (default: all cores)")
        if numeric:
            p.add_argument("--with-numeric", action="store_true",
                           help="also run the full pipeline for comparison")

    add_common(sub.add_parser("point", help="single-point entanglement report"))
    add_common(sub.add_parser("sweep", help="1D/2D parameter sweep to CSV"),
               vary=True, threads=True)
    add_common(sub.add_parser("classify", help="tripartite separability class"))
    add_common(sub.add_parser("analytic", help="weak-dissipation pair diagnostic"),
               numeric=True)
    add_common(sub.add_parser("covariance", help="export the covariance matrix as CSV"))
    return parser


def _quad_spec(args) -> QuadratureSpec:
    spec = QuadratureSpec()
    if args.rtol is not None:
        spec.rtol = args.rtol
        spec.atol = min(spec.atol, args.rtol)
    return spec


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        quad = _quad_spec(args)
        if args.command == "point":
            result = run_point(cfg, quad)
            text = report_text(result.report)
            text += f"quad_error = {result.quad_error!r}\n"
            _emit(text, args.out)
        elif args.command == "classify":
            result = run_point(cfg, quad)
            rep = result.report
            lines = [f"ppt.{k} = {'true' if v else 'false'}" for k, v in rep.ppt.items()]
            if rep.tri_class is not None:
                lines.append(f"class = {rep.tri_class}")
            _emit("\n".join(lines) + "\n", args.out)
        elif args.command == "covariance":
            dcfg = to_dimensionless(cfg)
            blocks = covariance_blocks(dcfg, quad)
            _emit(covariance_to_csv(blocks.matrix), args.out)
        elif args.command == "analytic":
            _emit(run_analytic(cfg, with_numeric=args.with_numeric, quad=quad), args.out)
        elif args.command == "sweep":
            axes = [SweepAxis.parse(v) for v in args.vary]
            if not axes:
                raise ConfigurationError("sweep needs at least one --vary axis")
            rows = run_sweep(cfg, axes, quad, threads=args.threads, progress=sys.stderr)
            buf = io.StringIO()
            write_sweep_csv(buf, cfg, axes, rows, quad.rtol)
            _emit(buf.getvalue(), args.out)
            if rows and all(r.result is None for r in rows):
                print("error: every sweep point failed", file=sys.stderr)
                return 3
    except (ConfigurationError, ValidityError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, SingularityError, DomainError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except PhysicsError as exc:
        print(f"physics invariant violated: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
