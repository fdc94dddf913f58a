"""
Command orchestration for ``solve | verify | logsob | sweep``.

Each ``run_*`` takes a validated RunConfig, writes its artefacts under the
output directory and returns a process exit status:

    0 ok, 2 config/grid/profile error, 3 solver failure or a report that
    fails its schema (nothing is written), 4 I/O failure,
    5 tolerance breach (report still written) or failed sweep item.
"""

from __future__ import annotations

import functools
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional

from configs import env_config
from configs.constants import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_SOLVER,
    EXIT_TOLERANCE,
    LOGSOB_FILENAME,
    LOGSOB_REPORT_SCHEMA,
    PROFILE_FILENAME,
    REPORT_FILENAME,
    SOLVE_REPORT_SCHEMA,
    SWEEP_CSV_FILENAME,
    SWEEP_JSON_FILENAME,
    SWEEP_REPORT_SCHEMA,
    VERIFICATION_FILENAME,
    VERIFY_REPORT_SCHEMA,
)
from utils.report_io import ProfileError, read_profile, write_json, write_profile, write_sweep_csv
from utils.run_config import ConfigError, GridSpec, RunConfig, parse_sweep_item
from utils.validator import Validator
from .energy import energy, reduced_energy
from .fields import normalize, unit_gaussian
from .ground_solver import GroundStateResult, SolverConfig, SolverError, minimize, pde_residual
from .logsobolev import (
    NormalizationError,
    battery_failures,
    biharmonic_lsi_check,
    classical_lsi_check,
    constant_from_energy,
    equality_scaling,
    inequality_battery,
    interpolation_check,
    lsi_bound,
    maximize_scaled_entropy,
    optimal_alpha,
    scaled_inequality_check,
)
from .nonlinearity import NonlinearityError, check_growth_conditions
from .pohozaev import pohozaev_residual
from .radial_grid import GridError
from .radial_operators import FieldError

logger = logging.getLogger(__name__)

__all__ = ["run_solve", "run_verify", "run_logsob", "run_sweep", "run_command"]

_validator = Validator()


def _exit_codes(func: Callable[..., int]) -> Callable[..., int]:
    """Map the named failures of a command to its exit status."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except (ConfigError, ProfileError, GridError, FieldError, NonlinearityError) as exc:
            print(f"❌ Invalid input: {exc}")
            return EXIT_CONFIG
        except (SolverError, ArithmeticError, NormalizationError) as exc:
            print(f"❌ Solver failed ({type(exc).__name__}): {exc}")
            return EXIT_SOLVER
        except OSError as exc:
            print(f"❌ I/O failure: {exc}")
            return EXIT_IO
        except AssertionError as exc:
            print(f"❌ Report failed its schema and was not written: {exc}")
            return EXIT_SOLVER

    return wrapper


def _write_report(path: Path, payload: dict, schema) -> Path:
    _validator.assert_json_schema(payload, schema)
    write_json(path, payload)
    print(f"✅ Report written: {path}")
    return path


def _solve_section(result: GroundStateResult, cfg: RunConfig) -> dict:
    report = result.to_report()
    report["checks"] = {
        "pohozaev_ok": result.pohozaev_relative_residual <= cfg.pohozaev_tolerance,
        "pde_ok": result.pde_relative_residual <= cfg.pde_tolerance,
        "energy_positive": result.energy > 1e-6,
    }
    return report


def _ground_state_inequalities(result: GroundStateResult) -> dict:
    grid = result.profile.grid
    constants = constant_from_energy(grid.dimension, result.energy)
    result.C_N_log = constants.C_N_log
    ground = normalize(result.profile)
    gaussian = unit_gaussian(grid)
    inequalities = [
        biharmonic_lsi_check(ground, constants.lsi_constant, "ground_state"),
        classical_lsi_check(ground, "ground_state"),
        interpolation_check(ground, "ground_state"),
        biharmonic_lsi_check(gaussian, constants.lsi_constant, "gaussian"),
        biharmonic_lsi_check(gaussian, constants.bound, "gaussian_bound_constant"),
    ]
    return {
        "constants": constants.to_dict(),
        "inequalities": [report.to_dict() for report in inequalities],
    }


@_exit_codes
def run_solve(cfg: RunConfig) -> int:
    grid = cfg.build_grid()
    nl = cfg.build_nonlinearity()
    result = minimize(nl, grid, cfg.solver)

    log_section = _ground_state_inequalities(result) if cfg.nonlinearity.is_log else None
    report = {
        "command": "solve",
        "config": cfg.to_dict(),
        "growth_conditions": check_growth_conditions(nl).to_dict(),
        "result": _solve_section(result, cfg),
    }
    if log_section is not None:
        report["log_sobolev"] = log_section

    profile_path = write_profile(cfg.output_dir / PROFILE_FILENAME, result.profile)
    print(f"✅ Profile written: {profile_path}")
    _write_report(cfg.output_dir / REPORT_FILENAME, report, SOLVE_REPORT_SCHEMA)

    if not all(report["result"]["checks"].values()):
        print(
            f"⚠️ Residuals outside tolerance: Pohozaev {result.pohozaev_relative_residual:.3g}, "
            f"PDE {result.pde_relative_residual:.3g}"
        )
        return EXIT_TOLERANCE
    return EXIT_OK


@_exit_codes
def run_verify(cfg: RunConfig, profile_path: Optional[Path] = None) -> int:
    path = profile_path or cfg.verify_profile
    if path is None:
        raise ConfigError("verify needs a profile (--profile or verify.profile)")
    grid = cfg.build_grid()
    nl = cfg.build_nonlinearity()
    u = read_profile(path, grid)

    pohozaev = pohozaev_residual(u, nl, tolerance=cfg.pohozaev_tolerance)
    pde = pde_residual(u, nl)
    parts = energy(u, nl)
    checks = {
        "pohozaev_ok": pohozaev.on_manifold,
        "pde_ok": pde <= cfg.pde_tolerance,
    }
    report = {
        "command": "verify",
        "config": cfg.to_dict(),
        "profile": str(path),
        "pohozaev": pohozaev.to_dict(),
        "pde_relative_residual": pde,
        "energy": parts.to_dict(),
        "reduced_energy": reduced_energy(u, nl),
        "checks": checks,
        "ok": all(checks.values()),
    }
    _write_report(cfg.output_dir / VERIFICATION_FILENAME, report, VERIFY_REPORT_SCHEMA)
    if not report["ok"]:
        print(
            f"⚠️ Verification failed: Pohozaev {pohozaev.relative_residual:.3g} "
            f"(tol {cfg.pohozaev_tolerance:g}), PDE {pde:.3g} (tol {cfg.pde_tolerance:g})"
        )
        return EXIT_TOLERANCE
    return EXIT_OK


@_exit_codes
def run_logsob(cfg: RunConfig) -> int:
    grid = cfg.build_grid()
    nl = cfg.build_nonlinearity()
    result = minimize(nl, grid, cfg.solver)
    N = grid.dimension

    constants = constant_from_energy(N, result.energy)
    result.C_N_log = constants.C_N_log
    battery = inequality_battery(grid, constants.lsi_constant, constants.C_N_log, result.profile, cfg.seed)
    failures = battery_failures(battery)

    ground = normalize(result.profile)
    alpha = optimal_alpha(ground)
    alpha_numeric, _ = maximize_scaled_entropy(ground)
    amplitude, scale, rebuilt = equality_scaling(ground)
    gaussian_bound = biharmonic_lsi_check(unit_gaussian(grid), constants.bound, "gaussian_bound_constant")

    report = {
        "command": "logsob",
        "config": cfg.to_dict(),
        "result": _solve_section(result, cfg),
        "constants": constants.to_dict(),
        "gaussian_bound_check": gaussian_bound.to_dict(),
        "equality": {
            "laplacian_ratio": result.laplacian_ratio,
            "expected_ratio": N / 4.0,
            "optimal_alpha": alpha,
            "optimal_alpha_numeric": alpha_numeric,
            "amplitude": amplitude,
            "scale": scale,
            "rebuilt_pohozaev_relative_residual": pohozaev_residual(rebuilt, nl).relative_residual,
        },
        "battery": [report.to_dict() for report in battery],
        "failures": [f"{report.name}:{report.label}" for report in failures],
        "ok": not failures and constants.lsi_constant < constants.bound,
    }
    write_profile(cfg.output_dir / PROFILE_FILENAME, result.profile)
    _write_report(cfg.output_dir / LOGSOB_FILENAME, report, LOGSOB_REPORT_SCHEMA)

    print(f"✅ lsi_constant = {constants.lsi_constant:.10g} (bound {constants.bound:.10g})")
    if not report["ok"]:
        print(f"⚠️ {len(failures)} inequality check(s) failed: {', '.join(report['failures']) or 'bound'}")
        return EXIT_TOLERANCE
    return EXIT_OK


def _sweep_worker(text: str, grid_spec: GridSpec, solver: SolverConfig, pohozaev_tolerance: float, pde_tolerance: float) -> Dict:
    """One sweep item in isolation; failures are returned, never raised."""
    head = text.split(":")
    row: Dict = {"item": text, "N": head[0].strip(), "model": head[1].strip() if len(head) > 1 else "", "ok": False}
    try:
        item = parse_sweep_item(text)
        nl = item.model.build(item.dimension)
        grid = grid_spec.build(item.dimension)
        result = minimize(nl, grid, solver)
    except (ValueError, SolverError, ArithmeticError) as exc:  # input errors all subclass ValueError
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row

    row.update(
        N=item.dimension,
        model=nl.name,
        parameters=nl.parameters(),
        inf_J_upper=result.energy,
        pohozaev_relative_residual=result.pohozaev_relative_residual,
        pde_relative_residual=result.pde_relative_residual,
        C_N_log_upper=None,
        bound=None,
    )
    ok = result.pohozaev_relative_residual <= pohozaev_tolerance and result.pde_relative_residual <= pde_tolerance
    if item.model.is_log:
        constants = constant_from_energy(item.dimension, result.energy)
        row.update(C_N_log_upper=constants.C_N_log, bound=lsi_bound(item.dimension), lsi_constant=constants.lsi_constant)
        ok = ok and constants.lsi_constant < constants.bound
    row["ok"] = ok
    return row


@_exit_codes
def run_sweep(cfg: RunConfig) -> int:
    items = list(cfg.sweep_items)
    workers = max(1, min(env_config.MAX_WORKERS, len(items)))
    job = functools.partial(
        _sweep_worker,
        grid_spec=cfg.grid,
        solver=cfg.solver,
        pohozaev_tolerance=cfg.pohozaev_tolerance,
        pde_tolerance=cfg.pde_tolerance,
    )
    with ProcessPoolExecutor(max_workers=workers) as pool:
        rows: List[Dict] = list(pool.map(job, items))

    failed = [row["item"] for row in rows if not row["ok"]]
    csv_path = write_sweep_csv(cfg.output_dir / SWEEP_CSV_FILENAME, rows)
    print(f"✅ Sweep table written: {csv_path} ({len(rows)} rows)")
    if cfg.output_format == "json":
        _write_report(
            cfg.output_dir / SWEEP_JSON_FILENAME,
            {"command": "sweep", "config": cfg.to_dict(), "rows": rows, "failed": failed},
            SWEEP_REPORT_SCHEMA,
        )
    if failed:
        print(f"⚠️ {len(failed)} sweep item(s) failed: {', '.join(failed)}")
        return EXIT_TOLERANCE
    return EXIT_OK


def run_command(cfg: RunConfig) -> int:
    if cfg.command == "solve":
        return run_solve(cfg)
    if cfg.command == "verify":
        return run_verify(cfg)
    if cfg.command == "logsob":
        return run_logsob(cfg)
    return run_sweep(cfg)
