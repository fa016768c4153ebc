"""
Simulation drivers: a single run and a convergence study over mesh levels.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from acflow.config.app_config import get_thread_cap
from acflow.config.constants import CONVERGENCE_COLUMNS, SUMMARY_COLUMNS, TIMESERIES_COLUMNS
from acflow.core.exceptions import InvalidParameterError
from acflow.diagnostics.monitors import ErrorReport, error_report
from acflow.diagnostics.norms import convergence_rate
from acflow.fem.spaces import TaylorHood
from acflow.levelset.transport import LevelSetParams
from acflow.mesh.generator import generate_mesh
from acflow.mms.cases import get_case
from acflow.reports.plot_generator import generate_convergence_plot
from acflow.runner.config import RunConfig, dump_config
from acflow.runner.utils.csv_output import write_csv
from acflow.scheme.parameters import init_parameters
from acflow.scheme.state import FlowState, initial_state
from acflow.scheme.stepper import FlowProblem, FlowSolver

logger = logging.getLogger(__name__)

RATE_COLUMNS = {'err_u_L2': 'rate_u', 'err_p_L2': 'rate_p', 'err_phi': 'rate_phi', 'err_rho_L2': 'rate_rho'}


@dataclass
class RunResult:
    summary: Dict
    timeseries: List[Dict]
    final_state: FlowState
    solver_stats: Dict = field(default_factory=dict)


def _timeseries_row(report: ErrorReport) -> Dict:
    row = report.to_dict()
    return {column: row[column] for column in TIMESERIES_COLUMNS}


def simulate_level(config: RunConfig, h: float, tau: float, n_steps: int) -> RunResult:
    """Run one mesh level in memory.

    Args:
        config: validated run configuration
        h: target mesh size
        tau: time step (n_steps * tau is the final time)
        n_steps: number of steps

    Returns:
        RunResult with the final summary row and the per-step time series
    """
    case = get_case(config.case)
    mesh = generate_mesh(case.shape, h, seed=config.seed)
    spaces = TaylorHood(mesh)
    state = initial_state(spaces, case.phi, case.u, case.p, case.law, t0=0.0)
    params = init_parameters(
        state.rho, state.eta, lambda_user=config.lambda_user, variant=config.variant, tau=tau,
        grad_div_implicit_coef=config.grad_div_implicit_coef,
        single_diffusion_factor=config.single_diffusion_factor,
        levelset=LevelSetParams(config.c_visc, config.c_comp, config.grad_floor),
    )
    solver = FlowSolver(spaces, params, case.law, FlowProblem.from_case(case, config.levelset_bc),
                        solver=config.solver)

    reports = [error_report(state, case, params)]
    final = solver.run(state, n_steps, callback=lambda s: reports.append(error_report(s, case, params)))

    last = reports[-1].to_dict()
    summary = {
        'case': case.name, 'variant': config.variant, 'h': h, 'tau': tau, 'n_steps': n_steps,
        'T': final.t, 'n_dofs': spaces.n_dofs,
        **{column: last[column] for column in ('err_u_L2', 'err_p_L2', 'err_phi', 'err_rho_L2',
                                               'div_norm', 'overshoot', 'energy')},
        'nu_bar': params.nu_bar, 'rho_under': params.rho_under,
        'lambda_eff': params.lambda_eff, 'lambda_bar': params.lambda_bar,
    }
    logger.info(f"{case.name} h={h:g} tau={tau:.6g}: err_u={summary['err_u_L2']:.4e}, "
                f"err_p={summary['err_p_L2']:.4e}, err_phi={summary['err_phi']:.4e}")
    return RunResult(summary=summary, timeseries=[_timeseries_row(r) for r in reports],
                     final_state=final, solver_stats=solver.stats.to_dict())


def _write_level(result: RunResult, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    write_csv(result.timeseries, TIMESERIES_COLUMNS, directory / 'timeseries.csv')
    write_csv([result.summary], SUMMARY_COLUMNS, directory / 'summary.csv')


def run_single(config: RunConfig, output_dir: Optional[str] = None, level: int = 0) -> RunResult:
    """Simulate one level of the config and write timeseries.csv, summary.csv and config_used.json."""
    case = get_case(config.case)
    setup = config.levels(case.t_final)[level]
    result = simulate_level(config, setup['h'], setup['tau'], setup['n_steps'])

    directory = Path(output_dir or config.output_dir)
    _write_level(result, directory)
    dump_config(config, directory / 'config_used.json')
    return result


def _rates(errors: List[float], h_values: List[float]) -> List[Optional[float]]:
    rates = [None]
    for k in range(1, len(errors)):
        try:
            rates.append(convergence_rate(errors[k - 1:k + 1], h_values[k - 1:k + 1])[0])
        except InvalidParameterError:
            rates.append(None)
    return rates


def convergence_table(results: List[RunResult]) -> List[Dict]:
    """One row per level with errors and observed orders (blank on the first row)."""
    h_values = [r.summary['h'] for r in results]
    rows = [{'level': k, 'h': r.summary['h'], 'tau': r.summary['tau'], 'n_dofs': r.summary['n_dofs']}
            for k, r in enumerate(results)]
    for error_column, rate_column in RATE_COLUMNS.items():
        errors = [r.summary[error_column] for r in results]
        for row, error, rate in zip(rows, errors, _rates(errors, h_values)):
            row[error_column] = error
            row[rate_column] = np.nan if rate is None else rate
    return rows


def run_convergence(config: RunConfig, output_dir: Optional[str] = None) -> List[Dict]:
    """Run every mesh level, write level_<k>/ outputs and convergence.csv (+ convergence.svg)."""
    case = get_case(config.case)
    levels = config.levels(case.t_final)
    if len(levels) < 2:
        raise InvalidParameterError("a convergence study needs at least two mesh levels")

    directory = Path(output_dir or config.output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    workers = min(get_thread_cap(), len(levels))
    logger.info(f"Convergence study of '{case.name}': {len(levels)} levels, {workers} worker(s)")

    def run_level(setup):
        result = simulate_level(config, setup['h'], setup['tau'], setup['n_steps'])
        _write_level(result, directory / f"level_{setup['level']}")
        return result

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run_level, levels))
    else:
        results = [run_level(setup) for setup in levels]

    rows = convergence_table(results)
    write_csv(rows, CONVERGENCE_COLUMNS, directory / 'convergence.csv')
    dump_config(config, directory / 'config_used.json')

    if config.plot:
        series = {column: [row[column] for row in rows] for column in RATE_COLUMNS}
        generate_convergence_plot([row['h'] for row in rows], series, directory / 'convergence.svg',
                                  title=f"{case.name} ({config.variant})")
    return rows
