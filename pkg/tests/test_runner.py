import json
import math
from pathlib import Path

import numpy as np
import pytest

from acflow.core.exceptions import ConfigError, InvalidParameterError
from acflow.config.constants import CONVERGENCE_COLUMNS, SUMMARY_COLUMNS, TIMESERIES_COLUMNS
from acflow.mesh import load_mesh
from acflow.reports import build_convergence_drawing, generate_convergence_plot
from acflow.runner import (
    PRESETS, load_run_config, run_convergence, run_single, validate_config,
)
from acflow.runner.app import main
from acflow.runner.utils import read_csv, to_frame

CONFIGS = Path(__file__).resolve().parent.parent / 'configs'

QUIESCENT = {
    'case': 'quiescent_square',
    'h_list': [0.25],
    'tau': {'rule': 'list', 'values': [0.1]},
    't_final': 0.5,
    'levelset_bc': 'natural',
    'plot': False,
}


def write_config(tmp_path, data, name='config.json'):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


# Config
def test_defaults_from_desk_preset():
    config = validate_config({'case': 'disk_linear_eta_10'})
    assert config.h_list == PRESETS['desk']['h_list']
    assert config.variant == 'semi_implicit'
    assert config.tau.rule == 'ratio'
    assert config.levelset_bc == 'dirichlet_exact'


def test_testing_preset():
    config = validate_config({'case': 'disk_linear_eta_10', 'preset': 'testing'})
    assert config.h_list == [0.5, 0.25]
    assert config.t_final == 0.5


def test_levels_round_time_step_to_final_time():
    config = validate_config({'case': 'disk_linear_eta_10', 'h_list': [0.3], 't_final': 1.0,
                              'tau': {'rule': 'ratio', 'c': 2.0}})
    [level] = config.levels(default_t_final=5.0)
    assert level['n_steps'] == 7
    assert level['tau'] * level['n_steps'] == pytest.approx(1.0)


def test_levels_use_case_final_time_by_default():
    config = validate_config({'case': 'disk_linear_eta_10', 'h_list': [0.5], 'tau': {'rule': 'list', 'values': [0.25]}})
    [level] = config.levels(default_t_final=1.0)
    assert level['n_steps'] == 4
    assert level['tau'] == pytest.approx(0.25)


@pytest.mark.parametrize("data, path", [
    ({'case': 'nope'}, 'case'),
    ({'case': 'disk_linear_eta_10', 'h_list': [0.05, 0.1]}, 'h_list'),
    ({'case': 'disk_linear_eta_10', 'h_list': []}, 'h_list'),
    ({'case': 'disk_linear_eta_10', 'tau': {'c': -1.0}}, 'tau.c'),
    ({'case': 'disk_linear_eta_10', 'variant': 'implicit'}, 'variant'),
    ({'case': 'disk_linear_eta_10', 'lambda_user': 0.0}, 'lambda_user'),
    ({'case': 'disk_linear_eta_10', 'colour': 'blue'}, 'colour'),
])
def test_invalid_config_reports_field_path(data, path):
    with pytest.raises(ConfigError) as info:
        validate_config(data)
    assert info.value.field_path == path


def test_tau_list_needs_one_value_per_level():
    with pytest.raises(ConfigError):
        validate_config({'case': 'disk_linear_eta_10', 'h_list': [0.2, 0.1], 'tau': {'rule': 'list', 'values': [0.1]}})


def test_time_step_longer_than_run_is_rejected():
    with pytest.raises(ConfigError):
        validate_config({'case': 'disk_linear_eta_10', 'h_list': [0.5], 't_final': 0.1})


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / 'missing.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"case": ')
    with pytest.raises(ConfigError):
        load_run_config(broken)


def test_bundled_configs_validate():
    for name in ('test1_convergence', 'disk_linear_eta_inv100', 'disk_reciprocal_eta',
                 'slab_discontinuous_2d', 'quiescent'):
        config = load_run_config(CONFIGS / f'{name}.json')
        assert config.h_list


# CSV
def test_frame_keeps_column_order():
    frame = to_frame([{'b': 2.0, 'a': 1.0, 'extra': 3.0}], ['a', 'b', 'c'])
    assert list(frame.columns) == ['a', 'b', 'c']
    assert math.isnan(frame.loc[0, 'c'])


# Runs
def test_quiescent_run_writes_outputs(tmp_path):
    result = run_single(validate_config(QUIESCENT), output_dir=tmp_path)
    assert result.summary['n_steps'] == 5
    assert result.summary['err_u_L2'] <= 1e-12
    assert result.summary['err_p_L2'] <= 1e-12

    rows = read_csv(tmp_path / 'timeseries.csv')
    assert len(rows) == 6
    assert list(rows[0]) == TIMESERIES_COLUMNS
    assert list(read_csv(tmp_path / 'summary.csv')[0]) == SUMMARY_COLUMNS
    used = json.loads((tmp_path / 'config_used.json').read_text())
    assert used['case'] == 'quiescent_square'


def test_runs_are_deterministic(tmp_path):
    config = validate_config(dict(QUIESCENT, case='disk_linear_eta_10', h_list=[0.5], t_final=0.25,
                                  levelset_bc='dirichlet_exact', tau={'rule': 'list', 'values': [0.125]}))
    run_single(config, output_dir=tmp_path / 'a')
    run_single(config, output_dir=tmp_path / 'b')
    for name in ('timeseries.csv', 'summary.csv'):
        assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()


def test_convergence_needs_two_levels(tmp_path):
    with pytest.raises(InvalidParameterError):
        run_convergence(validate_config(QUIESCENT), output_dir=tmp_path)


def test_small_convergence_study(tmp_path):
    config = validate_config({'case': 'disk_linear_eta_10', 'preset': 'testing'})
    rows = run_convergence(config, output_dir=tmp_path)
    assert [row['level'] for row in rows] == [0, 1]
    assert np.isnan(rows[0]['rate_u'])
    assert np.isfinite(rows[1]['rate_u'])
    assert list(read_csv(tmp_path / 'convergence.csv')[0]) == CONVERGENCE_COLUMNS
    for level in (0, 1):
        assert (tmp_path / f'level_{level}' / 'timeseries.csv').exists()
    assert (tmp_path / 'convergence.svg').exists()
    assert (tmp_path / 'config_used.json').exists()


# Reports
def test_convergence_plot(tmp_path):
    path = tmp_path / 'rates.svg'
    generate_convergence_plot([0.1, 0.05, 0.025], {'err_u_L2': [4e-2, 2e-2, 1e-2], 'err_p_L2': [1e-1, 6e-2, 3e-2]},
                              path, title="test")
    assert '<svg' in path.read_text()


def test_plot_needs_two_levels():
    with pytest.raises(InvalidParameterError):
        build_convergence_drawing([0.1], {'err_u_L2': [1e-2]}, "one level")
    with pytest.raises(InvalidParameterError):
        build_convergence_drawing([0.1, 0.05], {'err_u_L2': [0.0, 0.0]}, "no errors")


# Command line
def test_cli_bad_config_exits_with_two(tmp_path, capsys):
    path = write_config(tmp_path, {'case': 'disk_linear_eta_10', 'h_list': [0.05, 0.1]})
    assert main(['--quiet', 'run', '--config', str(path)]) == 2
    assert 'h_list' in capsys.readouterr().err


def test_cli_missing_config_exits_with_two(tmp_path):
    assert main(['--quiet', 'run', '--config', str(tmp_path / 'missing.json')]) == 2


def test_cli_run(tmp_path, capsys):
    path = write_config(tmp_path, QUIESCENT)
    out = tmp_path / 'out'
    assert main(['--quiet', 'run', '--config', str(path), '--output-dir', str(out)]) == 0
    assert (out / 'summary.csv').exists()
    assert 'quiescent_square' in capsys.readouterr().out


def test_cli_converge_single_level_exits_with_two(tmp_path):
    path = write_config(tmp_path, QUIESCENT)
    assert main(['--quiet', 'converge', '--config', str(path), '--output-dir', str(tmp_path / 'out')]) == 2


def test_cli_mesh(tmp_path):
    out = tmp_path / 'square.mesh'
    assert main(['mesh', '--shape', 'rectangle', '--h', '0.25', '--out', str(out)]) == 0
    mesh = load_mesh(str(out))
    assert mesh.n_triangles == 32


def test_cli_mesh_rejects_bad_rectangle(tmp_path):
    assert main(['mesh', '--shape', 'rectangle', '--x0', '1', '--x1', '0', '--h', '0.25',
                 '--out', str(tmp_path / 'bad.mesh')]) == 2


def test_cli_validate_mms(capsys):
    assert main(['validate-mms', '--case', 'quiescent_square', '--points', '20']) == 0


def test_cli_requires_a_command():
    with pytest.raises(SystemExit):
        main([])


# Acceptance
def _study(tmp_path, name):
    return run_convergence(load_run_config(CONFIGS / f'{name}.json'), output_dir=tmp_path)


@pytest.mark.slow
def test_linear_viscosity_converges_at_first_order(tmp_path):
    rows = _study(tmp_path, 'test1_convergence')
    for row in rows[1:]:
        assert 0.7 <= row['rate_u'] <= 1.5
        assert 0.7 <= row['rate_rho'] <= 1.5
        assert row['rate_p'] >= 0.8
    assert rows[-1]['rate_u'] == pytest.approx(1.0, abs=0.3)
    assert rows[-1]['rate_rho'] == pytest.approx(1.0, abs=0.3)
    assert rows[-1]['err_u_L2'] <= 3 * 8.14e-3


@pytest.mark.slow
@pytest.mark.parametrize("name", ['disk_reciprocal_eta', 'disk_linear_eta_inv100'])
def test_large_viscosity_ratios_converge(tmp_path, name):
    rows = _study(tmp_path, name)
    for row in rows[1:]:
        assert 0.7 <= row['rate_u'] <= 1.5
    if name == 'disk_reciprocal_eta':
        assert all(row['rate_rho'] == pytest.approx(1.0, abs=0.3) for row in rows[1:])


@pytest.mark.slow
def test_discontinuous_slab_converges_in_l1(tmp_path):
    rows = _study(tmp_path, 'slab_discontinuous_2d')
    for row in rows[1:]:
        assert row['rate_phi'] == pytest.approx(1.0, abs=0.3)
        assert row['rate_u'] == pytest.approx(1.0, abs=0.3)
