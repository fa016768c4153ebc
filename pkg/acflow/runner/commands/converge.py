"""
`acflow converge`: convergence study over the config's mesh levels.
"""

import logging

from acflow.runner.config import load_run_config
from acflow.runner.simulation import run_convergence

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('converge', help='run a convergence study')
    parser.add_argument('--config', required=True, help='path to a JSON run config')
    parser.add_argument('--output-dir', default=None, help='overrides output_dir of the config')
    parser.add_argument('--no-plot', action='store_true', help='skip the SVG convergence plot')
    parser.set_defaults(handler=handle)


def _format(value):
    return "" if value != value else f"{value:.3f}"  # NaN marks the first level


def handle(args) -> int:
    config = load_run_config(args.config)
    if args.no_plot:
        config = config.model_copy(update={'plot': False})
    rows = run_convergence(config, output_dir=args.output_dir)

    print(f"{'h':>10} {'err_u_L2':>12} {'rate':>6} {'err_p_L2':>12} {'rate':>6} {'err_phi':>12} {'rate':>6}")
    for row in rows:
        print(f"{row['h']:>10g} {row['err_u_L2']:>12.4e} {_format(row['rate_u']):>6} "
              f"{row['err_p_L2']:>12.4e} {_format(row['rate_p']):>6} "
              f"{row['err_phi']:>12.4e} {_format(row['rate_phi']):>6}")
    return 0
