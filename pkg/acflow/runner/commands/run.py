"""
`acflow run`: one simulation at a single mesh level.
"""

import logging

from acflow.runner.config import load_run_config
from acflow.runner.simulation import run_single

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('run', help='run a single simulation')
    parser.add_argument('--config', required=True, help='path to a JSON run config')
    parser.add_argument('--output-dir', default=None, help='overrides output_dir of the config')
    parser.add_argument('--level', type=int, default=0, help='index into h_list (default 0)')
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    config = load_run_config(args.config)
    result = run_single(config, output_dir=args.output_dir, level=args.level)
    summary = result.summary
    print(f"{summary['case']} ({summary['variant']}): h={summary['h']:g}, tau={summary['tau']:.6g}, "
          f"steps={summary['n_steps']}")
    print(f"  err_u_L2={summary['err_u_L2']:.4e}  err_p_L2={summary['err_p_L2']:.4e}  "
          f"err_phi={summary['err_phi']:.4e}")
    return 0
