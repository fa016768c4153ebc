"""
`acflow validate-mms`: finite-difference check of the manufactured sources.
"""

import logging

from acflow.mms import builtin_cases, get_case, validate_case

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('validate-mms', help='check manufactured sources against finite differences')
    parser.add_argument('--case', default='all', help="builtin case name or 'all'")
    parser.add_argument('--points', type=int, default=1000, help='number of sample points')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--t', type=float, default=None, help='evaluation time')
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    cases = builtin_cases() if args.case == 'all' else [get_case(args.case)]
    failed = []
    for case in cases:
        report = validate_case(case, n_points=args.points, seed=args.seed, t=args.t)
        status = "ok" if report.passed else "FAILED"
        print(f"{case.name:<26} momentum={report.momentum_deviation:.2e} "
              f"levelset={report.levelset_deviation:.2e} max={report.max_deviation:.2e}  {status}")
        if not report.passed:
            failed.append(case.name)
    if failed:
        print(f"Oracle gate failed for: {', '.join(failed)}")
        return 3
    return 0
