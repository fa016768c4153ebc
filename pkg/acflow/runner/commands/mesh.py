"""
`acflow mesh`: generate a mesh file.
"""

import logging

from acflow.core.exceptions import InvalidParameterError
from acflow.mesh import Disk, Rectangle, generate_mesh, refine_mesh, save_mesh

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('mesh', help='generate a disk or rectangle mesh')
    parser.add_argument('--shape', choices=['disk', 'rectangle'], default='disk')
    parser.add_argument('--h', type=float, required=True, help='target mesh size')
    parser.add_argument('--radius', type=float, default=1.0)
    parser.add_argument('--x0', type=float, default=0.0)
    parser.add_argument('--x1', type=float, default=1.0)
    parser.add_argument('--y0', type=float, default=0.0)
    parser.add_argument('--y1', type=float, default=1.0)
    parser.add_argument('--refine', type=int, default=0, help='uniform refinements after generation')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--out', required=True, help='output mesh file')
    parser.set_defaults(handler=handle)


def build_shape(args):
    if args.shape == 'disk':
        if not args.radius > 0.0:
            raise InvalidParameterError(f"radius must be positive, got {args.radius}")
        return Disk(args.radius)
    if not (args.x1 > args.x0 and args.y1 > args.y0):
        raise InvalidParameterError("rectangle needs x0 < x1 and y0 < y1")
    return Rectangle((args.x0, args.x1), (args.y0, args.y1))


def handle(args) -> int:
    if args.refine < 0:
        raise InvalidParameterError(f"refine must be nonnegative, got {args.refine}")
    shape = build_shape(args)
    mesh = generate_mesh(shape, args.h, seed=args.seed)
    for _ in range(args.refine):
        mesh = refine_mesh(mesh, shape)
    save_mesh(mesh, args.out)
    summary = mesh.summary()
    print(f"Wrote {args.out}: {summary['vertices']} vertices, {summary['triangles']} triangles, "
          f"h={summary['h_global']:.4g}")
    return 0
