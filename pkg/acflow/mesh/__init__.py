"""
Mesh package: triangulations of disks and rectangles.
"""

from acflow.mesh.models import (
    BOTTOM, DISK_BOUNDARY, LEFT, LOCAL_EDGES, RIGHT, TOP,
    Disk, Mesh, Rectangle, Shape, domain_area, polygon_area,
)
from acflow.mesh.generator import generate_mesh, refine_mesh
from acflow.mesh.mesh_io import load_mesh, parse_mesh, save_mesh

__all__ = [
    'Mesh', 'Disk', 'Rectangle', 'Shape',
    'DISK_BOUNDARY', 'BOTTOM', 'RIGHT', 'TOP', 'LEFT', 'LOCAL_EDGES',
    'domain_area', 'polygon_area',
    'generate_mesh', 'refine_mesh',
    'load_mesh', 'save_mesh', 'parse_mesh',
]
