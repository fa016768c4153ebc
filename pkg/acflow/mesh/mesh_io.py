"""
Mesh file reader and writer.
Plain ASCII format: header line, then VERTICES / TRIANGLES / BOUNDARY sections,
whitespace separated, '#' starts a comment.
"""

import logging
import os
from typing import List, Tuple

import numpy as np

from acflow.config.constants import MESH_FILE_HEADER
from acflow.core.exceptions import MeshParseError
from acflow.mesh.models import Mesh

logger = logging.getLogger(__name__)

SECTIONS = ("VERTICES", "TRIANGLES", "BOUNDARY")


def save_mesh(mesh: Mesh, path: str):
    """Write a mesh; floats use 17 significant digits so a reload is exact."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)

    lines = [MESH_FILE_HEADER, f"# {mesh.name}"]
    lines.append(f"VERTICES {mesh.n_vertices}")
    lines.extend(f"{x:.17g} {y:.17g}" for x, y in mesh.vertices)
    lines.append(f"TRIANGLES {mesh.n_triangles}")
    lines.extend(f"{i} {j} {k}" for i, j, k in mesh.triangles)
    lines.append(f"BOUNDARY {len(mesh.boundary_tags)}")
    lines.extend(f"{i} {j} {tag}" for (i, j), tag in zip(mesh.boundary_edges, mesh.boundary_tags))

    with open(path, 'w', encoding='utf-8') as f:
        f.write("\n".join(lines) + "\n")
    logger.info(f"Saved {mesh!r} to {path}")


def _tokenized_lines(text: str) -> List[Tuple[int, List[str]]]:
    result = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split('#', 1)[0].strip()
        if content:
            result.append((number, content.split()))
    return result


def _parse_rows(rows, count, width, cast, section, header_line):
    if len(rows) < count:
        last = rows[-1][0] if rows else header_line
        raise MeshParseError(f"section {section} expects {count} rows, found {len(rows)}", last)
    values = []
    for number, tokens in rows[:count]:
        if len(tokens) != width:
            raise MeshParseError(f"{section} row needs {width} values, got {len(tokens)}", number)
        try:
            values.append([cast(token) for token in tokens])
        except ValueError:
            raise MeshParseError(f"non-numeric value in {section} row: {' '.join(tokens)}", number)
    return values


def parse_mesh(text: str, name: str = "mesh") -> Mesh:
    """Parse mesh file contents; connectivity is validated by the Mesh constructor."""
    lines = _tokenized_lines(text)
    if not lines or " ".join(lines[0][1]) != MESH_FILE_HEADER:
        number = lines[0][0] if lines else 1
        raise MeshParseError(f"missing '{MESH_FILE_HEADER}' header", number)

    parsed = {}
    index = 1
    for section, width, cast in (("VERTICES", 2, float), ("TRIANGLES", 3, int), ("BOUNDARY", 3, int)):
        if index >= len(lines):
            raise MeshParseError(f"missing section {section}", lines[-1][0] + 1)
        number, tokens = lines[index]
        if tokens[0] != section or len(tokens) != 2:
            raise MeshParseError(f"expected '{section} <count>'", number)
        try:
            count = int(tokens[1])
        except ValueError:
            raise MeshParseError(f"invalid row count '{tokens[1]}'", number)
        if count < 0:
            raise MeshParseError(f"negative row count {count}", number)

        rows = lines[index + 1:index + 1 + count]
        parsed[section] = _parse_rows(rows, count, width, cast, section, number)
        index += 1 + count

    if index < len(lines):
        raise MeshParseError("unexpected content after BOUNDARY section", lines[index][0])

    boundary = np.array(parsed["BOUNDARY"], dtype=np.int64).reshape(-1, 3)
    return Mesh(
        vertices=np.array(parsed["VERTICES"], dtype=float).reshape(-1, 2),
        triangles=np.array(parsed["TRIANGLES"], dtype=np.int64).reshape(-1, 3),
        boundary_edges=boundary[:, :2],
        boundary_tags=boundary[:, 2],
        name=name,
    )


def load_mesh(path: str) -> Mesh:
    """Read a mesh file written by save_mesh (or by hand)."""
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    name = os.path.splitext(os.path.basename(path))[0]
    mesh = parse_mesh(text, name=name)
    logger.info(f"Loaded {mesh!r} from {path}")
    return mesh
