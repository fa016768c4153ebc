import numpy as np
import pytest

from acflow.core.exceptions import (
    InvalidParameterError, MeshGenerationError, MeshParseError, MeshValidationError,
)
from acflow.mesh import (
    BOTTOM, DISK_BOUNDARY, LEFT, RIGHT, TOP, Disk, Mesh, Rectangle,
    domain_area, generate_mesh, load_mesh, parse_mesh, polygon_area, refine_mesh, save_mesh,
)


def test_rectangle_mesh_covers_domain(unit_square):
    assert unit_square.n_triangles == 32
    assert unit_square.total_area == pytest.approx(1.0, abs=1e-12)
    assert set(unit_square.tags) == {BOTTOM, RIGHT, TOP, LEFT}
    assert np.all(unit_square.signed_areas > 0.0)


def test_rectangle_boundary_tags_follow_sides(unit_square):
    vertices = unit_square.vertices
    for tag, axis, value in ((BOTTOM, 1, 0.0), (RIGHT, 0, 1.0), (TOP, 1, 1.0), (LEFT, 0, 0.0)):
        ids = unit_square.boundary_vertices(tag)
        assert np.allclose(vertices[ids, axis], value)


def test_disk_mesh_properties():
    h = 0.2
    mesh = generate_mesh(Disk(1.0), h, seed=3)
    assert mesh.h_global <= 1.5 * h
    assert polygon_area(mesh) == pytest.approx(mesh.total_area, rel=1e-14)
    # inscribed polygon: slightly smaller than pi
    assert 0.97 * np.pi < mesh.total_area < np.pi
    assert mesh.tags == (DISK_BOUNDARY,)
    radii = np.linalg.norm(mesh.vertices[mesh.boundary_vertices()], axis=1)
    assert np.allclose(radii, 1.0, atol=1e-12)


def test_disk_mesh_contains_axis_points(small_disk):
    for point in ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)):
        distance = np.linalg.norm(small_disk.vertices - np.array(point), axis=1).min()
        assert distance < 1e-12


def test_disk_mesh_is_deterministic_for_a_seed():
    first = generate_mesh(Disk(1.0), 0.25, seed=7)
    second = generate_mesh(Disk(1.0), 0.25, seed=7)
    assert np.array_equal(first.vertices, second.vertices)
    assert np.array_equal(first.triangles, second.triangles)


def test_nonpositive_h_is_rejected():
    with pytest.raises(InvalidParameterError):
        generate_mesh(Disk(1.0), 0.0)
    with pytest.raises(InvalidParameterError):
        generate_mesh(Rectangle(), -0.1)


def test_degenerate_rectangle_fails():
    with pytest.raises(MeshGenerationError):
        generate_mesh(Rectangle((0.0, 0.0), (0.0, 1.0)), 0.1)


def test_domain_area():
    assert domain_area(Disk(2.0)) == pytest.approx(4.0 * np.pi)
    assert domain_area(Rectangle((0.0, 1.0), (-1.0, 1.0))) == pytest.approx(2.0)


def test_refine_quadruples_triangles_and_keeps_boundary_on_circle(small_disk):
    fine = refine_mesh(small_disk, Disk(1.0))
    assert fine.n_triangles == 4 * small_disk.n_triangles
    radii = np.linalg.norm(fine.vertices[fine.boundary_vertices()], axis=1)
    assert np.allclose(radii, 1.0, atol=1e-12)
    assert fine.total_area > small_disk.total_area


def test_disk_area_deficit_is_second_order():
    coarse = np.pi - generate_mesh(Disk(1.0), 0.1, seed=0).total_area
    fine = np.pi - generate_mesh(Disk(1.0), 0.05, seed=0).total_area
    assert fine > 0.0
    assert coarse / fine >= 3.0


def test_refine_halves_mesh_size(small_disk):
    mesh = small_disk
    for _ in range(2):
        fine = refine_mesh(mesh, Disk(1.0))
        assert 0.45 <= fine.h_global / mesh.h_global <= 0.6
        mesh = fine


def test_refine_rectangle_keeps_area_and_tags(unit_square):
    fine = refine_mesh(unit_square)
    assert fine.total_area == pytest.approx(1.0, abs=1e-12)
    assert len(fine.boundary_tags) == 2 * len(unit_square.boundary_tags)
    assert set(fine.tags) == set(unit_square.tags)


def test_save_and_load_preserve_mesh(tmp_path, small_disk):
    path = tmp_path / "disk.mesh"
    save_mesh(small_disk, str(path))
    loaded = load_mesh(str(path))
    assert np.array_equal(loaded.vertices, small_disk.vertices)
    assert np.array_equal(loaded.triangles, small_disk.triangles)
    assert np.array_equal(loaded.boundary_tags, small_disk.boundary_tags)


SINGLE_TRIANGLE = """ACMESH 1
VERTICES 3
0 0
1 0
0 1
TRIANGLES 1
0 1 2
BOUNDARY 3
0 1 1
1 2 1
2 0 1
"""


def test_parse_single_triangle():
    mesh = parse_mesh(SINGLE_TRIANGLE)
    assert mesh.n_triangles == 1
    assert mesh.total_area == pytest.approx(0.5)


def test_parse_error_reports_line_number():
    text = SINGLE_TRIANGLE.replace("1 0\n", "1 x\n", 1)
    with pytest.raises(MeshParseError) as info:
        parse_mesh(text)
    assert info.value.line_number == 4


def test_parse_rejects_missing_header():
    with pytest.raises(MeshParseError) as info:
        parse_mesh(SINGLE_TRIANGLE.replace("ACMESH 1", "MESH"))
    assert info.value.line_number == 1


def test_clockwise_triangle_is_invalid():
    with pytest.raises(MeshValidationError):
        Mesh([[0, 0], [1, 0], [0, 1]], [[0, 2, 1]], [[0, 1], [1, 2], [2, 0]], [1, 1, 1])


def test_untagged_boundary_edge_is_invalid():
    with pytest.raises(MeshValidationError):
        Mesh([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]], [[0, 1], [1, 2]], [1, 1])
