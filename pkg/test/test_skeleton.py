# Copyright (c) 2026 SkelGrasp Authors
#
# Licensed under the Apache License, Version 2.0 (the 'License');
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an 'AS IS' BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import networkx as nx
import numpy as np
import pytest

from skelgrasp.mesh import fixtures
from skelgrasp.mesh.mesh import Mesh
from skelgrasp.skeleton.contraction import ContractionParams
from skelgrasp.skeleton.contraction import cotangent_laplacian
from skelgrasp.skeleton.io import read_skeleton
from skelgrasp.skeleton.io import write_segmentation_ply
from skelgrasp.skeleton.io import write_skeleton
from skelgrasp.skeleton.segmentation import classify_vertices
from skelgrasp.skeleton.segmentation import segment_skeleton
from skelgrasp.skeleton.segmentation import surface_partition_colors
from skelgrasp.skeleton.skeletonize import _Cleaner
from skelgrasp.skeleton.skeletonize import minimal_skeleton
from skelgrasp.skeleton.skeletonize import skeletonize
from skelgrasp.skeleton.types import BRANCHING
from skelgrasp.skeleton.types import CONNECTING
from skelgrasp.skeleton.types import ENDPOINT
from skelgrasp.skeleton.types import Skeleton
from skelgrasp.skeleton.types import SkeletonVertex
from skelgrasp.utils.errors import MeshError
from skelgrasp.utils.errors import SkeletonError


def star(arms=3, length=4):
    """ Centre vertex 0 with `arms` straight arms of `length` vertices """
    positions = [np.zeros(3)]
    edges = []
    for a in range(arms):
        angle = 2.0 * np.pi * a / arms
        direction = np.array([np.cos(angle), np.sin(angle), 0.0])
        prev = 0
        for k in range(1, length + 1):
            positions.append(k * direction)
            edges.append((prev, len(positions) - 1))
            prev = len(positions) - 1
    vertices = [SkeletonVertex(p) for p in positions]
    return classify_vertices(Skeleton(vertices, edges, 0))


def test_laplacian_rows_sum_to_zero():
    mesh = fixtures.icosphere(10.0, 1)
    lap = cotangent_laplacian(np.array(mesh.vertices), mesh.triangles)
    assert np.allclose(np.asarray(lap.sum(axis=1)).ravel(), 0.0)


def test_classify_and_segment_star():
    skeleton = star()
    kinds = [skeleton.kind(v) for v in range(len(skeleton))]
    assert kinds.count(BRANCHING) == 1
    assert kinds.count(ENDPOINT) == 3
    assert kinds.count(CONNECTING) == 9
    segments = segment_skeleton(skeleton)
    assert len(segments) == 3
    for s in segments:
        assert s.delimiters[0] == 0
        assert skeleton.kind(s.delimiters[1]) == ENDPOINT
        assert len(s.interior) == 3
        assert not s.closed


def test_segment_closed_loop():
    angles = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
    vertices = [
        SkeletonVertex(np.array([np.cos(a), np.sin(a), 0.0])) for a in angles
    ]
    edges = [(i, (i + 1) % 8) for i in range(8)]
    skeleton = classify_vertices(Skeleton(vertices, edges, 0))
    segments = segment_skeleton(skeleton)
    assert len(segments) == 1
    assert segments[0].closed
    assert segments[0].delimiters == (None, None)
    assert sorted(segments[0].interior) == list(range(8))


def test_isolated_vertex_is_malformed():
    vertices = [SkeletonVertex(np.zeros(3)), SkeletonVertex(np.ones(3)),
                SkeletonVertex(np.full(3, 2.0))]
    with pytest.raises(SkeletonError, match='vertex 2'):
        classify_vertices(Skeleton(vertices, [(0, 1)], 0))


def test_validate_partition():
    vertices = [SkeletonVertex(np.zeros(3), np.array([0, 1])),
                SkeletonVertex(np.ones(3), np.array([1]))]
    with pytest.raises(SkeletonError, match='partitioned'):
        Skeleton(vertices, [(0, 1)], 3).validate()


def test_validate_rejects_self_loop():
    vertices = [SkeletonVertex(np.zeros(3), np.array([0])),
                SkeletonVertex(np.ones(3), np.array([1]))]
    with pytest.raises(SkeletonError, match='self-loop'):
        Skeleton(vertices, [(0, 1), (1, 1)], 2).validate()


def test_cylinder_skeleton_is_centred(cylinder_mesh, cylinder_skeleton):
    positions = cylinder_skeleton.positions
    assert np.mean(np.linalg.norm(positions[:, :2], axis=1)) < 1.0
    kinds = [v.kind for v in cylinder_skeleton.vertices]
    assert BRANCHING not in kinds
    assert kinds.count(ENDPOINT) == 2
    assert np.ptp(positions[:, 2]) > 50.0
    owner = cylinder_skeleton.point_owner()
    assert owner.shape == (cylinder_mesh.num_vertices, )
    assert np.all(owner >= 0)


def test_y_tube_skeleton(y_tube_skeleton):
    kinds = [v.kind for v in y_tube_skeleton.vertices]
    assert kinds.count(BRANCHING) == 1
    assert kinds.count(ENDPOINT) == 3
    assert len(segment_skeleton(y_tube_skeleton)) == 3
    branching = y_tube_skeleton.positions[kinds.index(BRANCHING)]
    assert np.linalg.norm(branching) < 8.0


def max_gap(skeleton):
    return max(skeleton.edge_length(a, b) for a, b in skeleton.edges)


def test_edge_spacing(cylinder_mesh, cylinder_skeleton, y_tube_mesh,
                      y_tube_skeleton):
    params = ContractionParams()
    for mesh, skeleton in [(cylinder_mesh, cylinder_skeleton),
                           (y_tube_mesh, y_tube_skeleton)]:
        assert max_gap(skeleton) <= params.edge_length(mesh) + 1e-9


def test_repair_keeps_edge_spacing():
    # the middle node lies outside the box and owns all its corners, so
    # the repair drags it 20 mm away from both neighbours
    mesh = fixtures.primitive_box([4.0, 4.0, 4.0], center=(1.0, 20.0, 0.0))
    graph = nx.path_graph(3)
    for v in graph.nodes:
        graph.nodes[v]['pos'] = np.array([float(v), 0.0, 0.0])
        graph.nodes[v]['points'] = []
    graph.nodes[1]['points'] = list(range(mesh.num_vertices))
    cleaned = _Cleaner(graph, mesh, 1.0, 1.5).run()
    gaps = [
        np.linalg.norm(cleaned.nodes[a]['pos'] - cleaned.nodes[b]['pos'])
        for a, b in cleaned.edges
    ]
    assert max(gaps) <= 1.0 + 1e-9
    assert sum(gaps) > 40.0
    assert nx.is_connected(cleaned)
    owned = sorted(p for v in cleaned.nodes for p in cleaned.nodes[v]['points'])
    assert owned == list(range(mesh.num_vertices))


def test_skeletonize_is_deterministic(cylinder_mesh, cylinder_skeleton):
    again = skeletonize(cylinder_mesh)
    assert again.edges == cylinder_skeleton.edges
    assert np.array_equal(again.positions, cylinder_skeleton.positions)
    for a, b in zip(again.vertices, cylinder_skeleton.vertices):
        assert np.array_equal(a.points, b.points)
        assert a.kind == b.kind


@pytest.mark.slow
def test_corpus_partition():
    params = ContractionParams()
    for mesh in fixtures.corpus():
        skeleton = skeletonize(mesh)
        total = sum(len(v.points) for v in skeleton.vertices)
        assert total == mesh.num_vertices
        skeleton.validate()
        assert max_gap(skeleton) <= params.edge_length(mesh) + 1e-9


def test_small_sphere_minimal_skeleton():
    mesh = fixtures.icosphere(20.0, 2)
    skeleton = minimal_skeleton(mesh, 2.0)
    assert len(skeleton) == 2
    assert [skeleton.kind(v) for v in range(2)] == [None, None]
    skeleton.validate()


def test_skeletonize_rejects_open_mesh():
    box = fixtures.primitive_box([10.0, 10.0, 10.0])
    open_box = Mesh(box.vertices, box.triangles[:-1])
    with pytest.raises(MeshError) as info:
        skeletonize(open_box)
    assert len(info.value.open_edges) > 0


def test_contraction_gives_up():
    params = ContractionParams(max_iterations=1, area_ratio=1e-12)
    with pytest.raises(SkeletonError) as info:
        skeletonize(fixtures.capsule(spacing=3.0), params)
    assert info.value.iterations == 1


def test_skeleton_file_round_trip(tmp_path, y_tube_mesh, y_tube_skeleton):
    path = str(tmp_path / 'y.skel')
    write_skeleton(y_tube_skeleton, path)
    loaded = read_skeleton(path)
    assert loaded.edges == y_tube_skeleton.edges
    assert loaded.num_surface_points == y_tube_skeleton.num_surface_points
    assert np.array_equal(loaded.positions, y_tube_skeleton.positions)
    for a, b in zip(loaded.vertices, y_tube_skeleton.vertices):
        assert a.kind == b.kind
        assert np.array_equal(a.points, b.points)

    ply = tmp_path / 'y.ply'
    write_segmentation_ply(y_tube_skeleton, y_tube_mesh, str(ply))
    assert ply.stat().st_size > 0


def test_bad_skeleton_file(tmp_path):
    path = tmp_path / 'bad.skel'
    path.write_text('hello\n')
    with pytest.raises(SkeletonError):
        read_skeleton(str(path))


def test_partition_colors(y_tube_mesh, y_tube_skeleton):
    labels, colors = surface_partition_colors(y_tube_skeleton, y_tube_mesh)
    assert colors.shape == (y_tube_mesh.num_vertices, 4)
    endpoint = labels == ENDPOINT
    assert np.any(endpoint)
    assert np.all(colors[endpoint] == [255, 0, 0, 255])
