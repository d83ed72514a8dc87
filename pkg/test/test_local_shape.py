# Copyright (c) 2026 SkelGrasp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

from skelgrasp.mesh import fixtures
from skelgrasp.mesh.mesh import Mesh
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.shape.local_shape import RECTANGULAR
from skelgrasp.shape.local_shape import ROUND
from skelgrasp.shape.local_shape import classify_ratio
from skelgrasp.shape.local_shape import curvature
from skelgrasp.shape.local_shape import grasping_interval
from skelgrasp.shape.local_shape import shape_to_dict
from skelgrasp.shape.local_shape import surface_shape
from skelgrasp.shape.local_shape import tangent
from skelgrasp.skeleton.segmentation import classify_vertices
from skelgrasp.skeleton.types import Skeleton
from skelgrasp.skeleton.types import SkeletonVertex
from skelgrasp.utils.errors import DegenerateShapeError


def test_circle_curvature(chain_skeleton):
    radius = 50.0
    angles = np.radians(np.arange(0.0, 50.0, 5.0))
    points = np.stack(
        [radius * np.cos(angles), radius * np.sin(angles),
         np.zeros_like(angles)], axis=1)
    skeleton = chain_skeleton(points)
    for v in range(1, len(points) - 1):
        assert curvature(skeleton, v) == pytest.approx(1.0 / radius,
                                                       rel=0.02)
    assert curvature(skeleton, 0) == 0.0


def test_tangent(chain_skeleton):
    skeleton = chain_skeleton([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                               [2.0, 0.0, 0.0]])
    assert np.allclose(tangent(skeleton, 0), [-1.0, 0.0, 0.0])
    assert np.allclose(tangent(skeleton, 1), [1.0, 0.0, 0.0])
    assert np.allclose(tangent(skeleton, 2), [1.0, 0.0, 0.0])


def test_interval_straight_chain(chain_skeleton):
    points = [[float(x), 0.0, 0.0] for x in range(0, 41, 2)]
    skeleton = chain_skeleton(points)
    interval = grasping_interval(skeleton, 10, 8.0)
    assert len(interval) == 2
    assert interval.lengths == (8.0, 8.0)
    assert interval.reaches(8.0)
    assert interval.vertices() == list(range(6, 15))

    near_end = grasping_interval(skeleton, 2, 8.0)
    assert sorted(near_end.lengths) == [4.0, 8.0]
    assert not near_end.reaches(8.0)


def test_interval_stops_at_sharp_bend(chain_skeleton):
    points = [[float(x), 0.0, 0.0] for x in range(6)]
    points += [[5.0, float(y), 0.0] for y in range(1, 6)]
    skeleton = chain_skeleton(points)
    interval = grasping_interval(skeleton, 2, 10.0, kappa_max=0.1)
    forward = [p for p in interval.paths if p[1] == 3][0]
    assert forward == (2, 3, 4, 5)
    assert not interval.reaches(10.0)


def test_branching_interval_has_three_paths():
    positions = [np.zeros(3)]
    edges = []
    for a in range(3):
        angle = 2.0 * np.pi * a / 3
        direction = np.array([np.cos(angle), np.sin(angle), 0.0])
        prev = 0
        for k in range(1, 4):
            positions.append(k * direction)
            edges.append((prev, len(positions) - 1))
            prev = len(positions) - 1
    skeleton = classify_vertices(
        Skeleton([SkeletonVertex(p) for p in positions], edges, 0))
    assert len(grasping_interval(skeleton, 0, 2.0)) == 3


def test_classify_ratio():
    assert classify_ratio(1.0, 1.0, 1.2) == ROUND
    assert classify_ratio(1.3, 1.0, 1.2) == RECTANGULAR
    assert classify_ratio(1.0, 0.0, 1.2) == RECTANGULAR


def test_cylinder_is_round(cylinder_mesh, axis_chain_skeleton):
    skeleton = axis_chain_skeleton(cylinder_mesh, 2, -40.0, 40.0, 2.0)
    v = 20
    interval = grasping_interval(skeleton, v, 20.0)
    assert interval.reaches(20.0)
    shape = surface_shape(cylinder_mesh, skeleton, v, interval)
    assert shape.shape == ROUND
    assert shape.ratio < 1.2
    t1, t2 = shape.thickness('length')
    assert t2 == pytest.approx(2.0 * np.sqrt(50.0), abs=1.0)
    assert abs(np.dot(shape.normal, [0.0, 0.0, 1.0])) == pytest.approx(1.0)
    assert abs(np.dot(shape.ev1, shape.normal)) < 1e-9
    assert abs(np.dot(shape.ev2, shape.normal)) < 1e-9


def test_flat_box_is_rectangular(axis_chain_skeleton):
    box = fixtures.box(extents=(120.0, 40.0, 10.0), spacing=2.0)
    skeleton = axis_chain_skeleton(box, 0, -50.0, 50.0, 2.0)
    v = 25
    interval = grasping_interval(skeleton, v, 20.0)
    shape = surface_shape(box, skeleton, v, interval)
    assert shape.shape == RECTANGULAR
    assert abs(shape.ev1[1]) == pytest.approx(1.0, abs=1e-6)
    t1, t2 = shape.thickness('length')
    assert t1 > t2
    entry = shape_to_dict(shape, v, 'connecting')
    assert entry['shape'] == RECTANGULAR
    assert len(entry['projected']) == shape.projected.shape[0]


def test_shape_ratio_scale_invariant(cylinder_mesh, axis_chain_skeleton,
                                     chain_skeleton):
    skeleton = axis_chain_skeleton(cylinder_mesh, 2, -40.0, 40.0, 2.0)
    big_mesh = Mesh(np.asarray(cylinder_mesh.vertices) * 2.0,
                    cylinder_mesh.triangles)
    big = chain_skeleton(skeleton.positions * 2.0,
                         [v.points for v in skeleton.vertices],
                         skeleton.num_surface_points)
    for v in (10, 20, 30):
        a = surface_shape(cylinder_mesh, skeleton, v,
                          grasping_interval(skeleton, v, 20.0))
        b = surface_shape(big_mesh, big, v, grasping_interval(big, v, 40.0))
        assert b.ratio == pytest.approx(a.ratio, rel=1e-9)
        assert b.shape == a.shape


def test_shape_rotation_invariant(axis_chain_skeleton, chain_skeleton):
    box = fixtures.box(extents=(120.0, 40.0, 10.0), spacing=2.0)
    skeleton = axis_chain_skeleton(box, 0, -50.0, 50.0, 2.0)
    motion = RigidPose.from_axis_angle([0.3, -1.0, 0.8], 1.1,
                                       [15.0, 5.0, -30.0])
    moved_box = Mesh(motion.apply(np.asarray(box.vertices)), box.triangles)
    moved = chain_skeleton(motion.apply(skeleton.positions),
                           [v.points for v in skeleton.vertices],
                           skeleton.num_surface_points)
    for v in (15, 25, 35):
        a = surface_shape(box, skeleton, v,
                          grasping_interval(skeleton, v, 20.0))
        b = surface_shape(moved_box, moved, v,
                          grasping_interval(moved, v, 20.0))
        assert b.eigenvalues == pytest.approx(a.eigenvalues, rel=1e-9)
        assert b.shape == a.shape
        turned = motion.apply_vector(a.ev1)
        assert abs(np.dot(turned, b.ev1)) == pytest.approx(1.0, abs=1e-9)


def test_degenerate_interval(chain_skeleton):
    skeleton = chain_skeleton([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                               [2.0, 0.0, 0.0]])
    interval = grasping_interval(skeleton, 1, 1.0)
    with pytest.raises(DegenerateShapeError):
        surface_shape(None, skeleton, 1, interval)
