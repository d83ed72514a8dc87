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

from skelgrasp.grasp.quality import grasp_quality
from skelgrasp.hand.closing import close_fingers
from skelgrasp.hand.model import PRECISION
from skelgrasp.hand.model import builtin_hand
from skelgrasp.mesh import fixtures
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.planner.planner import Grasp
from skelgrasp.skeleton.segmentation import classify_vertices
from skelgrasp.skeleton.skeletonize import skeletonize
from skelgrasp.skeleton.types import Skeleton
from skelgrasp.skeleton.types import SkeletonVertex


@pytest.fixture(scope='session')
def gripper():
    return builtin_hand('parallel_gripper')


@pytest.fixture(scope='session')
def three_finger():
    return builtin_hand('three_finger')


@pytest.fixture(scope='session')
def cylinder_mesh():
    return fixtures.cylinder(10.0, 100.0)


@pytest.fixture(scope='session')
def y_tube_mesh():
    return fixtures.y_tube()


@pytest.fixture(scope='session')
def cylinder_skeleton(cylinder_mesh):
    return skeletonize(cylinder_mesh)


@pytest.fixture(scope='session')
def y_tube_skeleton(y_tube_mesh):
    return skeletonize(y_tube_mesh)


@pytest.fixture(scope='session')
def long_box():
    """ 30 mm wide, 200 mm long along y, 40 mm high """
    return fixtures.box(extents=(30.0, 200.0, 40.0), spacing=2.0)


def chain(points, owners=None, num_surface_points=0):
    """ Classified open chain through `points`, optional surface points
        per vertex
    """
    points = np.asarray(points, dtype=np.float64)
    if owners is None:
        owners = [np.zeros(0, dtype=np.int64)] * len(points)
    vertices = tuple(
        SkeletonVertex(p, np.asarray(o, dtype=np.int64))
        for p, o in zip(points, owners))
    edges = tuple((i, i + 1) for i in range(len(points) - 1))
    return classify_vertices(Skeleton(vertices, edges, num_surface_points))


@pytest.fixture
def chain_skeleton():
    return chain


def axis_chain(mesh, axis, lo, hi, step):
    """ Chain along a coordinate axis owning the mesh vertices nearest to
        each of its points along that axis
    """
    ts = np.arange(lo, hi + step / 2.0, step)
    points = np.zeros((len(ts), 3))
    points[:, axis] = ts
    coord = np.asarray(mesh.vertices)[:, axis]
    nearest = np.argmin(np.abs(coord[:, None] - ts[None]), axis=1)
    owners = [np.nonzero(nearest == i)[0] for i in range(len(ts))]
    return chain(points, owners, mesh.num_vertices)


@pytest.fixture
def axis_chain_skeleton():
    return axis_chain


def box_grasp(gripper, obj, y=0.0):
    """ Precision pinch across the 30 mm side of `long_box`, GCP at
        height 0 and position y along the box
    """
    gcp = gripper.preshape(PRECISION).gcp
    pose = RigidPose([0.0, y, 0.0]).compose(gcp.inverse())
    closing = close_fingers(gripper, pose, PRECISION, obj)
    quality = grasp_quality(closing.contacts, obj)
    return Grasp(pose, PRECISION, -1, 'manual', np.array([0.0, 0.0, 1.0]),
                 closing.contacts, quality.force_closure, quality.epsilon)


@pytest.fixture(scope='session')
def make_box_grasp():
    return box_grasp
