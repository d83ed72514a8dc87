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

from skelgrasp.evaluation.robustness import INITIAL_COLLISION
from skelgrasp.evaluation.robustness import MAGNITUDE
from skelgrasp.evaluation.robustness import RobustnessConfig
from skelgrasp.evaluation.robustness import draw_noise
from skelgrasp.evaluation.robustness import perturb_pose
from skelgrasp.evaluation.robustness import robustness_score
from skelgrasp.evaluation.robustness import score_with_config
from skelgrasp.hand.model import PRECISION
from skelgrasp.mesh import fixtures
from skelgrasp.mesh.collision import Contact
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.planner.planner import Grasp
from skelgrasp.utils.errors import GraspError
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.random_utils import derive_rng


@pytest.fixture(scope='module')
def centred(gripper, long_box, make_box_grasp):
    return make_box_grasp(gripper, long_box, 0.0)


def test_perturb_pose():
    pose = RigidPose.from_axis_angle([0, 1, 0], 0.4, [10.0, 0.0, 0.0])
    assert perturb_pose(pose, np.zeros(3), [0, 0, 1], 0.0, np.zeros(3)) \
        is pose
    moved = perturb_pose(pose, np.zeros(3), [0, 0, 1], np.pi / 2,
                         [0.0, 0.0, 1.0])
    assert np.allclose(moved.translation, [0.0, 10.0, 1.0])
    expected = RigidPose.from_axis_angle([0, 0, 1], np.pi / 2).compose(pose)
    assert np.allclose(moved.rotation_matrix(), expected.rotation_matrix())


def test_draw_noise_modes():
    a = draw_noise(50, derive_rng(1, 'x'))
    b = draw_noise(50, derive_rng(1, 'x'), MAGNITUDE)
    assert np.allclose(np.linalg.norm(a.axes, axis=1), 1.0)
    assert np.array_equal(a.axes, b.axes)
    assert np.array_equal(a.angles, b.angles)
    # magnitude mode keeps the direction of the per-axis draw
    cos = np.sum(a.offsets * b.offsets, axis=1) / (
        np.linalg.norm(a.offsets, axis=1) * np.linalg.norm(b.offsets, axis=1))
    assert np.allclose(np.abs(cos), 1.0)


def test_robustness_config():
    assert RobustnessConfig.from_dict({'samples': 10}).samples == 10
    with pytest.raises(SkelGraspError):
        RobustnessConfig(sigma_pos=-1.0)
    with pytest.raises(SkelGraspError):
        RobustnessConfig(position_noise='sphere')


def test_zero_noise_keeps_valid_grasp(centred, gripper, long_box):
    assert centred.force_closure
    report = robustness_score(centred, long_box, gripper, n=5, sigma_pos=0.0,
                              sigma_rot=0.0)
    assert report.score == 1.0
    assert report.successes == 5
    assert sum(report.failures.values()) == 0


def test_colliding_grasp_scores_zero(gripper):
    giant = fixtures.primitive_box([1000.0, 1000.0, 1000.0])
    grasp = Grasp(RigidPose(), PRECISION, -1, 'manual',
                  np.array([0.0, 0.0, 1.0]),
                  (Contact(np.zeros(3), np.array([1.0, 0.0, 0.0])), ), True,
                  0.1)
    report = robustness_score(grasp, giant, gripper, n=20)
    assert report.score == 0.0
    assert report.failures[INITIAL_COLLISION] == 20


def test_grasp_without_contacts(gripper, long_box):
    grasp = Grasp(RigidPose(), PRECISION, -1, 'manual',
                  np.array([0.0, 0.0, 1.0]), (), False, 0.0)
    with pytest.raises(GraspError):
        robustness_score(grasp, long_box, gripper, n=3)


def test_seeded_scores_repeat(centred, gripper, long_box):
    config = RobustnessConfig(samples=12, sigma_pos=15.0, threads=2)
    a = score_with_config(centred, long_box, gripper, config, grasp_id=3)
    b = score_with_config(centred, long_box, gripper, config, grasp_id=3)
    assert a == b
    assert a.grasp_id == 3
    assert a.to_dict()['samples'] == 12


@pytest.mark.slow
def test_centred_grasp_beats_edge_grasp(centred, gripper, long_box,
                                      make_box_grasp):
    edge = make_box_grasp(gripper, long_box, 98.0)
    r_centre = robustness_score(centred, long_box, gripper, n=60).score
    r_edge = robustness_score(edge, long_box, gripper, n=60).score
    assert r_centre > r_edge


@pytest.mark.slow
def test_more_noise_is_not_more_robust(gripper, long_box, make_box_grasp):
    edge = make_box_grasp(gripper, long_box, 95.0)
    low = robustness_score(edge, long_box, gripper, n=40, sigma_pos=1.0,
                           sigma_rot=0.5).score
    high = robustness_score(edge, long_box, gripper, n=40, sigma_pos=20.0,
                            sigma_rot=10.0).score
    assert high <= low
