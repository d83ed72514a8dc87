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

import logging

import numpy as np
import pytest
import yaml

from skelgrasp.hand.closing import close_fingers
from skelgrasp.hand.closing import hand_collides
from skelgrasp.hand.model import BUILTIN_DIR
from skelgrasp.hand.model import HAND_PATH_ENV
from skelgrasp.hand.model import POWER
from skelgrasp.hand.model import PRECISION
from skelgrasp.hand.model import forward_kinematics
from skelgrasp.hand.model import hand_from_dict
from skelgrasp.hand.model import load_hand
from skelgrasp.hand.model import measure_handwidth
from skelgrasp.mesh import fixtures
from skelgrasp.mesh.mesh import mesh_from_arrays
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.utils.errors import HandConfigError


def gripper_config():
    with open('{}/parallel_gripper.yaml'.format(BUILTIN_DIR)) as fin:
        return yaml.load(fin, Loader=yaml.FullLoader)


def test_builtin_gripper(gripper):
    assert gripper.root == 'palm'
    assert sorted(gripper.links) == ['finger_left', 'finger_right', 'palm']
    assert sorted(gripper.joints) == ['joint_left', 'joint_right']
    assert gripper.fingerwidth == 20.0
    assert gripper.handwidth == 100.0
    assert [j.name for j in gripper.joint_order()] == [
        'joint_left', 'joint_right'
    ]
    assert gripper.subtree_links('joint_left') == ['finger_left']


def test_measured_handwidth(gripper, three_finger):
    # palm is the widest link
    assert measure_handwidth(gripper) == pytest.approx(130.0)
    assert three_finger.handwidth > 0.0
    assert set(three_finger.preshapes) >= {PRECISION, POWER}


def test_hand_from_env_path(tmp_path, monkeypatch):
    configs = gripper_config()
    configs['name'] = 'mini'
    (tmp_path / 'mini.yaml').write_text(yaml.dump(configs))
    monkeypatch.setenv(HAND_PATH_ENV, str(tmp_path))
    assert load_hand('mini').name == 'mini'
    with pytest.raises(HandConfigError, match='not found'):
        load_hand('no_such_hand')


def test_joint_cycle_rejected():
    configs = gripper_config()
    configs['links']['extra'] = {'mesh': {'box': [1.0, 1.0, 1.0]}}
    configs['joints'] = {
        'a': {'parent': 'finger_left', 'child': 'extra'},
        'b': {'parent': 'extra', 'child': 'finger_left'},
    }
    configs['preshapes'] = {
        PRECISION: {'gcp': {}},
        POWER: {'gcp': {}},
    }
    with pytest.raises(HandConfigError, match='cycle'):
        hand_from_dict(configs)


def test_missing_gcp_rejected():
    configs = gripper_config()
    del configs['preshapes'][POWER]['gcp']
    with pytest.raises(HandConfigError, match='gcp'):
        hand_from_dict(configs)


def test_missing_preshape_rejected():
    configs = gripper_config()
    del configs['preshapes'][PRECISION]
    with pytest.raises(HandConfigError, match=PRECISION):
        hand_from_dict(configs)


def test_unknown_joint_in_preshape():
    configs = gripper_config()
    configs['preshapes'][PRECISION]['closing']['joint_thumb'] = 1
    with pytest.raises(HandConfigError, match='joint_thumb'):
        hand_from_dict(configs)


def test_forward_kinematics(gripper):
    poses = forward_kinematics(gripper, {})
    assert np.allclose(poses['palm'].matrix(), np.eye(4))
    assert np.allclose(poses['finger_left'].translation, [-55.0, 0.0, 0.0])

    root = RigidPose([0.0, 0.0, 10.0])
    poses = forward_kinematics(gripper, {'joint_left': 0.5}, root)
    tip = poses['finger_left'].apply([0.0, 0.0, 80.0])
    expected = [80.0 * np.sin(0.5) - 55.0, 0.0, 80.0 * np.cos(0.5) + 10.0]
    assert np.allclose(tip, expected)
    right_tip = poses['finger_right'].apply([0.0, 0.0, 80.0])
    assert np.allclose(right_tip, [55.0, 0.0, 90.0])


def test_forward_kinematics_clamps(gripper, caplog):
    with caplog.at_level(logging.WARNING):
        poses = forward_kinematics(gripper, {'joint_left': 2.0})
    assert 'clamped' in caplog.text
    tip = poses['finger_left'].apply([0.0, 0.0, 80.0])
    assert tip[0] == pytest.approx(80.0 * np.sin(0.9) - 55.0)


def test_close_on_box(gripper, long_box):
    gcp = gripper.preshape(PRECISION).gcp
    pose = RigidPose().compose(gcp.inverse())
    result = close_fingers(gripper, pose, PRECISION, long_box)
    assert not result.initial_collision
    assert {c.link for c in result.contacts} == {'finger_left',
                                                 'finger_right'}
    left = [c.normal for c in result.contacts if c.link == 'finger_left']
    right = [c.normal for c in result.contacts if c.link == 'finger_right']
    cos5 = np.cos(np.radians(5.0))
    for a in left:
        for b in right:
            assert np.dot(a, b) < -cos5
    for name, value in result.joint_values.items():
        joint = gripper.joints[name]
        assert joint.lower <= value < joint.upper


def test_close_in_empty_space(gripper):
    far = fixtures.primitive_box([10.0, 10.0, 10.0], center=(1000.0, 0, 0))
    result = close_fingers(gripper, RigidPose(), PRECISION, far)
    assert result.contacts == ()
    assert not result.initial_collision
    for value in result.joint_values.values():
        assert value == pytest.approx(0.9)


def test_initial_collision(gripper, long_box):
    # palm straddles the box
    result = close_fingers(gripper, RigidPose([0.0, 0.0, 5.0]), POWER,
                           long_box)
    assert result.initial_collision
    assert result.contacts == ()
    assert result.iterations == 0


def test_hand_inside_object_collides(gripper):
    giant = fixtures.primitive_box([1000.0, 1000.0, 1000.0])
    poses = forward_kinematics(gripper, {})
    assert hand_collides(gripper, poses, giant)
    far = fixtures.primitive_box([10.0, 10.0, 10.0], center=(500.0, 0, 0))
    assert not hand_collides(gripper, poses, far)


def test_closing_is_rigid_invariant(gripper, long_box):
    gcp = gripper.preshape(PRECISION).gcp
    pose = RigidPose().compose(gcp.inverse())
    base = close_fingers(gripper, pose, PRECISION, long_box)
    motion = RigidPose.from_axis_angle([1.0, 2.0, -0.5], 0.7,
                                       [40.0, -25.0, 10.0])
    moved_box = mesh_from_arrays(motion.apply(long_box.vertices),
                                 long_box.triangles)
    moved = close_fingers(gripper, motion.compose(pose), PRECISION,
                          moved_box)
    assert not moved.initial_collision
    for name, value in base.joint_values.items():
        assert moved.joint_values[name] == pytest.approx(value, abs=1e-9)
    assert ({c.link for c in moved.contacts} ==
            {c.link for c in base.contacts})


def test_frozen_joint_does_not_move(long_box):
    configs = gripper_config()
    configs['preshapes'][PRECISION]['closing']['joint_right'] = 0
    hand = hand_from_dict(configs)
    gcp = hand.preshape(PRECISION).gcp
    result = close_fingers(hand, RigidPose().compose(gcp.inverse()),
                           PRECISION, long_box)
    assert result.joint_values['joint_right'] == 0.0
    assert result.joint_values['joint_left'] > 0.0
    far = fixtures.primitive_box([10.0, 10.0, 10.0], center=(1000.0, 0, 0))
    result = close_fingers(hand, RigidPose(), PRECISION, far)
    assert result.joint_values['joint_right'] == 0.0
    assert result.joint_values['joint_left'] == pytest.approx(0.9)
