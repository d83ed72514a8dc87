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

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
import yaml

from skelgrasp.mesh.fixtures import primitive_box
from skelgrasp.mesh.mesh import Mesh
from skelgrasp.mesh.mesh import load_mesh
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.utils.errors import HandConfigError
from skelgrasp.utils.errors import MeshError

SCHEMA_VERSION = 1
PRECISION = 'precision'
POWER = 'power'
BUILTIN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'conf')
HAND_PATH_ENV = 'SKELGRASP_HAND_PATH'


@dataclass(frozen=True)
class StrategyThresholds:
    pre1_min: float = 0.0
    pre1_max: float = 60.0
    pre2_min: float = 5.0
    pre2_max: float = 40.0
    pow1_min: float = 40.0
    pow2_min: float = 20.0
    pow2_max: float = 80.0

    def __post_init__(self):
        for low, high in (('pre1_min', 'pre1_max'), ('pre2_min', 'pre2_max'),
                          ('pow2_min', 'pow2_max')):
            if getattr(self, low) > getattr(self, high):
                raise HandConfigError('threshold {} > {}'.format(low, high))


@dataclass(frozen=True)
class Link:
    name: str
    mesh: Mesh


@dataclass(frozen=True)
class Joint:
    """ Revolute joint, the child frame is origin * rot(axis, q) """
    name: str
    parent: str
    child: str
    origin: RigidPose
    axis: np.ndarray
    lower: float
    upper: float

    def clamp(self, value):
        return float(min(max(value, self.lower), self.upper))


@dataclass(frozen=True)
class Preshape:
    name: str
    start: Dict[str, float]
    # +1 / -1 move the joint towards its upper / lower limit, 0 holds it
    closing: Dict[str, int]
    gcp: RigidPose


@dataclass(frozen=True)
class HandModel:
    name: str
    root: str
    links: Dict[str, Link]
    joints: Dict[str, Joint]
    preshapes: Dict[str, Preshape]
    fingerwidth: float
    handwidth: float
    thresholds: StrategyThresholds = field(default_factory=StrategyThresholds)
    thickness_mode: str = 'length'

    def child_joints(self, link):
        return [j for j in self.joints.values() if j.parent == link]

    def joint_order(self):
        """ Joints sorted parent before child """
        order = []
        stack = [self.root]
        while stack:
            link = stack.pop()
            for joint in sorted(self.child_joints(link),
                                key=lambda j: j.name,
                                reverse=True):
                order.append(joint)
                stack.append(joint.child)
        return order

    def subtree_links(self, joint_name):
        """ Links moved by `joint_name` """
        result = []
        stack = [self.joints[joint_name].child]
        while stack:
            link = stack.pop()
            result.append(link)
            stack.extend(j.child for j in self.child_joints(link))
        return sorted(result)

    def preshape(self, name):
        if name not in self.preshapes:
            raise HandConfigError('hand {} has no preshape {}'.format(
                self.name, name))
        return self.preshapes[name]


def forward_kinematics(hand: HandModel, joint_values, root_pose=None):
    """ Pose of every link in the parent frame of `root_pose`

    Values outside the joint limits are clamped with a warning; missing
    joints stay at zero clamped into their limits.
    """
    if root_pose is None:
        root_pose = RigidPose.identity()
    poses = {hand.root: root_pose}
    for joint in hand.joint_order():
        value = float(joint_values.get(joint.name, 0.0))
        clamped = joint.clamp(value)
        if joint.name in joint_values and clamped != value:
            logging.warning('joint %s value %.4f clamped to %.4f', joint.name,
                            value, clamped)
        motion = RigidPose.from_axis_angle(joint.axis, clamped)
        poses[joint.child] = poses[joint.parent].compose(
            joint.origin).compose(motion)
    return poses


def measure_handwidth(hand: HandModel, preshape_name=POWER):
    """ Extent of the hand along the GCP finger-spread axis (x) with the
        joints at the preshape start values
    """
    preshape = hand.preshape(preshape_name)
    poses = forward_kinematics(hand, preshape.start)
    to_gcp = preshape.gcp.inverse()
    xs = np.concatenate([
        to_gcp.compose(poses[name]).apply(link.mesh.vertices)[:, 0]
        for name, link in hand.links.items()
    ])
    return float(xs.max() - xs.min())


def _require(conf, key, where):
    if key not in conf:
        raise HandConfigError('{} is missing "{}"'.format(where, key))
    return conf[key]


def _load_link_mesh(name, conf, base_dir):
    mesh_conf = _require(conf, 'mesh', 'link {}'.format(name))
    if isinstance(mesh_conf, str):
        path = mesh_conf
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        if not os.path.exists(path):
            raise HandConfigError('link {} mesh file {} not found'.format(
                name, path))
        try:
            return load_mesh(path, units=conf.get('units', 'mm'), name=name)
        except MeshError as e:
            raise HandConfigError('link {}: {}'.format(name, e)) from e
    if isinstance(mesh_conf, dict) and 'box' in mesh_conf:
        return primitive_box(mesh_conf['box'],
                             mesh_conf.get('center', [0.0, 0.0, 0.0]),
                             name=name)
    raise HandConfigError('link {} has an unsupported mesh entry'.format(name))


def _check_tree(root, links, joints):
    parent_of = {}
    for joint in joints.values():
        for link in (joint.parent, joint.child):
            if link not in links:
                raise HandConfigError('joint {} references unknown link '
                                      '{}'.format(joint.name, link))
        if joint.child in parent_of:
            raise HandConfigError('link {} has two parent joints'.format(
                joint.child))
        parent_of[joint.child] = joint.parent
    if root in parent_of:
        raise HandConfigError('root link {} has a parent joint'.format(root))
    for link in links:
        seen = set()
        cur = link
        while cur != root:
            if cur in seen:
                raise HandConfigError(
                    'joint graph has a cycle through {}'.format(cur))
            seen.add(cur)
            if cur not in parent_of:
                raise HandConfigError(
                    'link {} is not attached to root {}'.format(cur, root))
            cur = parent_of[cur]


def hand_from_dict(configs, base_dir='.'):
    """ Build a HandModel from a parsed hand config, see docs/hand_config.md
    """
    version = configs.get('schema_version', SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise HandConfigError(
            'unsupported hand schema version {}'.format(version))
    name = configs.get('name', 'hand')
    root = _require(configs, 'root', 'hand config')
    links = {
        k: Link(k, _load_link_mesh(k, v or {}, base_dir))
        for k, v in sorted(_require(configs, 'links', 'hand config').items())
    }
    if root not in links:
        raise HandConfigError('root link {} is not defined'.format(root))
    joints = {}
    for k, v in sorted((configs.get('joints') or {}).items()):
        where = 'joint {}'.format(k)
        limits = v.get('limits', [-np.pi, np.pi])
        if len(limits) != 2 or limits[0] > limits[1]:
            raise HandConfigError('{} has invalid limits'.format(where))
        axis = np.asarray(v.get('axis', [0.0, 0.0, 1.0]), dtype=np.float64)
        if np.linalg.norm(axis) <= 0.0:
            raise HandConfigError('{} has a zero axis'.format(where))
        joints[k] = Joint(k, _require(v, 'parent', where),
                          _require(v, 'child', where),
                          RigidPose.from_dict(v.get('origin')),
                          axis / np.linalg.norm(axis), float(limits[0]),
                          float(limits[1]))
    _check_tree(root, links, joints)

    preshapes = {}
    for k, v in sorted(_require(configs, 'preshapes', 'hand config').items()):
        where = 'preshape {}'.format(k)
        start = {j: float(a) for j, a in (v.get('joints') or {}).items()}
        closing = {j: int(d) for j, d in (v.get('closing') or {}).items()}
        for j in list(start) + list(closing):
            if j not in joints:
                raise HandConfigError('{} references unknown joint {}'.format(
                    where, j))
        if any(d not in (-1, 0, 1) for d in closing.values()):
            raise HandConfigError('{} closing directions must be -1, 0 or '
                                  '1'.format(where))
        preshapes[k] = Preshape(k, start, closing,
                                RigidPose.from_dict(_require(v, 'gcp', where)))
    for required in (PRECISION, POWER):
        if required not in preshapes:
            raise HandConfigError('hand {} lacks the {} preshape'.format(
                name, required))

    thickness_mode = configs.get('thickness_mode', 'length')
    if thickness_mode not in ('length', 'eigenvalue'):
        raise HandConfigError('unknown thickness_mode {}'.format(thickness_mode))
    try:
        thresholds = StrategyThresholds(**(configs.get('thresholds') or {}))
    except TypeError as e:
        raise HandConfigError('bad thresholds: {}'.format(e)) from e
    fingerwidth = float(_require(configs, 'fingerwidth', 'hand config'))
    hand = HandModel(name, root, links, joints, preshapes, fingerwidth, 0.0,
                     thresholds, thickness_mode)
    handwidth = configs.get('handwidth')
    if handwidth is None:
        handwidth = measure_handwidth(hand)
        logging.info('hand %s: measured handwidth %.1f mm', name, handwidth)
    return dataclasses.replace(hand, handwidth=float(handwidth))


def resolve_hand_path(name_or_path):
    """ A hand given by file path, or by name looked up on
        $SKELGRASP_HAND_PATH and then among the built-in hands
    """
    if os.path.isfile(name_or_path):
        return name_or_path
    dirs = [d for d in os.environ.get(HAND_PATH_ENV, '').split(os.pathsep) if d]
    dirs.append(BUILTIN_DIR)
    for d in dirs:
        for suffix in ('', '.yaml', '.yml'):
            path = os.path.join(d, name_or_path + suffix)
            if os.path.isfile(path):
                return path
    raise HandConfigError('hand {} not found'.format(name_or_path))


def load_hand(path) -> HandModel:
    path = resolve_hand_path(path)
    try:
        with open(path, 'r') as fin:
            configs = yaml.load(fin, Loader=yaml.FullLoader)
    except yaml.YAMLError as e:
        raise HandConfigError('cannot parse hand config {}: {}'.format(
            path, e)) from e
    if not isinstance(configs, dict):
        raise HandConfigError('hand config {} is not a mapping'.format(path))
    return hand_from_dict(configs, os.path.dirname(os.path.abspath(path)))


def builtin_hand(name) -> HandModel:
    return load_hand(os.path.join(BUILTIN_DIR, name + '.yaml'))
