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
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np

from skelgrasp.grasp.quality import QualityConfig
from skelgrasp.grasp.quality import grasp_quality
from skelgrasp.hand.closing import close_fingers
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.planner.executor import Executor
from skelgrasp.utils.config import dataclass_from_dict
from skelgrasp.utils.errors import GraspError
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.random_utils import derive_rng

INITIAL_COLLISION = 'initial_collision'
NO_CONTACTS = 'no_contacts'
NOT_FORCE_CLOSURE = 'not_force_closure'
FAILURES = (INITIAL_COLLISION, NO_CONTACTS, NOT_FORCE_CLOSURE)
PER_AXIS = 'per_axis'
MAGNITUDE = 'magnitude'


@dataclass(frozen=True)
class RobustnessConfig:
    samples: int = 100
    sigma_pos: float = 10.0
    # degrees
    sigma_rot: float = 5.0
    seed: int = 777
    position_noise: str = PER_AXIS
    threads: Optional[int] = None

    def __post_init__(self):
        if self.samples < 0:
            raise SkelGraspError('samples must not be negative')
        if self.sigma_pos < 0 or self.sigma_rot < 0:
            raise SkelGraspError('noise sigmas must not be negative')
        if self.position_noise not in (PER_AXIS, MAGNITUDE):
            raise SkelGraspError('unknown position_noise {}'.format(
                self.position_noise))

    @classmethod
    def from_dict(cls, conf):
        return dataclass_from_dict(cls, conf)


@dataclass(frozen=True)
class RobustnessReport:
    grasp_id: Union[int, str]
    samples: int
    successes: int
    score: float
    failures: Dict[str, int]

    def to_dict(self):
        return {
            'grasp_id': self.grasp_id,
            'samples': self.samples,
            'successes': self.successes,
            'score': self.score,
            'failures': dict(self.failures),
        }


@dataclass(frozen=True)
class PoseNoise:
    """ Unit-scale draws, multiplied by the sigmas when applied """
    axes: np.ndarray
    angles: np.ndarray
    offsets: np.ndarray


def draw_noise(n, rng, position_noise=PER_AXIS) -> PoseNoise:
    axes = rng.standard_normal((n, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    angles = rng.standard_normal(n)
    offsets = rng.standard_normal((n, 3))
    lengths = rng.standard_normal(n)
    if position_noise == MAGNITUDE:
        offsets = (offsets / np.linalg.norm(offsets, axis=1, keepdims=True) *
                   lengths[:, None])
    return PoseNoise(axes, angles, offsets)


def perturb_pose(pose: RigidPose, center, axis, angle, offset) -> RigidPose:
    """ Rotate `pose` by `angle` about `axis` through `center`, then shift
        it by `offset`
    """
    offset = np.asarray(offset, dtype=np.float64)
    if angle == 0.0 and not np.any(offset):
        return pose
    turn = RigidPose.from_axis_angle(axis, angle)
    rel = pose.translation - center
    translation = pose.translation + (turn.apply(rel) - rel) + offset
    return RigidPose(translation, turn.compose(pose).rotation)


def sample_outcome(hand, pose, preshape, obj, quality):
    closing = close_fingers(hand, pose, preshape, obj)
    if closing.initial_collision:
        return INITIAL_COLLISION
    if not closing.contacts:
        return NO_CONTACTS
    if not grasp_quality(closing.contacts, obj, quality).force_closure:
        return NOT_FORCE_CLOSURE
    return None


def robustness_score(grasp,
                     obj,
                     hand,
                     n=100,
                     sigma_pos=10.0,
                     sigma_rot=5.0,
                     seed=777,
                     quality: QualityConfig = None,
                     position_noise=PER_AXIS,
                     grasp_id=0,
                     threads=None) -> RobustnessReport:
    """ Share of displaced copies of `grasp` that still close to a force
        closure grasp

    Offsets are applied about the centre of the grasp contacts. Position
    noise is N(0, sigma_pos^2) per axis, or along a uniform direction with
    a normal length for `position_noise='magnitude'`. Rotation noise turns
    about a uniform axis by an angle drawn from N(0, sigma_rot^2), sigma in
    degrees. The draws depend only on `seed` and `grasp_id`.
    """
    if not grasp.contacts:
        raise GraspError('grasp {} has no contacts'.format(grasp_id))
    center = np.mean([c.position for c in grasp.contacts], axis=0)
    rng = derive_rng(seed, 'robustness', grasp_id)
    noise = draw_noise(n, rng, position_noise)
    sigma_angle = math.radians(sigma_rot)
    poses = [
        perturb_pose(grasp.pose, center, noise.axes[i],
                     sigma_angle * noise.angles[i],
                     sigma_pos * noise.offsets[i]) for i in range(n)
    ]

    def run(pose):
        return sample_outcome(hand, pose, grasp.preshape, obj, quality)

    with Executor(threads) as executor:
        outcomes = executor.map(run, poses)
    failures = OrderedDict((k, 0) for k in FAILURES)
    for outcome in outcomes:
        if outcome is not None:
            failures[outcome] += 1
    successes = n - sum(failures.values())
    score = successes / n if n > 0 else 0.0
    logging.debug('grasp %s: robustness %.2f (%s)', grasp_id, score,
                  dict(failures))
    return RobustnessReport(grasp_id, n, successes, score, dict(failures))


def score_with_config(grasp, obj, hand, config: RobustnessConfig,
                      quality=None, grasp_id=0):
    return robustness_score(grasp, obj, hand, config.samples,
                            config.sigma_pos, config.sigma_rot, config.seed,
                            quality, config.position_noise, grasp_id,
                            config.threads)
