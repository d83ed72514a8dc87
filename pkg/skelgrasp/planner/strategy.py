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
from dataclasses import dataclass
from typing import List

import numpy as np

from skelgrasp.hand.model import POWER
from skelgrasp.hand.model import PRECISION
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.shape.local_shape import RECTANGULAR
from skelgrasp.shape.local_shape import ROUND
from skelgrasp.skeleton.types import CONNECTING
from skelgrasp.skeleton.types import ENDPOINT

STRATEGIES = ('1a', '1b', '2a', '2b', '3', '4')
STRATEGY_PRESHAPE = {
    '1a': PRECISION,
    '1b': PRECISION,
    '2a': POWER,
    '2b': POWER,
    '3': PRECISION,
    '4': POWER,
}
STRATEGY_KIND = {
    '1a': CONNECTING,
    '1b': CONNECTING,
    '2a': CONNECTING,
    '2b': CONNECTING,
    '3': ENDPOINT,
    '4': ENDPOINT,
}
RECT_ENDPOINT_SAMPLES = 2
RECT_CONNECTING_SAMPLES = 4


@dataclass(frozen=True)
class GraspHypothesis:
    # palm pose in the object frame
    pose: RigidPose
    preshape: str
    vertex: int
    strategy: str
    approach: np.ndarray


def max_path_length(preshape, hand):
    """ Interval length budget of a grasp type """
    if preshape == PRECISION:
        return hand.fingerwidth
    return hand.handwidth / 2.0


def _within(value, low, high):
    return low <= value <= high


def evaluate_strategy(strategy, kind, interval, shape, thresholds, hand):
    """ Whether grasping strategy `strategy` applies at a vertex of `kind`
        with grasping interval `interval` and local shape `shape`
    """
    assert strategy in STRATEGIES, strategy
    if kind != STRATEGY_KIND[strategy]:
        return False
    t1, t2 = shape.thickness(hand.thickness_mode)
    th = thresholds
    if strategy == '3':
        return _within(t2, th.pre2_min, th.pre2_max)
    if strategy == '4':
        return _within(t2, th.pow2_min, th.pow2_max)
    if not interval.reaches(max_path_length(STRATEGY_PRESHAPE[strategy],
                                            hand)):
        return False
    if strategy == '1a':
        return shape.shape == ROUND and _within(t2, th.pre2_min, th.pre2_max)
    if strategy == '1b':
        return (shape.shape == RECTANGULAR and
                _within(t1, th.pre1_min, th.pre1_max) and
                _within(t2, th.pre2_min, th.pre2_max))
    if strategy == '2a':
        return shape.shape == ROUND and _within(t2, th.pow2_min, th.pow2_max)
    return (shape.shape == RECTANGULAR and t1 > th.pow1_min and
            _within(t2, th.pow2_min, th.pow2_max))


def gcp_frame(position, approach, spread):
    """ World GCP frame: z along the approach, x along the finger spread """
    z = approach / np.linalg.norm(approach)
    x = spread - (spread @ z) * z
    norm = np.linalg.norm(x)
    if norm < 1e-9:
        return None
    x = x / norm
    y = np.cross(z, x)
    return RigidPose.from_rotation_matrix(np.stack([x, y, z], axis=1),
                                          position)


def make_hypothesis(hand, preshape, vertex, strategy, position, approach,
                    spread):
    frame = gcp_frame(position, approach, spread)
    if frame is None:
        logging.debug('vertex %d: degenerate orientation', vertex)
        return None
    gcp = hand.preshape(preshape).gcp
    palm = frame.compose(gcp.inverse())
    return GraspHypothesis(palm, preshape, vertex, strategy, frame.axis(2))


def _directions(count, u, w):
    angles = 2.0 * np.pi * np.arange(count) / count
    return [np.cos(a) * u + np.sin(a) * w for a in angles]


def generate_hypotheses(vertex, strategy, shape, hand,
                        config) -> List[GraspHypothesis]:
    """ Candidate hand poses with the GCP on the skeleton point

    Round connecting vertices get approach directions spread evenly around
    the skeleton with the fingers closing across it; round endpoints
    approach along the skeleton with evenly spaced roll. Rectangular
    vertices align the hand with the eigenvectors of the local shape.
    """
    preshape = STRATEGY_PRESHAPE[strategy]
    kind = STRATEGY_KIND[strategy]
    s = shape.origin
    t = shape.normal
    ev1, ev2 = shape.ev1, shape.ev2
    poses = []
    if kind == ENDPOINT:
        # the tangent of an endpoint points out of the object
        approach = -t
        if shape.shape == ROUND:
            spreads = _directions(config.samples_round_endpoint, ev1, ev2)
        else:
            spreads = [ev1, ev2][:RECT_ENDPOINT_SAMPLES]
        poses = [(approach, x) for x in spreads]
    elif shape.shape == ROUND:
        for approach in _directions(config.samples_round_connecting, ev1,
                                    ev2):
            poses.append((approach, np.cross(t, approach)))
    else:
        pairs = [(ev1, ev2), (-ev1, ev2), (ev2, ev1),
                 (-ev2, ev1)][:RECT_CONNECTING_SAMPLES]
        poses = list(pairs)
    result = []
    for approach, spread in poses:
        hyp = make_hypothesis(hand, preshape, vertex, strategy, s, approach,
                              spread)
        if hyp is not None:
            result.append(hyp)
    return result
