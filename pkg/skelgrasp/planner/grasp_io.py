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

import json
import logging

import numpy as np

from skelgrasp.grasp.quality import QualityConfig
from skelgrasp.grasp.quality import grasp_quality
from skelgrasp.hand.closing import close_fingers
from skelgrasp.hand.closing import hand_collides
from skelgrasp.hand.model import forward_kinematics
from skelgrasp.planner.planner import Grasp
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.file_utils import atomic_write_text

GRASP_SCHEMA_VERSION = 1
LINE_LENGTH = 50.0
LINE_COLOR = (0, 200, 0)


def grasps_to_json(grasps, object_name, hand_name, planner, timing=True):
    doc = {
        'schema_version': GRASP_SCHEMA_VERSION,
        'object': object_name,
        'hand': hand_name,
        'planner': planner,
        'grasps': [g.to_dict(timing) for g in grasps],
    }
    return json.dumps(doc, indent=2) + '\n'


def save_grasps(path, grasps, object_name, hand_name, planner,
                timing=True):
    atomic_write_text(
        path, grasps_to_json(grasps, object_name, hand_name, planner,
                             timing))
    logging.info('wrote %d grasps to %s', len(grasps), path)


def load_grasps(path):
    """ Returns:
            (header dict without the grasps, list of Grasp)
    """
    try:
        with open(path, 'r', encoding='utf8') as fin:
            doc = json.load(fin)
    except (OSError, ValueError) as e:
        raise SkelGraspError('cannot read grasps {}: {}'.format(path, e))
    version = doc.get('schema_version')
    if version != GRASP_SCHEMA_VERSION:
        raise SkelGraspError('{}: unsupported grasp schema version {}'.format(
            path, version))
    try:
        grasps = [Grasp.from_dict(g) for g in doc.get('grasps', [])]
    except (KeyError, TypeError, ValueError) as e:
        raise SkelGraspError('{}: malformed grasp record: {}'.format(path, e))
    header = {k: v for k, v in doc.items() if k != 'grasps'}
    return header, grasps


def revalidate(grasp: Grasp, hand, obj, quality: QualityConfig = None):
    """ Replay a stored grasp: free before closing, force closure after """
    preshape = hand.preshape(grasp.preshape)
    poses = forward_kinematics(hand, preshape.start, grasp.pose)
    if hand_collides(hand, poses, obj):
        return False
    closing = close_fingers(hand, grasp.pose, preshape, obj)
    if closing.initial_collision or not closing.contacts:
        return False
    return grasp_quality(closing.contacts, obj, quality).force_closure


def approach_lines(grasps, hand, obj):
    """ One segment per grasp, ending where the approach line through the
        GCP meets the object and reaching LINE_LENGTH back from there
    """
    lines = []
    far = max(obj.diagonal, LINE_LENGTH)
    for grasp in grasps:
        gcp = grasp.pose.compose(hand.preshape(grasp.preshape).gcp)
        a = np.asarray(grasp.approach, dtype=np.float64)
        origin = gcp.translation - far * a
        hit = obj.ray_hit(origin, a)
        end = gcp.translation if hit is None else origin + hit * a
        lines.append((end - LINE_LENGTH * a, end))
    return lines


def write_approach_ply(grasps, hand, obj, path):
    """ ASCII PLY with one green edge per grasp approach line """
    lines = approach_lines(grasps, hand, obj)
    out = [
        'ply', 'format ascii 1.0',
        'element vertex {}'.format(2 * len(lines)), 'property float x',
        'property float y', 'property float z', 'property uchar red',
        'property uchar green', 'property uchar blue',
        'element edge {}'.format(len(lines)), 'property int vertex1',
        'property int vertex2', 'end_header'
    ]
    color = ' '.join(str(c) for c in LINE_COLOR)
    for start, end in lines:
        for p in (start, end):
            out.append('{:.6f} {:.6f} {:.6f} {}'.format(p[0], p[1], p[2],
                                                        color))
    for i in range(len(lines)):
        out.append('{} {}'.format(2 * i, 2 * i + 1))
    atomic_write_text(path, '\n'.join(out) + '\n')
