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

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from skelgrasp.hand.model import HandModel
from skelgrasp.hand.model import forward_kinematics
from skelgrasp.mesh.collision import CLUSTER_RADIUS
from skelgrasp.mesh.collision import CONTACT_TOLERANCE
from skelgrasp.mesh.collision import Contact
from skelgrasp.mesh.collision import collide
from skelgrasp.mesh.collision import distance_lower_bound
from skelgrasp.mesh.collision import extract_contacts
from skelgrasp.mesh.pose import RigidPose

JOINT_STEP = math.radians(0.5)
MAX_ITERATIONS = 400
# farthest distance the skip-ahead looks for the object
LOOKAHEAD = 40.0
# lever arms grow while distal joints bend, keep the speed bound loose
SPEED_MARGIN = 1.25


@dataclass(frozen=True)
class ClosingResult:
    contacts: Tuple[Contact, ...]
    joint_values: Dict[str, float]
    link_poses: Dict[str, RigidPose]
    initial_collision: bool = False
    iterations: int = 0


def hand_collides(hand: HandModel, link_poses, obj,
                  tolerance=CONTACT_TOLERANCE):
    """ Whether any hand link touches the object placed at the origin, or
        sits wholly inside it
    """
    identity = RigidPose.identity()
    names = [hand.root] + sorted(n for n in hand.links if n != hand.root)
    if any(
            collide(obj, identity, hand.links[n].mesh, link_poses[n],
                    tolerance) for n in names):
        return True
    # no surface crossing, so each link is either fully inside or outside
    samples = np.stack(
        [link_poses[n].apply(hand.links[n].mesh.vertices[0]) for n in names])
    return bool(np.any(obj.contains(samples)))


class _Closer:
    """ Scratch state of one close_fingers call """

    def __init__(self, hand, obj, step, tolerance):
        self.hand = hand
        self.obj = obj
        self.step = step
        self.tolerance = tolerance
        self.identity = RigidPose.identity()
        self.ancestors = {hand.root: []}
        for joint in hand.joint_order():
            self.ancestors[joint.child] = (self.ancestors[joint.parent] +
                                           [joint.name])
        self.subtrees = {j: hand.subtree_links(j) for j in hand.joints}

    def steps_to_limit(self, values, active, direction):
        steps = []
        for j in active:
            joint = self.hand.joints[j]
            room = (joint.upper - values[j]
                    if direction[j] > 0 else values[j] - joint.lower)
            steps.append(max(1, int(math.floor(room / self.step + 1e-9))))
        return min(steps)

    def safe_steps(self, values, poses, active):
        """ Steps the active joints can take with no link coming within
            the contact tolerance, at least one
        """
        best = None
        active = set(active)
        for link in sorted(set().union(*(self.subtrees[j] for j in active))):
            mesh = self.hand.links[link].mesh
            verts = poses[link].apply(mesh.vertices)
            speed = 0.0
            for j in self.ancestors[link]:
                if j not in active:
                    continue
                joint = self.hand.joints[j]
                pivot = poses[joint.parent].compose(joint.origin).translation
                speed += float(np.linalg.norm(verts - pivot, axis=1).max())
            if speed <= 0.0:
                continue
            gap = distance_lower_bound(self.obj, self.identity, mesh,
                                       poses[link], LOOKAHEAD)
            k = int(
                math.floor((gap - self.tolerance) /
                           (self.step * speed * SPEED_MARGIN)))
            best = k if best is None else min(best, k)
        return max(1, best if best is not None else 1)

    def touching(self, poses, links):
        return {
            link
            for link in links if collide(self.obj, self.identity,
                                         self.hand.links[link].mesh,
                                         poses[link], self.tolerance)
        }


def close_fingers(hand: HandModel,
                  pose: RigidPose,
                  preshape,
                  obj,
                  step=JOINT_STEP,
                  max_iterations=MAX_ITERATIONS,
                  tolerance=CONTACT_TOLERANCE,
                  cluster_radius=CLUSTER_RADIUS) -> ClosingResult:
    """ Close the hand from the preshape start configuration

    All moving joints advance together by `step` radians along their
    closing direction. A joint stops for good once a link it moves touches
    the object or it hits its limit. Stretches where no link can reach
    the object are skipped in one go, which gives the same stopping
    configuration as single steps.

    Args:
        hand: HandModel
        pose: palm pose in the object frame
        preshape: Preshape or preshape name
        obj: object Mesh at the origin

    Returns:
        ClosingResult; `initial_collision` is set, and nothing closed, when
        the start configuration already touches the object
    """
    if isinstance(preshape, str):
        preshape = hand.preshape(preshape)
    values = {
        name: joint.clamp(preshape.start.get(name, 0.0))
        for name, joint in hand.joints.items()
    }
    poses = forward_kinematics(hand, values, pose)
    if hand_collides(hand, poses, obj, tolerance):
        return ClosingResult((), values, poses, True, 0)

    closer = _Closer(hand, obj, step, tolerance)
    direction = {j: d for j, d in preshape.closing.items() if d != 0}
    active = [
        j for j in sorted(direction)
        if (direction[j] > 0 and values[j] < hand.joints[j].upper) or
        (direction[j] < 0 and values[j] > hand.joints[j].lower)
    ]
    iterations = 0
    while active and iterations < max_iterations:
        k = min(closer.safe_steps(values, poses, active),
                closer.steps_to_limit(values, active, direction),
                max_iterations - iterations)
        for j in active:
            values[j] = hand.joints[j].clamp(values[j] +
                                             direction[j] * step * k)
        poses = forward_kinematics(hand, values, pose)
        iterations += k
        moving = set().union(*(closer.subtrees[j] for j in active))
        touching = closer.touching(poses, sorted(moving))
        still = []
        for j in active:
            joint = hand.joints[j]
            at_limit = (values[j] >= joint.upper
                        if direction[j] > 0 else values[j] <= joint.lower)
            if at_limit or touching.intersection(closer.subtrees[j]):
                continue
            still.append(j)
        active = still

    contacts = []
    for name in sorted(hand.links):
        contacts.extend(
            extract_contacts(hand.links[name].mesh,
                             poses[name],
                             obj,
                             tolerance=tolerance,
                             cluster_radius=cluster_radius,
                             link_name=name))
    return ClosingResult(tuple(contacts), values, poses, False, iterations)
