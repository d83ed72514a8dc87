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
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from skelgrasp.grasp.quality import QualityConfig
from skelgrasp.grasp.quality import grasp_quality
from skelgrasp.hand.closing import close_fingers
from skelgrasp.hand.closing import hand_collides
from skelgrasp.hand.model import POWER
from skelgrasp.hand.model import PRECISION
from skelgrasp.hand.model import forward_kinematics
from skelgrasp.mesh.collision import Contact
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.planner.config import PlannerConfig
from skelgrasp.planner.cursor import VertexCursor
from skelgrasp.planner.executor import Executor
from skelgrasp.planner.strategy import STRATEGIES
from skelgrasp.planner.strategy import STRATEGY_PRESHAPE
from skelgrasp.planner.strategy import GraspHypothesis
from skelgrasp.planner.strategy import evaluate_strategy
from skelgrasp.planner.strategy import generate_hypotheses
from skelgrasp.planner.strategy import make_hypothesis
from skelgrasp.planner.strategy import max_path_length
from skelgrasp.shape.local_shape import grasping_interval
from skelgrasp.shape.local_shape import plane_basis
from skelgrasp.shape.local_shape import surface_shape
from skelgrasp.skeleton.skeletonize import skeletonize
from skelgrasp.skeleton.types import BRANCHING
from skelgrasp.utils.errors import DegenerateShapeError
from skelgrasp.utils.random_utils import derive_rng

BASELINE_STRATEGY = 'baseline'

RETREAT_FAILED = 'retreat_failed'
INITIAL_COLLISION = 'initial_collision'
NO_CONTACTS = 'no_contacts'
NOT_FORCE_CLOSURE = 'not_force_closure'
VALID = 'valid'


@dataclass(frozen=True, eq=False)
class Grasp:
    pose: RigidPose
    preshape: str
    vertex: int
    strategy: str
    approach: np.ndarray
    contacts: Tuple[Contact, ...]
    force_closure: bool
    epsilon: float
    time_ms: Optional[float] = None

    def to_dict(self, timing=True):
        return {
            'pose': self.pose.to_dict(),
            'preshape': self.preshape,
            'vertex': int(self.vertex),
            'strategy': self.strategy,
            'approach': [float(v) for v in self.approach],
            'contacts': [c.to_dict() for c in self.contacts],
            'epsilon': float(self.epsilon),
            'force_closure': bool(self.force_closure),
            'time_ms': (None if not timing or self.time_ms is None else
                        float(self.time_ms)),
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(RigidPose.from_dict(obj['pose']), obj['preshape'],
                   int(obj['vertex']), str(obj['strategy']),
                   np.asarray(obj['approach'], dtype=np.float64),
                   tuple(Contact.from_dict(c) for c in obj['contacts']),
                   bool(obj['force_closure']), float(obj['epsilon']),
                   obj.get('time_ms'))


@dataclass(frozen=True)
class Validation:
    outcome: str
    grasp: Optional[Grasp] = None


def retreat_to_free(hypothesis: GraspHypothesis, hand, obj,
                    config: PlannerConfig) -> Optional[RigidPose]:
    """ Move the hand back along the approach direction in steps of
        `retreat_step` until it is clear of the object, None when that
        needs more than `retreat_max`
    """
    start = hand.preshape(hypothesis.preshape).start
    steps = int(math.floor(config.retreat_max / config.retreat_step + 1e-9))
    for k in range(steps + 1):
        pose = hypothesis.pose.translated(-hypothesis.approach *
                                          (k * config.retreat_step))
        poses = forward_kinematics(hand, start, pose)
        if not hand_collides(hand, poses, obj):
            return pose
    return None


def validate_hypothesis(hypothesis: GraspHypothesis, hand, obj,
                        config: PlannerConfig,
                        quality: QualityConfig) -> Validation:
    """ retreat, close the fingers, then test force closure """
    t0 = time.perf_counter()
    pose = retreat_to_free(hypothesis, hand, obj, config)
    if pose is None:
        return Validation(RETREAT_FAILED)
    closing = close_fingers(hand, pose, hypothesis.preshape, obj)
    if closing.initial_collision:
        return Validation(INITIAL_COLLISION)
    if not closing.contacts:
        return Validation(NO_CONTACTS)
    result = grasp_quality(closing.contacts, obj, quality)
    if not result.force_closure:
        return Validation(NOT_FORCE_CLOSURE)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return Validation(
        VALID,
        Grasp(pose, hypothesis.preshape, hypothesis.vertex,
              hypothesis.strategy, hypothesis.approach, closing.contacts,
              True, result.epsilon, elapsed))


@dataclass
class PlanResult:
    planner: str
    grasps: List[Grasp] = field(default_factory=list)
    diagnostics: Counter = field(default_factory=Counter)
    elapsed_ms: float = 0.0
    skeleton: object = None

    @property
    def hypotheses(self):
        return self.diagnostics['hypotheses']

    @property
    def validated(self):
        """ hypotheses that reached finger closing """
        return self.hypotheses - self.diagnostics[RETREAT_FAILED]

    @property
    def force_closure_rate(self):
        if self.validated == 0:
            return 0.0
        return 100.0 * len(self.grasps) / self.validated

    @property
    def time_per_grasp_ms(self):
        if not self.grasps:
            return None
        return self.elapsed_ms / len(self.grasps)


def _prepare(mesh):
    """ Build the lazily cached object data before threads share it """
    return mesh.bvh, mesh.centroid, mesh.radius


class _Planner:
    name = None

    def __init__(self, hand, config=None, quality=None):
        self.hand = hand
        self.config = config or PlannerConfig()
        self.quality = quality or QualityConfig()

    def batches(self, mesh, result):
        raise NotImplementedError

    def run(self, mesh, result: PlanResult):
        """ Validate the hypothesis batches in order until they run out or
            the timeout is hit
        """
        _prepare(mesh)
        start = time.monotonic()

        def check(hyp):
            return validate_hypothesis(hyp, self.hand, mesh, self.config,
                                       self.quality)

        with Executor(self.config.threads) as executor:
            for hyps in self.batches(mesh, result):
                if time.monotonic() - start >= self.config.timeout:
                    result.diagnostics['timeout'] += 1
                    logging.info('%s planner: timeout after %.1f s',
                                 self.name, self.config.timeout)
                    break
                result.diagnostics['hypotheses'] += len(hyps)
                for validation in executor.map(check, hyps):
                    result.diagnostics[validation.outcome] += 1
                    if validation.grasp is not None:
                        result.grasps.append(validation.grasp)
        result.elapsed_ms = (time.monotonic() - start) * 1000.0
        logging.info('%s planner: %d valid grasps from %d hypotheses on %s',
                     self.name,
                     len(result.grasps),
                     result.hypotheses,
                     mesh.name,
                     extra={
                         'object': mesh.name,
                         'planner': self.name,
                         'grasps': len(result.grasps),
                         'hypotheses': result.hypotheses,
                     })
        return result


class SkeletonGraspPlanner(_Planner):
    """ Grasp hypotheses from skeleton vertices, their grasping intervals
        and local surface shapes, checked by closing the hand.
    """
    name = 'skeleton'

    def __init__(self, hand, config=None, quality=None, contraction=None):
        super().__init__(hand, config, quality)
        self.contraction = contraction

    def vertex_hypotheses(self, mesh, skeleton, v, diagnostics):
        kind = skeleton.kind(v)
        if kind == BRANCHING:
            diagnostics['branching_skipped'] += 1
            logging.debug('vertex %d: branching, no strategy', v)
            return []
        hyps = []
        for preshape in (PRECISION, POWER):
            interval = grasping_interval(skeleton, v,
                                         max_path_length(preshape, self.hand),
                                         self.config.kappa_max)
            try:
                shape = surface_shape(mesh, skeleton, v, interval,
                                      self.config.t_r)
            except DegenerateShapeError as e:
                diagnostics['degenerate_shape'] += 1
                logging.debug('vertex %d: %s', v, e)
                continue
            for strategy in STRATEGIES:
                if STRATEGY_PRESHAPE[strategy] != preshape:
                    continue
                if not evaluate_strategy(strategy, kind, interval, shape,
                                         self.hand.thresholds, self.hand):
                    continue
                diagnostics['strategy_' + strategy] += 1
                hyps.extend(
                    generate_hypotheses(v, strategy, shape, self.hand,
                                        self.config))
        if not hyps:
            diagnostics['no_strategy'] += 1
            logging.debug('vertex %d (%s): no strategy applicable', v, kind)
        return hyps

    def batches(self, mesh, result):
        skeleton = result.skeleton
        cursor = VertexCursor(skeleton, self.config.distance(self.hand))
        for v in cursor:
            result.diagnostics['vertices'] += 1
            hyps = self.vertex_hypotheses(mesh, skeleton, v,
                                          result.diagnostics)
            if hyps:
                yield hyps

    def plan(self, mesh, skeleton=None) -> PlanResult:
        result = PlanResult(self.name)
        if self.config.timeout <= 0:
            result.diagnostics['timeout'] += 1
            return result
        if skeleton is None:
            skeleton = skeletonize(mesh, self.contraction)
        result.skeleton = skeleton
        return self.run(mesh, result)


class BaselinePlanner(_Planner):
    """ Power grasps approaching seeded random surface points along the
        inward surface normal, with random roll
    """
    name = 'baseline'
    batch_size = 8

    def hypotheses(self, mesh):
        count = self.config.baseline_samples
        if count == 0:
            return []
        rng = derive_rng(self.config.seed, 'baseline', mesh.name)
        points, triangles = mesh.sample_surface(count, rng)
        rolls = rng.uniform(0.0, 2.0 * np.pi, count)
        hyps = []
        for i in range(count):
            approach = -mesh.normals[triangles[i]]
            u, w = plane_basis(approach)
            spread = np.cos(rolls[i]) * u + np.sin(rolls[i]) * w
            hyp = make_hypothesis(self.hand, POWER, i, BASELINE_STRATEGY,
                                  points[i], approach, spread)
            if hyp is not None:
                hyps.append(hyp)
        return hyps

    def batches(self, mesh, result):
        hyps = self.hypotheses(mesh)
        for start in range(0, len(hyps), self.batch_size):
            yield hyps[start:start + self.batch_size]

    def plan(self, mesh) -> PlanResult:
        result = PlanResult(self.name)
        if self.config.timeout <= 0:
            result.diagnostics['timeout'] += 1
            return result
        return self.run(mesh, result)


def plan(mesh, hand, config=None, quality=None, skeleton=None) -> List[Grasp]:
    return SkeletonGraspPlanner(hand, config, quality).plan(mesh,
                                                            skeleton).grasps


def plan_baseline(mesh, hand, config=None, quality=None) -> List[Grasp]:
    return BaselinePlanner(hand, config, quality).plan(mesh).grasps
