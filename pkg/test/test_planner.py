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

import numpy as np
import pytest

from skelgrasp.hand.model import POWER
from skelgrasp.hand.model import PRECISION
from skelgrasp.mesh import fixtures
from skelgrasp.mesh.pose import RigidPose
from skelgrasp.planner.config import PlannerConfig
from skelgrasp.planner.cursor import VertexCursor
from skelgrasp.planner.cursor import next_skeleton_vertex
from skelgrasp.planner.executor import Executor
from skelgrasp.planner.grasp_io import approach_lines
from skelgrasp.planner.grasp_io import grasps_to_json
from skelgrasp.planner.grasp_io import load_grasps
from skelgrasp.planner.grasp_io import revalidate
from skelgrasp.planner.grasp_io import save_grasps
from skelgrasp.planner.grasp_io import write_approach_ply
from skelgrasp.planner.planner import BASELINE_STRATEGY
from skelgrasp.planner.planner import BaselinePlanner
from skelgrasp.planner.planner import Grasp
from skelgrasp.planner.planner import SkeletonGraspPlanner
from skelgrasp.planner.planner import plan
from skelgrasp.planner.planner import plan_baseline
from skelgrasp.planner.planner import retreat_to_free
from skelgrasp.planner.strategy import STRATEGY_PRESHAPE
from skelgrasp.planner.strategy import GraspHypothesis
from skelgrasp.planner.strategy import evaluate_strategy
from skelgrasp.planner.strategy import gcp_frame
from skelgrasp.planner.strategy import generate_hypotheses
from skelgrasp.shape.local_shape import RECTANGULAR
from skelgrasp.shape.local_shape import ROUND
from skelgrasp.shape.local_shape import GraspingInterval
from skelgrasp.shape.local_shape import LocalSurfaceShape
from skelgrasp.skeleton.types import BRANCHING
from skelgrasp.skeleton.types import CONNECTING
from skelgrasp.skeleton.types import ENDPOINT
from skelgrasp.utils.errors import SkelGraspError


def local_shape(l1, l2, kind=ROUND):
    return LocalSurfaceShape((l1, l2), np.array([1.0, 0.0, 0.0]),
                             np.array([0.0, 1.0, 0.0]), kind,
                             np.array([1.0, 2.0, 3.0]),
                             np.array([0.0, 0.0, 1.0]))


def interval(length):
    return GraspingInterval(5, ((5, 6), (5, 4)), (length, length))


@pytest.fixture(scope='module')
def cylinder_plan(gripper, cylinder_mesh, cylinder_skeleton):
    config = PlannerConfig(vertex_distance=10.0, threads=2)
    return SkeletonGraspPlanner(gripper, config).plan(cylinder_mesh,
                                                      cylinder_skeleton)


def test_planner_config_checks(gripper):
    assert PlannerConfig().distance(gripper) == 10.0
    assert PlannerConfig(vertex_distance=4.0).distance(None) == 4.0
    for bad in ({'vertex_distance': 0.0}, {'timeout': -1.0},
                {'samples_round_connecting': 0}, {'retreat_step': 0.0},
                {'baseline_samples': -1}, {'threads': 0}):
        with pytest.raises(SkelGraspError):
            PlannerConfig(**bad)
    with pytest.raises(SkelGraspError):
        PlannerConfig.from_dict({'vertex_spacing': 1.0})


def test_cursor_straight_chain(chain_skeleton):
    skeleton = chain_skeleton([[float(x), 0.0, 0.0] for x in range(11)])
    assert VertexCursor(skeleton, 3.0).order == [0, 10, 3, 6, 9]
    assert VertexCursor(skeleton, 1.0).order == [0, 10] + list(range(1, 10))

    emitted = []
    v, cursor = next_skeleton_vertex(skeleton, 3.0)
    while v is not None:
        emitted.append(v)
        v, cursor = next_skeleton_vertex(skeleton, 3.0, cursor)
    assert emitted == [0, 10, 3, 6, 9]
    assert cursor.next() is None


def test_cursor_y_tube(y_tube_skeleton):
    order = VertexCursor(y_tube_skeleton, 10.0).order
    kinds = [y_tube_skeleton.kind(v) for v in order]
    assert kinds[:4].count(ENDPOINT) == 3
    assert kinds[:4].count(BRANCHING) == 1
    assert all(k == CONNECTING for k in kinds[4:])
    assert len(set(order)) == len(order)


def test_strategy_rules(gripper):
    th = gripper.thresholds
    round20 = local_shape(100.0, 100.0)
    assert evaluate_strategy('1a', CONNECTING, interval(25.0), round20, th,
                             gripper)
    # power types need half the handwidth on both sides
    assert not evaluate_strategy('2a', CONNECTING, interval(25.0), round20,
                                 th, gripper)
    assert evaluate_strategy('2a', CONNECTING, interval(60.0), round20, th,
                             gripper)
    assert not evaluate_strategy('1a', CONNECTING, interval(15.0), round20,
                                 th, gripper)
    assert not evaluate_strategy('1b', CONNECTING, interval(25.0), round20,
                                 th, gripper)

    rect = local_shape(900.0, 100.0, RECTANGULAR)
    assert evaluate_strategy('1b', CONNECTING, interval(25.0), rect, th,
                             gripper)
    assert evaluate_strategy('2b', CONNECTING, interval(60.0), rect, th,
                             gripper)
    assert not evaluate_strategy('1a', CONNECTING, interval(25.0), rect, th,
                                 gripper)

    assert evaluate_strategy('3', ENDPOINT, interval(0.0), round20, th,
                             gripper)
    assert evaluate_strategy('4', ENDPOINT, interval(0.0), round20, th,
                             gripper)
    assert not evaluate_strategy('1a', ENDPOINT, interval(25.0), round20, th,
                                 gripper)
    thick = local_shape(45.0**2, 45.0**2)
    assert not evaluate_strategy('3', ENDPOINT, interval(0.0), thick, th,
                                 gripper)
    assert not evaluate_strategy('4', ENDPOINT, interval(0.0), thick, th,
                                 gripper)
    for strategy in STRATEGY_PRESHAPE:
        assert not evaluate_strategy(strategy, BRANCHING, interval(60.0),
                                     round20, th, gripper)


@pytest.mark.parametrize('strategy, kind, count', [
    ('1a', ROUND, 16),
    ('3', ROUND, 8),
    ('1b', RECTANGULAR, 4),
    ('3', RECTANGULAR, 2),
])
def test_hypothesis_counts(gripper, strategy, kind, count):
    shape = local_shape(100.0, 80.0, kind)
    hyps = generate_hypotheses(5, strategy, shape, gripper, PlannerConfig())
    assert len(hyps) == count
    gcp = gripper.preshape(STRATEGY_PRESHAPE[strategy]).gcp
    for hyp in hyps:
        assert hyp.preshape == STRATEGY_PRESHAPE[strategy]
        assert hyp.vertex == 5
        assert np.linalg.norm(hyp.approach) == pytest.approx(1.0)
        assert np.allclose(hyp.pose.compose(gcp).translation, shape.origin)
        if strategy == '3':
            assert np.allclose(hyp.approach, -shape.normal)
        else:
            assert abs(np.dot(hyp.approach, shape.normal)) < 1e-9


def test_hypothesis_sample_counts_configurable(gripper):
    shape = local_shape(100.0, 100.0)
    config = PlannerConfig(samples_round_connecting=5,
                           samples_round_endpoint=3)
    assert len(generate_hypotheses(0, '1a', shape, gripper, config)) == 5
    assert len(generate_hypotheses(0, '3', shape, gripper, config)) == 3


def test_gcp_frame():
    frame = gcp_frame(np.zeros(3), np.array([0.0, 0.0, 2.0]),
                      np.array([1.0, 0.0, 1.0]))
    assert np.allclose(frame.axis(2), [0.0, 0.0, 1.0])
    assert np.allclose(frame.axis(0), [1.0, 0.0, 0.0])
    assert gcp_frame(np.zeros(3), np.array([0.0, 0.0, 1.0]),
                     np.array([0.0, 0.0, 3.0])) is None


def slab_hypothesis(depth):
    """ Gripper pointing down with its finger tips `depth` mm below the
        top face of a slab at z = 0
    """
    pose = RigidPose.from_axis_angle([1.0, 0.0, 0.0], np.pi,
                                     [0.0, 0.0, 80.0 - depth])
    return GraspHypothesis(pose, PRECISION, 0, '1a',
                           np.array([0.0, 0.0, -1.0]))


def test_retreat_out_of_slab(gripper):
    slab = fixtures.primitive_box([300.0, 300.0, 40.0], center=(0, 0, -20))
    config = PlannerConfig()
    pose = retreat_to_free(slab_hypothesis(10.0), gripper, slab, config)
    moved = pose.translation[2] - 70.0
    assert 10.0 < moved <= 12.0 + 1e-9
    assert np.allclose(pose.translation[:2], 0.0)

    clear = slab_hypothesis(-5.0)
    unmoved = retreat_to_free(clear, gripper, slab, config)
    assert np.allclose(unmoved.matrix(), clear.pose.matrix())


def test_retreat_gives_up(gripper):
    giant = fixtures.primitive_box([1000.0, 1000.0, 1000.0])
    config = PlannerConfig(retreat_max=150.0)
    assert retreat_to_free(slab_hypothesis(10.0), gripper, giant,
                           config) is None


def test_plan_cylinder(cylinder_plan, gripper, cylinder_skeleton):
    grasps = cylinder_plan.grasps
    assert len(grasps) >= 1
    assert any(g.strategy in ('1a', '2a') for g in grasps)
    for g in grasps:
        assert g.force_closure
        assert g.epsilon > 0.0
        assert g.preshape == STRATEGY_PRESHAPE[g.strategy]
        assert len({c.link for c in g.contacts}) >= 2
        # the hand only ever backs off along the approach line
        gcp = g.pose.compose(gripper.preshape(g.preshape).gcp).translation
        offset = gcp - cylinder_skeleton.positions[g.vertex]
        assert np.linalg.norm(np.cross(offset, g.approach)) < 1e-6
        assert np.dot(offset, g.approach) <= 1e-6
    diagnostics = cylinder_plan.diagnostics
    assert diagnostics['hypotheses'] == sum(
        diagnostics[k] for k in ('retreat_failed', 'initial_collision',
                                 'no_contacts', 'not_force_closure', 'valid'))
    assert diagnostics['valid'] == len(grasps)
    assert 0.0 < cylinder_plan.force_closure_rate <= 100.0


def test_plan_is_thread_independent(cylinder_plan, gripper, cylinder_mesh,
                                    cylinder_skeleton):
    config = PlannerConfig(vertex_distance=10.0, threads=1)
    again = plan(cylinder_mesh, gripper, config, skeleton=cylinder_skeleton)
    assert ([g.to_dict(timing=False) for g in again] == [
        g.to_dict(timing=False) for g in cylinder_plan.grasps
    ])


def test_zero_timeout(gripper, cylinder_mesh):
    planner = SkeletonGraspPlanner(gripper, PlannerConfig(timeout=0.0))
    result = planner.plan(cylinder_mesh)
    assert result.grasps == []
    assert result.skeleton is None
    assert result.force_closure_rate == 0.0
    assert result.time_per_grasp_ms is None
    assert plan_baseline(cylinder_mesh, gripper,
                         PlannerConfig(timeout=0.0)) == []


def test_thick_object_has_no_strategy(gripper, axis_chain_skeleton):
    fat = fixtures.cylinder(80.0, 200.0, spacing=5.0)
    skeleton = axis_chain_skeleton(fat, 2, -90.0, 90.0, 5.0)
    result = SkeletonGraspPlanner(gripper).plan(fat, skeleton)
    assert result.grasps == []
    assert result.hypotheses == 0
    assert result.diagnostics['no_strategy'] == len(
        VertexCursor(skeleton, 10.0).order)


def test_baseline_planner(gripper, cylinder_mesh):
    config = PlannerConfig(baseline_samples=16, threads=1)
    planner = BaselinePlanner(gripper, config)
    a = planner.hypotheses(cylinder_mesh)
    b = planner.hypotheses(cylinder_mesh)
    assert len(a) == 16
    for x, y in zip(a, b):
        assert np.array_equal(x.pose.matrix(), y.pose.matrix())
        assert x.preshape == POWER
        assert x.strategy == BASELINE_STRATEGY
    other = BaselinePlanner(gripper, PlannerConfig(baseline_samples=16,
                                                   seed=1))
    assert not np.array_equal(
        other.hypotheses(cylinder_mesh)[0].pose.matrix(), a[0].pose.matrix())

    result = planner.plan(cylinder_mesh)
    assert result.hypotheses == 16
    for g in result.grasps:
        assert g.strategy == BASELINE_STRATEGY
        assert g.preshape == POWER
    assert plan_baseline(cylinder_mesh, gripper,
                         PlannerConfig(baseline_samples=0)) == []


def test_executor_keeps_order():
    with Executor(4) as executor:
        assert executor.map(lambda x: x * x, range(20)) == [
            x * x for x in range(20)
        ]
        assert executor.step == 20
    with Executor(1) as executor:
        assert executor.map(str, [3, 1]) == ['3', '1']


def test_grasp_json(tmp_path, cylinder_plan, gripper, cylinder_mesh):
    grasps = cylinder_plan.grasps
    path = str(tmp_path / 'grasps.json')
    save_grasps(path, grasps, 'cylinder', gripper.name, 'skeleton',
                timing=False)
    with open(path) as fin:
        doc = json.load(fin)
    assert doc['schema_version'] == 1
    assert doc['object'] == 'cylinder'
    assert doc['planner'] == 'skeleton'
    record = doc['grasps'][0]
    assert set(record) == {
        'pose', 'preshape', 'vertex', 'strategy', 'approach', 'contacts',
        'epsilon', 'force_closure', 'time_ms'
    }
    assert record['time_ms'] is None

    header, loaded = load_grasps(path)
    assert header['hand'] == 'parallel_gripper'
    assert len(loaded) == len(grasps)
    for a, b in zip(loaded, grasps):
        assert (a.vertex, a.strategy) == (b.vertex, b.strategy)
        assert np.allclose(a.pose.matrix(), b.pose.matrix())
        assert len(a.contacts) == len(b.contacts)
    text = grasps_to_json(grasps, 'cylinder', gripper.name, 'skeleton')
    assert json.loads(text)['grasps'][0]['time_ms'] is not None
    assert revalidate(loaded[0], gripper, cylinder_mesh)


def test_revalidate_rejects_colliding_grasp(cylinder_plan, gripper,
                                            cylinder_mesh):
    g = cylinder_plan.grasps[0]
    # palm centred on the object
    inside = RigidPose(cylinder_mesh.centroid, g.pose.rotation)
    broken = Grasp(inside,
                   g.preshape, g.vertex, g.strategy, g.approach, g.contacts,
                   True, g.epsilon)
    assert not revalidate(broken, gripper, cylinder_mesh)


def test_load_grasps_errors(tmp_path):
    path = tmp_path / 'grasps.json'
    path.write_text('{"schema_version": 2, "grasps": []}')
    with pytest.raises(SkelGraspError, match='version'):
        load_grasps(str(path))
    path.write_text('not json')
    with pytest.raises(SkelGraspError):
        load_grasps(str(path))
    with pytest.raises(SkelGraspError):
        load_grasps(str(tmp_path / 'missing.json'))


def test_approach_overlay(tmp_path, cylinder_plan, gripper, cylinder_mesh):
    grasps = cylinder_plan.grasps[:3]
    lines = approach_lines(grasps, gripper, cylinder_mesh)
    for start, end in lines:
        assert np.linalg.norm(end - start) == pytest.approx(50.0)
    path = tmp_path / 'overlay.ply'
    write_approach_ply(grasps, gripper, cylinder_mesh, str(path))
    text = path.read_text()
    assert 'element edge {}'.format(len(grasps)) in text
