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
import sys

from skelgrasp.grasp.quality import QualityConfig
from skelgrasp.hand.model import load_hand
from skelgrasp.mesh.mesh import load_mesh
from skelgrasp.planner.config import PlannerConfig
from skelgrasp.planner.grasp_io import save_grasps
from skelgrasp.planner.grasp_io import write_approach_ply
from skelgrasp.planner.planner import BaselinePlanner
from skelgrasp.planner.planner import SkeletonGraspPlanner
from skelgrasp.skeleton.contraction import ContractionParams
from skelgrasp.skeleton.io import read_skeleton
from skelgrasp.utils.cli_utils import ArgumentParser
from skelgrasp.utils.cli_utils import add_common_arguments
from skelgrasp.utils.cli_utils import dump_config
from skelgrasp.utils.cli_utils import run_main
from skelgrasp.utils.config import load_config
from skelgrasp.utils.config import override
from skelgrasp.utils.file_utils import staged_outputs


def add_planner_arguments(parser):
    parser.add_argument('--hand',
                        default='parallel_gripper',
                        help='hand file, or a hand name searched on '
                        '$SKELGRASP_HAND_PATH and the built-in hands')
    parser.add_argument('--units',
                        default='mm',
                        help='unit of the mesh coordinates: mm, cm, m or a '
                        'scale factor to mm')
    parser.add_argument('--timeout',
                        type=float,
                        default=None,
                        help='planning time limit per object in seconds')
    parser.add_argument('--vertex_distance',
                        type=float,
                        default=None,
                        help='skeleton vertex distance d in mm')
    parser.add_argument('--retreat_step', type=float, default=None)
    parser.add_argument('--retreat_max', type=float, default=None)
    parser.add_argument('--kappa_max', type=float, default=None)
    parser.add_argument('--t_r', type=float, default=None)
    parser.add_argument('--baseline_samples',
                        type=int,
                        default=None,
                        help='surface samples of the baseline planner')
    parser.add_argument('--mu', type=float, default=None, help='friction')
    parser.add_argument('--cone_edges',
                        type=int,
                        default=None,
                        help='friction cone edges')
    parser.add_argument('--omit_timing',
                        action='store_true',
                        default=False,
                        help='write no timings, for byte-identical reruns')


def add_arguments(parser):
    parser.add_argument('mesh', help='watertight OFF/OBJ/STL mesh')
    parser.add_argument('-o',
                        '--output',
                        required=True,
                        help='grasp JSON file')
    parser.add_argument('--baseline',
                        action='store_true',
                        default=False,
                        help='use the surface normal baseline planner')
    parser.add_argument('--skeleton',
                        default=None,
                        help='precomputed skeleton file')
    parser.add_argument('--overlay',
                        default=None,
                        help='PLY with the approach line of every grasp')
    add_planner_arguments(parser)
    add_common_arguments(parser)


def get_args(argv=None):
    parser = ArgumentParser(description='plan grasps on a mesh')
    add_arguments(parser)
    return parser.parse_args(argv)


def planner_config(configs, args):
    params = PlannerConfig.from_dict(configs.get('planner_conf'))
    return override(params,
                    vertex_distance=args.vertex_distance,
                    timeout=args.timeout,
                    retreat_step=args.retreat_step,
                    retreat_max=args.retreat_max,
                    kappa_max=args.kappa_max,
                    t_r=args.t_r,
                    seed=args.seed,
                    baseline_samples=args.baseline_samples,
                    threads=args.threads)


def quality_config(configs, args):
    params = QualityConfig.from_dict(configs.get('quality_conf'))
    return override(params, mu=args.mu, cone_edges=args.cone_edges)


def run(args):
    configs = load_config(args.config)
    params = planner_config(configs, args)
    quality = quality_config(configs, args)
    hand = load_hand(args.hand)
    mesh = load_mesh(args.mesh, units=args.units, require_watertight=True)
    if args.baseline:
        planner = BaselinePlanner(hand, params, quality)
        result = planner.plan(mesh)
    else:
        contraction = ContractionParams.from_dict(
            configs.get('contraction_conf'))
        planner = SkeletonGraspPlanner(hand, params, quality, contraction)
        skeleton = read_skeleton(args.skeleton) if args.skeleton else None
        result = planner.plan(mesh, skeleton)
        configs['contraction_conf'] = dataclasses.asdict(contraction)
    logging.info('%s: %d grasps, force closure rate %.1f%%', mesh.name,
                 len(result.grasps), result.force_closure_rate,
                 extra={'object': mesh.name,
                        'grasps': len(result.grasps),
                        'diagnostics': dict(result.diagnostics)})
    configs['planner_conf'] = dataclasses.asdict(params)
    configs['quality_conf'] = dataclasses.asdict(quality)
    configs['hand'] = hand.name
    with staged_outputs() as stage:
        save_grasps(stage(args.output), result.grasps, mesh.name, hand.name,
                    planner.name, timing=not args.omit_timing)
        if args.overlay:
            write_approach_ply(result.grasps, hand, mesh,
                               stage(args.overlay))
        dump_config(args.output, configs, stage)


def main(argv=None):
    return run_main(run, get_args(argv))


if __name__ == '__main__':
    sys.exit(main())
