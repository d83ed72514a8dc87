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

from skelgrasp.bin.skeletonize import contraction_params
from skelgrasp.hand.model import POWER
from skelgrasp.hand.model import PRECISION
from skelgrasp.hand.model import load_hand
from skelgrasp.mesh.mesh import load_mesh
from skelgrasp.planner.strategy import max_path_length
from skelgrasp.shape.local_shape import grasping_interval
from skelgrasp.shape.local_shape import shape_to_dict
from skelgrasp.shape.local_shape import surface_shape
from skelgrasp.shape.local_shape import write_shape_diagnostics
from skelgrasp.skeleton.io import read_skeleton
from skelgrasp.skeleton.io import write_segmentation_ply
from skelgrasp.skeleton.segmentation import classify_vertices
from skelgrasp.skeleton.segmentation import segment_skeleton
from skelgrasp.skeleton.skeletonize import skeletonize
from skelgrasp.skeleton.types import BRANCHING
from skelgrasp.utils.cli_utils import ArgumentParser
from skelgrasp.utils.cli_utils import add_common_arguments
from skelgrasp.utils.cli_utils import dump_config
from skelgrasp.utils.cli_utils import run_main
from skelgrasp.utils.config import load_config
from skelgrasp.utils.errors import DegenerateShapeError
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.file_utils import atomic_write_text
from skelgrasp.utils.file_utils import staged_outputs


def add_arguments(parser):
    parser.add_argument('mesh', help='watertight OFF/OBJ/STL mesh')
    parser.add_argument('--skeleton',
                        default=None,
                        help='skeleton file from `skeletonize`, '
                        'computed when not given')
    parser.add_argument('-o',
                        '--output',
                        required=True,
                        help='segment list text file')
    parser.add_argument('--ply', default=None, help='colored segmentation PLY')
    parser.add_argument('--shapes',
                        default=None,
                        help='local surface shape YAML per vertex')
    parser.add_argument('--hand',
                        default='parallel_gripper',
                        help='hand file or name, sets the interval lengths '
                        'of --shapes')
    parser.add_argument('--preshape',
                        default=PRECISION,
                        choices=[PRECISION, POWER],
                        help='grasp type whose interval length --shapes uses')
    parser.add_argument('--units',
                        default='mm',
                        help='unit of the mesh coordinates: mm, cm, m or a '
                        'scale factor to mm')
    parser.add_argument('--max_iterations', type=int, default=None)
    parser.add_argument('--edge_length', type=float, default=None)
    parser.add_argument('--kappa_max', type=float, default=0.1)
    parser.add_argument('--t_r', type=float, default=1.2)
    add_common_arguments(parser)


def get_args(argv=None):
    parser = ArgumentParser(description='segment the skeleton and surface')
    add_arguments(parser)
    return parser.parse_args(argv)


def segments_to_text(segments):
    lines = ['# segment closed delimiter_a delimiter_b interior...']
    for i, seg in enumerate(segments):
        a, b = (-1 if d is None else d for d in seg.delimiters)
        lines.append(' '.join(
            str(x) for x in [i, int(seg.closed), a, b] + list(seg.interior)))
    return '\n'.join(lines) + '\n'


def shape_entries(mesh, skeleton, hand, preshape, kappa_max, t_r):
    max_len = max_path_length(preshape, hand)
    for v in range(len(skeleton)):
        kind = skeleton.kind(v)
        if kind == BRANCHING:
            continue
        interval = grasping_interval(skeleton, v, max_len, kappa_max)
        try:
            shape = surface_shape(mesh, skeleton, v, interval, t_r)
        except DegenerateShapeError as e:
            logging.debug('vertex %d: %s', v, e)
            continue
        yield shape_to_dict(shape, v, kind)


def run(args):
    configs = load_config(args.config)
    mesh = load_mesh(args.mesh, units=args.units, require_watertight=True)
    if args.skeleton:
        skeleton = read_skeleton(args.skeleton)
        if any(v.kind is None for v in skeleton.vertices):
            skeleton = classify_vertices(skeleton)
        if skeleton.num_surface_points != mesh.num_vertices:
            raise SkelGraspError(
                'skeleton {} covers {} surface points, mesh has {}'.format(
                    args.skeleton, skeleton.num_surface_points,
                    mesh.num_vertices))
    else:
        params = contraction_params(configs, args)
        skeleton = skeletonize(mesh, params)
        configs['contraction_conf'] = dataclasses.asdict(params)
    segments = segment_skeleton(skeleton)
    logging.info('%s: %d segments', mesh.name, len(segments))
    entries = None
    if args.shapes:
        hand = load_hand(args.hand)
        entries = shape_entries(mesh, skeleton, hand, args.preshape,
                                args.kappa_max, args.t_r)
    with staged_outputs() as stage:
        atomic_write_text(stage(args.output), segments_to_text(segments))
        if args.ply:
            write_segmentation_ply(skeleton, mesh, stage(args.ply))
        if args.shapes:
            write_shape_diagnostics(entries, stage(args.shapes))
        dump_config(args.output, configs, stage)


def main(argv=None):
    return run_main(run, get_args(argv))


if __name__ == '__main__':
    sys.exit(main())
