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
import json
import logging
import sys

import numpy as np

from skelgrasp.bin.benchmark import add_robustness_arguments
from skelgrasp.bin.benchmark import robustness_config
from skelgrasp.bin.plan import quality_config
from skelgrasp.evaluation.robustness import score_with_config
from skelgrasp.hand.model import load_hand
from skelgrasp.mesh.mesh import load_mesh
from skelgrasp.planner.grasp_io import load_grasps
from skelgrasp.utils.cli_utils import ArgumentParser
from skelgrasp.utils.cli_utils import add_common_arguments
from skelgrasp.utils.cli_utils import dump_config
from skelgrasp.utils.cli_utils import run_main
from skelgrasp.utils.config import load_config
from skelgrasp.utils.file_utils import atomic_write_text
from skelgrasp.utils.file_utils import staged_outputs


def add_arguments(parser):
    parser.add_argument('mesh', help='watertight OFF/OBJ/STL mesh')
    parser.add_argument('--grasps', required=True, help='grasp JSON file')
    parser.add_argument('-o',
                        '--output',
                        required=True,
                        help='robustness report JSON')
    parser.add_argument('--hand',
                        default=None,
                        help='hand file or name, default the hand named in '
                        'the grasp file')
    parser.add_argument('--units',
                        default='mm',
                        help='unit of the mesh coordinates: mm, cm, m or a '
                        'scale factor to mm')
    parser.add_argument('--max_grasps',
                        type=int,
                        default=None,
                        help='score only the first N grasps')
    parser.add_argument('--mu', type=float, default=None)
    parser.add_argument('--cone_edges', type=int, default=None)
    add_robustness_arguments(parser)
    add_common_arguments(parser)


def get_args(argv=None):
    parser = ArgumentParser(description='score grasps under pose noise')
    add_arguments(parser)
    return parser.parse_args(argv)


def run(args):
    configs = load_config(args.config)
    robustness = robustness_config(configs, args)
    quality = quality_config(configs, args)
    header, grasps = load_grasps(args.grasps)
    hand = load_hand(args.hand or header.get('hand', 'parallel_gripper'))
    mesh = load_mesh(args.mesh, units=args.units, require_watertight=True)
    if args.max_grasps is not None:
        grasps = grasps[:args.max_grasps]
    reports = [
        score_with_config(g, mesh, hand, robustness, quality, grasp_id=i)
        for i, g in enumerate(grasps)
    ]
    scores = [r.score for r in reports]
    doc = {
        'object': mesh.name,
        'hand': hand.name,
        'mean_score': float(np.mean(scores)) if scores else None,
        'reports': [r.to_dict() for r in reports],
    }
    logging.info('%s: %d grasps scored, mean robustness %s', mesh.name,
                 len(reports), doc['mean_score'])
    configs['robustness_conf'] = dataclasses.asdict(robustness)
    configs['quality_conf'] = dataclasses.asdict(quality)
    configs['hand'] = hand.name
    with staged_outputs() as stage:
        atomic_write_text(stage(args.output),
                          json.dumps(doc, indent=2) + '\n')
        dump_config(args.output, configs, stage)


def main(argv=None):
    return run_main(run, get_args(argv))


if __name__ == '__main__':
    sys.exit(main())
