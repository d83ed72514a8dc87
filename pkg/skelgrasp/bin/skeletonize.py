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

from skelgrasp.mesh.mesh import load_mesh
from skelgrasp.skeleton.contraction import ContractionParams
from skelgrasp.skeleton.io import write_segmentation_ply
from skelgrasp.skeleton.io import write_skeleton
from skelgrasp.skeleton.segmentation import segment_skeleton
from skelgrasp.skeleton.skeletonize import skeletonize
from skelgrasp.utils.cli_utils import ArgumentParser
from skelgrasp.utils.cli_utils import add_common_arguments
from skelgrasp.utils.cli_utils import dump_config
from skelgrasp.utils.cli_utils import run_main
from skelgrasp.utils.config import load_config
from skelgrasp.utils.config import override
from skelgrasp.utils.file_utils import staged_outputs


def add_arguments(parser):
    parser.add_argument('mesh', help='watertight OFF/OBJ/STL mesh')
    parser.add_argument('-o',
                        '--output',
                        required=True,
                        help='skeleton text file')
    parser.add_argument('--ply', default=None, help='colored segmentation PLY')
    parser.add_argument('--units',
                        default='mm',
                        help='unit of the mesh coordinates: mm, cm, m or a '
                        'scale factor to mm')
    parser.add_argument('--max_iterations',
                        type=int,
                        default=None,
                        help='contraction iteration cap')
    parser.add_argument('--edge_length',
                        type=float,
                        default=None,
                        help='skeleton edge length in mm')
    add_common_arguments(parser)


def get_args(argv=None):
    parser = ArgumentParser(description='extract the mesh skeleton')
    add_arguments(parser)
    return parser.parse_args(argv)


def contraction_params(configs, args):
    params = ContractionParams.from_dict(configs.get('contraction_conf'))
    return override(params,
                    max_iterations=args.max_iterations,
                    max_edge_length=args.edge_length)


def run(args):
    configs = load_config(args.config)
    params = contraction_params(configs, args)
    mesh = load_mesh(args.mesh, units=args.units, require_watertight=True)
    skeleton = skeletonize(mesh, params)
    segments = segment_skeleton(skeleton)
    logging.info('skeleton of %s: %d vertices, %d segments', mesh.name,
                 len(skeleton), len(segments),
                 extra={'object': mesh.name, 'vertices': len(skeleton)})
    configs['contraction_conf'] = dataclasses.asdict(params)
    with staged_outputs() as stage:
        write_skeleton(skeleton, stage(args.output))
        if args.ply:
            write_segmentation_ply(skeleton, mesh, stage(args.ply))
        dump_config(args.output, configs, stage)


def main(argv=None):
    return run_main(run, get_args(argv))


if __name__ == '__main__':
    sys.exit(main())
