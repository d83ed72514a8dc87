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
import os
import sys

import yaml
from tensorboardX import SummaryWriter

from skelgrasp.bin.plan import add_planner_arguments
from skelgrasp.bin.plan import planner_config
from skelgrasp.bin.plan import quality_config
from skelgrasp.evaluation.benchmark import PLANNERS
from skelgrasp.evaluation.benchmark import BenchmarkConfig
from skelgrasp.evaluation.benchmark import run_benchmark
from skelgrasp.evaluation.benchmark import write_histogram_csv
from skelgrasp.evaluation.benchmark import write_summary_csv
from skelgrasp.evaluation.robustness import RobustnessConfig
from skelgrasp.hand.model import load_hand
from skelgrasp.skeleton.contraction import ContractionParams
from skelgrasp.utils.cli_utils import ArgumentParser
from skelgrasp.utils.cli_utils import add_common_arguments
from skelgrasp.utils.cli_utils import dump_config
from skelgrasp.utils.cli_utils import run_main
from skelgrasp.utils.config import load_config
from skelgrasp.utils.config import override
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.file_utils import atomic_write_text
from skelgrasp.utils.file_utils import list_meshes
from skelgrasp.utils.file_utils import staged_outputs


def add_robustness_arguments(parser):
    parser.add_argument('--robustness_samples',
                        '--robustness-samples',
                        dest='robustness_samples',
                        type=int,
                        default=None,
                        help='displaced samples per grasp')
    parser.add_argument('--sigma_pos',
                        '--sigma-pos',
                        dest='sigma_pos',
                        type=float,
                        default=None,
                        help='position noise std in mm')
    parser.add_argument('--sigma_rot',
                        '--sigma-rot',
                        dest='sigma_rot',
                        type=float,
                        default=None,
                        help='rotation noise std in degrees')
    parser.add_argument('--position_noise',
                        default=None,
                        choices=['per_axis', 'magnitude'],
                        help='position noise per axis or on the magnitude')


def robustness_config(configs, args):
    params = RobustnessConfig.from_dict(configs.get('robustness_conf'))
    return override(params,
                    samples=args.robustness_samples,
                    sigma_pos=args.sigma_pos,
                    sigma_rot=args.sigma_rot,
                    position_noise=args.position_noise,
                    seed=args.seed,
                    threads=args.threads)


def add_arguments(parser):
    parser.add_argument('objects',
                        help='directory of meshes, or a list file with one '
                        'mesh path per line')
    parser.add_argument('-o',
                        '--out_dir',
                        required=True,
                        help='directory for the CSV reports')
    parser.add_argument('--robustness_grasps',
                        type=int,
                        default=None,
                        help='score a seeded subset of this many grasps per '
                        'object and planner, default all')
    parser.add_argument('--tensorboard_dir',
                        default=None,
                        help='tensorboard log dir')
    add_planner_arguments(parser)
    add_robustness_arguments(parser)
    add_common_arguments(parser)


def get_args(argv=None):
    parser = ArgumentParser(
        description='compare the skeleton and the baseline planner')
    add_arguments(parser)
    return parser.parse_args(argv)


def run(args):
    configs = load_config(args.config)
    params = planner_config(configs, args)
    quality = quality_config(configs, args)
    robustness = robustness_config(configs, args)
    bench = override(BenchmarkConfig.from_dict(configs.get('benchmark_conf')),
                     robustness_grasps=args.robustness_grasps,
                     seed=args.seed)
    contraction = ContractionParams.from_dict(configs.get('contraction_conf'))
    if not os.path.exists(args.objects):
        raise SkelGraspError('object set {} not found'.format(args.objects))
    objects = list_meshes(args.objects)
    hand = load_hand(args.hand)
    writer = None
    if args.tensorboard_dir:
        writer = SummaryWriter(args.tensorboard_dir)
    try:
        report = run_benchmark(objects, hand, params, quality, robustness,
                               bench, contraction, writer)
    finally:
        if writer is not None:
            writer.close()
    timing = not args.omit_timing
    details = {
        'objects': report.objects,
        'skipped': [{'object': o, 'reason': r} for o, r in report.skipped],
    }
    configs.update({
        'planner_conf': dataclasses.asdict(params),
        'quality_conf': dataclasses.asdict(quality),
        'robustness_conf': dataclasses.asdict(robustness),
        'benchmark_conf': dataclasses.asdict(bench),
        'contraction_conf': dataclasses.asdict(contraction),
        'hand': hand.name,
    })
    with staged_outputs() as stage:
        write_summary_csv(
            report.rows, stage(os.path.join(args.out_dir, 'summary.csv')),
            timing)
        for planner in PLANNERS:
            name = 'histogram_{}.csv'.format(planner)
            write_histogram_csv(report.scores[planner],
                                stage(os.path.join(args.out_dir, name)))
        atomic_write_text(stage(os.path.join(args.out_dir, 'report.yaml')),
                          yaml.safe_dump(details))
        dump_config(os.path.join(args.out_dir, 'benchmark'), configs,
                    stage)
    for row in report.rows:
        logging.info('%s: %d grasps, force closure %.2f%%', row.planner,
                     row.grasps, row.force_closure_rate_pct,
                     extra=row.to_dict(timing))
    if report.skipped:
        logging.warning('%d objects skipped', len(report.skipped))


def main(argv=None):
    return run_main(run, get_args(argv))


if __name__ == '__main__':
    sys.exit(main())
