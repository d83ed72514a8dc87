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

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from skelgrasp.evaluation.robustness import RobustnessConfig
from skelgrasp.evaluation.robustness import score_with_config
from skelgrasp.mesh.mesh import Mesh
from skelgrasp.mesh.mesh import load_mesh
from skelgrasp.planner.config import PlannerConfig
from skelgrasp.planner.planner import BaselinePlanner
from skelgrasp.planner.planner import SkeletonGraspPlanner
from skelgrasp.skeleton.skeletonize import skeletonize
from skelgrasp.utils.config import dataclass_from_dict
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.file_utils import atomic_open
from skelgrasp.utils.logging_utils import progress_enabled
from skelgrasp.utils.random_utils import derive_rng

NUM_BINS = 20
PLANNERS = ('skeleton', 'baseline')
SUMMARY_FIELDS = ('planner', 'hand', 'objects', 'grasps', 'time_ms_mean',
                  'time_ms_std', 'force_closure_rate_pct',
                  'robustness_pct_mean', 'robustness_pct_std')


@dataclass(frozen=True)
class BenchmarkConfig:
    # grasps per object and planner that get a robustness score, None or
    # 0 scores every planned grasp
    robustness_grasps: Optional[int] = None
    seed: int = 777

    def __post_init__(self):
        if self.robustness_grasps is not None and self.robustness_grasps < 0:
            raise SkelGraspError('robustness_grasps must not be negative')

    @classmethod
    def from_dict(cls, conf):
        return dataclass_from_dict(cls, conf)


@dataclass(frozen=True)
class BenchmarkRow:
    planner: str
    hand: str
    objects: int
    grasps: int
    time_ms_mean: Optional[float]
    time_ms_std: Optional[float]
    force_closure_rate_pct: float
    robustness_pct_mean: Optional[float]
    robustness_pct_std: Optional[float]

    def to_dict(self, timing=True):
        row = {k: getattr(self, k) for k in SUMMARY_FIELDS}
        if not timing:
            row['time_ms_mean'] = None
            row['time_ms_std'] = None
        return row


@dataclass
class BenchmarkReport:
    rows: List[BenchmarkRow] = field(default_factory=list)
    # robustness scores in [0, 1] per planner
    scores: Dict[str, List[float]] = field(default_factory=dict)
    skipped: List[Tuple[str, str]] = field(default_factory=list)
    objects: List[dict] = field(default_factory=list)

    def histogram(self, planner):
        return robustness_histogram(self.scores.get(planner, []))


def robustness_histogram(scores):
    """ Counts over [0, 5), [5, 10), ..., [95, 100] percent """
    counts = np.zeros(NUM_BINS, dtype=np.int64)
    for score in scores:
        index = int(math.floor(score * NUM_BINS + 1e-9))
        counts[min(max(index, 0), NUM_BINS - 1)] += 1
    return counts


def histogram_rows(scores):
    counts = robustness_histogram(scores)
    total = max(int(counts.sum()), 1)
    width = 100 // NUM_BINS
    return [((i + 1) * width, float(c) / total) for i, c in enumerate(counts)]


def _mean_std(values):
    if not values:
        return None, None
    values = np.asarray(values, dtype=np.float64)
    return float(values.mean()), float(values.std())


def _score_subset(result, mesh, hand, robustness, quality, config):
    """ Robustness of the planned grasps, or of a seeded subset of them
        when `config.robustness_grasps` is set
    """
    grasps = result.grasps
    picked = range(len(grasps))
    if config.robustness_grasps and config.robustness_grasps < len(grasps):
        rng = derive_rng(config.seed, 'subset', mesh.name, result.planner)
        picked = sorted(
            rng.choice(len(grasps), size=config.robustness_grasps,
                       replace=False))
    reports = []
    for i in picked:
        reports.append(
            score_with_config(grasps[i],
                              mesh,
                              hand,
                              robustness,
                              quality,
                              grasp_id='{}/{}/{}'.format(
                                  mesh.name, result.planner, int(i))))
    return reports


def _load(item):
    if isinstance(item, Mesh):
        return item
    return load_mesh(item, require_watertight=True)


def run_benchmark(objects,
                  hand,
                  planner_config: PlannerConfig = None,
                  quality=None,
                  robustness: RobustnessConfig = None,
                  config: BenchmarkConfig = None,
                  contraction=None,
                  writer=None) -> BenchmarkReport:
    """ Run the skeleton and the baseline planner on every object

    Objects are meshes or mesh paths. An object that cannot be loaded or
    skeletonized is skipped for both planners and listed in
    `report.skipped`.

    Args:
        writer: optional tensorboardX SummaryWriter for per-object scalars
    """
    planner_config = planner_config or PlannerConfig()
    robustness = robustness or RobustnessConfig()
    config = config or BenchmarkConfig()
    report = BenchmarkReport(scores={p: [] for p in PLANNERS})
    if not objects:
        return report
    planners = {
        'skeleton': SkeletonGraspPlanner(hand, planner_config, quality,
                                         contraction),
        'baseline': BaselinePlanner(hand, planner_config, quality),
    }
    times = {p: [] for p in PLANNERS}
    valid = {p: 0 for p in PLANNERS}
    validated = {p: 0 for p in PLANNERS}
    done = 0
    for step, item in enumerate(tqdm(objects, disable=not progress_enabled())):
        name = item.name if isinstance(item, Mesh) else str(item)
        try:
            mesh = _load(item)
            skeleton = skeletonize(mesh, contraction)
        except SkelGraspError as e:
            logging.warning('skip object %s: %s', name, e,
                            extra={'object': name})
            report.skipped.append((name, str(e)))
            continue
        done += 1
        entry = {'object': mesh.name}
        for planner in PLANNERS:
            if planner == 'skeleton':
                result = planners[planner].plan(mesh, skeleton)
            else:
                result = planners[planner].plan(mesh)
            reports = _score_subset(result, mesh, hand, robustness, quality,
                                    config)
            scores = [r.score for r in reports]
            report.scores[planner].extend(scores)
            valid[planner] += len(result.grasps)
            validated[planner] += result.validated
            if result.time_per_grasp_ms is not None:
                times[planner].append(result.time_per_grasp_ms)
            entry[planner] = {
                'grasps': len(result.grasps),
                'hypotheses': result.hypotheses,
                'force_closure_rate_pct': result.force_closure_rate,
                'robustness': scores,
                'diagnostics': dict(result.diagnostics),
            }
            if writer is not None:
                writer.add_scalar('{}/grasps'.format(planner),
                                  len(result.grasps), step)
                writer.add_scalar('{}/force_closure_rate'.format(planner),
                                  result.force_closure_rate, step)
                if scores:
                    writer.add_scalar('{}/robustness'.format(planner),
                                      float(np.mean(scores)), step)
        report.objects.append(entry)

    for planner in PLANNERS:
        time_mean, time_std = _mean_std(times[planner])
        rob_mean, rob_std = _mean_std(
            [100.0 * s for s in report.scores[planner]])
        rate = (100.0 * valid[planner] /
                validated[planner] if validated[planner] else 0.0)
        report.rows.append(
            BenchmarkRow(planner, hand.name, done, valid[planner], time_mean,
                         time_std, rate, rob_mean, rob_std))
    if done == 0:
        report.rows = []
    return report


def _fmt(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return '{:.4f}'.format(value)
    return str(value)


def write_summary_csv(rows, path, timing=True):
    with atomic_open(path, 'w') as fout:
        out = csv.writer(fout, lineterminator='\n')
        out.writerow(SUMMARY_FIELDS)
        for row in rows:
            values = row.to_dict(timing)
            out.writerow([_fmt(values[k]) for k in SUMMARY_FIELDS])


def write_histogram_csv(scores, path):
    with atomic_open(path, 'w') as fout:
        out = csv.writer(fout, lineterminator='\n')
        out.writerow(('bin_upper_pct', 'fraction'))
        for upper, fraction in histogram_rows(scores):
            out.writerow((upper, '{:.6f}'.format(fraction)))
