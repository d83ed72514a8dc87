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

from dataclasses import dataclass
from typing import Optional

from skelgrasp.utils.config import dataclass_from_dict
from skelgrasp.utils.errors import SkelGraspError


@dataclass(frozen=True)
class PlannerConfig:
    # skeleton vertex distance in mm, None means fingerwidth / 2
    vertex_distance: Optional[float] = None
    timeout: float = 30.0
    samples_round_endpoint: int = 8
    samples_round_connecting: int = 16
    retreat_step: float = 2.0
    retreat_max: float = 150.0
    kappa_max: float = 0.1
    t_r: float = 1.2
    seed: int = 777
    baseline_samples: int = 100
    threads: Optional[int] = None

    def __post_init__(self):
        if self.vertex_distance is not None and self.vertex_distance <= 0:
            raise SkelGraspError('vertex_distance must be positive')
        if self.timeout < 0:
            raise SkelGraspError('timeout must not be negative')
        if self.samples_round_endpoint < 1 or self.samples_round_connecting < 1:
            raise SkelGraspError('hypothesis sample counts must be >= 1')
        if self.retreat_step <= 0 or self.retreat_max < 0:
            raise SkelGraspError('bad retreat step or distance')
        if self.baseline_samples < 0:
            raise SkelGraspError('baseline_samples must not be negative')
        if self.threads is not None and self.threads < 1:
            raise SkelGraspError('threads must be >= 1')

    @classmethod
    def from_dict(cls, conf):
        return dataclass_from_dict(cls, conf)

    def distance(self, hand):
        if self.vertex_distance is not None:
            return self.vertex_distance
        return hand.fingerwidth / 2.0
