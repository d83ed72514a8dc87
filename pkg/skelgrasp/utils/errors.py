# Copyright (c) 2026 SkelGrasp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


class SkelGraspError(Exception):
    """Base class of every error caused by bad input data."""


class MeshError(SkelGraspError):

    def __init__(self, message, open_edges=None):
        super().__init__(message)
        self.open_edges = [] if open_edges is None else open_edges


class SkeletonError(SkelGraspError):

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class DegenerateShapeError(SkelGraspError):
    pass


class HandConfigError(SkelGraspError):
    pass


class GraspError(SkelGraspError):
    pass
