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

import sys

from skelgrasp.bin import benchmark
from skelgrasp.bin import plan
from skelgrasp.bin import robustness
from skelgrasp.bin import segment
from skelgrasp.bin import skeletonize
from skelgrasp.utils.cli_utils import ArgumentParser
from skelgrasp.utils.cli_utils import run_main

COMMANDS = {
    'skeletonize': (skeletonize, 'extract the mesh skeleton'),
    'segment': (segment, 'segment the skeleton and surface'),
    'plan': (plan, 'plan grasps on a mesh'),
    'benchmark': (benchmark, 'compare the skeleton and baseline planners'),
    'robustness': (robustness, 'score grasps under pose noise'),
}


def get_args(argv=None):
    parser = ArgumentParser(prog='skelgrasp',
                            description='skeleton based grasp planning')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    for name, (module, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text,
                                    description=help_text)
        module.add_arguments(sub)
    return parser.parse_args(argv)


def main(argv=None):
    args = get_args(argv)
    module, _ = COMMANDS[args.command]
    return run_main(module.run, args)


if __name__ == '__main__':
    sys.exit(main())
