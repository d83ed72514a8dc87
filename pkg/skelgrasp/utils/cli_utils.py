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

import argparse
import logging
import sys

from skelgrasp.utils.config import save_config
from skelgrasp.utils.errors import MeshError
from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.logging_utils import init_logging
from skelgrasp.utils.random_utils import set_manual_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class ArgumentParser(argparse.ArgumentParser):
    """ argparse with usage errors mapped to exit code 1 """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '{}: error: {}\n'.format(self.prog, message))


def add_common_arguments(parser):
    parser.add_argument('--config', default=None, help='run config file')
    parser.add_argument('--seed', type=int, default=None, help='random seed')
    parser.add_argument('--threads',
                        type=int,
                        default=None,
                        help='worker threads, default all cores')
    parser.add_argument('--log_level',
                        default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='log level')
    parser.add_argument('--json_log',
                        '--json-log',
                        dest='json_log',
                        action='store_true',
                        default=False,
                        help='one JSON object per log record')


def config_path(out):
    return out + '.config.yaml'


def dump_config(out, configs, stage=None):
    """ Effective configuration of a run, next to its output; `stage`
        maps the path when the run writes its outputs as one group.
    """
    path = config_path(out)
    save_config(configs, stage(path) if stage else path)


def run_main(run, args):
    """ Run a command and map its failure to an exit code """
    init_logging(args.log_level, args.json_log)
    if getattr(args, 'seed', None) is not None:
        set_manual_seed(args.seed)
    try:
        run(args)
    except MeshError as e:
        logging.error('%s', e)
        if e.open_edges:
            logging.error('open edges (vertex pairs): %s',
                          e.open_edges[:20])
        return EXIT_INPUT
    except (SkelGraspError, OSError) as e:
        logging.error('%s', e)
        return EXIT_INPUT
    except Exception:
        logging.exception('internal error')
        return EXIT_INTERNAL
    return EXIT_OK
