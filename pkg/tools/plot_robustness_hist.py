# Copyright (c) 2021 Binbin Zhang(binbzha@qq.com)
#                    Menglong Xu
#               2026 SkelGrasp Authors
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

import argparse
import csv
import os

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COLORS = {'baseline': 'red', 'skeleton': 'blue'}


def load_histogram(hist_file):
    values = []
    with open(hist_file, 'r', encoding='utf8') as fin:
        for row in csv.DictReader(fin):
            values.append([float(row['bin_upper_pct']), float(row['fraction'])])
    return np.array(values)


def plot_robustness_hist(planners, stats_dir, figure_file, ylim):
    plt.figure(dpi=200)
    plt.rcParams['xtick.direction'] = 'in'
    plt.rcParams['ytick.direction'] = 'in'
    plt.rcParams['font.size'] = 12

    for planner in planners:
        hist_file = os.path.join(stats_dir, 'histogram_' + planner + '.csv')
        values = load_histogram(hist_file)
        width = values[0, 0]
        plt.bar(values[:, 0] - width / 2,
                values[:, 1] * 100,
                width=width,
                alpha=0.5,
                color=COLORS.get(planner),
                edgecolor='black',
                label=planner)

    plt.xlim([0, 100])
    plt.ylim([0, ylim])
    plt.xticks(range(0, 101, 10))
    plt.xlabel('Robustness score r (%)')
    plt.ylabel('Grasps (%)')
    plt.grid(linestyle='--')
    plt.legend(loc='best', fontsize=12)
    plt.savefig(figure_file)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='plot robustness histograms')
    parser.add_argument('--stats_dir',
                        required=True,
                        help='benchmark output dir with histogram csv files')
    parser.add_argument('--figure_file',
                        required=True,
                        help='path to save the figure')
    parser.add_argument('--planners',
                        default='baseline,skeleton',
                        help='planners to overlay, separated with `,`')
    parser.add_argument('--ylim',
                        type=int,
                        default=60,
                        help='ylim: range of y-axis in percent of grasps')
    args = parser.parse_args()

    plot_robustness_hist(args.planners.split(','), args.stats_dir,
                         args.figure_file, args.ylim)
