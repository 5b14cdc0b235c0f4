# Copyright 2026 The pintbs Authors.
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

"""Plot relative error against Parareal iteration from convergence.csv."""

import argparse
import csv
from collections import defaultdict


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="convergence.csv written by `pintbs parareal`")
    ap.add_argument("-o", "--output", default="convergence.png")
    args = ap.parse_args()

    import matplotlib.pyplot as plt

    series = defaultdict(list)
    with open(args.csv, newline="") as f:
        for row in csv.DictReader(f):
            if row["rel_error"] == "skipped":
                continue
            series[(row["coarse_kind"], row["p_time"])].append((int(row["k"]), float(row["rel_error"])))

    for (kind, p), pts in sorted(series.items()):
        pts.sort()
        plt.semilogy([k for k, _ in pts], [e for _, e in pts], marker="o", label=f"{kind}, P={p}")
    plt.xlabel("iteration k")
    plt.ylabel("relative l2 error vs serial fine")
    plt.legend()
    plt.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
