#!/usr/bin/env python3
# Copyright 2026 The hohl Authors
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

"""Export the iris and digits datasets bundled with scikit-learn to CSV.

Writes data/iris.csv and data/digits.csv with header f0,...,f{d-1},label.
"""
import argparse
import csv
import pathlib

from sklearn.datasets import load_digits, load_iris


def write(path, data, target, fmt):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{i}" for i in range(data.shape[1])] + ["label"])
        for row, y in zip(data, target):
            w.writerow([fmt(v) for v in row] + [int(y)])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    iris = load_iris()
    write(out / "iris.csv", iris.data, iris.target, lambda v: repr(float(v)))
    digits = load_digits()
    write(out / "digits.csv", digits.data, digits.target, lambda v: str(int(v)))


if __name__ == "__main__":
    main()
