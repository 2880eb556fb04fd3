#!/usr/bin/env python3
# Copyright 2026 The latentgeo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#         https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Materialize a 5000-digit MNIST subset (500 per class) as IDX files.

The subset ships inside the mlxtend wheel as a CSV (784 pixel columns in
0..255 followed by the label). The wheel is fetched with pip, nothing is
installed.

    python3 tools/fetch_mnist_subset.py data/mnist5k
"""

import argparse
import glob
import gzip
import struct
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

WHEEL_SPEC = "mlxtend==0.24.0"
MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def write_idx(path, dtype_code, dims, payload):
    with open(path, "wb") as fh:
        fh.write(bytes([0, 0, dtype_code, len(dims)]))
        for d in dims:
            fh.write(struct.pack(">I", d))
        fh.write(payload)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--wheel", type=Path, help="use an already downloaded wheel")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel
        if wheel is None:
            subprocess.run([sys.executable, "-m", "pip", "download", WHEEL_SPEC,
                            "--no-deps", "-q", "-d", tmp], check=True)
            wheel = Path(glob.glob(f"{tmp}/*.whl")[0])
        raw = gzip.decompress(zipfile.ZipFile(wheel).read(MEMBER)).decode()

    pixels = bytearray()
    labels = bytearray()
    for line in raw.strip().splitlines():
        fields = [int(float(v)) for v in line.split(",")]
        if len(fields) != 785:
            raise SystemExit(f"unexpected row width {len(fields)}")
        pixels.extend(min(255, max(0, v)) for v in fields[:784])
        labels.append(fields[784])

    n = len(labels)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_idx(args.out_dir / "mnist5k-images-idx3-ubyte", 0x08, [n, 28, 28], bytes(pixels))
    write_idx(args.out_dir / "mnist5k-labels-idx1-ubyte", 0x08, [n], bytes(labels))
    print(f"wrote {n} samples to {args.out_dir}")


if __name__ == "__main__":
    main()
