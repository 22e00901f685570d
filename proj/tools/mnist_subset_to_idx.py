#!/usr/bin/env python3
"""Convert mlxtend's bundled 5k MNIST sample (CSV, label in last column) to IDX files.

Usage: mnist_subset_to_idx.py <mlxtend wheel or mnist_5k.csv.gz> <out_dir>
"""
import gzip
import struct
import sys
import zipfile
from pathlib import Path

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def load_rows(src: Path):
    if src.suffix == ".whl":
        blob = zipfile.ZipFile(src).read(MEMBER)
    else:
        blob = src.read_bytes()
    text = gzip.decompress(blob).decode()
    return [list(map(int, line.split(","))) for line in text.splitlines() if line]


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    rows = load_rows(Path(sys.argv[1]))
    out = Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    n = len(rows)
    with open(out / "mnist5k-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 2051, n, 28, 28))
        for r in rows:
            f.write(bytes(r[:784]))
    with open(out / "mnist5k-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 2049, n))
        f.write(bytes(r[784] for r in rows))
    print(f"wrote {n} images to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
