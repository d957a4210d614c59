#!/usr/bin/env python3
"""Write a small seeded tensor group file for trying out the CLI.

Usage:
    python3 scripts/make_demo_tensors.py demo.ftns [--seed 1]
"""

import argparse

import numpy as np

from fcmcodec import FeatureTensor, TensorGroup
from fcmcodec.tensor import write_tensor_file


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    shapes = ((16, 32, 32), (8, 48, 64), (4, 64, 64))
    tensors = tuple(
        FeatureTensor(rng.normal(0.5, 1.0, shape).astype(np.float32))
        for shape in shapes
    )
    group = TensorGroup(tensors, labels=("p3", "p4", "p5"))
    write_tensor_file(args.output, group)
    print(f"wrote {len(tensors)} tensors to {args.output}")


if __name__ == "__main__":
    main()
