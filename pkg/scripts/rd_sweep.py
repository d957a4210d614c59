#!/usr/bin/env python3
"""Sweep qp and prune ratio on a seeded synthetic corpus and print an
rate-distortion table (stream size in bytes, PSNR of the reconstruction
against the source tensors).

Usage:
    python3 scripts/rd_sweep.py [--channels 16] [--size 32] [--seed 7]
"""

import argparse

import numpy as np

from fcmcodec import (
    CodecId,
    EncoderConfig,
    FeatureTensor,
    TensorGroup,
    fcm_decode,
    fcm_encode,
)


def make_group(rng, channels, size, count=3):
    tensors = tuple(
        FeatureTensor(rng.normal(1.0, 1.0, (channels, size, size)).astype(np.float32))
        for _ in range(count)
    )
    return TensorGroup(tensors)


def group_psnr(a, b):
    err = 0.0
    peak = 0.0
    n = 0
    for ta, tb in zip(a.tensors, b.tensors):
        d = ta.data.astype(np.float64) - tb.data.astype(np.float64)
        err += float(np.sum(d * d))
        peak = max(peak, float(np.max(np.abs(ta.data))))
        n += d.size
    mse = err / n
    if mse == 0:
        return float("inf")
    return 10 * np.log10(peak * peak / mse)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--channels", type=int, default=16)
    ap.add_argument("--size", type=int, default=32)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    group = make_group(rng, args.channels, args.size)

    print(f"{'codec':<6} {'qp':>3} {'prune':>5} {'bytes':>8} {'psnr_db':>8}")
    for codec, name in ((CodecId.RAW_LOSSLESS, "raw"), (CodecId.BLOCK_DCT, "dct")):
        for qp in (4, 22, 40):
            for ratio in (0.0, 0.25, 0.5):
                cfg = EncoderConfig(prune_ratio=ratio, codec=codec, qp=qp)
                stream = fcm_encode(group, cfg)
                decoded = fcm_decode(stream)
                print(
                    f"{name:<6} {qp:>3} {ratio:>5.2f} {len(stream):>8} "
                    f"{group_psnr(group, decoded):>8.2f}"
                )
            if codec == CodecId.RAW_LOSSLESS:
                break  # qp does not affect the lossless path


if __name__ == "__main__":
    main()
