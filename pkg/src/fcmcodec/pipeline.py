"""End-to-end encoder and decoder orchestration.

Encoder, per tensor: capture global stats, forward transform, prune low-energy
channels, capture reduced stats, pack, quantize, inner-codec encode, emit one
unit. Decoder runs the chain in reverse, with two refinement stages pulling
the decoded data back onto the transmitted statistics.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitstream import UnitHeader, parse_stream, serialize_stream
from .channels import PruneDecision, prune_channels, restore_channels, score_channels, select_pruned
from .codec import CodecId, EncodedPayload, codec_decode, codec_encode
from .conversion import ConversionParams, dequantize_frame, quantize_frame
from .errors import DomainError, FcmError
from .lcr import ChannelIndexSet, LcrCode, lcr_decode, lcr_encode
from .packing import pack, unpack
from .tensor import (
    FeatureTensor,
    GlobalStats,
    TensorGroup,
    apply_refinement,
    compute_global_stats,
)


@dataclass(frozen=True)
class TransformStage:
    """Pluggable dimensionality-reduction hook (forward/inverse pair)."""

    identifier: str
    forward: callable
    inverse: callable


def _meanpool_forward(t: FeatureTensor) -> FeatureTensor:
    if t.height % 2 or t.width % 2:
        raise DomainError("mean-pool transform requires even spatial dimensions")
    x = t.data.astype(np.float64)
    c, h, w = t.shape
    pooled = x.reshape(c, h // 2, 2, w // 2, 2).mean(axis=(2, 4))
    return FeatureTensor(pooled.astype(np.float32))


def _meanpool_inverse(t: FeatureTensor) -> FeatureTensor:
    up = np.repeat(np.repeat(t.data, 2, axis=1), 2, axis=2)
    return FeatureTensor(up)


TRANSFORMS: dict[str, TransformStage] = {
    "identity": TransformStage("identity", lambda t: t, lambda t: t),
    "meanpool2x": TransformStage("meanpool2x", _meanpool_forward, _meanpool_inverse),
}


@dataclass(frozen=True)
class EncoderConfig:
    prune_ratio: float = 0.0
    bit_depth: int = 10
    codec: CodecId = CodecId.RAW_LOSSLESS
    qp: int = 22
    transform: str = "identity"

    def __post_init__(self):
        if not 0.0 <= self.prune_ratio < 1.0:
            raise DomainError(f"prune_ratio must be in [0, 1), got {self.prune_ratio}")
        if not 8 <= self.bit_depth <= 16:
            raise DomainError(f"bit_depth must be in [8, 16], got {self.bit_depth}")
        if not 0 <= self.qp <= 63:
            raise DomainError(f"qp must be in [0, 63], got {self.qp}")
        if self.transform not in TRANSFORMS:
            raise DomainError(f"unknown transform {self.transform!r}")


@dataclass(frozen=True)
class DecodedUnitInfo:
    """Per-unit decode diagnostics (transmitted vs. achieved statistics)."""

    header: UnitHeader
    reduced_stats: GlobalStats
    final_stats: GlobalStats


def _encode_one(t: FeatureTensor, cfg: EncoderConfig) -> tuple[UnitHeader, bytes]:
    stage = TRANSFORMS[cfg.transform]
    stats = compute_global_stats(t)
    xt = stage.forward(t)

    decision = select_pruned(score_channels(xt), cfg.prune_ratio)
    reduced = prune_channels(xt, decision) if decision.pruned.indices else xt
    reduced_stats = compute_global_stats(reduced)

    frame, layout = pack(reduced)
    qframe, params = quantize_frame(frame, cfg.bit_depth)
    payload = codec_encode(qframe, cfg.codec, cfg.qp, cfg.bit_depth)
    header = UnitHeader(
        original_channels=xt.channels,
        pruned_k=len(decision.pruned),
        lcr_rank=lcr_encode(decision.pruned).rank,
        transform_stats=stats,
        reduced_stats=reduced_stats,
        bit_depth=cfg.bit_depth,
        conv_min=params.min_val,
        conv_max=params.max_val,
        layout=layout,
        codec=int(cfg.codec),
        qp=cfg.qp,
    )
    return header, payload.data


def fcm_encode(group: TensorGroup, cfg: EncoderConfig, workers: int = 1) -> bytes:
    """Encode a tensor group into one FCMB stream (deterministic byte output).

    Units are always emitted in input order, so the stream is byte-identical
    for any worker count.
    """
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            units = list(pool.map(lambda t: _encode_one(t, cfg), group.tensors))
    else:
        units = [_encode_one(t, cfg) for t in group.tensors]
    return serialize_stream(units)


def _decode_one(header: UnitHeader, payload: bytes, stage: TransformStage) -> tuple[FeatureTensor, DecodedUnitInfo]:
    lay = header.layout
    qframe = codec_decode(
        EncodedPayload(header.codec, header.qp, payload),
        (lay.frame_height, lay.frame_width),
    )
    params = ConversionParams(header.bit_depth, header.conv_min, header.conv_max)
    frame = dequantize_frame(qframe, params)
    reduced = unpack(frame, lay)
    refined = apply_refinement(reduced, header.reduced_stats)
    reduced_stats = compute_global_stats(refined)

    if header.pruned_k:
        pruned = lcr_decode(
            LcrCode(header.pruned_k, header.lcr_rank), header.original_channels
        )
        restored = restore_channels(refined, PruneDecision(pruned))
    else:
        restored = refined
    inv = stage.inverse(restored)
    final = apply_refinement(inv, header.transform_stats)
    info = DecodedUnitInfo(header, reduced_stats, compute_global_stats(final))
    return final, info


def fcm_decode_with_info(data: bytes, transform: str = "identity") -> tuple[TensorGroup, list[DecodedUnitInfo]]:
    """Decode a stream, returning the group plus per-unit diagnostics.

    The transform identifier is not carried in the stream; the caller must
    name the same stage the encoder used.
    """
    if transform not in TRANSFORMS:
        raise DomainError(f"unknown transform {transform!r}")
    stage = TRANSFORMS[transform]
    tensors = []
    infos = []
    for i, (header, payload) in enumerate(parse_stream(data)):
        try:
            tensor, info = _decode_one(header, payload, stage)
        except FcmError as exc:
            raise type(exc)(f"unit {i}: {exc}") from exc
        tensors.append(tensor)
        infos.append(info)
    return TensorGroup(tuple(tensors)), infos


def fcm_decode(data: bytes, transform: str = "identity") -> TensorGroup:
    group, _ = fcm_decode_with_info(data, transform)
    return group
