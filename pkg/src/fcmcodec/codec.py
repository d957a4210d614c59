"""Pluggable inner frame codec with two built-ins.

RAW_LOSSLESS stores samples as little-endian u16 behind a deterministic
byte-compression pass (zlib, scheme id 0) and decodes bit-exactly. BLOCK_DCT
is a lossy intra codec: 8x8 orthonormal DCT, uniform scalar quantization with
qstep(qp) = 2^((qp-4)/6), zigzag scan, and (run, level) pairs coded with
exp-Golomb.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from scipy.fft import dctn, idctn

from .bits import BitReader, BitWriter
from .errors import DomainError, PayloadDecodeError, TruncatedError

BLOCK = 8


class CodecId(IntEnum):
    RAW_LOSSLESS = 0
    BLOCK_DCT = 1


@dataclass(frozen=True)
class EncodedPayload:
    codec: int
    qp: int
    data: bytes

    def __post_init__(self):
        if not 0 <= self.qp <= 63:
            raise DomainError(f"qp must be in [0, 63], got {self.qp}")


def qstep(qp: int) -> float:
    """Quantization step; doubles every 6 qp, equal to 1 at qp=4."""
    return 2.0 ** ((qp - 4) / 6.0)


def dct_block_forward(block: np.ndarray) -> np.ndarray:
    """Orthonormal type-II DCT of one 8x8 block."""
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (BLOCK, BLOCK):
        raise DomainError(f"expected an 8x8 block, got {block.shape}")
    return dctn(block, type=2, norm="ortho")


def dct_block_inverse(block: np.ndarray) -> np.ndarray:
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (BLOCK, BLOCK):
        raise DomainError(f"expected an 8x8 block, got {block.shape}")
    return idctn(block, type=2, norm="ortho")


def _zigzag_order(n: int = BLOCK) -> np.ndarray:
    coords = sorted(
        ((r, c) for r in range(n) for c in range(n)),
        key=lambda rc: (rc[0] + rc[1], rc[1] if (rc[0] + rc[1]) % 2 else rc[0]),
    )
    flat = [r * n + c for r, c in coords]
    return np.asarray(flat, dtype=np.int64)


ZIGZAG = _zigzag_order()


def _signed_to_ue(level: int) -> int:
    # 1 -> 1, -1 -> 2, 2 -> 3, -2 -> 4, ...
    return 2 * level - 1 if level > 0 else -2 * level


def _ue_to_signed(m: int) -> int:
    return (m + 1) // 2 if m % 2 else -(m // 2)


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0, np.floor(x + 0.5), np.ceil(x - 0.5))


def _to_blocks(frame: np.ndarray) -> np.ndarray:
    """Pad by edge replication to block multiples and split into 8x8 blocks."""
    h, w = frame.shape
    ph = (-h) % BLOCK
    pw = (-w) % BLOCK
    padded = np.pad(frame, ((0, ph), (0, pw)), mode="edge")
    hb, wb = padded.shape[0] // BLOCK, padded.shape[1] // BLOCK
    return padded.reshape(hb, BLOCK, wb, BLOCK).transpose(0, 2, 1, 3)


def _from_blocks(blocks: np.ndarray, h: int, w: int) -> np.ndarray:
    hb, wb = blocks.shape[:2]
    frame = blocks.transpose(0, 2, 1, 3).reshape(hb * BLOCK, wb * BLOCK)
    return frame[:h, :w]


def _encode_raw(frame: np.ndarray) -> bytes:
    samples = frame.astype("<u2").tobytes()
    return bytes([0]) + zlib.compress(samples, level=6)


def _decode_raw(data: bytes, shape: tuple[int, int]) -> np.ndarray:
    if not data:
        raise TruncatedError("empty lossless payload")
    if data[0] != 0:
        raise PayloadDecodeError(f"unknown byte-compression scheme {data[0]}")
    expected = shape[0] * shape[1] * 2
    d = zlib.decompressobj()
    try:
        raw = d.decompress(data[1:], expected + 1)
    except zlib.error as exc:
        raise PayloadDecodeError(f"corrupt lossless payload: {exc}") from exc
    if len(raw) != expected or d.unconsumed_tail or not d.eof:
        raise PayloadDecodeError("lossless payload length mismatch")
    return np.frombuffer(raw, dtype="<u2").reshape(shape).astype(np.uint16)


def _encode_dct(frame: np.ndarray, qp: int, bit_depth: int) -> bytes:
    step = qstep(qp)
    blocks = _to_blocks(frame.astype(np.float64))
    coeffs = dctn(blocks, type=2, norm="ortho", axes=(-2, -1))
    q = _round_half_away(coeffs / step).astype(np.int64)

    writer = BitWriter()
    flat = q.reshape(-1, BLOCK * BLOCK)[:, ZIGZAG]
    for row in flat:
        nz = np.nonzero(row)[0]
        writer.write_ue(len(nz))
        prev = -1
        for pos in nz:
            writer.write_ue(int(pos) - prev - 1)
            writer.write_ue(_signed_to_ue(int(row[pos])))
            prev = int(pos)
    return bytes([bit_depth]) + writer.getvalue()


def _decode_dct(data: bytes, qp: int, shape: tuple[int, int]) -> np.ndarray:
    if not data:
        raise TruncatedError("empty transform payload")
    bit_depth = data[0]
    if not 8 <= bit_depth <= 16:
        raise PayloadDecodeError(f"bad bit depth {bit_depth} in payload")
    h, w = shape
    hb = -(-h // BLOCK)
    wb = -(-w // BLOCK)
    step = qstep(qp)
    reader = BitReader(data[1:])
    flat = np.zeros((hb * wb, BLOCK * BLOCK), dtype=np.float64)
    for b in range(hb * wb):
        count = reader.read_ue()
        if count > BLOCK * BLOCK:
            raise PayloadDecodeError(f"block coefficient count {count} > 64")
        pos = -1
        for _ in range(count):
            pos += reader.read_ue() + 1
            if pos >= BLOCK * BLOCK:
                raise PayloadDecodeError("coefficient position past end of block")
            m = reader.read_ue()
            if m == 0:
                raise PayloadDecodeError("zero level in run-level pair")
            flat[b, ZIGZAG[pos]] = _ue_to_signed(m) * step
    blocks = flat.reshape(hb, wb, BLOCK, BLOCK)
    pixels = idctn(blocks, type=2, norm="ortho", axes=(-2, -1))
    frame = _from_blocks(pixels, h, w)
    frame = np.clip(_round_half_away(frame), 0, (1 << bit_depth) - 1)
    return frame.astype(np.uint16)


def codec_encode(frame: np.ndarray, codec: CodecId, qp: int = 22, bit_depth: int = 10) -> EncodedPayload:
    """Compress one integer frame."""
    frame = np.asarray(frame)
    if frame.ndim != 2:
        raise DomainError("expected a 2-d integer frame")
    if frame.max(initial=0) >= (1 << bit_depth):
        raise DomainError(f"samples exceed declared bit depth {bit_depth}")
    if codec == CodecId.RAW_LOSSLESS:
        return EncodedPayload(int(codec), qp, _encode_raw(frame))
    if codec == CodecId.BLOCK_DCT:
        return EncodedPayload(int(codec), qp, _encode_dct(frame, qp, bit_depth))
    raise DomainError(f"no codec registered for id {codec}")


def codec_decode(payload: EncodedPayload, expected_dims: tuple[int, int]) -> np.ndarray:
    """Decompress to exactly expected_dims, or raise a classified error."""
    h, w = expected_dims
    if h < 1 or w < 1:
        raise DomainError("expected dimensions must be positive")
    if payload.codec == CodecId.RAW_LOSSLESS:
        return _decode_raw(payload.data, (h, w))
    if payload.codec == CodecId.BLOCK_DCT:
        return _decode_dct(payload.data, payload.qp, (h, w))
    raise PayloadDecodeError(f"no codec registered for id {payload.codec}")
