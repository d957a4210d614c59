"""The FCMB container: one self-delimiting unit per coded tensor.

Stream layout: magic `FCMB`, version u8, unit count u16, then units. All
multi-byte integers are little-endian, except the combination rank, which is
a u16-length-prefixed big-endian big integer (length 0 means rank 0).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import (
    InvariantError,
    MagicMismatchError,
    TruncatedError,
    VersionError,
)
from .lcr import binomial
from .packing import PackingLayout
from .tensor import GlobalStats

STREAM_MAGIC = b"FCMB"
STREAM_VERSION = 1

_U16_MAX = 0xFFFF


@dataclass(frozen=True)
class UnitHeader:
    """All metadata one unit transmits alongside its inner-codec payload."""

    original_channels: int
    pruned_k: int
    lcr_rank: int
    transform_stats: GlobalStats
    reduced_stats: GlobalStats
    bit_depth: int
    conv_min: float
    conv_max: float
    layout: PackingLayout
    codec: int
    qp: int

    def __post_init__(self):
        if not 0 < self.original_channels <= _U16_MAX:
            raise InvariantError("original channel count out of range")
        if not 0 <= self.pruned_k <= self.original_channels:
            raise InvariantError("pruned_k exceeds channel count")
        if not 0 <= self.lcr_rank < binomial(self.original_channels, self.pruned_k):
            raise InvariantError("rank outside [0, C(N, k))")
        if not 8 <= self.bit_depth <= 16:
            raise InvariantError("bit depth outside [8, 16]")
        if not 0 <= self.codec <= 255 or not 0 <= self.qp <= 63:
            raise InvariantError("codec id or qp out of range")


def _rank_bytes(rank: int) -> bytes:
    if rank == 0:
        return b""
    return rank.to_bytes((rank.bit_length() + 7) // 8, "big")


def serialize_unit(header: UnitHeader, payload: bytes) -> bytes:
    rank = _rank_bytes(header.lcr_rank)
    lay = header.layout
    for dim in (lay.grid_rows, lay.grid_cols, lay.tile_h, lay.tile_w, lay.channel_count):
        if dim > _U16_MAX:
            raise InvariantError("layout field exceeds u16 range")
    parts = [
        struct.pack("<HH", header.original_channels, header.pruned_k),
        struct.pack("<H", len(rank)),
        rank,
        struct.pack("<ff", header.transform_stats.mu, header.transform_stats.sigma),
        struct.pack("<ff", header.reduced_stats.mu, header.reduced_stats.sigma),
        struct.pack("<B", header.bit_depth),
        struct.pack("<ff", header.conv_min, header.conv_max),
        struct.pack(
            "<HHHHH", lay.grid_rows, lay.grid_cols, lay.tile_h, lay.tile_w, lay.channel_count
        ),
        struct.pack("<H", len(lay.permutation)),
        b"".join(struct.pack("<H", p) for p in lay.permutation),
        struct.pack("<BB", header.codec, header.qp),
        struct.pack("<I", len(payload)),
        payload,
    ]
    return b"".join(parts)


def parse_unit(data: bytes, offset: int = 0) -> tuple[UnitHeader, bytes, int]:
    """Parse one unit starting at offset; returns (header, payload, consumed)."""
    pos = offset

    def take(n: int) -> bytes:
        nonlocal pos
        if pos + n > len(data):
            raise TruncatedError(f"unit truncated at byte {pos} (need {n} more)")
        out = data[pos : pos + n]
        pos += n
        return out

    n_channels, k = struct.unpack("<HH", take(4))
    (rank_len,) = struct.unpack("<H", take(2))
    rank = int.from_bytes(take(rank_len), "big")
    mu, sigma = struct.unpack("<ff", take(8))
    mu_x, sigma_x = struct.unpack("<ff", take(8))
    (bit_depth,) = struct.unpack("<B", take(1))
    conv_min, conv_max = struct.unpack("<ff", take(8))
    gr, gc, th, tw, cc = struct.unpack("<HHHHH", take(10))
    (perm_len,) = struct.unpack("<H", take(2))
    perm = struct.unpack(f"<{perm_len}H", take(2 * perm_len)) if perm_len else ()
    codec, qp = struct.unpack("<BB", take(2))
    (payload_len,) = struct.unpack("<I", take(4))
    payload = take(payload_len)

    def invariant(cond: bool, msg: str) -> None:
        if not cond:
            raise InvariantError(msg)

    invariant(sigma >= 0 and sigma_x >= 0, "negative transmitted sigma")
    for v in (mu, sigma, mu_x, sigma_x, conv_min, conv_max):
        invariant(v == v and abs(v) != float("inf"), "non-finite transmitted value")
    invariant(conv_min <= conv_max, "conversion min exceeds max")
    invariant(qp <= 63, "qp out of range")
    invariant(min(gr, gc, th, tw) >= 1, "zero layout dimension")
    invariant(1 <= cc <= gr * gc, "layout cannot hold its channel count")
    invariant(perm_len in (0, cc), "bad rearrangement permutation length")
    try:
        header = UnitHeader(
            original_channels=n_channels,
            pruned_k=k,
            lcr_rank=rank,
            transform_stats=GlobalStats(mu, sigma),
            reduced_stats=GlobalStats(mu_x, sigma_x),
            bit_depth=bit_depth,
            conv_min=conv_min,
            conv_max=conv_max,
            layout=PackingLayout(gr, gc, th, tw, cc, perm),
            codec=codec,
            qp=qp,
        )
    except InvariantError:
        raise
    except Exception as exc:
        raise InvariantError(f"invalid unit header: {exc}") from exc
    return header, payload, pos - offset


def serialize_stream(units: list[tuple[UnitHeader, bytes]]) -> bytes:
    if not 1 <= len(units) <= _U16_MAX:
        raise InvariantError("stream must contain 1-65535 units")
    head = STREAM_MAGIC + struct.pack("<BH", STREAM_VERSION, len(units))
    return head + b"".join(serialize_unit(h, p) for h, p in units)


def parse_stream(data: bytes) -> list[tuple[UnitHeader, bytes]]:
    if len(data) < 7:
        raise TruncatedError("stream shorter than its fixed header")
    if data[:4] != STREAM_MAGIC:
        raise MagicMismatchError("not an FCMB stream (bad magic)")
    version, count = struct.unpack("<BH", data[4:7])
    if version != STREAM_VERSION:
        raise VersionError(f"unsupported stream version {version}")
    if count == 0:
        raise InvariantError("stream declares zero units")
    pos = 7
    units = []
    for _ in range(count):
        header, payload, consumed = parse_unit(data, pos)
        units.append((header, payload))
        pos += consumed
    if pos != len(data):
        raise InvariantError(f"{len(data) - pos} trailing bytes after last unit")
    return units
