"""Feature tensors, global statistics, refinement, and the FTNS container.

A feature tensor is a C x H x W grid of finite float32 values (channel-major).
Global statistics are the mean and the population standard deviation over all
elements; refinement is the affine map that forces a tensor's statistics onto
a transmitted target pair.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionOverflowError,
    DomainError,
    InvariantError,
    MagicMismatchError,
    TruncatedError,
    VersionError,
)

TENSOR_MAGIC = b"FTNS"
TENSOR_FORMAT_VERSION = 1

# Hard cap on C*H*W for a single tensor read from disk.
_MAX_ELEMENTS = 1 << 31


@dataclass(frozen=True)
class GlobalStats:
    """Mean and population standard deviation of a tensor."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.sigma)):
            raise DomainError("statistics must be finite")
        if self.sigma < 0:
            raise DomainError("sigma must be non-negative")


@dataclass(frozen=True)
class FeatureTensor:
    """Immutable C x H x W float32 tensor with all-finite values."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        if arr.ndim != 3:
            raise DomainError(f"expected a 3-d array, got {arr.ndim}-d")
        if min(arr.shape) < 1:
            raise DomainError(f"all dimensions must be >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor contains non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True)
class TensorGroup:
    """Ordered group of 1-8 tensors, e.g. the levels of a feature pyramid."""

    tensors: tuple[FeatureTensor, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        tensors = tuple(self.tensors)
        if not 1 <= len(tensors) <= 8:
            raise DomainError(f"group must hold 1-8 tensors, got {len(tensors)}")
        labels = tuple(self.labels) if self.labels else ("",) * len(tensors)
        if len(labels) != len(tensors):
            raise DomainError("one label per tensor required")
        for lbl in labels:
            if len(lbl.encode("utf-8")) > 255:
                raise DomainError(f"label too long: {lbl!r}")
        object.__setattr__(self, "tensors", tensors)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.tensors)


def compute_global_stats(t: FeatureTensor) -> GlobalStats:
    """Mean and population (biased) standard deviation over all elements.

    Accumulates in float64 regardless of tensor size.
    """
    flat = t.data.astype(np.float64, copy=False)
    mu = float(flat.mean())
    sigma = float(np.sqrt(np.mean((flat - mu) ** 2)))
    return GlobalStats(mu, sigma)


def apply_refinement(t: FeatureTensor, target: GlobalStats) -> FeatureTensor:
    """Affinely remap t so its global statistics become (target.mu, target.sigma).

    With a zero-spread input the normalized term is taken as 0, so the output
    is the constant target.mu.
    """
    current = compute_global_stats(t)
    x = t.data.astype(np.float64, copy=False)
    if current.sigma == 0.0:
        out = np.full(t.shape, target.mu, dtype=np.float64)
    else:
        out = target.sigma * (x - current.mu) / current.sigma + target.mu
    return FeatureTensor(out.astype(np.float32))


def write_tensor_file(path, group: TensorGroup) -> None:
    """Write a group to the FTNS container (bit-exact round-trip with read)."""
    chunks = [TENSOR_MAGIC, struct.pack("<BB", TENSOR_FORMAT_VERSION, len(group))]
    for tensor, label in zip(group.tensors, group.labels):
        lbl = label.encode("utf-8")
        chunks.append(struct.pack("<B", len(lbl)))
        chunks.append(lbl)
        chunks.append(struct.pack("<III", tensor.channels, tensor.height, tensor.width))
        chunks.append(tensor.data.astype("<f4", copy=False).tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))


def read_tensor_file(path) -> TensorGroup:
    """Read an FTNS container written by write_tensor_file."""
    with open(path, "rb") as fh:
        data = fh.read()
    return _parse_tensor_bytes(data)


def _parse_tensor_bytes(data: bytes) -> TensorGroup:
    pos = 0

    def take(n: int) -> bytes:
        nonlocal pos
        if pos + n > len(data):
            raise TruncatedError(f"tensor file truncated at byte {pos} (need {n} more)")
        out = data[pos : pos + n]
        pos += n
        return out

    if take(4) != TENSOR_MAGIC:
        raise MagicMismatchError("not an FTNS tensor file (bad magic)")
    version, count = struct.unpack("<BB", take(2))
    if version != TENSOR_FORMAT_VERSION:
        raise VersionError(f"unsupported tensor format version {version}")
    if not 1 <= count <= 8:
        raise InvariantError(f"tensor count {count} outside 1-8")

    tensors = []
    labels = []
    for _ in range(count):
        (lbl_len,) = struct.unpack("<B", take(1))
        try:
            label = take(lbl_len).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InvariantError(f"malformed label bytes: {exc}") from exc
        c, h, w = struct.unpack("<III", take(12))
        if min(c, h, w) < 1:
            raise DimensionOverflowError(f"zero dimension in tensor header ({c}x{h}x{w})")
        if c * h * w > _MAX_ELEMENTS:
            raise DimensionOverflowError(f"tensor {c}x{h}x{w} exceeds element cap")
        raw = take(c * h * w * 4)
        arr = np.frombuffer(raw, dtype="<f4").reshape(c, h, w)
        if not np.all(np.isfinite(arr)):
            raise InvariantError("tensor payload contains non-finite values")
        tensors.append(FeatureTensor(arr))
        labels.append(label)
    if pos != len(data):
        raise TruncatedError(f"{len(data) - pos} trailing bytes after last tensor")
    return TensorGroup(tuple(tensors), tuple(labels))
