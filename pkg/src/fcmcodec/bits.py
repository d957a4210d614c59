"""Bit-level I/O with order-0 exponential-Golomb codes.

MSB-first within each byte. A value v is written as the binary form of v+1
preceded by bit_length(v+1) - 1 zero bits.
"""

from __future__ import annotations

from .errors import PayloadDecodeError, TruncatedError

# Longest accepted exp-Golomb zero prefix; longer prefixes are treated as
# corruption rather than attempting a 2^64-scale value.
_MAX_UE_PREFIX = 64


class BitWriter:
    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._nbits = 0

    def write_bits(self, value: int, nbits: int) -> None:
        if value < 0 or (nbits < 64 and value >> nbits):
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        for shift in range(nbits - 1, -1, -1):
            self._acc = (self._acc << 1) | ((value >> shift) & 1)
            self._nbits += 1
            if self._nbits == 8:
                self._buf.append(self._acc)
                self._acc = 0
                self._nbits = 0

    def write_ue(self, value: int) -> None:
        if value < 0:
            raise ValueError("exp-Golomb encodes non-negative values only")
        v = value + 1
        n = v.bit_length()
        self.write_bits(0, n - 1)
        self.write_bits(v, n)

    def getvalue(self) -> bytes:
        out = bytearray(self._buf)
        if self._nbits:
            out.append(self._acc << (8 - self._nbits))
        return bytes(out)


class BitReader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0  # bit position

    def bits_left(self) -> int:
        return len(self._data) * 8 - self._pos

    def read_bits(self, nbits: int) -> int:
        if nbits > self.bits_left():
            raise TruncatedError("bitstream exhausted")
        out = 0
        pos = self._pos
        data = self._data
        for _ in range(nbits):
            out = (out << 1) | ((data[pos >> 3] >> (7 - (pos & 7))) & 1)
            pos += 1
        self._pos = pos
        return out

    def read_ue(self) -> int:
        zeros = 0
        while self.read_bits(1) == 0:
            zeros += 1
            if zeros > _MAX_UE_PREFIX:
                raise PayloadDecodeError("exp-Golomb prefix too long")
        return ((1 << zeros) | self.read_bits(zeros)) - 1 if zeros else 0


def expgolomb_write(value: int) -> bytes:
    """Standalone exp-Golomb encode of one value (zero-padded to a byte)."""
    w = BitWriter()
    w.write_ue(value)
    return w.getvalue()


def expgolomb_read(data: bytes) -> int:
    """Decode the first exp-Golomb value in data."""
    return BitReader(data).read_ue()
