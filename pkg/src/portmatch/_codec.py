"""Canonical byte encoding for weights, characters and small records.

Every value that ends up inside a matcher file or a prefix-tree key goes
through :func:`encode`, so equal values always produce equal bytes and the
byte order gives a total, platform-independent order on characters.

Supported values: ``None``, ``bool``, ``int`` (signed 64-bit), ``float``,
``str``, ``bytes`` and (nested) tuples or lists of those. Lists decode as
tuples.
"""
from __future__ import annotations

import struct
from typing import Any

_U32 = struct.Struct("<I")
_I64 = struct.Struct("<q")
_F64 = struct.Struct("<d")


class CodecError(ValueError):
    pass


def encode(value: Any) -> bytes:
    out = bytearray()
    _encode_into(value, out)
    return bytes(out)


def _encode_into(value: Any, out: bytearray) -> None:
    if value is None:
        out += b"N"
    elif value is True:
        out += b"T"
    elif value is False:
        out += b"F"
    elif isinstance(value, int):
        out += b"I"
        out += _I64.pack(value)
    elif isinstance(value, float):
        # -0.0 and 0.0 compare equal, so they must encode equally
        out += b"D"
        out += _F64.pack(value + 0.0)
    elif isinstance(value, str):
        raw = value.encode("utf-8")
        out += b"S"
        out += _U32.pack(len(raw))
        out += raw
    elif isinstance(value, (bytes, bytearray)):
        out += b"B"
        out += _U32.pack(len(value))
        out += value
    elif isinstance(value, (tuple, list)):
        out += b"U"
        out += _U32.pack(len(value))
        for item in value:
            _encode_into(item, out)
    else:
        raise CodecError(f"cannot encode value of type {type(value).__name__}")


def decode(data: bytes) -> Any:
    value, end = decode_from(data, 0)
    if end != len(data):
        raise CodecError("trailing bytes after encoded value")
    return value


def decode_from(data: bytes, pos: int) -> tuple[Any, int]:
    try:
        tag = data[pos : pos + 1]
        pos += 1
        if tag == b"N":
            return None, pos
        if tag == b"T":
            return True, pos
        if tag == b"F":
            return False, pos
        if tag == b"I":
            return _I64.unpack_from(data, pos)[0], pos + 8
        if tag == b"D":
            return _F64.unpack_from(data, pos)[0], pos + 8
        if tag in (b"S", b"B"):
            (n,) = _U32.unpack_from(data, pos)
            pos += 4
            raw = bytes(data[pos : pos + n])
            if len(raw) != n:
                raise CodecError("truncated string")
            return (raw.decode("utf-8") if tag == b"S" else raw), pos + n
        if tag == b"U":
            (n,) = _U32.unpack_from(data, pos)
            pos += 4
            items = []
            for _ in range(n):
                item, pos = decode_from(data, pos)
                items.append(item)
            return tuple(items), pos
    except struct.error as exc:
        raise CodecError("truncated value") from exc
    raise CodecError(f"unknown tag {tag!r} at offset {pos - 1}")


def freeze(value: Any) -> Any:
    """Turn lists into tuples recursively so the value is hashable."""
    if isinstance(value, list):
        return tuple(freeze(v) for v in value)
    if isinstance(value, tuple):
        return tuple(freeze(v) for v in value)
    return value


class Writer:
    """Little-endian binary writer used by the file formats."""

    def __init__(self) -> None:
        self.buf = bytearray()

    def u8(self, x: int) -> None:
        self.buf.append(x)

    def u32(self, x: int) -> None:
        self.buf += _U32.pack(x)

    def blob(self, raw: bytes) -> None:
        self.u32(len(raw))
        self.buf += raw

    def getvalue(self) -> bytes:
        return bytes(self.buf)


class Reader:
    def __init__(self, data: bytes, pos: int = 0, end: int | None = None) -> None:
        self.data = data
        self.pos = pos
        self.end = len(data) if end is None else end

    def _need(self, n: int) -> None:
        if self.pos + n > self.end:
            raise CodecError("unexpected end of data")

    def u8(self) -> int:
        self._need(1)
        x = self.data[self.pos]
        self.pos += 1
        return x

    def u32(self) -> int:
        self._need(4)
        (x,) = _U32.unpack_from(self.data, self.pos)
        self.pos += 4
        return x

    def blob(self) -> bytes:
        n = self.u32()
        self._need(n)
        raw = bytes(self.data[self.pos : self.pos + n])
        self.pos += n
        return raw
