"""Minimal PNG writer and reader for 8-bit truecolor images.

The writer emits the simplest valid stream: filter type 0 on
every scanline, no interlacing, and a zlib stream made of stored
(uncompressed) deflate blocks. Only the checksums come from zlib.
Output is fully deterministic: the same pixels always produce the same
bytes regardless of zlib version.

The reader handles exactly what the writer produces plus standard
filters 0..2, enough for tests to round-trip and inspect pixels.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

SIGNATURE = b"\x89PNG\r\n\x1a\n"

# stored deflate blocks carry at most 65535 bytes each
_STORE_MAX = 0xFFFF


class PngFormatError(Exception):
    pass


def _chunk(kind: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(kind + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + kind + payload + struct.pack(">I", crc)


def _stored_zlib(raw: bytes) -> bytes:
    # 0x78 0x01: 32K window, no preset dictionary, fastest flevel hint
    out = bytearray(b"\x78\x01")
    view = memoryview(raw)
    offset = 0
    total = len(raw)
    while True:
        size = min(_STORE_MAX, total - offset)
        final = 1 if offset + size >= total else 0
        out.append(final)
        out += struct.pack("<HH", size, size ^ 0xFFFF)
        out += view[offset:offset + size]
        offset += size
        if final:
            break
    out += struct.pack(">I", zlib.adler32(raw) & 0xFFFFFFFF)
    return bytes(out)


def encode_png(image: np.ndarray) -> bytes:
    """Encode an (H, W, 3) uint8 array as a truecolor PNG."""
    if image.ndim == 2:
        image = np.repeat(image[:, :, np.newaxis], 3, axis=2)
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise PngFormatError("expected an (H, W, 3) uint8 array")
    height, width = image.shape[:2]
    if height == 0 or width == 0:
        raise PngFormatError("image must not be empty")

    ihdr = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    raw = bytearray()
    contiguous = np.ascontiguousarray(image)
    for r in range(height):
        raw.append(0)
        raw += contiguous[r].tobytes()

    return b"".join([
        SIGNATURE,
        _chunk(b"IHDR", ihdr),
        _chunk(b"IDAT", _stored_zlib(bytes(raw))),
        _chunk(b"IEND", b""),
    ])


def _unfilter(kind: int, line: bytearray, prev: bytes, bpp: int):
    if kind == 0:
        return
    if kind == 1:
        for i in range(bpp, len(line)):
            line[i] = (line[i] + line[i - bpp]) & 0xFF
    elif kind == 2:
        for i in range(len(line)):
            line[i] = (line[i] + prev[i]) & 0xFF
    else:
        raise PngFormatError(f"unsupported scanline filter {kind}")


def decode_png(data: bytes) -> np.ndarray:
    """Decode a truecolor PNG produced by encode_png into (H, W, 3) uint8."""
    if not data.startswith(SIGNATURE):
        raise PngFormatError("bad PNG signature")
    pos = len(SIGNATURE)
    width = height = None
    idat = bytearray()
    while pos + 8 <= len(data):
        length, = struct.unpack_from(">I", data, pos)
        kind = data[pos + 4:pos + 8]
        payload = data[pos + 8:pos + 8 + length]
        pos += 12 + length
        if kind == b"IHDR":
            width, height, depth, color, comp, filt, interlace = struct.unpack(
                ">IIBBBBB", payload)
            if depth != 8 or color != 2:
                raise PngFormatError("only 8-bit truecolor is supported")
            if interlace != 0:
                raise PngFormatError("interlaced PNG is not supported")
        elif kind == b"IDAT":
            idat += payload
        elif kind == b"IEND":
            break
    if width is None:
        raise PngFormatError("missing IHDR")

    raw = zlib.decompress(bytes(idat))
    stride = width * 3
    if len(raw) != (stride + 1) * height:
        raise PngFormatError("IDAT size does not match dimensions")
    out = np.empty((height, width, 3), dtype=np.uint8)
    prev = bytes(stride)
    for r in range(height):
        start = r * (stride + 1)
        line = bytearray(raw[start + 1:start + 1 + stride])
        _unfilter(raw[start], line, prev, 3)
        out[r] = np.frombuffer(bytes(line), dtype=np.uint8).reshape(width, 3)
        prev = bytes(line)
    return out
