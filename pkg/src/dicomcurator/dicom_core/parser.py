"""Reader for DICOM Part-10 files and headerless data sets.

Supported on the wire: Explicit and Implicit VR Little Endian.  Files in any
other transfer syntax still yield their metadata — the parser walks as far
as it safely can, skips pixel data, and flags the object instead of raising.
"""

from __future__ import annotations

import os
import struct
from typing import Optional, Union

from .elements import (
    BINARY_VR_FORMATS,
    BYTES_VRS,
    DataElement,
    DicomObject,
    EXPLICIT_VR_LE,
    FLAG_CHARSET_UNVERIFIED,
    FLAG_NO_FILE_META,
    FLAG_NO_PREAMBLE,
    FLAG_PIXEL_DESCRIPTOR_INCOMPLETE,
    FLAG_UNSUPPORTED_TRANSFER_SYNTAX,
    IMPLICIT_VR_LE,
    LONG_HEADER_VRS,
    PixelDescriptor,
    PixelPayload,
    SUPPORTED_TRANSFER_SYNTAXES,
    TEXT_VRS,
    UNSPLIT_TEXT_VRS,
    make_object,
)
from .errors import MalformedPreamble, TruncatedElement
from .tags import (
    DicomTag,
    ITEM,
    ITEM_DELIMITER,
    PIXEL_DATA,
    SEQUENCE_DELIMITER,
    SPECIFIC_CHARACTER_SET,
    TRANSFER_SYNTAX_UID,
    T,
    lookup_tag,
)

UNDEFINED_LENGTH = 0xFFFFFFFF

_KNOWN_VRS = frozenset(
    set(TEXT_VRS) | set(BINARY_VR_FORMATS) | set(LONG_HEADER_VRS) | {"AT", "SQ", "OB", "OW"}
)

# SpecificCharacterSet terms this parser decodes natively.
_CHARSETS = {
    "": "utf-8",
    "ISO_IR 192": "utf-8",
    "ISO_IR 100": "latin-1",
}


class _Ctx:
    """Mutable parse state: the buffer, cursor, text encoding, flags."""

    __slots__ = ("data", "pos", "encoding", "flags")

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.encoding = "utf-8"
        self.flags: set[str] = set()

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def need(self, n: int, what: str) -> None:
        if self.remaining() < n:
            raise TruncatedElement(self.pos, f"need {n} bytes for {what}, have {self.remaining()}")

    def u16(self) -> int:
        self.need(2, "uint16")
        v = struct.unpack_from("<H", self.data, self.pos)[0]
        self.pos += 2
        return v

    def u32(self) -> int:
        self.need(4, "uint32")
        v = struct.unpack_from("<I", self.data, self.pos)[0]
        self.pos += 4
        return v

    def take(self, n: int, what: str) -> bytes:
        self.need(n, what)
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def peek_tag(self) -> Optional[DicomTag]:
        if self.remaining() < 4:
            return None
        g, e = struct.unpack_from("<HH", self.data, self.pos)
        return DicomTag(g, e)


def _set_charset(ctx: _Ctx, terms: tuple[str, ...]) -> None:
    term = terms[0] if terms else ""
    codec = _CHARSETS.get(term)
    if codec is None:
        # Unrecognized term: fall back to a total decoding so parsing
        # always succeeds, but mark the object so callers know.
        codec = "latin-1"
        ctx.flags.add(FLAG_CHARSET_UNVERIFIED)
    ctx.encoding = codec


def _decode_text(ctx: _Ctx, vr: str, raw: bytes) -> tuple[str, ...]:
    if vr == "UI":
        text = raw.decode("ascii", errors="replace").rstrip("\x00 ")
    else:
        text = raw.decode(ctx.encoding, errors="replace").rstrip(" \x00")
    if not text:
        return ()
    if vr in UNSPLIT_TEXT_VRS:
        return (text,)
    return tuple(text.split("\\"))


def _decode_binary(vr: str, raw: bytes):
    fmt, size = BINARY_VR_FORMATS[vr]
    count = len(raw) // size  # lenient: ignore a ragged tail
    return struct.unpack_from(f"<{count}{fmt}", raw, 0)


def _decode_at(raw: bytes) -> tuple[int, ...]:
    count = len(raw) // 4
    out = []
    for i in range(count):
        g, e = struct.unpack_from("<HH", raw, i * 4)
        out.append((g << 16) | e)
    return tuple(out)


def _read_header(ctx: _Ctx, explicit: bool) -> tuple[DicomTag, str, int]:
    """One element header: (tag, vr, length).  Length may be UNDEFINED_LENGTH."""
    start = ctx.pos
    ctx.need(8, "element header")
    group = ctx.u16()
    element = ctx.u16()
    tag = DicomTag(group, element)
    if group == 0xFFFE:
        # Item/delimiter headers carry no VR in either syntax.
        length = ctx.u32()
        return tag, "", length
    if explicit:
        vr_bytes = ctx.take(2, "VR")
        vr = vr_bytes.decode("ascii", errors="replace")
        if not vr.isalpha() or not vr.isupper():
            raise TruncatedElement(start, f"invalid VR bytes {vr_bytes!r} at offset {start}")
        if vr in LONG_HEADER_VRS:
            ctx.u16()  # reserved
            length = ctx.u32()
        else:
            length = ctx.u16()
    else:
        vr = lookup_tag(tag).vr
        length = ctx.u32()
        if length == UNDEFINED_LENGTH and vr not in ("SQ", "UN", "OW", "OB"):
            # Undefined length is only legal on sequences and pixel data;
            # a dictionary miss on an SQ tag would otherwise derail us.
            vr = "SQ"
    return tag, vr, length


def _parse_item_elements(ctx: _Ctx, explicit: bool, length: int) -> tuple[DataElement, ...]:
    if length == UNDEFINED_LENGTH:
        return _parse_elements(ctx, explicit, end=None, stop_at=ITEM_DELIMITER)
    end = ctx.pos + length
    if end > len(ctx.data):
        raise TruncatedElement(ctx.pos, f"item length {length} overruns buffer")
    return _parse_elements(ctx, explicit, end=end, stop_at=None)


def _parse_sequence(ctx: _Ctx, explicit: bool, length: int) -> tuple[tuple[DataElement, ...], ...]:
    items: list[tuple[DataElement, ...]] = []
    end = None if length == UNDEFINED_LENGTH else ctx.pos + length
    if end is not None and end > len(ctx.data):
        raise TruncatedElement(ctx.pos, f"sequence length {length} overruns buffer")
    while True:
        if end is not None:
            if ctx.pos >= end:
                break
        tag, _, item_len = _read_header(ctx, explicit)
        if tag == SEQUENCE_DELIMITER:
            break
        if tag != ITEM:
            raise TruncatedElement(ctx.pos - 8, f"expected item tag in sequence, got {tag}")
        items.append(_parse_item_elements(ctx, explicit, item_len))
    return tuple(items)


def _parse_fragments(ctx: _Ctx) -> bytes:
    """Undefined-length pixel data: concatenate fragments, skip the offset table."""
    chunks: list[bytes] = []
    first = True
    while True:
        tag, _, length = _read_header(ctx, True)
        if tag == SEQUENCE_DELIMITER:
            break
        if tag != ITEM or length == UNDEFINED_LENGTH:
            raise TruncatedElement(ctx.pos - 8, "malformed pixel data fragment list")
        frag = ctx.take(length, "pixel fragment")
        if not first:
            chunks.append(frag)
        first = False
    return b"".join(chunks)


def _parse_one(ctx: _Ctx, explicit: bool) -> Optional[DataElement]:
    tag, vr, length = _read_header(ctx, explicit)
    if tag.group == 0xFFFE:
        # Stray delimiter outside any container: treat as end of data.
        return None
    if vr == "SQ" or (vr == "UN" and length == UNDEFINED_LENGTH):
        # Undefined-length UN holds an implicit-VR sequence by convention.
        inner_explicit = explicit if vr == "SQ" else False
        items = _parse_sequence(ctx, inner_explicit, length)
        return DataElement(tag, "SQ", items)
    if tag == PIXEL_DATA and length == UNDEFINED_LENGTH:
        data = _parse_fragments(ctx)
        return DataElement(tag, vr if vr in ("OB", "OW") else "OW", data)
    if length == UNDEFINED_LENGTH:
        raise TruncatedElement(ctx.pos, f"undefined length on non-sequence element {tag}")
    raw = ctx.take(length, f"value of {tag}")
    if vr in TEXT_VRS:
        values = _decode_text(ctx, vr, raw)
        element = DataElement(tag, vr, values)
        if tag == SPECIFIC_CHARACTER_SET:
            _set_charset(ctx, values)  # affects every later text element
        return element
    if vr in BINARY_VR_FORMATS:
        return DataElement(tag, vr, _decode_binary(vr, raw))
    if vr == "AT":
        return DataElement(tag, vr, _decode_at(raw))
    # OB/OW/UN and anything unrecognized: keep the raw bytes.
    return DataElement(tag, vr if vr in BYTES_VRS or vr in ("OB", "OW") else "UN", raw)


def _parse_elements(
    ctx: _Ctx,
    explicit: bool,
    *,
    end: Optional[int],
    stop_at: Optional[DicomTag],
    stop_before_pixels: bool = False,
) -> tuple[DataElement, ...]:
    out: list[DataElement] = []
    while True:
        limit = end if end is not None else len(ctx.data)
        if ctx.pos >= limit:
            break
        nxt = ctx.peek_tag()
        if nxt is None:
            raise TruncatedElement(ctx.pos, "dangling bytes at end of data")
        if stop_at is not None and nxt == stop_at:
            _read_header(ctx, explicit)  # consume the delimiter
            break
        if stop_before_pixels and nxt == PIXEL_DATA:
            ctx.pos = limit  # length semantics unknown; drop the rest
            break
        el = _parse_one(ctx, explicit)
        if el is None:
            break
        out.append(el)
    return tuple(out)


def _looks_explicit(data: bytes, offset: int) -> bool:
    if len(data) < offset + 6:
        return False
    vr = data[offset + 4 : offset + 6]
    try:
        return vr.decode("ascii") in _KNOWN_VRS
    except UnicodeDecodeError:
        return False


def _sniff_headerless(data: bytes) -> Optional[bool]:
    """Explicit flag for a bare data set, or None when it isn't one."""
    if len(data) < 8:
        return None
    group = struct.unpack_from("<H", data, 0)[0]
    if group not in (0x0002, 0x0008):
        return None
    return _looks_explicit(data, 0)


def _parse_meta(ctx: _Ctx) -> tuple[DataElement, ...]:
    out: list[DataElement] = []
    while True:
        nxt = ctx.peek_tag()
        if nxt is None or nxt.group != 0x0002:
            break
        el = _parse_one(ctx, True)
        if el is None:
            break
        out.append(el)
    return tuple(out)


def _collect_pixels(
    elements: tuple[DataElement, ...], ctx: _Ctx
) -> tuple[tuple[DataElement, ...], Optional[PixelPayload]]:
    by_tag = {e.tag: e for e in elements}
    pix = by_tag.get(PIXEL_DATA)
    if pix is None or not isinstance(pix.value, bytes):
        return elements, None

    def ival(group: int, element: int) -> Optional[int]:
        e = by_tag.get(T(group, element))
        if e is None:
            return None
        v = e.first()
        if v is None:
            return None
        try:
            return int(v)
        except (TypeError, ValueError):
            return None

    rows = ival(0x0028, 0x0010)
    cols = ival(0x0028, 0x0011)
    bits = ival(0x0028, 0x0100)
    if rows is None or cols is None or bits is None:
        ctx.flags.add(FLAG_PIXEL_DESCRIPTOR_INCOMPLETE)
        return elements, None
    samples = ival(0x0028, 0x0002) or 1
    photometric = by_tag.get(T(0x0028, 0x0004))
    photo = str(photometric.first()) if photometric and photometric.first() else "MONOCHROME2"
    pixel_rep = ival(0x0028, 0x0103) or 0
    frames = ival(0x0028, 0x0008) or 1
    need = (rows * cols * bits * samples * frames + 7) // 8
    if len(pix.value) < need:
        ctx.flags.add(FLAG_PIXEL_DESCRIPTOR_INCOMPLETE)
        return elements, None
    data = pix.value[:need]  # drop even-length padding so the invariant holds
    desc = PixelDescriptor(
        rows=rows,
        columns=cols,
        bits_allocated=bits,
        samples_per_pixel=samples,
        photometric=photo,
        pixel_representation=pixel_rep,
        number_of_frames=frames,
    )
    kept = tuple(e for e in elements if e.tag != PIXEL_DATA)
    return kept, PixelPayload(descriptor=desc, data=data, vr=pix.vr)


def parse_bytes(data: bytes) -> DicomObject:
    ctx = _Ctx(data)
    has_preamble = len(data) >= 132 and data[128:132] == b"DICM"
    if has_preamble:
        ctx.pos = 132
        meta = _parse_meta(ctx)
    else:
        explicit_guess = _sniff_headerless(data)
        if explicit_guess is None:
            raise MalformedPreamble(
                "no DICM marker at offset 128 and the data does not start "
                "with a recognizable element"
            )
        ctx.flags.add(FLAG_NO_PREAMBLE)
        first = ctx.peek_tag()
        meta = _parse_meta(ctx) if first and first.group == 0x0002 else ()

    ts: Optional[str] = None
    for m in meta:
        if m.tag == TRANSFER_SYNTAX_UID and isinstance(m.value, tuple) and m.value:
            ts = str(m.value[0])
    if not meta:
        ctx.flags.add(FLAG_NO_FILE_META)
    if ts is None:
        ts = EXPLICIT_VR_LE if _looks_explicit(ctx.data, ctx.pos) else IMPLICIT_VR_LE

    supported = ts in SUPPORTED_TRANSFER_SYNTAXES
    explicit = ts != IMPLICIT_VR_LE
    if supported:
        elements = _parse_elements(ctx, explicit, end=None, stop_at=None)
    else:
        ctx.flags.add(FLAG_UNSUPPORTED_TRANSFER_SYNTAX)
        try:
            elements = _parse_elements(
                ctx, True, end=None, stop_at=None, stop_before_pixels=True
            )
        except TruncatedElement:
            # Foreign syntax defeated the walk; keep whatever parsed cleanly.
            elements = ()

    pixels = None
    if supported:
        elements, pixels = _collect_pixels(elements, ctx)
    else:
        elements = tuple(e for e in elements if e.tag != PIXEL_DATA)

    return make_object(
        elements,
        meta=meta,
        transfer_syntax_uid=ts,
        pixels=pixels,
        flags=ctx.flags,
    )


def parse_file(source: Union[str, os.PathLike, bytes]) -> DicomObject:
    """Parse a Part-10 file, a bare data set, or raw bytes."""
    if isinstance(source, bytes):
        return parse_bytes(source)
    with open(source, "rb") as fh:
        return parse_bytes(fh.read())
