"""Part-10 serializer.

Writes the object's own transfer syntax (file meta is always Explicit VR
Little Endian, as the standard requires).  Sequences and items get defined
lengths, values are padded to even length, elements come out in tag order.
"""

from __future__ import annotations

import struct
from typing import Iterable

from .elements import (
    BINARY_VR_FORMATS,
    DataElement,
    DicomObject,
    EXPLICIT_VR_LE,
    IMPLICIT_VR_LE,
    LONG_HEADER_VRS,
    SUPPORTED_TRANSFER_SYNTAXES,
    TEXT_VRS,
)
from .errors import UnsupportedTransferSyntax
from .parser import _CHARSETS  # single source of truth for charset terms
from .tags import DicomTag, ITEM, PIXEL_DATA, SPECIFIC_CHARACTER_SET, T


def _encoding_for(elements: Iterable[DataElement]) -> str:
    for el in elements:
        if el.tag == SPECIFIC_CHARACTER_SET and isinstance(el.value, tuple) and el.value:
            return _CHARSETS.get(str(el.value[0]), "latin-1")
    return "utf-8"


def _encode_value(el: DataElement, encoding: str, explicit: bool) -> bytes:
    vr = el.vr
    if isinstance(el.value, bytes):
        raw = el.value
        pad = b"\x00"
    elif vr == "SQ":
        raw = b"".join(_encode_item(item, encoding, explicit) for item in el.items())
        return raw  # item framing is already even
    elif vr in TEXT_VRS:
        text = "\\".join(str(v) for v in el.value)
        codec = "ascii" if vr == "UI" else encoding
        raw = text.encode(codec, errors="replace")
        pad = b"\x00" if vr == "UI" else b" "
    elif vr in BINARY_VR_FORMATS:
        fmt, _ = BINARY_VR_FORMATS[vr]
        raw = struct.pack(f"<{len(el.value)}{fmt}", *el.value)
        pad = b"\x00"
    elif vr == "AT":
        parts = []
        for packed in el.value:
            parts.append(struct.pack("<HH", (packed >> 16) & 0xFFFF, packed & 0xFFFF))
        raw = b"".join(parts)
        pad = b"\x00"
    else:
        raise UnsupportedTransferSyntax(f"cannot encode VR {vr!r} for {el.tag}")
    if len(raw) % 2:
        raw += pad
    return raw


def _encode_header(tag: DicomTag, vr: str, length: int, explicit: bool) -> bytes:
    if not explicit:
        return struct.pack("<HHI", tag.group, tag.element, length)
    if vr in LONG_HEADER_VRS:
        return struct.pack("<HH2sHI", tag.group, tag.element, vr.encode("ascii"), 0, length)
    if length > 0xFFFF:
        raise ValueError(f"value of {tag} ({length} bytes) exceeds the short-header limit")
    return struct.pack("<HH2sH", tag.group, tag.element, vr.encode("ascii"), length)


def _encode_element(el: DataElement, encoding: str, explicit: bool) -> bytes:
    body = _encode_value(el, encoding, explicit)
    return _encode_header(el.tag, el.vr, len(body), explicit) + body


def _encode_item(item: tuple[DataElement, ...], encoding: str, explicit: bool) -> bytes:
    body = b"".join(_encode_element(e, encoding, explicit) for e in item)
    return struct.pack("<HHI", ITEM.group, ITEM.element, len(body)) + body


def _encode_dataset(elements: Iterable[DataElement], explicit: bool) -> bytes:
    elements = tuple(elements)
    encoding = _encoding_for(elements)
    return b"".join(_encode_element(e, encoding, explicit) for e in elements)


def serialize(obj: DicomObject) -> bytes:
    ts = obj.transfer_syntax_uid
    if ts not in SUPPORTED_TRANSFER_SYNTAXES:
        raise UnsupportedTransferSyntax(
            f"cannot serialize transfer syntax {ts!r}; supported: "
            f"{sorted(SUPPORTED_TRANSFER_SYNTAXES)}"
        )
    explicit = ts == EXPLICIT_VR_LE

    meta = [m for m in obj.meta if m.tag != T(0x0002, 0x0000)]
    if not any(m.tag == T(0x0002, 0x0010) for m in meta):
        meta.append(DataElement(T(0x0002, 0x0010), "UI", (ts,)))
    meta.sort(key=lambda m: m.tag)
    meta_body = _encode_dataset(meta, explicit=True)
    group_length = _encode_element(
        DataElement(T(0x0002, 0x0000), "UL", (len(meta_body),)), "utf-8", True
    )

    elements = list(obj.elements)
    if obj.pixels is not None:
        elements = [e for e in elements if e.tag != PIXEL_DATA]
        elements.append(DataElement(PIXEL_DATA, obj.pixels.vr, obj.pixels.data))
        elements.sort(key=lambda e: e.tag)
    body = _encode_dataset(elements, explicit)

    return b"\x00" * 128 + b"DICM" + group_length + meta_body + body
