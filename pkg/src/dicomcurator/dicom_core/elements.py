"""In-memory model for parsed DICOM data sets.

Values are stored close to the wire form: string VRs keep their strings
(DS/IS included — callers convert when they need numbers), binary numeric
VRs become tuples of ints/floats, sequences nest as tuples of item element
tuples, and anything byte-shaped stays ``bytes``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union

from .tags import (
    DicomTag,
    PIXEL_DATA,
    SERIES_INSTANCE_UID,
    SOP_INSTANCE_UID,
    STUDY_INSTANCE_UID,
    lookup_tag,
    tag_for_keyword,
)

# VRs whose value is decoded text.
TEXT_VRS = frozenset(
    {"AE", "AS", "CS", "DA", "DS", "DT", "IS", "LO", "LT", "PN", "SH", "ST", "TM",
     "UC", "UI", "UR", "UT"}
)
# Text VRs that never split on backslash (free text / URI).
UNSPLIT_TEXT_VRS = frozenset({"LT", "ST", "UT", "UR"})
# Explicit VR writes a 2-byte reserved field and 4-byte length for these.
LONG_HEADER_VRS = frozenset(
    {"OB", "OW", "OF", "OD", "OL", "OV", "SQ", "UC", "UR", "UT", "UN", "SV", "UV"}
)
# Fixed-width binary VRs: (struct format char, size).
BINARY_VR_FORMATS = {
    "US": ("H", 2),
    "SS": ("h", 2),
    "UL": ("I", 4),
    "SL": ("i", 4),
    "FL": ("f", 4),
    "FD": ("d", 8),
}
BYTES_VRS = frozenset({"OB", "OW", "OF", "OD", "OL", "OV", "UN", "SV", "UV"})

ItemElements = tuple["DataElement", ...]
ElementValue = Union[
    tuple[str, ...],
    tuple[int, ...],
    tuple[float, ...],
    tuple[ItemElements, ...],
    bytes,
]


@dataclass(frozen=True)
class DataElement:
    tag: DicomTag
    vr: str
    value: ElementValue

    @property
    def keyword(self) -> str:
        return lookup_tag(self.tag).keyword

    def first(self) -> Optional[Union[str, int, float]]:
        """First value, or None when empty/byte-valued/sequence."""
        if isinstance(self.value, bytes) or not self.value:
            return None
        head = self.value[0]
        if isinstance(head, tuple):
            return None
        return head

    def items(self) -> tuple[ItemElements, ...]:
        if self.vr != "SQ":
            return ()
        return self.value  # type: ignore[return-value]


@dataclass(frozen=True)
class PixelDescriptor:
    rows: int
    columns: int
    bits_allocated: int
    samples_per_pixel: int
    photometric: str
    pixel_representation: int
    number_of_frames: int


@dataclass(frozen=True)
class PixelPayload:
    descriptor: PixelDescriptor
    data: bytes
    vr: str = "OW"


# Flags a parse can attach to an object.  Closed set; tests assert on these.
FLAG_UNSUPPORTED_TRANSFER_SYNTAX = "unsupported_transfer_syntax"
FLAG_CHARSET_UNVERIFIED = "charset_unverified"
FLAG_DUPLICATE_TAGS = "duplicate_tags"
FLAG_PIXEL_DESCRIPTOR_INCOMPLETE = "pixel_descriptor_incomplete"
FLAG_NO_PREAMBLE = "no_preamble"
FLAG_NO_FILE_META = "no_file_meta"

EXPLICIT_VR_LE = "1.2.840.10008.1.2.1"
IMPLICIT_VR_LE = "1.2.840.10008.1.2"
SUPPORTED_TRANSFER_SYNTAXES = frozenset({EXPLICIT_VR_LE, IMPLICIT_VR_LE})


def _sorted_unique(elements: Iterable[DataElement]) -> tuple[tuple[DataElement, ...], bool]:
    seen: dict[DicomTag, DataElement] = {}
    dupes = False
    for el in elements:
        if el.tag in seen:
            dupes = True  # keep the first occurrence
            continue
        seen[el.tag] = el
    ordered = tuple(seen[t] for t in sorted(seen))
    return ordered, dupes


@dataclass(frozen=True)
class DicomObject:
    """One parsed data set: file meta, main elements, optional pixel payload."""

    elements: tuple[DataElement, ...]
    meta: tuple[DataElement, ...] = ()
    transfer_syntax_uid: str = EXPLICIT_VR_LE
    pixels: Optional[PixelPayload] = None
    flags: frozenset[str] = frozenset()
    _by_tag: dict = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "_by_tag", {el.tag: el for el in self.elements})

    def get(self, tag: DicomTag) -> Optional[DataElement]:
        return self._by_tag.get(tag)

    def get_value(self, tag: DicomTag) -> Optional[Union[str, int, float]]:
        el = self._by_tag.get(tag)
        return el.first() if el is not None else None

    def get_values(self, tag: DicomTag) -> tuple:
        """All values of a non-sequence, non-byte element; () otherwise."""
        el = self._by_tag.get(tag)
        if el is None or el.vr == "SQ" or isinstance(el.value, bytes):
            return ()
        return el.value

    def __iter__(self) -> Iterator[DataElement]:
        return iter(self.elements)

    def __contains__(self, tag: DicomTag) -> bool:
        return tag in self._by_tag

    @property
    def transfer_syntax(self) -> Optional[str]:
        """"ExplicitVRLittleEndian" / "ImplicitVRLittleEndian", None if foreign."""
        if self.transfer_syntax_uid == EXPLICIT_VR_LE:
            return "ExplicitVRLittleEndian"
        if self.transfer_syntax_uid == IMPLICIT_VR_LE:
            return "ImplicitVRLittleEndian"
        return None

    @property
    def sop_instance_uid(self) -> Optional[str]:
        v = self.get_value(SOP_INSTANCE_UID)
        return v if isinstance(v, str) else None

    @property
    def series_instance_uid(self) -> Optional[str]:
        v = self.get_value(SERIES_INSTANCE_UID)
        return v if isinstance(v, str) else None

    @property
    def study_instance_uid(self) -> Optional[str]:
        v = self.get_value(STUDY_INSTANCE_UID)
        return v if isinstance(v, str) else None


def make_object(
    elements: Iterable[DataElement],
    *,
    meta: Iterable[DataElement] = (),
    transfer_syntax_uid: str = EXPLICIT_VR_LE,
    pixels: Optional[PixelPayload] = None,
    flags: Iterable[str] = (),
) -> DicomObject:
    """Normalize and build: elements sorted by tag, first-wins on duplicates."""
    ordered, dupes = _sorted_unique(elements)
    meta_ordered, _ = _sorted_unique(meta)
    flagset = frozenset(flags) | ({FLAG_DUPLICATE_TAGS} if dupes else frozenset())
    return DicomObject(
        elements=ordered,
        meta=meta_ordered,
        transfer_syntax_uid=transfer_syntax_uid,
        pixels=pixels,
        flags=flagset,
    )


def format_ds(x: float) -> str:
    """Decimal string within DICOM's 16-byte budget, round-trippable for
    the magnitudes this package produces."""
    if x == int(x) and abs(x) < 1e14:
        return str(int(x))
    s = repr(float(x))
    if len(s) <= 16:
        return s
    s = f"{x:.10g}"
    if len(s) <= 16:
        return s
    return f"{x:.8g}"


def el(keyword_or_tag: Union[str, DicomTag], *values, vr: Optional[str] = None) -> DataElement:
    """Element builder for tests and synthetic objects.

    ``el("Modality", "CT")``, ``el("Rows", 4)``, ``el(T(0x0009,0x0001), b"x", vr="OB")``.
    Sequence items are passed as tuples/lists of elements.
    """
    if isinstance(keyword_or_tag, str):
        tag = tag_for_keyword(keyword_or_tag)
        if tag is None:
            raise KeyError(f"unknown keyword: {keyword_or_tag}")
    else:
        tag = keyword_or_tag
    if vr is None:
        vr = lookup_tag(tag).vr
    if vr == "SQ":
        items = tuple(tuple(item) for item in values)
        return DataElement(tag, vr, items)
    if len(values) == 1 and isinstance(values[0], bytes):
        return DataElement(tag, vr, values[0])
    if len(values) == 1 and isinstance(values[0], (list, tuple)):
        values = tuple(values[0])
    if vr in TEXT_VRS:
        converted: list[str] = []
        for v in values:
            if isinstance(v, float) and vr == "DS":
                converted.append(format_ds(v))
            else:
                converted.append(str(v))
        return DataElement(tag, vr, tuple(converted))
    if vr in BINARY_VR_FORMATS:
        if vr in ("FL", "FD"):
            return DataElement(tag, vr, tuple(float(v) for v in values))
        return DataElement(tag, vr, tuple(int(v) for v in values))
    if vr == "AT":
        packed = []
        for v in values:
            if isinstance(v, DicomTag):
                packed.append((v.group << 16) | v.element)
            else:
                packed.append(int(v))
        return DataElement(tag, vr, tuple(packed))
    raise ValueError(f"cannot build element for VR {vr} from {values!r}")


def element_values_equal(a: DataElement, b: DataElement) -> bool:
    return a.tag == b.tag and a.vr == b.vr and a.value == b.value
