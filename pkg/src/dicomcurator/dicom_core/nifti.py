"""NIfTI-1 single-file volumes converted into DICOM slice objects.

The format carries no patient or acquisition context, so the emitted
slices hold geometry only, under fixed marker values (Modality "OT",
PatientName "NIFTI_IMPORT").  UIDs derive deterministically from the
caller's seed so re-importing the same volume reproduces the same series.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from .elements import DicomObject, PixelDescriptor, PixelPayload, el, format_ds, make_object
from .errors import NotNifti, UnsupportedDatatype, UnsupportedDims
from .tags import T

_DTYPES = {
    2: np.dtype("uint8"),
    4: np.dtype("<i2"),
    16: np.dtype("<f4"),
}

SECONDARY_CAPTURE_SOP_CLASS = "1.2.840.10008.5.1.4.1.1.7"


def _uid(seed: str, role: str) -> str:
    digest = hashlib.sha256(f"{seed}/{role}".encode("utf-8")).digest()[:16]
    return "2.25." + str(int.from_bytes(digest, "big"))


def _quantize_float(vol: np.ndarray) -> tuple[np.ndarray, float, float]:
    """float32 → uint16 over [min, max]; returns (stored, slope, intercept)."""
    lo = float(vol.min())
    hi = float(vol.max())
    if hi <= lo:
        return np.zeros(vol.shape, dtype="<u2"), 1.0, lo
    scaled = (vol.astype(np.float64) - lo) * (65535.0 / (hi - lo))
    stored = np.floor(scaled + 0.5).astype("<u2")
    return stored, (hi - lo) / 65535.0, lo


def nifti_to_dicom(data: bytes, uid_seed: str) -> list[DicomObject]:
    if len(data) < 352:
        raise NotNifti(f"{len(data)} bytes is too short for a single-file NIfTI-1")
    sizeof_hdr = struct.unpack_from("<i", data, 0)[0]
    magic = data[344:348]
    if magic == b"ni1\x00":
        raise NotNifti("two-file NIfTI (header + .img) is not supported")
    if sizeof_hdr != 348 or magic != b"n+1\x00":
        raise NotNifti(f"bad header: sizeof_hdr={sizeof_hdr}, magic={magic!r}")

    dim = struct.unpack_from("<8h", data, 40)
    datatype = struct.unpack_from("<h", data, 70)[0]
    pixdim = struct.unpack_from("<8f", data, 76)
    vox_offset = int(struct.unpack_from("<f", data, 108)[0])
    if vox_offset < 348:
        vox_offset = 352

    ndim = dim[0]
    if ndim not in (2, 3):
        raise UnsupportedDims(f"dim[0]={ndim}; only 2-D and 3-D volumes are supported")
    dtype = _DTYPES.get(datatype)
    if dtype is None:
        raise UnsupportedDatatype(
            f"datatype code {datatype}; supported: uint8 (2), int16 (4), float32 (16)"
        )

    nx, ny = dim[1], dim[2]
    nz = dim[3] if ndim == 3 else 1
    if nx <= 0 or ny <= 0 or nz <= 0:
        raise UnsupportedDims(f"non-positive extent in dim={dim[: ndim + 1]}")
    needed = nx * ny * nz * dtype.itemsize
    voxels = data[vox_offset : vox_offset + needed]
    if len(voxels) < needed:
        raise NotNifti(f"voxel data truncated: need {needed} bytes, have {len(voxels)}")

    # Stored x-fastest: flat index = x + nx*(y + ny*z)  →  [z][y][x].
    vol = np.frombuffer(voxels, dtype=dtype).reshape(nz, ny, nx)

    slope = intercept = None
    if dtype.kind == "f":
        vol, slope, intercept = _quantize_float(vol)
        bits, pixel_rep = 16, 0
    elif dtype == np.dtype("<i2"):
        bits, pixel_rep = 16, 1
    else:
        bits, pixel_rep = 8, 0

    study_uid = _uid(uid_seed, "study")
    series_uid = _uid(uid_seed, "series")
    row_spacing = abs(float(pixdim[2])) or 1.0
    col_spacing = abs(float(pixdim[1])) or 1.0

    out: list[DicomObject] = []
    for z in range(nz):
        sop_uid = _uid(uid_seed, f"sop/{z}")
        elements = [
            el("SOPClassUID", SECONDARY_CAPTURE_SOP_CLASS),
            el("SOPInstanceUID", sop_uid),
            el("Modality", "OT"),
            el("PatientName", "NIFTI_IMPORT"),
            el("StudyInstanceUID", study_uid),
            el("SeriesInstanceUID", series_uid),
            el("InstanceNumber", z + 1),
            el("PixelSpacing", format_ds(row_spacing), format_ds(col_spacing)),
            el("Rows", ny),
            el("Columns", nx),
            el("BitsAllocated", bits),
            el("BitsStored", bits),
            el("HighBit", bits - 1),
            el("PixelRepresentation", pixel_rep),
            el("SamplesPerPixel", 1),
            el("PhotometricInterpretation", "MONOCHROME2"),
        ]
        if ndim == 3 and pixdim[3]:
            elements.append(el("SliceThickness", format_ds(abs(float(pixdim[3])))))
        if slope is not None:
            elements.append(el("RescaleSlope", format_ds(slope)))
            elements.append(el("RescaleIntercept", format_ds(intercept)))
        meta = [
            el(T(0x0002, 0x0002), SECONDARY_CAPTURE_SOP_CLASS, vr="UI"),
            el(T(0x0002, 0x0003), sop_uid, vr="UI"),
        ]
        payload = PixelPayload(
            descriptor=PixelDescriptor(
                rows=ny,
                columns=nx,
                bits_allocated=bits,
                samples_per_pixel=1,
                photometric="MONOCHROME2",
                pixel_representation=pixel_rep,
                number_of_frames=1,
            ),
            data=np.ascontiguousarray(vol[z]).tobytes(),
            vr="OW",
        )
        out.append(make_object(elements, meta=meta, pixels=payload))
    return out
