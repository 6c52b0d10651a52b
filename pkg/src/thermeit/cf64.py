"""
CF64: a small binary container for complex 2D fields.

Layout::

    b"CF64"                         4 bytes magic
    header length N                 4 bytes, little-endian unsigned
    header                          N bytes UTF-8 JSON {nx, ny, dx, dy, unit[, meta]}
    payload                         ny*nx complex values, row-major,
                                    interleaved little-endian float64 (re, im)
"""

import json
import os
import struct
import tempfile

import numpy as np

from .fields import ComplexField2D

MAGIC = b"CF64"
_LEN = struct.Struct("<I")


class FormatError(ValueError):
    """Malformed CF64 data."""


def encode(field, unit="1", meta=None):
    header = {"nx": field.nx, "ny": field.ny, "dx": field.dx, "dy": field.dy, "unit": unit}
    if meta:
        header["meta"] = meta
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    return MAGIC + _LEN.pack(len(blob)) + blob + payload


def decode(data):
    """Parse CF64 bytes into (field, header dict)."""
    if len(data) < 8 or data[:4] != MAGIC:
        raise FormatError("not a CF64 file (bad magic)")
    (n,) = _LEN.unpack(data[4:8])
    if len(data) < 8 + n:
        raise FormatError("truncated CF64 header")
    try:
        header = json.loads(data[8:8 + n].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable CF64 header: {exc}") from None
    for key in ("nx", "ny", "dx", "dy", "unit"):
        if key not in header:
            raise FormatError(f"CF64 header lacks {key!r}")
    nx, ny = int(header["nx"]), int(header["ny"])
    payload = data[8 + n:]
    if len(payload) != 16 * nx * ny:
        raise FormatError(f"payload is {len(payload)} bytes, expected {16 * nx * ny}")
    values = np.frombuffer(payload, dtype="<c16").reshape(ny, nx).astype(complex)
    try:
        field = ComplexField2D(values, header["dx"], header["dy"])
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return field, header


def atomic_write_bytes(path, data):
    """Write via a temporary file in the target directory and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write(path, field, unit="1", meta=None):
    atomic_write_bytes(path, encode(field, unit, meta))


def read(path):
    with open(path, "rb") as fh:
        return decode(fh.read())


def write_pgm(path, field):
    """8-bit binary portable graymap of |values|, scaled to the maximum."""
    mag = np.abs(field.values)
    top = mag.max()
    img = np.zeros(mag.shape, dtype=np.uint8) if top == 0 else np.round(255 * mag / top).astype(np.uint8)
    head = f"P5\n{field.nx} {field.ny}\n255\n".encode("ascii")
    atomic_write_bytes(path, head + img.tobytes())
