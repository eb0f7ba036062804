"""Image file I/O: binary PGM/PPM natively, PNG through Pillow.

Samples map to ``[0, 1]`` as ``v / maxval``; writing clamps to ``[0, 1]``
and quantizes to 8 bits, so quantized images round-trip bit-exactly.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .errors import ImageFormatError

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_WS = b" \t\r\n\v\f"


def _parse_pnm(data: bytes, path) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise ImageFormatError(f"{path}: unsupported format (magic number {magic!r})")
    channels = 1 if magic == b"P5" else 3
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1] in (b"#",) + tuple(bytes([c]) for c in _WS):
            if data[pos:pos + 1] == b"#":
                end = data.find(b"\n", pos)
                pos = len(data) if end < 0 else end + 1
            else:
                pos += 1
        start = pos
        while pos < len(data) and data[pos] not in _WS and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ImageFormatError(f"{path}: malformed header (missing size or maxval)")
        tok = data[start:pos]
        if not tok.isdigit():
            raise ImageFormatError(f"{path}: malformed header (bad token {tok!r})")
        fields.append(int(tok))
    if pos >= len(data) or data[pos] not in _WS:
        raise ImageFormatError(f"{path}: malformed header (no separator before pixel data)")
    pos += 1
    width, height, maxval = fields
    if width < 1 or height < 1 or not 1 <= maxval <= 65535:
        raise ImageFormatError(f"{path}: malformed header (size {width}x{height}, maxval {maxval})")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * channels
    nbytes = count * dtype.itemsize
    if len(data) - pos < nbytes:
        raise ImageFormatError(
            f"{path}: truncated payload ({len(data) - pos} of {nbytes} bytes)")
    raw = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    img = raw.astype(np.float64) / maxval
    shape = (height, width) if channels == 1 else (height, width, 3)
    return img.reshape(shape)


def read_image(path) -> np.ndarray:
    """Read a P5/P6 PNM or PNG file as float64 in ``[0, 1]``.

    Grayscale images come back 2-D, color images as ``(H, W, 3)``.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(_PNG_MAGIC):
        from PIL import Image

        with Image.open(io.BytesIO(data)) as im:
            if im.mode in ("RGBA", "P", "LA", "CMYK", "YCbCr"):
                im = im.convert("RGB")
            if im.mode == "I;16":
                return np.asarray(im, dtype=np.float64) / 65535.0
            if im.mode not in ("L", "RGB"):
                im = im.convert("L")
            return np.asarray(im, dtype=np.float64) / 255.0
    return _parse_pnm(data, path)


def quantize(img) -> np.ndarray:
    return np.round(np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0) * 255.0).astype(np.uint8)


def encode_pnm(img) -> bytes:
    q = quantize(img)
    if q.ndim == 2:
        magic = b"P5"
    elif q.ndim == 3 and q.shape[2] == 3:
        magic = b"P6"
    else:
        raise ImageFormatError(f"cannot encode array of shape {q.shape} as PNM")
    header = b"%s\n%d %d\n255\n" % (magic, q.shape[1], q.shape[0])
    return header + q.tobytes()


WRITABLE_EXTENSIONS = (".pgm", ".ppm", ".pnm", ".png")


def check_writable(path) -> None:
    ext = os.path.splitext(str(path))[1].lower()
    if ext not in WRITABLE_EXTENSIONS:
        raise ImageFormatError(f"{path}: unsupported output format {ext or '(none)'}")


def write_image(path, img) -> None:
    """Write by extension: ``.pgm``/``.ppm``/``.pnm`` natively, ``.png`` via Pillow."""
    ext = os.path.splitext(str(path))[1].lower()
    if ext in (".pgm", ".ppm", ".pnm"):
        data = encode_pnm(img)
        with open(path, "wb") as fh:
            fh.write(data)
    elif ext == ".png":
        from PIL import Image

        Image.fromarray(quantize(img)).save(path)
    else:
        raise ImageFormatError(f"{path}: unsupported output format {ext or '(none)'}")


def kernel_to_image(k) -> np.ndarray:
    """Scale a kernel so its largest weight maps to white."""
    k = np.asarray(k, dtype=np.float64)
    peak = k.max()
    return k / peak if peak > 0 else k


def write_kernel_text(path, k) -> None:
    np.savetxt(path, np.asarray(k, dtype=np.float64), fmt="%.17g")


def read_kernel_text(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, dtype=np.float64))
