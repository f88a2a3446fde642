"""Plain graymap (PGM) reading and writing, plus a synthetic test image.

Supports the ASCII (P2) and binary (P5) variants at 8 or 16 bits per pixel.
Images travel through the rest of the package as float arrays scaled to
[0, 1]; scaling back to integer levels happens only on write.
"""

import os
import tempfile

import numpy as np


def _header_tokens(data):
    """First four whitespace-separated tokens, honoring '#' comments.

    Returns the tokens and the offset one byte past the final token's
    trailing whitespace byte (where a P5 raster begins).
    """
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated graymap header")
        tokens.append(data[start:pos])
    return tokens, pos + 1


def read_pgm(path):
    """Load a P2 or P5 graymap as a float array in [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    (magic, w_tok, h_tok, max_tok), raster_at = _header_tokens(data)
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"not a graymap: magic {magic!r}")
    width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    if width < 1 or height < 1:
        raise ValueError(f"bad graymap size {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise ValueError(f"maxval {maxval} outside [1, 65535]")

    count = width * height
    if magic == b"P2":
        body = data[raster_at - 1 :].split(b"\n")
        body = b" ".join(line.split(b"#", 1)[0] for line in body)
        values = body.split()
        if len(values) != count:
            raise ValueError(f"expected {count} pixels, found {len(values)}")
        flat = np.array([int(v) for v in values], dtype=np.int64)
    else:
        stride = 1 if maxval < 256 else 2
        raw = data[raster_at : raster_at + count * stride]
        if len(raw) != count * stride:
            raise ValueError("binary raster shorter than header promises")
        dtype = np.uint8 if stride == 1 else np.dtype(">u2")
        flat = np.frombuffer(raw, dtype=dtype).astype(np.int64)

    if flat.max(initial=0) > maxval:
        raise ValueError("pixel value exceeds declared maxval")
    return flat.reshape(height, width).astype(float) / float(maxval)


def write_pgm(path, image, maxval=255, binary=True):
    """Write a float image in [0, 1] as a graymap; values are clipped.

    The file is staged in the target directory and moved into place, so a
    crash never leaves a partial image behind.
    """
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {image.shape}")
    if not 1 <= maxval <= 65535:
        raise ValueError(f"maxval {maxval} outside [1, 65535]")
    levels = np.rint(np.clip(image, 0.0, 1.0) * maxval).astype(np.int64)
    height, width = image.shape

    if binary:
        header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        payload = header + levels.astype(dtype).tobytes()
    else:
        lines = [f"P2\n{width} {height}\n{maxval}\n"]
        lines += [" ".join(str(v) for v in row) + "\n" for row in levels]
        payload = "".join(lines).encode("ascii")

    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".pgm-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def synthetic_blocks(height=32, width=32):
    """Deterministic piecewise-constant test image in [0, 1].

    Flat regions with a few sharp edges: the shape total-variation style
    regularizers are designed to restore.
    """
    if height < 2 or width < 2:
        raise ValueError("image must be at least 2x2")
    img = np.full((height, width), 0.15)
    img[height // 8 : height // 2, width // 8 : 5 * width // 8] = 0.8
    img[height // 2 : 7 * height // 8, width // 2 : 7 * width // 8] = 0.45
    img[3 * height // 4 :, : width // 4] = 0.6
    return img
