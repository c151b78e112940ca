"""Blue-white-red rendering of filter grids as binary PPM images."""
from __future__ import annotations

import numpy as np

from .kernels import FilterGrid

WHITE = np.array([255.0, 255.0, 255.0])
RED = np.array([178.0, 24.0, 43.0])
BLUE = np.array([33.0, 102.0, 172.0])


def colorize(values: np.ndarray, pos=RED, neg=BLUE) -> np.ndarray:
    """Map values linearly onto white->pos for v > 0 and white->neg for v < 0.

    The scale is symmetric, set by max |v|; an all-zero array maps to white.
    """
    m = float(np.abs(values).max()) if values.size else 0.0
    t = values / m if m > 0 else np.zeros_like(values, dtype=float)
    tp = np.clip(t, 0, None)[..., None]
    tn = np.clip(-t, 0, None)[..., None]
    rgb = WHITE + tp * (np.asarray(pos) - WHITE) + tn * (np.asarray(neg) - WHITE)
    return np.rint(rgb).astype(np.uint8)


def ppm_bytes(grid: FilterGrid, upscale: int = 1) -> bytes:
    if int(upscale) < 1:
        raise ValueError("upscale must be at least 1")
    upscale = int(upscale)
    rgb = colorize(grid.values)
    rgb = np.repeat(np.repeat(rgb, upscale, axis=0), upscale, axis=1)
    h, w = rgb.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgb.tobytes()


def render_ppm(grid: FilterGrid, path, upscale: int = 10) -> None:
    data = ppm_bytes(grid, upscale)
    with open(path, "wb") as fh:
        fh.write(data)


def read_ppm(path) -> np.ndarray:
    """Read a binary P6 file as written by :func:`render_ppm`."""
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM (P6) file")
    w, h = (int(t) for t in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)
