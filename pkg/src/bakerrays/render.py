"""Strip rasterization and boundary-curve overlays.

Pixels are classified by their center orbit: entering the absorbing
rectangle, leaving the strip, or undecided within the budget (undecided
pixels approximate the domain boundary as the budget grows). Orbits whose
real part leaves the exp range while still inside the strip are left-escapes
along the boundary comb and stay undecided.

Images are written as binary PPM (P6) or as minimal RGB PNG; both are
byte-deterministic. Curve output is CSV with a blank re/im pair marking a
gap (branch-cut skip).
"""

import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import kernels
from .branches import inverse_branch
from .core import PI, evaluate_f
from .errors import BranchCutError, DomainError

TAG_ENTERS_V = kernels.TAG_ENTERS_V
TAG_EXITS_S = kernels.TAG_EXITS_S
TAG_UNDECIDED = kernels.TAG_UNDECIDED


@dataclass(frozen=True)
class ClassifiedGrid:
    bbox: Tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    width: int
    height: int
    max_iter: int
    tags: np.ndarray  # (height, width) uint8
    steps: np.ndarray  # (height, width) int32

    def pixel_of(self, z):
        """(row, col) of the pixel containing z, or None outside the bbox.
        Row 0 is the im_min edge."""
        re0, re1, im0, im1 = self.bbox
        if not (re0 <= z.real <= re1 and im0 <= z.imag <= im1):
            return None
        col = int((z.real - re0) / (re1 - re0) * self.width)
        row = int((z.imag - im0) / (im1 - im0) * self.height)
        return min(row, self.height - 1), min(col, self.width - 1)


def classify_grid(bbox, width, height, max_iter, workers=1):
    """Classify pixel centers over bbox; deterministic for any worker count."""
    re0, re1, im0, im1 = (float(v) for v in bbox)
    if not (re0 < re1 and im0 < im1):
        raise DomainError("bbox must satisfy re_min < re_max and im_min < im_max")
    if width < 1 or height < 1 or max_iter < 1:
        raise DomainError("width, height and max_iter must be >= 1")
    tags = np.empty((height, width), np.uint8)
    steps = np.empty((height, width), np.int32)
    dre = (re1 - re0) / width
    dim = (im1 - im0) / height
    if workers <= 1:
        kernels.fill_classify(tags, steps, 0, height, re0, dre, im0, dim, max_iter)
    else:
        chunk = max(1, (height + workers - 1) // workers)
        rows = [(lo, min(lo + chunk, height)) for lo in range(0, height, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(kernels.fill_classify, tags, steps, lo, hi, re0, dre, im0, dim, max_iter)
                for lo, hi in rows
            ]
            for f in futs:
                f.result()
    return ClassifiedGrid((re0, re1, im0, im1), width, height, max_iter, tags, steps)


def classify_point(z, max_iter):
    """Classification of a single point (same rules as the grid)."""
    tag, step = kernels.classify_point(z.real, z.imag, max_iter)
    return tag, step


@dataclass(frozen=True)
class Polyline:
    word: Tuple[int, ...]
    base_line: int  # +1 for the top boundary line, -1 for the bottom
    vertices: Tuple[Optional[complex], ...]  # None marks a gap


def _adaptive_line_pullback(word, sign, t_lo, t_hi, max_gap, max_vertices=20000):
    """Pull the boundary line segment {t + sign*i*pi : t in [t_lo, t_hi]}
    back through `word`, refining until consecutive vertices are close."""
    def value(t):
        z = complex(t, sign * PI)
        for b in reversed(word):
            z = inverse_branch(b, z, 1e-12).z
        return z

    ts = [t_lo + (t_hi - t_lo) * k / 16.0 for k in range(17)]
    vals: List[Optional[complex]] = []
    out_ts: List[float] = []
    for t in ts:
        try:
            vals.append(value(t))
        except BranchCutError:
            vals.append(None)
        out_ts.append(t)
    i = 0
    while i < len(vals) - 1 and len(vals) < max_vertices:
        a, b = vals[i], vals[i + 1]
        if a is None or b is None or abs(b - a) <= max_gap or (out_ts[i + 1] - out_ts[i]) < 1e-9:
            i += 1
            continue
        tm = 0.5 * (out_ts[i] + out_ts[i + 1])
        try:
            vm = value(tm)
        except BranchCutError:
            vm = None
        vals.insert(i + 1, vm)
        out_ts.insert(i + 1, tm)
    return tuple(vals)


def preimage_curves(max_depth, t_lo=-8.0, t_hi=8.0, max_gap=0.02):
    """Iterated pullbacks of the two boundary lines under all words of length
    <= max_depth (depth 0 yields the lines themselves)."""
    if max_depth > 16:
        raise DomainError("max_depth must be <= 16")
    curves = []
    for depth in range(max_depth + 1):
        for code in range(2 ** depth):
            word = tuple((code >> (depth - 1 - k)) & 1 for k in range(depth))
            for sign in (1, -1):
                if depth == 0:
                    n = 33
                    verts = tuple(
                        complex(t_lo + (t_hi - t_lo) * k / (n - 1), sign * PI) for k in range(n)
                    )
                else:
                    verts = _adaptive_line_pullback(word, sign, t_lo, t_hi, max_gap)
                curves.append(Polyline(word, sign, verts))
    return curves


DEFAULT_PALETTE: Dict[str, Tuple[int, int, int]] = {
    "undecided": (255, 0, 0),
    "enters_near": (245, 222, 179),  # beige at immediate absorption
    "enters_far": (0, 0, 0),
    "exits_near": (0, 0, 0),
    "exits_far": (150, 150, 150),
}


def _ramp(c0, c1, x):
    return tuple(int(round(a + (b - a) * x)) for a, b in zip(c0, c1))


def render_rgb(grid, palette=None):
    """Map tags/steps to an RGB array (row 0 at the top of the image, i.e.
    the im_max edge)."""
    pal = dict(DEFAULT_PALETTE)
    if palette:
        pal.update(palette)
    h, w = grid.tags.shape
    rgb = np.zeros((h, w, 3), np.uint8)
    scale = max(1.0, min(64.0, float(grid.max_iter)))
    frac = np.clip(grid.steps.astype(np.float64) / scale, 0.0, 1.0)
    for tag, near, far in (
        (TAG_ENTERS_V, pal["enters_near"], pal["enters_far"]),
        (TAG_EXITS_S, pal["exits_near"], pal["exits_far"]),
    ):
        mask = grid.tags == tag
        for ch in range(3):
            rgb[:, :, ch][mask] = np.round(
                near[ch] + (far[ch] - near[ch]) * frac[mask]
            ).astype(np.uint8)
    mask = grid.tags == TAG_UNDECIDED
    for ch in range(3):
        rgb[:, :, ch][mask] = pal["undecided"][ch]
    return rgb[::-1, :, :]  # row 0 of the file is the top of the picture


def ppm_bytes(rgb):
    h, w, _ = rgb.shape
    return b"P6\n%d %d\n255\n" % (w, h) + rgb.tobytes()


def png_bytes(rgb):
    h, w, _ = rgb.shape
    raw = b"".join(b"\x00" + rgb[r].tobytes() for r in range(h))

    def chunk(tag, data):
        body = tag + data
        return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body))

    header = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", zlib.compress(raw, 6))
        + chunk(b"IEND", b"")
    )


def write_image(grid, path, palette=None):
    """Write the grid as .ppm (P6) or .png by extension; bytes are a pure
    function of the inputs."""
    rgb = render_rgb(grid, palette)
    path = str(path)
    if path.endswith(".ppm"):
        data = ppm_bytes(rgb)
    elif path.endswith(".png"):
        data = png_bytes(rgb)
    else:
        raise DomainError("image path must end in .ppm or .png")
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write image to {path}: {exc}") from exc
    return len(data)


def write_polylines_csv(curves, path):
    """curve_id, vertex_index, re, im rows; gaps keep the index and leave
    re/im empty."""
    lines = ["curve_id,vertex_index,re,im"]
    for cid, curve in enumerate(curves):
        for k, v in enumerate(curve.vertices):
            if v is None:
                lines.append(f"{cid},{k},,")
            else:
                lines.append(f"{cid},{k},{v.real:.17g},{v.imag:.17g}")
    data = "\n".join(lines) + "\n"
    try:
        with open(path, "w", newline="") as fh:
            fh.write(data)
    except OSError as exc:
        raise OSError(f"cannot write curves to {path}: {exc}") from exc
    return len(lines) - 1


def verify_curve_forward(curve, tol=1e-8):
    """Check that iterating the map |word| times from each vertex returns to
    the base boundary line within tol; returns the worst deviation."""
    worst = 0.0
    for v in curve.vertices:
        if v is None:
            continue
        cur = v
        for _ in curve.word:
            cur = evaluate_f(cur)
        worst = max(worst, abs(cur.imag - curve.base_line * PI))
    return worst
