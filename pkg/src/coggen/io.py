"""File formats: CGIM grids/masks, curve CSV, parameter checkpoints, PGM previews.

CGIM layout (little-endian)::

    b"CGIM" | u32 version=1 | u32 height | u32 width | u8 dtype | payload

``dtype`` 0 is interleaved complex float64, 1 is one byte per boolean.
"""

import csv
import json
import struct
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BadMagic, TruncatedFile, UnsupportedVersion
from .forward import Pattern, SamplingMask
from .generator import GeneratorParams, InrConfig

MAGIC = b"CGIM"
VERSION = 1
DTYPE_COMPLEX = 0
DTYPE_BOOL = 1
_HEADER = struct.Struct("<4sIIIB")
_PAYLOAD = {DTYPE_COMPLEX: np.dtype("<c16"), DTYPE_BOOL: np.dtype("u1")}

CURVE_HEADER = ("iteration", "stage", "loss", "rlne_roi", "psnr_db")


def _write_cgim(path, array, code):
    h, w = array.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, h, w, code))
        fh.write(np.ascontiguousarray(array, dtype=_PAYLOAD[code]).tobytes())


def read_cgim(path):
    """Return ``(dtype code, array)`` from a CGIM file."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 4 or blob[:4] != MAGIC:
        raise BadMagic(f"{path}: not a CGIM file")
    if len(blob) < _HEADER.size:
        raise TruncatedFile(f"{path}: header truncated")
    _, version, h, w, code = _HEADER.unpack_from(blob)
    if version != VERSION:
        raise UnsupportedVersion(f"{path}: CGIM version {version}")
    if code not in _PAYLOAD:
        raise UnsupportedVersion(f"{path}: unknown dtype code {code}")
    dt = _PAYLOAD[code]
    need = h * w * dt.itemsize
    body = blob[_HEADER.size :]
    if len(body) < need:
        raise TruncatedFile(f"{path}: payload has {len(body)} of {need} bytes")
    arr = np.frombuffer(body[:need], dtype=dt).reshape(h, w)
    if code == DTYPE_BOOL:
        return code, arr.astype(bool)
    return code, arr.astype(np.complex128)


def write_grid(path, grid):
    _write_cgim(path, np.asarray(grid, dtype=np.complex128), DTYPE_COMPLEX)


def read_grid(path):
    code, arr = read_cgim(path)
    if code != DTYPE_COMPLEX:
        raise UnsupportedVersion(f"{path}: holds a mask, not a complex grid")
    return arr


def write_mask(path, mask):
    sel = getattr(mask, "selected", mask)
    _write_cgim(path, np.asarray(sel, dtype=bool), DTYPE_BOOL)


def read_mask(path):
    """Load a mask; the pattern is inferred from its structure."""
    code, sel = read_cgim(path)
    if code != DTYPE_BOOL:
        raise UnsupportedVersion(f"{path}: holds a complex grid, not a mask")
    if sel.all():
        return SamplingMask(sel, Pattern.FULL, 1.0, 1.0, 0)
    pattern = Pattern.VD1D_PE if (sel == sel[:1]).all() else Pattern.VD2D
    return SamplingMask(sel, pattern, sel.size / max(int(sel.sum()), 1), 0.0, 0)


def write_curve_csv(path, curve):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(CURVE_HEADER)
        for it, stage, loss, rlne, psnr in curve:
            out.writerow([int(it), int(stage), f"{loss:.9g}", f"{rlne:.9g}", f"{psnr:.9g}"])


def read_curve_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise BadMagic(f"{path}: missing curve header")
    return [(int(r[0]), int(r[1]), float(r[2]), float(r[3]), float(r[4])) for r in rows[1:]]


def write_pgm(path, grid):
    """8-bit magnitude preview scaled to the image maximum."""
    mag = np.abs(np.asarray(grid))
    peak = mag.max()
    img = np.zeros(mag.shape, dtype=np.uint8) if peak == 0 else np.round(255 * mag / peak).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def save_params(path, params):
    cfg = json.dumps(params.config.__dict__, sort_keys=True)
    with open(path, "wb") as fh:
        np.savez(fh, config=np.array(cfg), fourier_matrix=params.fourier_matrix, theta=params.theta)


def load_params(path):
    with np.load(path) as data:
        cfg = InrConfig(**json.loads(str(data["config"])))
        return GeneratorParams(cfg, data["fourier_matrix"].copy(), data["theta"].copy())


REPORT_FORMAT = "coggen-report/1"


@dataclass
class RunReport:
    """Summary of one reconstruction written next to its outputs."""

    config: dict
    final_rlne_roi: float
    final_psnr_db: float
    best_rlne_roi: float
    best_iteration: int
    iterations: int
    stages: list
    curve_path: str
    theory_flags: dict = field(default_factory=dict)
    format: str = REPORT_FORMAT

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, doc):
        if doc.get("format") != REPORT_FORMAT:
            raise UnsupportedVersion(f"report format {doc.get('format')!r}")
        return cls(**doc)


def write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
