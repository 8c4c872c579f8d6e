"""JSON and CSV readers and writers for matrices, points, spectra and tuples.

Complex numbers are ``[re, im]`` pairs.  Floats are written with ``repr``,
the shortest string that round-trips, so reading back gives identical bits.
"""

from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError
from .gamma_ops import GammaTuple, gamma_tuple
from .joint_spectrum import JointSpectrum
from .polydisc_geometry import SymPoint


def _pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex(obj, where: str) -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if not (isinstance(obj, list) and len(obj) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)):
        raise ParseError(f"{where}: expected [re, im], got {obj!r}")
    return complex(obj[0], obj[1])


def matrix_to_json(a) -> dict:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ParseError(f"matrix must be 2-D, got shape {m.shape}")
    return {"rows": m.shape[0], "cols": m.shape[1], "data": [_pair(z) for z in m.ravel()]}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise ParseError(f"{where}: expected an object with rows, cols and data")
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 0 and cols >= 0):
        raise ParseError(f"{where}: rows and cols must be non-negative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"{where}: data must hold rows*cols = {rows * cols} entries")
    vals = [_complex(z, f"{where}.data[{k}]") for k, z in enumerate(data)]
    m = np.array(vals, dtype=complex).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        raise ParseError(f"{where}: non-finite entry")
    return m


def point_to_json(x: SymPoint) -> dict:
    return {"n": x.n, "s": [_pair(z) for z in x.s], "p": _pair(x.p)}


def point_from_json(obj) -> SymPoint:
    if not isinstance(obj, dict) or not {"n", "s", "p"} <= obj.keys():
        raise ParseError("point: expected an object with n, s and p")
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("point: n must be a positive integer")
    if not isinstance(obj["s"], list) or len(obj["s"]) != n - 1:
        raise ParseError(f"point: s must hold n-1 = {n - 1} coordinates")
    s = np.array([_complex(z, f"point.s[{k}]") for k, z in enumerate(obj["s"])], dtype=complex)
    return SymPoint(n=n, s=s, p=_complex(obj["p"], "point.p"))


def spectrum_to_json(js: JointSpectrum) -> dict:
    return {"points": [[_pair(z) for z in row] for row in js.points], "order": js.order}


def spectrum_from_json(obj) -> JointSpectrum:
    if not isinstance(obj, dict) or "points" not in obj:
        raise ParseError("spectrum: expected an object with points")
    pts = [[_complex(z, "spectrum.points") for z in row] for row in obj["points"]]
    return JointSpectrum(points=np.array(pts, dtype=complex))


def tuple_to_json(t: GammaTuple) -> dict:
    return {"S": [matrix_to_json(m) for m in t.s_ops], "P": matrix_to_json(t.p_op)}


def tuple_from_json(obj, tol: float = 1e-8) -> GammaTuple:
    if not isinstance(obj, dict) or "S" not in obj or "P" not in obj:
        raise ParseError("tuple: expected an object with S and P")
    if not isinstance(obj["S"], list):
        raise ParseError("tuple: S must be an array of matrices")
    s_ops = [matrix_from_json(m, f"S[{k}]") for k, m in enumerate(obj["S"])]
    p = matrix_from_json(obj["P"], "P")
    return gamma_tuple(s_ops, p, tol)


def matrices_from_json(obj) -> list:
    """Matrix array given either as a bare list or under ``"matrices"``."""
    if isinstance(obj, dict) and "matrices" in obj:
        obj = obj["matrices"]
    if not isinstance(obj, list):
        raise ParseError("expected a list of matrices")
    return [matrix_from_json(m, f"matrices[{k}]") for k, m in enumerate(obj)]


def matrices_to_json(mats) -> dict:
    return {"matrices": [matrix_to_json(m) for m in mats]}


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, shortest round-trip floats)."""
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_text(path, text: str) -> None:
    Path(path).write_text(text)


def trace_header(n: int) -> list:
    cols = ["p_re", "p_im"]
    for i in range(1, n):
        cols += [f"s{i}_re", f"s{i}_im"]
    return cols + ["region"]


def trace_csv(n: int, fibers) -> str:
    """CSV text of a trace: one row per fiber point, in grid order."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(trace_header(n))
    for fb in fibers:
        for row, tag in zip(fb.points, fb.region_tags):
            vals = _pair(fb.p)
            for z in row:
                vals += _pair(z)
            w.writerow([repr(v) for v in vals] + [tag.name])
    return buf.getvalue()


def read_trace_csv(text: str) -> tuple:
    """Parse trace CSV text into ``(points, regions)``; ``points`` rows are ``(s, p)``."""
    rd = csv.reader(_io.StringIO(text))
    header = next(rd, None)
    if not header or header[:2] != ["p_re", "p_im"] or header[-1] != "region":
        raise ParseError("trace CSV: bad header")
    n = (len(header) - 3) // 2 + 1
    if header != trace_header(n):
        raise ParseError("trace CSV: bad header")
    pts, tags = [], []
    for line in rd:
        vals = [float(v) for v in line[:-1]]
        z = [complex(vals[k], vals[k + 1]) for k in range(0, len(vals), 2)]
        pts.append(z[1:] + z[:1])
        tags.append(line[-1])
    return np.array(pts, dtype=complex).reshape(len(pts), n), tags
