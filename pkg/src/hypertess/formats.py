"""Binary and text file formats plus report serialization.

All binary formats are little-endian with a 4-byte magic and a u32 version:

  HPM1  matrix:       u64 m, u64 n, u64 seed value, u64 stream_id,
                      then m*n float64 entries, row-major.
  HPC1  codes:        u64 count, u64 m, then count * ceil(m/64) u64 words.
  HPA1  arrangement:  u64 m, u64 n, f64 lift height, f64 lambda, then per
                      hyperplane n+1 float64 values (normal, then offset).

Point sets travel as CSV (one point per row, 17-significant-digit decimal
text) or as an HPM1 file reused with m = number of points.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .affine import AffineArrangement
from .audit import AuditReport, CellReport, TessellationGraph
from .bitcode import BitCode, codes_to_words, words_per_code, words_to_codes
from .exceptions import FileFormatError
from .rng import GaussianMatrix, Seed
from .sets import MeanWidthEstimate
from .validation import as_matrix

MAGIC_MATRIX = b"HPM1"
MAGIC_CODES = b"HPC1"
MAGIC_ARRANGEMENT = b"HPA1"
VERSION = 1


def _read_exact(fh, size: int, what: str) -> bytes:
    data = fh.read(size)
    if len(data) != size:
        raise FileFormatError(f"truncated file while reading {what}")
    return data


def _check_magic(fh, magic: bytes) -> None:
    got = _read_exact(fh, 4, "magic")
    if got != magic:
        raise FileFormatError(f"bad magic {got!r}, expected {magic!r}")
    (version,) = struct.unpack("<I", _read_exact(fh, 4, "version"))
    if version != VERSION:
        raise FileFormatError(f"unsupported version {version}")


def write_matrix(path, A: GaussianMatrix) -> None:
    seed = A.seed if A.seed is not None else Seed(0, 0)
    with open(path, "wb") as fh:
        fh.write(MAGIC_MATRIX)
        fh.write(struct.pack("<IQQQQ", VERSION, A.m, A.n, seed.value, seed.stream_id))
        fh.write(A.entries.astype("<f8", copy=False).tobytes())


def read_matrix(path) -> GaussianMatrix:
    with open(path, "rb") as fh:
        _check_magic(fh, MAGIC_MATRIX)
        m, n, value, stream_id = struct.unpack("<QQQQ", _read_exact(fh, 32, "header"))
        raw = _read_exact(fh, 8 * m * n, "entries")
    entries = np.frombuffer(raw, dtype="<f8").reshape(m, n)
    return GaussianMatrix(entries.astype(np.float64), Seed(value, stream_id))


def write_codes(path, codes, m: int | None = None) -> None:
    codes = list(codes)
    if m is None:
        m = codes[0].m if codes else 0
    elif codes and codes[0].m != m:
        raise ValueError(f"codes have length {codes[0].m}, header says {m}")
    words = codes_to_words(codes)
    with open(path, "wb") as fh:
        fh.write(MAGIC_CODES)
        fh.write(struct.pack("<IQQ", VERSION, len(codes), m))
        fh.write(np.ascontiguousarray(words, dtype="<u8").tobytes())


def read_codes(path) -> list[BitCode]:
    with open(path, "rb") as fh:
        _check_magic(fh, MAGIC_CODES)
        count, m = struct.unpack("<QQ", _read_exact(fh, 16, "header"))
        if count == 0:
            return []
        W = words_per_code(m)
        raw = _read_exact(fh, 8 * count * W, "words")
    words = np.frombuffer(raw, dtype="<u8").reshape(count, W)
    return words_to_codes(words, m)


def write_arrangement(path, arr: AffineArrangement) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC_ARRANGEMENT)
        fh.write(struct.pack("<IQQdd", VERSION, arr.m, arr.n, arr.lift_height, arr.lam))
        block = np.concatenate([arr.normals, arr.offsets[:, None]], axis=1)
        fh.write(block.astype("<f8", copy=False).tobytes())


def read_arrangement(path) -> AffineArrangement:
    with open(path, "rb") as fh:
        _check_magic(fh, MAGIC_ARRANGEMENT)
        m, n, t, lam = struct.unpack("<QQdd", _read_exact(fh, 32, "header"))
        raw = _read_exact(fh, 8 * m * (n + 1), "hyperplanes")
    block = np.frombuffer(raw, dtype="<f8").reshape(m, n + 1)
    return AffineArrangement(
        normals=block[:, :n].astype(np.float64),
        offsets=block[:, n].astype(np.float64),
        lift_height=t,
        lam=lam,
    )


def save_points(path, X) -> None:
    X = as_matrix(X, "points")
    np.savetxt(path, X, fmt="%.17g", delimiter=",")


def load_points(path) -> np.ndarray:
    """Load a point set from CSV or from an HPM1 matrix file (sniffed)."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC_MATRIX:
        return np.asarray(read_matrix(path).entries)
    if path.stat().st_size == 0:
        return np.zeros((0, 0))
    try:
        X = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise FileFormatError(f"cannot parse {path} as CSV points: {exc}") from exc
    if X.size == 0:
        return np.zeros((0, 0))
    return X


def seed_to_dict(seed: Seed | None):
    if seed is None:
        return None
    return {"value": seed.value, "stream_id": seed.stream_id}


def report_to_dict(report: AuditReport) -> dict:
    out = {
        "kind": report.kind,
        "m": report.m,
        "n": report.n,
        "seed": seed_to_dict(report.seed),
        "t": report.t,
        "pairs": report.pairs_evaluated,
        "delta_max": report.delta_max,
        "mean_abs_error": report.mean_abs_error,
        "bound": report.theorem_bound,
        "passed": report.passed,
        "worst_pairs": [
            {"i": p.i, "j": p.j, "d_geo": p.d_geo, "d_ham": p.d_ham}
            for p in report.worst_pairs
        ],
    }
    if report.renormalized:
        out["renormalized"] = report.renormalized
    if report.kind == "affine":
        out["lambda"] = report.lam
        out["lift_height"] = report.lift_height
    return out


def cell_report_to_dict(report: CellReport) -> dict:
    return {
        "kind": "cells",
        "cell_count": report.cell_count,
        "occupancy": {str(k): v for k, v in sorted(report.occupancy.items())},
        "max_diameter_geodesic": report.max_diameter_geodesic,
        "max_diameter_euclidean": report.max_diameter_euclidean,
        "offending_code": None
        if report.offending_code is None
        else report.offending_code.hex(),
    }


def mean_width_to_dict(est: MeanWidthEstimate) -> dict:
    return {
        "kind": "meanwidth",
        "gaussian_width": est.gaussian_width,
        "std_error": est.std_error,
        "trials": est.trials,
        "spherical_width": est.spherical_width,
        "diff_width": est.diff_width,
        "mean_gauss_norm": est.mean_gauss_norm,
    }


def graph_to_dot(graph: TessellationGraph, label_bits: int = 64) -> str:
    """DOT export; node labels are the leading hex prefix of each code."""
    prefix = max(1, label_bits // 4)
    lines = ["graph tessellation {"]
    for u, code in enumerate(graph.nodes):
        lines.append(f'  n{u} [label="{code.hex()[:prefix]}"];')
    for u, v in graph.edges():
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: TessellationGraph) -> dict:
    return {
        "kind": "graph",
        "m": graph.m,
        "nodes": [
            {"id": u, "code": code.hex(), "points": graph.representatives[u].tolist()}
            for u, code in enumerate(graph.nodes)
        ],
        "edges": [[u, v] for u, v in graph.edges()],
    }


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def worst_pairs_csv(path, report: AuditReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i,j,d_geo,d_ham,abs_error\n")
        for p in report.worst_pairs:
            if report.kind == "affine":
                err = abs(report.lam * p.d_ham - p.d_geo)
            else:
                err = abs((p.d_soft if p.d_soft is not None else p.d_ham) - p.d_geo)
            fh.write(f"{p.i},{p.j},{p.d_geo:.17g},{p.d_ham:.17g},{err:.17g}\n")
