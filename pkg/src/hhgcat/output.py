"""Deterministic file emission: CSV tables, Wigner grids, JSON documents, manifests."""
from __future__ import annotations

import hashlib
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .wigner import WignerGrid


def fmt(x) -> str:
    """12 significant digits; complex numbers as ``re+imj``; ``None`` as an empty field."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        if x.imag == 0:
            return fmt(x.real)
        return f"{x.real:.12g}{x.imag:+.12g}j"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if v == 0:
            return "0"  # no "-0"
        return f"{v:.12g}"
    return str(x)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def grid_csv_text(grid: WignerGrid) -> str:
    buf = io.StringIO()
    buf.write("x,p,W\n")
    for i, x in enumerate(grid.xs):
        sx = fmt(x)
        for j, p in enumerate(grid.ps):
            buf.write(f"{sx},{fmt(p)},{fmt(grid.values[i, j])}\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(obj)
    return obj


def _round(v) -> float:
    # 12 significant digits, same as the CSV files
    v = float(f"{float(v):.12g}")
    return 0.0 if v == 0 else v


def json_text(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def grid_sidecar(grid: WignerGrid, **extra) -> dict:
    doc = {"window": grid.window.as_list(), "step": grid.step, "diagnostics": grid.diagnostics}
    doc.update(extra)
    return doc


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def atomic_write(path: Path, text: str) -> str:
    """Write through a temporary file in the same directory; returns the sha256."""
    data = text.encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return sha256(data)


def write_bundle(out_dir: Path, files: dict[str, str], manifest: dict, manifest_name: str = "manifest.json") -> dict:
    """Write every file of a finished computation, then the manifest listing their checksums."""
    out_dir = Path(out_dir)
    listing = []
    for name in sorted(files):
        listing.append({"path": name, "sha256": atomic_write(out_dir / name, files[name])})
    manifest = dict(manifest, files=listing)
    atomic_write(out_dir / manifest_name, json_text(manifest))
    return manifest
