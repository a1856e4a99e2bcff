"""File formats: wave functions and densities as CSV with a JSON header.

Wave function files carry one comment line holding the grid as JSON,
then a header row ``x,re,im`` and one row per sample.  Density files use
``coordinate,density``.  All writes go through a temporary file followed
by an atomic rename, so readers never observe a half-written file.
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

import numpy as np

from .errors import ParameterError
from .grids import GridSpec, WaveFunction, gridspec_from_dict, gridspec_to_dict

_WF_MAGIC = "# uncertlab-wavefunction "
_DENSITY_MAGIC = "# uncertlab-density "


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write text to `path` via a same-directory temporary file and rename."""
    target = Path(path)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="")
    os.replace(tmp, target)


def save_wavefunction(path: str | os.PathLike, psi: WaveFunction) -> None:
    buf = io.StringIO()
    header = dict(gridspec_to_dict(psi.grid), rep=psi.rep)
    buf.write(_WF_MAGIC + json.dumps(header, sort_keys=True) + "\r\n")
    writer = csv.writer(buf)
    writer.writerow(["x", "re", "im"])
    coords = psi.coords
    for j in range(psi.grid.n_points):
        a = psi.amplitudes[j]
        writer.writerow([repr(float(coords[j])), repr(float(a.real)), repr(float(a.imag))])
    atomic_write_text(path, buf.getvalue())


def load_wavefunction(path: str | os.PathLike) -> WaveFunction:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_WF_MAGIC):
        raise ParameterError(f"{path}: not a wavefunction file (missing JSON header line)")
    header = json.loads(lines[0][len(_WF_MAGIC):])
    rep = header.pop("rep", "position")
    grid = gridspec_from_dict(header)
    rows = list(csv.reader(lines[1:]))
    if not rows or rows[0] != ["x", "re", "im"]:
        raise ParameterError(f"{path}: expected column header x,re,im")
    data = rows[1:]
    if len(data) != grid.n_points:
        raise ParameterError(
            f"{path}: {len(data)} rows but grid declares {grid.n_points} points"
        )
    amps = np.array([complex(float(r[1]), float(r[2])) for r in data])
    return WaveFunction(grid, amps, rep=rep)


def save_density(path: str | os.PathLike, coords: np.ndarray, weights: np.ndarray,
                 meta: dict | None = None) -> None:
    """Write a sampled density as ``coordinate,density`` rows."""
    buf = io.StringIO()
    buf.write(_DENSITY_MAGIC + json.dumps(meta or {}, sort_keys=True) + "\r\n")
    writer = csv.writer(buf)
    writer.writerow(["coordinate", "density"])
    for c, w in zip(coords, weights):
        writer.writerow([repr(float(c)), repr(float(w))])
    atomic_write_text(path, buf.getvalue())


def load_density(path: str | os.PathLike) -> tuple[np.ndarray, np.ndarray, dict]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith(_DENSITY_MAGIC):
        raise ParameterError(f"{path}: not a density file")
    meta = json.loads(lines[0][len(_DENSITY_MAGIC):])
    rows = list(csv.reader(lines[1:]))
    if not rows or rows[0] != ["coordinate", "density"]:
        raise ParameterError(f"{path}: expected column header coordinate,density")
    coords = np.array([float(r[0]) for r in rows[1:]])
    weights = np.array([float(r[1]) for r in rows[1:]])
    return coords, weights, meta
