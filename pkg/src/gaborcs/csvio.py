"""Plain-text CSV helpers for vectors, windows, and coefficient matrices.

Floats are written with repr() (shortest round-trip form), so identical
arrays always serialize to identical bytes and parse back exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .gabor import GaborCoefficients, WindowVector


def save_window_csv(path, window: WindowVector) -> None:
    """Two columns, real and imaginary part, one row per sample."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["real", "imag"])
        for z in window.samples:
            writer.writerow([repr(float(z.real)), repr(float(z.imag))])


def load_window_csv(path, kind: str = "custom") -> WindowVector:
    data = _load_rows(path)
    return WindowVector(data[:, 0] + 1j * data[:, 1], kind)


def save_signal_csv(path, samples: np.ndarray) -> None:
    """One real value per row."""
    samples = np.asarray(samples, dtype=np.float64)
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value"])
        for v in samples:
            writer.writerow([repr(float(v))])


def load_signal_csv(path) -> np.ndarray:
    data = _load_rows(path)
    if data.shape[1] == 1:
        return data[:, 0]
    return data[:, 0] + 1j * data[:, 1]


def save_coefficients_csv(path, coeffs: GaborCoefficients) -> None:
    """Rows m,n,real,imag for every coefficient."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "n", "real", "imag"])
        rows, cols = coeffs.values.shape
        for n in range(cols):
            for m in range(rows):
                z = coeffs.values[m, n]
                writer.writerow([m, n, repr(float(z.real)), repr(float(z.imag))])


def _load_rows(path) -> np.ndarray:
    rows = []
    with Path(path).open(newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].startswith("#"):
                continue
            try:
                rows.append([float(v) for v in record])
            except ValueError:
                continue  # header line
    if not rows:
        raise ValueError(f"{path}: no numeric rows")
    return np.asarray(rows, dtype=np.float64)
