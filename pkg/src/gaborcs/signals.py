"""Test signals: synthetic generators and WAV ingestion.

Synthetic generators (deterministic, with t = (1..L)/L; the repo's
definition of record — amplitudes are immaterial because every experiment
metric is a relative error):

    cusp   sqrt(|t - 0.37|)
    ramp   t - 1{t >= 0.37}
    sing   1 / |t - (floor(0.37*L) + 0.5)/L|

Audio: a minimal RIFF/WAVE reader for mono PCM 16-bit and IEEE-float files.
Loaded audio is trimmed (never padded) to an admissible ambient dimension —
by default the largest admissible length at most the sample count — and
normalized to unit peak. An offset selects which region of the file is kept.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FileTooShort, NotAdmissible, UnsupportedFormat
from .modring import is_admissible_length, largest_admissible_at_most

SYNTHETIC_KINDS = ("cusp", "ramp", "sing")


@dataclass(frozen=True)
class Signal:
    """A real signal with a label and (for audio) its sample rate."""

    samples: np.ndarray
    label: str
    sample_rate: int | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("signal must be 1-d")
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal has non-finite entries")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


def make_synthetic(kind: str, L: int) -> Signal:
    """Deterministic length-L test signal of the named family (L >= 8)."""
    if kind not in SYNTHETIC_KINDS:
        raise ValueError(f"kind must be one of {SYNTHETIC_KINDS}, got {kind!r}")
    if L < 8:
        raise ValueError(f"synthetic signals need L >= 8, got {L}")
    t = np.arange(1, L + 1) / L
    if kind == "cusp":
        samples = np.sqrt(np.abs(t - 0.37))
    elif kind == "ramp":
        samples = t - (t >= 0.37)
    else:
        samples = 1.0 / np.abs(t - (np.floor(0.37 * L) + 0.5) / L)
    return Signal(samples, kind)


def _read_wav(path) -> tuple[np.ndarray, int]:
    """Parse a RIFF/WAVE file: mono PCM16 or IEEE float32/64 only."""
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise UnsupportedFormat(f"{path}: not a RIFF/WAVE file")
    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise UnsupportedFormat(f"{path}: truncated fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned
    if fmt is None or data is None:
        raise UnsupportedFormat(f"{path}: missing fmt/data chunk")
    audio_format, channels, rate, _, _, bits = fmt
    if channels != 1:
        raise UnsupportedFormat(f"{path}: {channels} channels, need mono")
    if audio_format == 1 and bits == 16:
        samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    elif audio_format == 3 and bits == 32:
        samples = np.frombuffer(data, dtype="<f4").astype(np.float64)
    elif audio_format == 3 and bits == 64:
        samples = np.frombuffer(data, dtype="<f8").astype(np.float64)
    else:
        raise UnsupportedFormat(
            f"{path}: format tag {audio_format} with {bits} bits unsupported "
            "(need PCM16 or IEEE float)"
        )
    return samples, rate


def load_audio(path, mode: str = "auto_trim", L: int | None = None,
               offset: int = 0, admissibility: str = "paper") -> Signal:
    """Load mono WAV audio trimmed to an admissible ambient dimension.

    auto_trim picks the largest admissible L at most the available sample
    count; explicit_L uses the caller's L (validated for admissibility).
    The kept region starts at `offset`; output is normalized to unit peak.
    """
    if mode not in ("auto_trim", "explicit_L"):
        raise ValueError(f"mode must be auto_trim or explicit_L, got {mode!r}")
    samples, rate = _read_wav(path)
    if offset < 0 or offset >= samples.size:
        raise ValueError(f"offset {offset} outside file ({samples.size} samples)")
    available = samples.size - offset
    if mode == "explicit_L":
        if L is None:
            raise ValueError("explicit_L mode requires L")
        ok, _ = is_admissible_length(L, admissibility)
        if not ok:
            raise NotAdmissible(f"L = {L} is not {admissibility}-admissible")
        if L > available:
            raise FileTooShort(
                f"{path}: {available} samples available, need {L}"
            )
    else:
        if available < 3:
            raise FileTooShort(f"{path}: only {available} samples available")
        L = largest_admissible_at_most(available, admissibility)
    kept = samples[offset:offset + L]
    peak = np.max(np.abs(kept))
    if peak == 0:
        raise ValueError(f"{path}: selected region is silent")
    return Signal(kept / peak, Path(path).stem, sample_rate=rate)
