"""Multisine MISO transmit signals: tone grids, precoder weights, synthesis.

Everything downstream works on per-tone complex amplitudes.  Real passband
waveforms are only materialized through `synthesize_tx` / `received_signal`,
mainly so that time-domain averages can cross-check the analytic power and
rectifier expressions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .channel import ChannelRealization

DEFAULT_F0 = 2.4e9
DEFAULT_BAND_LIMIT = 10e6


@dataclass(frozen=True)
class ToneGrid:
    """Evenly spaced tone comb: tone n sits at ``f0 + n * delta_f`` Hz.

    The occupied bandwidth ``(n_tones - 1) * delta_f`` may not exceed
    `band_limit`.
    """

    f0: float
    delta_f: float
    n_tones: int
    band_limit: float = DEFAULT_BAND_LIMIT

    def __post_init__(self) -> None:
        if self.n_tones < 1:
            raise ValueError("n_tones must be >= 1")
        if not self.delta_f > 0:
            raise ValueError("delta_f must be positive")
        if not self.f0 > 0:
            raise ValueError("f0 must be positive")
        occupied = (self.n_tones - 1) * self.delta_f
        if occupied > self.band_limit:
            raise ValueError(
                f"occupied bandwidth {occupied:g} Hz exceeds the "
                f"{self.band_limit:g} Hz band limit"
            )

    @property
    def frequencies(self) -> np.ndarray:
        """Tone frequencies in Hz, shape (n_tones,)."""
        return self.f0 + self.delta_f * np.arange(self.n_tones)

    @classmethod
    def for_band(
        cls,
        n_tones: int,
        f0: float = DEFAULT_F0,
        band_limit: float = DEFAULT_BAND_LIMIT,
    ) -> "ToneGrid":
        """Grid whose tones evenly fill the available band."""
        delta_f = band_limit / (n_tones - 1) if n_tones > 1 else band_limit
        return cls(f0=f0, delta_f=delta_f, n_tones=n_tones, band_limit=band_limit)

    def single_tone(self) -> "ToneGrid":
        """One-tone grid sharing this grid's base frequency and spacing."""
        return ToneGrid(self.f0, self.delta_f, 1, self.band_limit)


@dataclass(frozen=True)
class PrecoderWeights:
    """Per-tone, per-antenna complex amplitudes of the transmit multisine.

    ``w[n, m]`` is the complex amplitude of tone n at antenna m; the average
    radiated power is ``sum(|w|^2) / 2``.  Instances are immutable: the
    weight matrix is stored read-only so realizations can be shared freely.
    """

    w: np.ndarray
    grid: ToneGrid

    def __post_init__(self) -> None:
        w = np.array(self.w, dtype=np.complex128)
        if w.ndim != 2:
            raise ValueError("w must be a 2-D (n_tones x m_antennas) matrix")
        if w.shape[0] != self.grid.n_tones:
            raise ValueError(
                f"w has {w.shape[0]} rows but the grid has "
                f"{self.grid.n_tones} tones"
            )
        if w.shape[1] < 1:
            raise ValueError("w must have at least one antenna column")
        if not np.all(np.isfinite(w)):
            raise ValueError("w entries must be finite")
        w.flags.writeable = False
        object.__setattr__(self, "w", w)

    @property
    def n_tones(self) -> int:
        return self.w.shape[0]

    @property
    def m_antennas(self) -> int:
        return self.w.shape[1]


def _as_time_axis(t) -> tuple[np.ndarray, bool]:
    """Coerce t to a 1-D float array; report whether the input was scalar."""
    t_arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite")
    scalar = t_arr.ndim == 0
    return np.atleast_1d(t_arr), scalar


def synthesize_tx(weights: PrecoderWeights, t):
    """Real transmit signal per antenna at time(s) t.

    x_m(t) = Re sum_n w[n, m] exp(j 2 pi f_n t).  Scalar t returns shape
    (m_antennas,); a 1-D array of times returns (len(t), m_antennas).
    """
    t_arr, scalar = _as_time_axis(t)
    phases = np.exp(2j * np.pi * np.outer(t_arr, weights.grid.frequencies))
    x = (phases @ weights.w).real
    return x[0] if scalar else x


def tx_power(weights: PrecoderWeights) -> float:
    """Average transmit power sum(|w|^2) / 2 summed over tones and antennas."""
    return float(np.sum(np.abs(weights.w) ** 2)) / 2.0


def normalize_power(weights: PrecoderWeights, p: float) -> PrecoderWeights:
    """Rescale weights (positive scalar multiple) so tx_power equals p."""
    if not p > 0:
        raise ValueError("p must be positive")
    current = tx_power(weights)
    if current == 0.0:
        raise ValueError("cannot normalize an all-zero weight matrix")
    return PrecoderWeights(weights.w * math.sqrt(p / current), weights.grid)


def received_signal(weights: PrecoderWeights, channel: "ChannelRealization", t):
    """Real received signal through a channel realization at time(s) t.

    y(t) = Re sum_n path_loss^{-1/2} (h_n . w_n) exp(j 2 pi f_n t), where
    h_n . w_n sums over antennas.  Scalar t returns a float.
    """
    if channel.h.shape != weights.w.shape:
        raise ValueError(
            f"channel dimensions {channel.h.shape} do not match weight "
            f"dimensions {weights.w.shape}"
        )
    amps = np.sum(channel.h * weights.w, axis=1) / math.sqrt(channel.path_loss)
    t_arr, scalar = _as_time_axis(t)
    phases = np.exp(2j * np.pi * np.outer(t_arr, weights.grid.frequencies))
    y = (phases @ amps).real
    return float(y[0]) if scalar else y


def weights_to_json(weights: PrecoderWeights) -> dict:
    """JSON-ready dict form of a weight matrix, grid included."""
    return {
        "f0": weights.grid.f0,
        "delta_f": weights.grid.delta_f,
        "n_tones": weights.grid.n_tones,
        "band_limit": weights.grid.band_limit,
        "entries": [
            {
                "tone": int(n),
                "antenna": int(m),
                "real": float(weights.w[n, m].real),
                "imag": float(weights.w[n, m].imag),
            }
            for n in range(weights.n_tones)
            for m in range(weights.m_antennas)
        ],
    }


def weights_from_json(data: dict) -> PrecoderWeights:
    """Inverse of `weights_to_json`."""
    grid = ToneGrid(
        f0=float(data["f0"]),
        delta_f=float(data["delta_f"]),
        n_tones=int(data["n_tones"]),
        band_limit=float(data.get("band_limit", DEFAULT_BAND_LIMIT)),
    )
    entries = data["entries"]
    if not entries:
        raise ValueError("weight file holds no entries")
    m_antennas = 1 + max(int(e["antenna"]) for e in entries)
    w = np.zeros((grid.n_tones, m_antennas), dtype=np.complex128)
    seen = np.zeros(w.shape, dtype=bool)
    for e in entries:
        n, m = int(e["tone"]), int(e["antenna"])
        if not (0 <= n < grid.n_tones and 0 <= m < m_antennas):
            raise ValueError(f"entry index ({n}, {m}) out of range")
        w[n, m] = float(e["real"]) + 1j * float(e["imag"])
        seen[n, m] = True
    if not seen.all():
        raise ValueError("weight file is missing tone/antenna entries")
    return PrecoderWeights(w, grid)


def save_weights(weights: PrecoderWeights, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(weights_to_json(weights), fh, indent=2)
        fh.write("\n")


def load_weights(path: str) -> PrecoderWeights:
    with open(path, "r", encoding="utf-8") as fh:
        return weights_from_json(json.load(fh))
