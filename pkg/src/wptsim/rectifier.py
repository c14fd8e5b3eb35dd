"""Nonlinear rectifier output model and its closed-form scaling laws.

The harvested DC quantity is a truncated polynomial of the received signal:
a second-order term proportional to the time-average of y(t)^2 and a
fourth-order term proportional to the time-average of y(t)^4.  For a
multisine on an evenly spaced tone grid both averages have exact closed
forms in the per-tone complex amplitudes; `z_dc_time_oracle` recomputes
them by brute-force time sampling as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .signals import PrecoderWeights, ToneGrid

DEFAULT_K2 = 0.0034
DEFAULT_K4 = 0.3829
DEFAULT_R_ANT = 50.0

# Time-oracle sample counts above this are almost certainly a mistaken grid
# (f0 huge relative to delta_f) rather than a real verification request.
_MAX_ORACLE_SAMPLES = 1 << 26


@dataclass(frozen=True)
class RectifierParams:
    """Polynomial rectifier coefficients and antenna resistance (ohms)."""

    k2: float = DEFAULT_K2
    k4: float = DEFAULT_K4
    r_ant: float = DEFAULT_R_ANT

    def __post_init__(self) -> None:
        if not self.k2 > 0:
            raise ValueError("k2 must be positive")
        if not self.k4 > 0:
            raise ValueError("k4 must be positive")
        if not self.r_ant > 0:
            raise ValueError("r_ant must be positive")


@dataclass(frozen=True)
class ReceivedTones:
    """Per-tone complex amplitudes a_n seen at the rectifier input."""

    a: np.ndarray
    grid: ToneGrid

    def __post_init__(self) -> None:
        a = np.array(self.a, dtype=np.complex128)
        if a.ndim != 1:
            raise ValueError("a must be a 1-D vector of tone amplitudes")
        if a.shape[0] != self.grid.n_tones:
            raise ValueError(
                f"a has {a.shape[0]} tones but the grid has {self.grid.n_tones}"
            )
        if not np.all(np.isfinite(a)):
            raise ValueError("a entries must be finite")
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    @property
    def n_tones(self) -> int:
        return self.a.shape[0]


def received_tones(
    weights: PrecoderWeights, channel: ChannelRealization
) -> ReceivedTones:
    """Combine weights and channel: a_n = path_loss^{-1/2} sum_m h[n,m] w[n,m]."""
    if channel.h.shape != weights.w.shape:
        raise ValueError(
            f"channel dimensions {channel.h.shape} do not match weight "
            f"dimensions {weights.w.shape}"
        )
    a = (channel.h * weights.w).sum(axis=1) / np.sqrt(channel.path_loss)
    return ReceivedTones(a=a, grid=weights.grid)


_QUADRUPLE_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}


def _resonant_quadruples(n: int):
    """Index quadruples (n0, n1, n2, n3) with n0 + n1 == n2 + n3.

    Enumerates the (n0, n1, n2) triples and solves n3 implicitly; the index
    arrays are cached per tone count so repeated evaluation stays cheap.
    """
    cached = _QUADRUPLE_CACHE.get(n)
    if cached is None:
        i0, i1, i2, i3 = [], [], [], []
        for n0 in range(n):
            for n1 in range(n):
                for n2 in range(n):
                    n3 = n0 + n1 - n2
                    if 0 <= n3 < n:
                        i0.append(n0)
                        i1.append(n1)
                        i2.append(n2)
                        i3.append(n3)
        cached = tuple(np.asarray(ix, dtype=np.intp) for ix in (i0, i1, i2, i3))
        _QUADRUPLE_CACHE[n] = cached
    return cached


def moment2(tones: ReceivedTones) -> float:
    """Time-average of y(t)^2: half the summed tone powers."""
    return float(np.sum(np.abs(tones.a) ** 2)) / 2.0


def resonant_quadruple_sum(tones: ReceivedTones) -> complex:
    """sum a_n0 a_n1 conj(a_n2) conj(a_n3) over quadruples with n0+n1 = n2+n3.

    The sum is Hermitian-symmetric, so its imaginary part is zero up to
    rounding; `moment4` keeps the real part.
    """
    i0, i1, i2, i3 = _resonant_quadruples(tones.n_tones)
    a = tones.a
    return complex(np.sum(a[i0] * a[i1] * np.conj(a[i2]) * np.conj(a[i3])))


def moment4(tones: ReceivedTones) -> float:
    """Time-average of y(t)^4: (3/8) times the resonant quadruple sum.

    Only quadruples of tone indices with n0 + n1 = n2 + n3 survive time
    averaging on an evenly spaced grid; every one of them beats to DC and
    contributes with weight 3/8.
    """
    return 0.375 * resonant_quadruple_sum(tones).real


def z_dc(tones: ReceivedTones, params: RectifierParams) -> float:
    """Rectifier DC output k2 R m2 + k4 R^2 m4 (model units)."""
    m2 = moment2(tones)
    m4 = moment4(tones)
    return params.k2 * params.r_ant * m2 + params.k4 * params.r_ant**2 * m4


def min_oracle_samples(tones: ReceivedTones) -> int:
    """Smallest admissible sample count for `z_dc_time_oracle`."""
    q0 = round(tones.grid.f0 / tones.grid.delta_f)
    return 8 * (q0 + tones.n_tones)


def z_dc_time_oracle(
    tones: ReceivedTones, params: RectifierParams, samples: int | None = None
) -> float:
    """Recompute z_dc by uniformly sampling y(t) over one waveform period.

    The comb is snapped to exact harmonics of delta_f (f0 rounded to an
    integer multiple), making the waveform periodic with period 1/delta_f.
    Sample phases are reduced modulo the sample count in integer arithmetic,
    so the sampled averages of y^2 and y^4 are exact up to rounding provided
    `samples` is at least 8 (f0 + N delta_f) / delta_f; fewer samples would
    alias fourth-order products onto DC and raise instead.
    """
    needed = min_oracle_samples(tones)
    if needed > _MAX_ORACLE_SAMPLES:
        raise ValueError(
            "grid is too fine for the time oracle: "
            f"{needed} samples would be required"
        )
    if samples is None:
        samples = needed
    if samples < needed:
        raise ValueError(
            f"insufficient sampling rate: need at least {needed} samples, got {samples}"
        )
    if samples > _MAX_ORACLE_SAMPLES:
        raise ValueError(f"sample count {samples} is beyond the oracle's budget")
    q0 = round(tones.grid.f0 / tones.grid.delta_f)
    k = np.arange(samples, dtype=np.int64)
    y = np.zeros(samples)
    for n in range(tones.n_tones):
        idx = ((q0 + n) % samples) * k % samples
        y += (tones.a[n] * np.exp(2j * np.pi * idx / samples)).real
    m2 = float(np.mean(y**2))
    m4 = float(np.mean(y**4))
    return params.k2 * params.r_ant * m2 + params.k4 * params.r_ant**2 * m4


def scaling_law_cw(params: RectifierParams, path_loss: float, p: float) -> float:
    """Expected CW output over unit-variance fading.

    k2 R p / L + 3 k4 R^2 p^2 / L^2; the factor 3 is (3/2) times the
    fourth moment (= 2) of a unit-variance Rayleigh channel amplitude.
    """
    if not path_loss > 0:
        raise ValueError("path_loss must be positive")
    if not p > 0:
        raise ValueError("p must be positive")
    second = params.k2 * params.r_ant * p / path_loss
    fourth = 3.0 * params.k4 * params.r_ant**2 * p**2 / path_loss**2
    return second + fourth


def scaling_law_ca(
    params: RectifierParams,
    path_loss: float,
    p: float,
    n_tones: int,
    m_antennas: int,
) -> float:
    """Channel-adaptive multisine scaling: k2 R p M / L + k4 R^2 p^2 N M^2 / L^2.

    A trend law, not an exact mean: the second-order term grows linearly in
    antennas, the fourth-order term linearly in tones and quadratically in
    antennas.
    """
    if not path_loss > 0:
        raise ValueError("path_loss must be positive")
    if not p > 0:
        raise ValueError("p must be positive")
    if n_tones < 1:
        raise ValueError("n_tones must be >= 1")
    if m_antennas < 1:
        raise ValueError("m_antennas must be >= 1")
    second = params.k2 * params.r_ant * p * m_antennas / path_loss
    fourth = (
        params.k4 * params.r_ant**2 * p**2 * n_tones * m_antennas**2 / path_loss**2
    )
    return second + fourth
