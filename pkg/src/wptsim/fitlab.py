"""Power-law analysis of harvested DC power versus distance.

Measured (or simulated) curves are summarized as p(d) = a d^b by ordinary
least squares on log p versus log d; inverting a fit turns a target power
into an operating range, and ratios of inverted ranges quantify how much
range a design change buys.  A frozen table of reference coefficients from
a published desk-scale measurement campaign anchors the claim checks.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

MEASUREMENT_FIELDS = ["scheme", "n_tones", "m_antennas", "distance_m", "p_dc"]


@dataclass(frozen=True)
class PowerLawFit:
    """Decay law p(d) = a d^b with a > 0 and b < 0."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.b < 0:
            raise ValueError("b must be negative (power decays with distance)")


@dataclass(frozen=True)
class MeasurementRecord:
    """One observation: a scheme/configuration, a distance, and a DC power."""

    scheme: str
    n_tones: int
    m_antennas: int
    distance: float
    p_dc: float

    def __post_init__(self) -> None:
        if self.n_tones < 1:
            raise ValueError("n_tones must be >= 1")
        if self.m_antennas < 1:
            raise ValueError("m_antennas must be >= 1")
        if not self.distance > 0:
            raise ValueError("distance must be positive")


@dataclass(frozen=True)
class ReferenceCurve:
    """Published fitted curve for one scheme/configuration."""

    scheme: str
    n_tones: int
    m_antennas: int
    fit: PowerLawFit


# Fitted (a, b) pairs from the reference measurement campaign: a tone series
# (matched-filter multisine, one antenna) and an antenna series (single-tone
# beamforming).  The (1, 1) entry is the shared single-tone baseline.
PAPER_COEFFICIENTS: tuple[ReferenceCurve, ...] = (
    ReferenceCurve("smf", 1, 1, PowerLawFit(8.081, -1.553)),
    ReferenceCurve("smf", 2, 1, PowerLawFit(9.975, -1.538)),
    ReferenceCurve("smf", 4, 1, PowerLawFit(12.52, -1.560)),
    ReferenceCurve("smf", 8, 1, PowerLawFit(14.32, -1.577)),
    ReferenceCurve("mrt", 1, 2, PowerLawFit(18.05, -1.535)),
    ReferenceCurve("mrt", 1, 4, PowerLawFit(37.07, -1.488)),
    ReferenceCurve("mrt", 1, 8, PowerLawFit(70.97, -1.417)),
)


def paper_fit(scheme: str, n_tones: int, m_antennas: int) -> PowerLawFit:
    """Look up a reference curve; the (1, 1) baseline answers for any scheme."""
    for entry in PAPER_COEFFICIENTS:
        if (entry.n_tones, entry.m_antennas) == (n_tones, m_antennas) and (
            entry.scheme == scheme or (n_tones, m_antennas) == (1, 1)
        ):
            return entry.fit
    raise ValueError(
        f"no reference curve for scheme={scheme!r}, n_tones={n_tones}, "
        f"m_antennas={m_antennas}"
    )


def paper_baseline() -> PowerLawFit:
    """The single-tone, single-antenna reference curve."""
    return PAPER_COEFFICIENTS[0].fit


def fit_power_law(records: list[MeasurementRecord]) -> PowerLawFit:
    """OLS fit of log p_dc against log distance.

    Requires at least two distinct distances and strictly positive powers;
    noiseless power-law data is recovered to rounding error.
    """
    if any(r.p_dc <= 0 for r in records):
        raise ValueError("fit requires strictly positive p_dc values")
    distances = np.array([r.distance for r in records], dtype=float)
    if len(set(distances.tolist())) < 2:
        raise ValueError("fit requires at least two distinct distances")
    x = np.log(distances)
    y = np.log(np.array([r.p_dc for r in records], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    return PowerLawFit(a=float(np.exp(intercept)), b=float(slope))


def predict_pdc(fit: PowerLawFit, distance: float) -> float:
    """Power at a distance under the fitted law."""
    if not distance > 0:
        raise ValueError("distance must be positive")
    return fit.a * distance**fit.b


def invert_range(fit: PowerLawFit, p_target: float) -> float:
    """Distance at which the fitted law delivers `p_target`."""
    if not p_target > 0:
        raise ValueError("p_target must be positive")
    return (p_target / fit.a) ** (1.0 / fit.b)


def range_gain(fit_new: PowerLawFit, fit_ref: PowerLawFit, p_target: float) -> float:
    """Ratio of achievable ranges at a common target power."""
    return invert_range(fit_new, p_target) / invert_range(fit_ref, p_target)


def compose_cumulative(
    base: PowerLawFit, tone_fit: PowerLawFit, antenna_fit: PowerLawFit
) -> PowerLawFit:
    """Stack a tone gain and an antenna gain measured against a common base.

    Amplitudes compose multiplicatively relative to the base and exponent
    shifts add, predicting the curve of the combined configuration from the
    two single-axis measurements.
    """
    a = base.a * (tone_fit.a / base.a) * (antenna_fit.a / base.a)
    b = base.b + (tone_fit.b - base.b) + (antenna_fit.b - base.b)
    return PowerLawFit(a=a, b=b)


def log_residual_rms(fit: PowerLawFit, records: list[MeasurementRecord]) -> float:
    """Root-mean-square residual of the fit in natural-log space."""
    if not records:
        raise ValueError("no records")
    resid = [
        math.log(r.p_dc) - (math.log(fit.a) + fit.b * math.log(r.distance))
        for r in records
    ]
    return math.sqrt(sum(e * e for e in resid) / len(resid))


def group_records(
    records: list[MeasurementRecord],
) -> dict[tuple[str, int, int], list[MeasurementRecord]]:
    """Split records by (scheme, n_tones, m_antennas), keys sorted."""
    groups: dict[tuple[str, int, int], list[MeasurementRecord]] = {}
    for r in records:
        groups.setdefault((r.scheme, r.n_tones, r.m_antennas), []).append(r)
    return {key: groups[key] for key in sorted(groups)}


def fit_report(records: list[MeasurementRecord]) -> dict:
    """Fit every (scheme, n_tones, m_antennas) group and report coefficients.

    Returns a JSON-ready dict: one entry per group with a, b, the log-space
    residual RMS, and the record count.
    """
    fits = []
    for (scheme, n_tones, m_antennas), group in group_records(records).items():
        fit = fit_power_law(group)
        fits.append(
            {
                "scheme": scheme,
                "n_tones": n_tones,
                "m_antennas": m_antennas,
                "a": fit.a,
                "b": fit.b,
                "log_rms": log_residual_rms(fit, group),
                "n_records": len(group),
            }
        )
    return {"fits": fits}


def format_fit_report(report: dict, sig_digits: int = 9) -> str:
    """Render a fit report as JSON text with rounded floats."""

    def tidy(value):
        if isinstance(value, float):
            return float(format(value, f".{sig_digits}g"))
        return value

    shaped = {
        "fits": [{k: tidy(v) for k, v in entry.items()} for entry in report["fits"]]
    }
    return json.dumps(shaped, indent=2)


def read_measurements_csv(path: str) -> list[MeasurementRecord]:
    """Read `scheme,n_tones,m_antennas,distance_m,p_dc` rows."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != MEASUREMENT_FIELDS:
            raise ValueError(
                f"measurement CSV must have header {','.join(MEASUREMENT_FIELDS)}"
            )
        records = [
            MeasurementRecord(
                scheme=row["scheme"],
                n_tones=int(row["n_tones"]),
                m_antennas=int(row["m_antennas"]),
                distance=float(row["distance_m"]),
                p_dc=float(row["p_dc"]),
            )
            for row in reader
        ]
    if not records:
        raise ValueError("measurement CSV holds no rows")
    return records


def write_measurements_csv(path: str, records: list[MeasurementRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MEASUREMENT_FIELDS)
        for r in records:
            writer.writerow(
                [
                    r.scheme,
                    r.n_tones,
                    r.m_antennas,
                    format(r.distance, ".9g"),
                    format(r.p_dc, ".9g"),
                ]
            )
