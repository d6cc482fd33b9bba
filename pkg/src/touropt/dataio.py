"""Dataset ingestion, preprocessing, and calibrated regional presets.

CSV tables come in with a ``year`` column plus any subset of the exogenous
series (arbitrary headers are handled through a column map).  Gaps are
filled by linear interpolation, with nearest-value fill at the edges, and
the dense result is range-checked against a preset envelope.

The published regional tables are not distributed with the model, so each
preset also ships a synthetic generator: smooth trends pinned to the
published endpoints and ranges, with small seeded noise (<= 2%) in the
interior.  Population and unemployment default to documented constants.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .sd_core import (
    ICELAND_BOUNDS,
    JUNEAU_BOUNDS,
    SERIES_FIELDS,
    ExogenousSeries,
    ModelCoefficients,
    PolicyBounds,
    PolicyVector,
    SimState,
)
from .scenario import FeedbackCoefficients

__all__ = [
    "RawAnnualTable",
    "RegionPreset",
    "DEFAULT_COLUMN_MAP",
    "load_table",
    "interpolate_missing",
    "validate_ranges",
    "synth_dataset",
    "initial_state",
    "write_series",
    "get_preset",
    "PRESETS",
]

# canonical column names; files may use any header that the map translates
DEFAULT_COLUMN_MAP = {
    "year": "year",
    "v_base": "V_base",
    "visitors": "V_base",
    "r_gov_base": "R_gov_base",
    "gov_revenue": "R_gov_base",
    "exp_gov_base": "EXP_gov_base",
    "gov_expenditure": "EXP_gov_base",
    "g_retreat": "G_retreat",
    "glacier_retreat": "G_retreat",
    "co2_emission": "CO2_emission",
    "co2": "CO2_emission",
    "population": "population",
    "unemployment": "unemployment",
    "s_sat_base": "S_sat_base",
    "satisfaction": "S_sat_base",
}


@dataclass
class RawAnnualTable:
    """Parsed but unfilled annual table; NaN marks missing cells."""

    years: np.ndarray
    columns: dict  # canonical name -> float array aligned with years


def load_table(path, column_map: dict | None = None) -> RawAnnualTable:
    """Read an annual CSV into a typed table.

    Unparseable cells become missing (NaN), never zero.  A missing year
    column or duplicate years are format errors.
    """
    mapping = dict(DEFAULT_COLUMN_MAP)
    if column_map:
        mapping.update({k.lower(): v for k, v in column_map.items()})
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh)
                    if r and not (r[0] or "").lstrip().startswith("#")]
    except FileNotFoundError:
        raise DataError(f"dataset file not found: {path}")
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    canon = [mapping.get(h.lower()) for h in header]
    if "year" not in canon:
        raise DataError(f"{path}: no year column (headers: {header})")
    year_idx = canon.index("year")
    years, records = [], []
    for r in rows[1:]:
        try:
            years.append(int(float(r[year_idx])))
        except (ValueError, IndexError):
            raise DataError(f"{path}: unparseable year in row {r!r}")
        records.append(r)
    if len(set(years)) != len(years):
        dupes = sorted({y for y in years if years.count(y) > 1})
        raise DataError(f"{path}: duplicate years {dupes}")
    order = np.argsort(years)
    years_arr = np.asarray(years)[order]
    columns = {}
    for j, name in enumerate(canon):
        if name is None or name == "year":
            continue
        vals = np.full(len(records), np.nan)
        for i, r in enumerate(records):
            cell = r[j].strip() if j < len(r) else ""
            if cell:
                try:
                    vals[i] = float(cell)
                except ValueError:
                    pass  # stays missing
        columns[name] = vals[order]
    return RawAnnualTable(years=years_arr, columns=columns)


def _fill_series(years: np.ndarray, values: np.ndarray, name: str) -> np.ndarray:
    known = np.isfinite(values)
    if known.sum() < 2:
        raise DataError(f"column {name}: need at least 2 known values")
    filled = np.interp(years.astype(float), years[known].astype(float), values[known])
    return filled


def interpolate_missing(table: RawAnnualTable,
                        defaults: dict | None = None) -> ExogenousSeries:
    """Densify a raw table into an :class:`ExogenousSeries`.

    Interior gaps are linearly interpolated; leading/trailing gaps take the
    nearest known value.  Missing whole years inside the range are
    reinstated and filled the same way.  Columns absent from the table can
    be supplied as constants through ``defaults``.
    """
    if len(table.years) == 0:
        raise DataError("empty table")
    full_years = np.arange(int(table.years[0]), int(table.years[-1]) + 1)
    idx = {int(y): i for i, y in enumerate(table.years)}
    data = {}
    for name in SERIES_FIELDS:
        if name in table.columns:
            aligned = np.full(len(full_years), np.nan)
            for k, y in enumerate(full_years):
                if int(y) in idx:
                    aligned[k] = table.columns[name][idx[int(y)]]
            data[name] = _fill_series(full_years, aligned, name)
        elif defaults and name in defaults:
            data[name] = np.full(len(full_years), float(defaults[name]))
        else:
            raise DataError(f"column {name} missing and no default provided")
    series = ExogenousSeries(years=full_years, **data)
    series.validate()
    return series


def validate_ranges(series: ExogenousSeries, envelope: dict) -> list:
    """Flag values outside the preset's plausibility envelope.

    Returns warning strings; never mutates the series.
    """
    warnings = []
    for name, (lo, hi) in envelope.items():
        arr = getattr(series, name)
        for i, v in enumerate(arr):
            if v < lo or v > hi:
                warnings.append(
                    f"{name}[{int(series.years[i])}] = {v:g} outside [{lo:g}, {hi:g}]")
    return warnings


@dataclass(frozen=True)
class RegionPreset:
    """Everything regional: bounds, coefficients, envelopes, synth shapes.

    ``synth`` maps each series to (first-year value, final-year value,
    curve) where curve is "linear" or "s" (slow-fast-slow ramp).
    ``initial_env`` is either a fixed value or (center, halfwidth) for a
    seeded uniform draw.
    """

    name: str
    bounds: PolicyBounds
    coefficients: ModelCoefficients
    reference_policy: PolicyVector
    feedback: FeedbackCoefficients
    envelope: dict
    synth: dict
    initial_env: tuple  # (value,) fixed or (center, halfwidth) randomized
    years: tuple = (2008, 2024)
    noise_rel: float = 0.02
    ea_population: int = 100
    ea_generations: int = 40


def _curve(n: int, start: float, end: float, kind: str) -> np.ndarray:
    u = np.linspace(0.0, 1.0, n)
    if kind == "s":
        u = u * u * (3.0 - 2.0 * u)  # smoothstep, stays in [0, 1]
    return start + (end - start) * u


def synth_dataset(preset: RegionPreset, seed: int) -> ExogenousSeries:
    """Deterministic synthetic series for a preset.

    Endpoints are pinned exactly; interior points get multiplicative noise
    bounded by ``noise_rel`` and are clipped into the preset envelope, so a
    synthetic series always passes :func:`validate_ranges` for its own
    preset with zero warnings.
    """
    rng = np.random.default_rng(seed)
    y0, y1 = preset.years
    years = np.arange(y0, y1 + 1)
    n = len(years)
    data = {}
    for name in SERIES_FIELDS:
        start, end, kind = preset.synth[name]
        base = _curve(n, start, end, kind)
        noise = 1.0 + preset.noise_rel * rng.uniform(-1.0, 1.0, size=n)
        noise[0] = noise[-1] = 1.0  # endpoints pinned
        vals = base * noise
        if name in preset.envelope:
            lo, hi = preset.envelope[name]
            vals = np.clip(vals, lo, hi)
        data[name] = vals
    series = ExogenousSeries(years=years, **data)
    series.validate()
    return series


def initial_state(preset: RegionPreset, exog: ExogenousSeries,
                  seed: int | None = None) -> SimState:
    """Initial stocks: first-year visitors and satisfaction from the data,
    environment index from the preset rule, zero accumulated revenue."""
    if len(preset.initial_env) == 1:
        e0 = float(preset.initial_env[0])
    else:
        center, half = preset.initial_env
        rng = np.random.default_rng(0 if seed is None else seed)
        e0 = float(center + half * rng.uniform(-1.0, 1.0))
    return SimState(
        visitors=float(exog.V_base[0]),
        env_index=e0,
        satisfaction=float(exog.S_sat_base[0]),
        net_revenue_cum=0.0,
    )


def write_series(series: ExogenousSeries, path, header_lines=()) -> None:
    """Write a dense series as CSV; floats via repr so reload is exact."""
    path = Path(path)
    cols = ("year",) + SERIES_FIELDS
    with path.open("w", newline="", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        w = csv.writer(fh)
        w.writerow(cols)
        for i, y in enumerate(series.years):
            row = [int(y)] + [repr(float(getattr(series, c)[i])) for c in SERIES_FIELDS]
            w.writerow(row)


JUNEAU = RegionPreset(
    name="juneau",
    bounds=JUNEAU_BOUNDS,
    coefficients=ModelCoefficients(),
    reference_policy=PolicyVector(
        tax_rate=0.15, env_ratio=0.2, dev_incentive=0.5, capacity_limit=2.5e6,
        ship_limit=700.0, carbon_fee=40.0, glacier_ratio=0.5,
    ),
    feedback=FeedbackCoefficients(
        infra_efficiency=0.03, marketing_efficiency=0.02,
        community_efficiency=5e-9,
    ),
    envelope={
        "V_base": (5e5, 3.1e6),
        "R_gov_base": (5e6, 1.03e7),
        "EXP_gov_base": (5e6, 1.2e7),
        "G_retreat": (220.0, 350.0),
        "CO2_emission": (77000.0, 104800.0),
        "population": (25000.0, 40000.0),
        "unemployment": (0.0, 0.15),
        "S_sat_base": (0.25, 0.55),
    },
    synth={
        "V_base": (1.2e6, 3.05e6, "s"),
        "R_gov_base": (7.5e6, 1.0e7, "linear"),
        "EXP_gov_base": (8.0e6, 1.1e7, "linear"),
        "G_retreat": (230.0, 340.0, "linear"),
        "CO2_emission": (78500.0, 102500.0, "linear"),
        "population": (32000.0, 32000.0, "linear"),
        "unemployment": (0.045, 0.045, "linear"),
        "S_sat_base": (0.48, 0.29, "linear"),
    },
    initial_env=(0.70,),
)

ICELAND = RegionPreset(
    name="iceland",
    bounds=ICELAND_BOUNDS,
    coefficients=replace(
        ModelCoefficients(),
        kappa=0.25,
        alpha_gov_base=0.35,
        G_retreat_baseline=240.0,
        P_visitor_base=35.0,   # arrival-fee base rather than a cruise ticket
        P_ship_capacity=4000.0,  # visitors per flight slot
        beta2=1.0e-7,
        p2=3e-3,               # housing pressure: stronger crowding response
    ),
    reference_policy=PolicyVector(
        tax_rate=0.12, env_ratio=0.25, dev_incentive=0.5, capacity_limit=3e6,
        ship_limit=700.0, carbon_fee=50.0, glacier_ratio=0.6,
    ),
    feedback=FeedbackCoefficients(
        # published factors 4000 / 2500 read as per-1e5-USD gains
        infra_efficiency=0.04, marketing_efficiency=0.025,
        community_efficiency=5e-9,
    ),
    envelope={
        "V_base": (3e5, 3.2e6),
        "R_gov_base": (8e6, 2.5e7),
        "EXP_gov_base": (1e7, 6e7),
        "G_retreat": (200.0, 300.0),
        "CO2_emission": (1.5e5, 3.0e5),
        "population": (3.0e5, 4.5e5),
        "unemployment": (0.0, 0.15),
        "S_sat_base": (0.3, 0.65),
    },
    synth={
        "V_base": (5.0e5, 3.15e6, "s"),
        "R_gov_base": (1.0e7, 2.2e7, "linear"),
        "EXP_gov_base": (1.5e7, 4.5e7, "linear"),
        "G_retreat": (210.0, 290.0, "linear"),
        "CO2_emission": (1.7e5, 2.7e5, "linear"),
        "population": (3.7e5, 3.7e5, "linear"),
        "unemployment": (0.04, 0.04, "linear"),
        "S_sat_base": (0.55, 0.40, "linear"),
    },
    initial_env=(0.65, 0.05),
    ea_population=120,
    ea_generations=80,
)

PRESETS = {"juneau": JUNEAU, "iceland": ICELAND}


def get_preset(name: str) -> RegionPreset:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
