"""Scenario data model: load, validate and freeze all inputs of a model run.

A scenario bundles zones, technologies, capacity bounds, hourly time series,
the heat-pump rollout, policy settings and trade capacities.  All quantities
are converted to the repo-wide unit system at load time: MW, MWh (MWh_th for
heat), EUR, tonnes CO2, hours.  Exceptions are the cost-table fields of
:class:`Technology`, which keep the EUR/kW and EUR/kWh units of the published
cost assumptions; the LP builder converts them exactly once.

Config files are TOML; time series are CSV files with a leading ``hour``
column (1..H).  A loaded :class:`Scenario` is immutable (frozen dataclasses,
read-only numpy arrays) and can be shared freely between concurrent runs.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

import numpy as np
import tomli

from .errors import (
    DomainError,
    InvariantViolation,
    LengthMismatch,
    MissingFile,
    SchemaViolation,
)

HOURS_PER_YEAR = 8760
TECH_KINDS = ("thermal", "renewable", "storage", "reservoir", "electrolysis")
BOUND_PARTS = ("power", "power_in", "power_out", "energy")
COAL_FUELS = ("lignite", "hard_coal")
DROUGHT_CLASSES = ("wind", "solar")


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Zone:
    id: str
    is_investment_zone: bool = False


@dataclass(frozen=True)
class Technology:
    """Cost and conversion parameters of one technology.

    ``overnight_cost`` is EUR/kW of (discharge) power, ``overnight_cost_charge``
    EUR/kW of charging power (storage only), ``overnight_cost_energy`` EUR/kWh
    of storage energy.  ``fuel_cost`` is EUR/MWh thermal fuel; ``fuel == "gas"``
    marks technologies whose fuel price follows the policy gas price.
    ``res_class`` tags weather-driven renewables ("wind", "solar", "hydro");
    wind and solar are the classes affected by a renewable-drought override.
    ``max_full_load_hours`` optionally caps yearly energy per MW of capacity.
    """

    id: str
    kind: str
    overnight_cost: float = 0.0
    overnight_cost_charge: float | None = None
    overnight_cost_energy: float = 0.0
    fixed_om: float = 0.0
    lifetime: float = 20.0
    interest_rate: float = 0.04
    efficiency: float = 1.0
    efficiency_charge: float = 1.0
    efficiency_discharge: float = 1.0
    fuel: str = ""
    fuel_cost: float = 0.0
    carbon_content: float = 0.0
    availability: float = 1.0
    marginal_cost_adder: float = 0.0
    res_class: str = ""
    max_full_load_hours: float | None = None

    def validate(self) -> None:
        if self.kind not in TECH_KINDS:
            raise SchemaViolation(f"technology {self.id}: unknown kind {self.kind!r}")
        for name, eff in (
            ("efficiency", self.efficiency),
            ("efficiency_charge", self.efficiency_charge),
            ("efficiency_discharge", self.efficiency_discharge),
        ):
            if not 0.0 < eff <= 1.0:
                raise InvariantViolation(
                    f"technology {self.id}: {name} must be in (0, 1], got {eff}"
                )
        for name, cost in (
            ("overnight_cost", self.overnight_cost),
            ("overnight_cost_energy", self.overnight_cost_energy),
            ("fixed_om", self.fixed_om),
            ("fuel_cost", self.fuel_cost),
        ):
            if cost < 0:
                raise InvariantViolation(f"technology {self.id}: {name} < 0")
        if self.lifetime < 1:
            raise InvariantViolation(f"technology {self.id}: lifetime < 1")
        if not 0.0 <= self.availability <= 1.0:
            raise InvariantViolation(f"technology {self.id}: availability outside [0, 1]")


@dataclass(frozen=True)
class CapacityBound:
    """Installed-capacity range for one zone/technology (MW, MWh for energy).

    ``part`` selects which capacity of a storage technology the row bounds;
    plain generators use "power".  Fixed capacity is encoded as min == max.
    """

    zone: str
    tech: str
    min: float
    max: float
    part: str = "power"

    def validate(self) -> None:
        if self.part not in BOUND_PARTS:
            raise SchemaViolation(f"bound {self.zone}/{self.tech}: bad part {self.part!r}")
        if self.min < 0 or self.min > self.max:
            raise InvariantViolation(
                f"bound {self.zone}/{self.tech}/{self.part}: need 0 <= min <= max,"
                f" got [{self.min}, {self.max}]"
            )

    @property
    def is_fixed(self) -> bool:
        return self.min == self.max


@dataclass(frozen=True)
class TradeLink:
    from_zone: str
    to_zone: str
    capacity: float  # MW, directed


@dataclass(frozen=True)
class TimeSeriesSet:
    """All hourly inputs, each exactly ``horizon`` entries long."""

    horizon: int
    load: Mapping[str, np.ndarray]  # zone -> MW
    capacity_factor: Mapping[tuple[str, str], np.ndarray]  # (zone, tech) -> [0, 1]
    inflow: Mapping[str, np.ndarray]  # zone -> MWh reservoir inflow per hour
    ev_profile: np.ndarray  # normalized, focal zone
    heat_demand: Mapping[str, np.ndarray]  # archetype -> MWh_th of the full stock
    temperature: np.ndarray  # ambient air temperature, deg C


@dataclass(frozen=True)
class RolloutSpec:
    """One heat-pump expansion path.

    ``archetype_shares`` maps a building archetype to its (air, ground)
    heat-pump penetration shares; they are rescaled so the aggregate yearly
    heat matches ``yearly_heat``.
    """

    name: str
    n_heat_pumps: float  # millions of units
    power_rating_el: float  # GW_e
    thermal_capacity: float  # GW_th
    share_air: float
    share_ground: float
    yearly_heat: float  # TWh_th per year
    archetype_shares: Mapping[str, tuple[float, float]]

    def validate(self) -> None:
        if abs(self.share_air + self.share_ground - 1.0) > 1e-9:
            raise InvariantViolation(
                f"rollout {self.name}: share_air + share_ground must be 1"
            )
        if self.thermal_capacity <= 0:
            raise InvariantViolation(f"rollout {self.name}: thermal_capacity <= 0")
        for arch, (a, g) in self.archetype_shares.items():
            if not (0.0 <= a <= 1.0 and 0.0 <= g <= 1.0):
                raise InvariantViolation(
                    f"rollout {self.name}: shares for {arch} outside [0, 1]"
                )


@dataclass(frozen=True)
class PolicySettings:
    res_share_target: float = 0.8
    hp_additionality: bool = True
    gas_price: float = 50.0  # EUR/MWh_th
    carbon_price: float = 130.0  # EUR/t CO2
    ep_ratio_hours: float = 0.0
    electrolysis_capacity: float = 10.0  # GW
    h2_demand: float = 28.0  # TWh_H2 per year
    h2_conversion: float = 0.71
    coal_phase_out: bool = False
    wind_cap_removed: bool = False
    re_drought_week: int | None = None

    def validate(self) -> None:
        if not 0.0 <= self.res_share_target <= 1.0:
            raise InvariantViolation("policy: res_share_target outside [0, 1]")
        if self.ep_ratio_hours < 0:
            raise InvariantViolation("policy: ep_ratio_hours < 0")
        if not 0.0 < self.h2_conversion <= 1.0:
            raise InvariantViolation("policy: h2_conversion outside (0, 1]")
        if self.electrolysis_capacity < 0 or self.h2_demand < 0:
            raise InvariantViolation("policy: negative hydrogen settings")


@dataclass(frozen=True)
class Scenario:
    """Complete, immutable description of one model run."""

    name: str
    horizon: int
    zones: tuple[Zone, ...]
    technologies: Mapping[str, Technology]
    bounds: tuple[CapacityBound, ...]
    series: TimeSeriesSet
    rollout: RolloutSpec
    rollouts: Mapping[str, RolloutSpec]
    policy: PolicySettings
    ntc: tuple[TradeLink, ...]
    value_of_lost_load: float = 3000.0
    ev_annual_energy: float = 0.0  # MWh per year
    heat_storage_loss: float = 0.0  # fraction of level lost per hour

    @property
    def focal_zone(self) -> str:
        for z in self.zones:
            if z.is_investment_zone:
                return z.id
        raise InvariantViolation("scenario has no investment zone")

    @property
    def zone_ids(self) -> tuple[str, ...]:
        return tuple(z.id for z in self.zones)

    @property
    def year_fraction(self) -> float:
        """Fraction of a year covered by the horizon."""
        return self.horizon / HOURS_PER_YEAR

    def bounds_for(self, zone: str, tech: str) -> dict[str, CapacityBound]:
        return {b.part: b for b in self.bounds if b.zone == zone and b.tech == tech}

    def zone_techs(self) -> list[tuple[str, str]]:
        """Distinct (zone, tech) pairs present in the bounds table, config order."""
        seen: list[tuple[str, str]] = []
        for b in self.bounds:
            key = (b.zone, b.tech)
            if key not in seen:
                seen.append(key)
        return seen


# ---------------------------------------------------------------------------
# elementary cost operations


def annuity_factor(rate: float, lifetime: float) -> float:
    """Yearly payment fraction equivalent to an overnight cost of 1.

    Uses r(1+r)^L / ((1+r)^L - 1); the zero-interest limit is 1/L.
    """
    if lifetime < 1:
        raise DomainError(f"annuity_factor: lifetime must be >= 1, got {lifetime}")
    if rate < 0:
        raise DomainError(f"annuity_factor: rate must be >= 0, got {rate}")
    if rate == 0.0:
        return 1.0 / lifetime
    growth = (1.0 + rate) ** lifetime
    return rate * growth / (growth - 1.0)


def effective_fuel_cost(tech: Technology, policy: PolicySettings) -> float:
    """Fuel cost in EUR/MWh_th, with gas-fired plants priced at the policy gas price."""
    if tech.fuel == "gas":
        return policy.gas_price
    return tech.fuel_cost


def marginal_cost(tech: Technology, policy: PolicySettings) -> float:
    """Variable generation cost in EUR/MWh_el: (fuel + carbon) / efficiency + adder."""
    if tech.efficiency <= 0:
        raise DomainError(f"marginal_cost: technology {tech.id} has efficiency <= 0")
    fuel = effective_fuel_cost(tech, policy)
    thermal = fuel + tech.carbon_content * policy.carbon_price
    return thermal / tech.efficiency + tech.marginal_cost_adder


# ---------------------------------------------------------------------------
# config loading


def _require(table: Mapping, key: str, where: str):
    if key not in table:
        raise SchemaViolation(f"{where}: missing required key {key!r}")
    return table[key]


def _read_series_csv(path: Path) -> dict[str, np.ndarray]:
    """Read an ``hour,<col>,...`` CSV into full-length column arrays."""
    if not path.exists():
        raise MissingFile(f"time series file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "hour":
            raise SchemaViolation(f"{path.name}: first column must be 'hour'")
        names = header[1:]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise SchemaViolation(f"{path.name}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise SchemaViolation(f"{path.name}:{lineno}: {exc}") from None
    data = np.asarray(rows, dtype=float)
    if data.size == 0:
        raise SchemaViolation(f"{path.name}: no data rows")
    if not np.array_equal(data[:, 0], np.arange(1, len(rows) + 1)):
        raise SchemaViolation(f"{path.name}: hour column must run 1..{len(rows)}")
    return {name: data[:, i + 1].copy() for i, name in enumerate(names)}


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _load_technology(tech_id: str, t: Mapping) -> Technology:
    known = {
        "kind",
        "overnight_cost_eur_per_kw",
        "overnight_cost_charge_eur_per_kw",
        "overnight_cost_energy_eur_per_kwh",
        "fixed_om_eur_per_kw_yr",
        "lifetime_years",
        "interest_rate",
        "efficiency",
        "efficiency_charge",
        "efficiency_discharge",
        "fuel",
        "fuel_cost_eur_per_mwh_th",
        "carbon_content_t_per_mwh_th",
        "availability",
        "marginal_cost_adder_eur_per_mwh",
        "res_class",
        "max_full_load_hours",
    }
    unknown = set(t) - known
    if unknown:
        raise SchemaViolation(f"technology {tech_id}: unknown keys {sorted(unknown)}")
    tech = Technology(
        id=tech_id,
        kind=_require(t, "kind", f"technology {tech_id}"),
        overnight_cost=float(t.get("overnight_cost_eur_per_kw", 0.0)),
        overnight_cost_charge=(
            float(t["overnight_cost_charge_eur_per_kw"])
            if "overnight_cost_charge_eur_per_kw" in t
            else None
        ),
        overnight_cost_energy=float(t.get("overnight_cost_energy_eur_per_kwh", 0.0)),
        fixed_om=float(t.get("fixed_om_eur_per_kw_yr", 0.0)),
        lifetime=float(t.get("lifetime_years", 20.0)),
        interest_rate=float(t.get("interest_rate", 0.04)),
        efficiency=float(t.get("efficiency", 1.0)),
        efficiency_charge=float(t.get("efficiency_charge", 1.0)),
        efficiency_discharge=float(t.get("efficiency_discharge", 1.0)),
        fuel=str(t.get("fuel", "")),
        fuel_cost=float(t.get("fuel_cost_eur_per_mwh_th", 0.0)),
        carbon_content=float(t.get("carbon_content_t_per_mwh_th", 0.0)),
        availability=float(t.get("availability", 1.0)),
        marginal_cost_adder=float(t.get("marginal_cost_adder_eur_per_mwh", 0.0)),
        res_class=str(t.get("res_class", "")),
        max_full_load_hours=(
            float(t["max_full_load_hours"]) if "max_full_load_hours" in t else None
        ),
    )
    tech.validate()
    return tech


def _load_rollout(name: str, r: Mapping) -> RolloutSpec:
    shares_raw = _require(r, "shares", f"rollout {name}")
    shares = {}
    for arch, pair in shares_raw.items():
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SchemaViolation(f"rollout {name}: shares.{arch} must be [air, ground]")
        shares[arch] = (float(pair[0]), float(pair[1]))
    spec = RolloutSpec(
        name=name,
        n_heat_pumps=float(_require(r, "heat_pumps_million", f"rollout {name}")),
        power_rating_el=float(_require(r, "power_rating_gwe", f"rollout {name}")),
        thermal_capacity=float(_require(r, "thermal_capacity_gwth", f"rollout {name}")),
        share_air=float(_require(r, "share_air", f"rollout {name}")),
        share_ground=float(_require(r, "share_ground", f"rollout {name}")),
        yearly_heat=float(_require(r, "yearly_heat_twhth", f"rollout {name}")),
        archetype_shares=shares,
    )
    spec.validate()
    return spec


def _parse_gw(value, where: str) -> float:
    """GW (or GWh) config value -> MW (MWh); accepts TOML inf."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise SchemaViolation(f"{where}: expected a number, got {value!r}") from None
    return v * 1000.0 if math.isfinite(v) else v


def _apply_policy_overrides(
    policy: PolicySettings,
    bounds: list[CapacityBound],
    cf: dict[tuple[str, str], np.ndarray],
    technologies: Mapping[str, Technology],
    focal: str,
    horizon: int,
) -> list[CapacityBound]:
    """Apply declarative sensitivity switches to bounds and capacity factors."""
    out = []
    for b in bounds:
        tech = technologies[b.tech]
        if policy.coal_phase_out and b.zone == focal and tech.fuel in COAL_FUELS:
            b = replace(b, min=0.0, max=0.0)
        if policy.wind_cap_removed and b.zone == focal and tech.res_class == "wind":
            b = replace(b, max=math.inf)
        out.append(b)
    if policy.re_drought_week is not None:
        week = policy.re_drought_week
        lo, hi = (week - 1) * 168, week * 168
        if week < 1 or lo >= horizon:
            raise InvariantViolation(
                f"re_drought_week {week} outside horizon of {horizon} hours"
            )
        for (zone, tech_id), arr in cf.items():
            if technologies[tech_id].res_class in DROUGHT_CLASSES:
                arr[lo:min(hi, horizon)] = 0.0
    return out


def load_scenario(config_path: str | Path, overrides: Mapping | None = None) -> Scenario:
    """Load, validate and freeze a scenario from a TOML config.

    ``overrides`` accepts dotted policy keys ("policy.gas_price"), plus
    "rollout", "horizon" and "value_of_lost_load"; they are applied before
    validation so a run manifest fully determines the scenario.
    """
    config_path = Path(config_path)
    if not config_path.exists():
        raise MissingFile(f"config file not found: {config_path}")
    try:
        with open(config_path, "rb") as fh:
            cfg = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise SchemaViolation(f"{config_path.name}: {exc}") from None

    overrides = dict(overrides or {})
    base_dir = config_path.parent

    name = str(cfg.get("name", config_path.stem))
    horizon = int(overrides.pop("horizon", cfg.get("horizon", HOURS_PER_YEAR)))
    if horizon < 1:
        raise SchemaViolation("horizon must be >= 1")
    voll = float(overrides.pop("value_of_lost_load", cfg.get("value_of_lost_load", 3000.0)))
    heat_loss = float(cfg.get("heat_storage_loss", 0.0))

    zones_tbl = _require(cfg, "zones", "config")
    zone_ids = [str(z) for z in _require(zones_tbl, "ids", "zones")]
    if len(set(zone_ids)) != len(zone_ids):
        raise InvariantViolation("zones.ids contains duplicates")
    focal = str(_require(zones_tbl, "investment_zone", "zones"))
    if focal not in zone_ids:
        raise InvariantViolation(f"investment zone {focal!r} not in zones.ids")
    zones = tuple(Zone(z, is_investment_zone=(z == focal)) for z in zone_ids)

    technologies = {
        tid: _load_technology(tid, tbl)
        for tid, tbl in _require(cfg, "technologies", "config").items()
    }

    rollouts = {
        rname: _load_rollout(rname, tbl)
        for rname, tbl in _require(cfg, "rollouts", "config").items()
    }
    active = str(overrides.pop("rollout", _require(cfg, "rollout", "config")["active"]))
    if active not in rollouts:
        raise SchemaViolation(f"active rollout {active!r} not defined in [rollouts]")

    policy_tbl = dict(_require(cfg, "policy", "config"))
    policy_kwargs = dict(
        res_share_target=float(policy_tbl.pop("res_share_target", 0.8)),
        hp_additionality=bool(policy_tbl.pop("hp_additionality", True)),
        gas_price=float(policy_tbl.pop("gas_price", 50.0)),
        carbon_price=float(policy_tbl.pop("carbon_price", 130.0)),
        ep_ratio_hours=float(policy_tbl.pop("ep_ratio_hours", 0.0)),
        electrolysis_capacity=float(policy_tbl.pop("electrolysis_capacity_gw", 10.0)),
        h2_demand=float(policy_tbl.pop("h2_demand_twh", 28.0)),
        h2_conversion=float(policy_tbl.pop("h2_conversion", 0.71)),
        coal_phase_out=bool(policy_tbl.pop("coal_phase_out", False)),
        wind_cap_removed=bool(policy_tbl.pop("wind_cap_removed", False)),
        re_drought_week=(
            int(policy_tbl.pop("re_drought_week")) if "re_drought_week" in policy_tbl else None
        ),
    )
    if policy_tbl:
        raise SchemaViolation(f"policy: unknown keys {sorted(policy_tbl)}")
    for key, value in overrides.items():
        scope, _, fieldname = key.partition(".")
        if scope != "policy" or fieldname not in policy_kwargs:
            raise SchemaViolation(f"unknown override key {key!r}")
        current = policy_kwargs[fieldname]
        if isinstance(current, bool):
            policy_kwargs[fieldname] = value in (True, "true", "1", 1)
        elif fieldname == "re_drought_week":
            policy_kwargs[fieldname] = None if value in (None, "none") else int(value)
        else:
            policy_kwargs[fieldname] = float(value)
    policy = PolicySettings(**policy_kwargs)
    policy.validate()

    ev_tbl = cfg.get("ev", {})
    ev_annual = float(ev_tbl.get("annual_energy_twh", 0.0)) * 1e6  # TWh -> MWh

    bounds = []
    for i, row in enumerate(cfg.get("bounds", [])):
        where = f"bounds[{i}]"
        zone = str(_require(row, "zone", where))
        tech = str(_require(row, "tech", where))
        if zone not in zone_ids:
            raise InvariantViolation(f"{where}: unknown zone {zone!r}")
        if tech not in technologies:
            raise InvariantViolation(f"{where}: unknown technology {tech!r}")
        part = str(row.get("part", "power"))
        scale_key = "max_gwh" if part == "energy" else "max_gw"
        min_key = "min_gwh" if part == "energy" else "min_gw"
        b = CapacityBound(
            zone=zone,
            tech=tech,
            part=part,
            min=_parse_gw(row.get(min_key, 0.0), where),
            max=_parse_gw(_require(row, scale_key, where), where),
        )
        b.validate()
        bounds.append(b)

    ntc = []
    for i, row in enumerate(cfg.get("ntc", [])):
        where = f"ntc[{i}]"
        frm = str(_require(row, "from", where))
        to = str(_require(row, "to", where))
        if frm not in zone_ids or to not in zone_ids or frm == to:
            raise InvariantViolation(f"{where}: bad zone pair {frm!r} -> {to!r}")
        ntc.append(TradeLink(frm, to, _parse_gw(_require(row, "capacity_gw", where), where)))

    series = _load_series(cfg, base_dir, horizon, zone_ids, technologies, rollouts)

    bounds = _apply_policy_overrides(
        policy, bounds, dict(series.capacity_factor), technologies, focal, horizon
    )

    scenario = Scenario(
        name=name,
        horizon=horizon,
        zones=zones,
        technologies=technologies,
        bounds=tuple(bounds),
        series=series,
        rollout=rollouts[active],
        rollouts=rollouts,
        policy=policy,
        ntc=tuple(ntc),
        value_of_lost_load=voll,
        ev_annual_energy=ev_annual,
        heat_storage_loss=heat_loss,
    )
    validate_scenario(scenario)
    return scenario


def _load_series(
    cfg: Mapping,
    base_dir: Path,
    horizon: int,
    zone_ids: list[str],
    technologies: Mapping[str, Technology],
    rollouts: Mapping[str, RolloutSpec],
) -> TimeSeriesSet:
    series_tbl = _require(cfg, "series", "config")
    file_horizon = int(cfg.get("horizon", HOURS_PER_YEAR))
    if horizon > file_horizon:
        raise LengthMismatch(
            f"horizon override {horizon} exceeds configured horizon {file_horizon}"
        )

    def read(key: str, required: bool = True) -> dict[str, np.ndarray]:
        if key not in series_tbl:
            if required:
                raise SchemaViolation(f"series: missing file entry {key!r}")
            return {}
        path = base_dir / str(series_tbl[key])
        cols = _read_series_csv(path)
        n = len(next(iter(cols.values())))
        if n != file_horizon:
            raise LengthMismatch(
                f"{path.name}: {n} data rows, expected horizon {file_horizon}"
            )
        # an overridden (shorter) horizon uses the leading hours
        return {k: v[:horizon] for k, v in cols.items()}

    load_cols = read("load")
    for z in zone_ids:
        if z not in load_cols:
            raise SchemaViolation(f"load series: missing column for zone {z!r}")
    extra = set(load_cols) - set(zone_ids)
    if extra:
        raise InvariantViolation(f"load series references unknown zones {sorted(extra)}")

    cf_cols = read("capacity_factors")
    cf: dict[tuple[str, str], np.ndarray] = {}
    for col, arr in cf_cols.items():
        zone, dot, tech = col.partition(".")
        if not dot or zone not in zone_ids or tech not in technologies:
            raise SchemaViolation(f"capacity factor column {col!r} is not zone.tech")
        if arr.min() < -1e-12 or arr.max() > 1.0 + 1e-12:
            raise InvariantViolation(f"capacity factors for {col} outside [0, 1]")
        cf[(zone, tech)] = np.clip(arr, 0.0, 1.0)

    inflow_cols = read("inflow", required=False)
    for z in inflow_cols:
        if z not in zone_ids:
            raise InvariantViolation(f"inflow column {z!r} is not a zone")

    ev_cols = read("ev_profile")
    if len(ev_cols) != 1:
        raise SchemaViolation("ev_profile must have exactly one value column")
    ev = next(iter(ev_cols.values()))
    if ev.min() < 0:
        raise SchemaViolation("ev_profile entries must be >= 0")
    total = float(ev.sum())
    if total <= 0:
        raise SchemaViolation("ev_profile sums to zero")
    ev = ev / total  # renormalize: horizon truncation must keep sum == 1

    heat_cols = read("heat_demand")
    archetypes = set(heat_cols)
    for r in rollouts.values():
        missing = set(r.archetype_shares) - archetypes
        if missing:
            raise InvariantViolation(
                f"rollout {r.name}: no heat series for archetypes {sorted(missing)}"
            )
    for arch, arr in heat_cols.items():
        if arr.min() < 0:
            raise InvariantViolation(f"heat demand for {arch} has negative entries")

    temp_cols = read("temperature")
    if len(temp_cols) != 1:
        raise SchemaViolation("temperature must have exactly one value column")
    temperature = next(iter(temp_cols.values()))

    return TimeSeriesSet(
        horizon=horizon,
        load={z: _freeze(load_cols[z]) for z in zone_ids},
        capacity_factor={k: _freeze(v) for k, v in cf.items()},
        inflow={k: _freeze(v) for k, v in inflow_cols.items()},
        ev_profile=_freeze(ev),
        heat_demand={k: _freeze(v) for k, v in heat_cols.items()},
        temperature=_freeze(temperature),
    )


def validate_scenario(s: Scenario) -> None:
    """Check referential completeness and series invariants of a scenario."""
    zone_ids = set(s.zone_ids)
    if sum(z.is_investment_zone for z in s.zones) != 1:
        raise InvariantViolation("exactly one investment zone is required")
    for tech in s.technologies.values():
        tech.validate()
    bounded = set()
    for b in s.bounds:
        b.validate()
        if b.zone not in zone_ids:
            raise InvariantViolation(f"bound references unknown zone {b.zone!r}")
        if b.tech not in s.technologies:
            raise InvariantViolation(f"bound references unknown technology {b.tech!r}")
        key = (b.zone, b.tech, b.part)
        if key in bounded:
            raise InvariantViolation(f"duplicate bound row for {key}")
        bounded.add(key)
    for (zone, tech) in s.series.capacity_factor:
        if zone not in zone_ids or tech not in s.technologies:
            raise InvariantViolation(f"capacity factor for unknown pair {zone}/{tech}")
    for arr_map in (s.series.load, s.series.inflow):
        for key, arr in arr_map.items():
            if len(arr) != s.horizon:
                raise LengthMismatch(f"series {key!r} length != horizon")
    if len(s.series.ev_profile) != s.horizon or len(s.series.temperature) != s.horizon:
        raise LengthMismatch("ev/temperature series length != horizon")
    if abs(float(s.series.ev_profile.sum()) - 1.0) > 1e-9:
        raise InvariantViolation("ev profile must sum to 1")
    for link in s.ntc:
        if link.capacity < 0:
            raise InvariantViolation("ntc capacity < 0")
    s.policy.validate()
    s.rollout.validate()


# ---------------------------------------------------------------------------
# serialization (JSON snapshot; round-trips a loaded scenario)


def scenario_to_dict(s: Scenario) -> dict:
    def arr(a: np.ndarray) -> list[float]:
        return [float(v) for v in a]

    return {
        "name": s.name,
        "horizon": s.horizon,
        "value_of_lost_load": s.value_of_lost_load,
        "ev_annual_energy": s.ev_annual_energy,
        "heat_storage_loss": s.heat_storage_loss,
        "zones": [{"id": z.id, "is_investment_zone": z.is_investment_zone} for z in s.zones],
        "technologies": {tid: vars(t).copy() for tid, t in s.technologies.items()},
        "bounds": [vars(b).copy() for b in s.bounds],
        "ntc": [vars(l).copy() for l in s.ntc],
        "policy": vars(s.policy).copy(),
        "rollout_active": s.rollout.name,
        "rollouts": {
            rname: {
                **{k: v for k, v in vars(r).items() if k != "archetype_shares"},
                "archetype_shares": {a: list(p) for a, p in r.archetype_shares.items()},
            }
            for rname, r in s.rollouts.items()
        },
        "series": {
            "load": {z: arr(a) for z, a in s.series.load.items()},
            "capacity_factor": {f"{z}.{t}": arr(a) for (z, t), a in s.series.capacity_factor.items()},
            "inflow": {z: arr(a) for z, a in s.series.inflow.items()},
            "ev_profile": arr(s.series.ev_profile),
            "heat_demand": {a: arr(v) for a, v in s.series.heat_demand.items()},
            "temperature": arr(s.series.temperature),
        },
    }


def scenario_from_dict(d: Mapping) -> Scenario:
    technologies = {tid: Technology(**t) for tid, t in d["technologies"].items()}
    rollouts = {
        rname: RolloutSpec(
            **{k: v for k, v in r.items() if k != "archetype_shares"},
            archetype_shares={a: (float(p[0]), float(p[1])) for a, p in r["archetype_shares"].items()},
        )
        for rname, r in d["rollouts"].items()
    }
    sd = d["series"]

    def arr(values) -> np.ndarray:
        return _freeze(np.asarray(values, dtype=float))

    cf = {}
    for col, values in sd["capacity_factor"].items():
        zone, _, tech = col.partition(".")
        cf[(zone, tech)] = arr(values)
    series = TimeSeriesSet(
        horizon=int(d["horizon"]),
        load={z: arr(v) for z, v in sd["load"].items()},
        capacity_factor=cf,
        inflow={z: arr(v) for z, v in sd["inflow"].items()},
        ev_profile=arr(sd["ev_profile"]),
        heat_demand={a: arr(v) for a, v in sd["heat_demand"].items()},
        temperature=arr(sd["temperature"]),
    )
    policy_kwargs = dict(d["policy"])
    scenario = Scenario(
        name=d["name"],
        horizon=int(d["horizon"]),
        zones=tuple(Zone(**z) for z in d["zones"]),
        technologies=technologies,
        bounds=tuple(CapacityBound(**b) for b in d["bounds"]),
        series=series,
        rollout=rollouts[d["rollout_active"]],
        rollouts=rollouts,
        policy=PolicySettings(**policy_kwargs),
        ntc=tuple(TradeLink(**l) for l in d["ntc"]),
        value_of_lost_load=float(d["value_of_lost_load"]),
        ev_annual_energy=float(d["ev_annual_energy"]),
        heat_storage_loss=float(d["heat_storage_loss"]),
    )
    validate_scenario(scenario)
    return scenario


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=1), encoding="utf-8")


def load_scenario_snapshot(path: str | Path) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
