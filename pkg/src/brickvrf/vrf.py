"""VRF working-mode classification and concrete model generators.

The four-way valve's port linkage selects the system's refrigerant flow
direction (cooling vs heating); on a three-pipe heat-recovery system each
indoor unit's solenoid trio decides whether it runs as an evaporator or a
condenser.  The generators build the two reference building models: a
parameterized validation building and the fixed two-office application
sector.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .rdf import BRICK_NS, Graph, IRI, Triple, RDF_TYPE
from .timeseries import TimeseriesStore


class FourWayLinkage(Enum):
    """Reversing-valve port linkage."""

    A_D_AND_B_C = "A-D_and_B-C"
    A_B_AND_C_D = "A-B_and_C-D"


@dataclass(frozen=True)
class SolenoidStates:
    """Per-unit solenoid positions on the three-pipe system; True = open."""

    liquid: bool
    suction: bool
    hot_gas: bool


class UnitMode(Enum):
    EVAPORATOR = "Evaporator"  # cooling the zone
    CONDENSER = "Condenser"  # heating the zone
    OFF = "Off"
    INVALID = "Invalid"


class SystemMode(Enum):
    COOLING = "Cooling"
    HEATING = "Heating"
    MIXED = "Mixed"
    OFF = "Off"


@dataclass(frozen=True)
class SystemCondition:
    mode: SystemMode
    invalid: bool  # some unit had an unclassifiable valve combination


def system_mode_from_four_way(state: FourWayLinkage) -> SystemMode:
    """Port A to D with B to C cools; port A to B with C to D heats."""
    if state is FourWayLinkage.A_D_AND_B_C:
        return SystemMode.COOLING
    return SystemMode.HEATING


def unit_mode_from_solenoids(state: SolenoidStates) -> UnitMode:
    """Classify an indoor unit from its liquid/suction/hot-gas valves.

    Liquid plus suction open makes an evaporator; liquid plus hot gas open
    makes a condenser; all closed is off; anything else is physically
    unaccounted for and classified Invalid rather than rejected.
    """
    if state.liquid and state.suction and not state.hot_gas:
        return UnitMode.EVAPORATOR
    if state.liquid and state.hot_gas and not state.suction:
        return UnitMode.CONDENSER
    if not (state.liquid or state.suction or state.hot_gas):
        return UnitMode.OFF
    return UnitMode.INVALID


def system_condition(modes: list[UnitMode]) -> SystemCondition:
    """Aggregate unit modes into the system's working condition.

    Invalid units set the invalid flag and are excluded from the mode
    vote; the mode reflects the remaining units only.
    """
    invalid = UnitMode.INVALID in modes
    evaporating = UnitMode.EVAPORATOR in modes
    condensing = UnitMode.CONDENSER in modes
    if evaporating and condensing:
        mode = SystemMode.MIXED
    elif evaporating:
        mode = SystemMode.COOLING
    elif condensing:
        mode = SystemMode.HEATING
    else:
        mode = SystemMode.OFF
    return SystemCondition(mode, invalid)


def solenoid_states_at(
    store: TimeseriesStore,
    liquid_id: str,
    suction_id: str,
    hot_gas_id: str,
    timestamp: int,
) -> SolenoidStates:
    """Read a unit's solenoid positions from telemetry at a timestamp.

    Uses latest-at-or-before reads; a missing stream or no sample yet
    counts as closed, and any nonzero value counts as open.
    """

    def is_open(stream_id: str) -> bool:
        sample = store.latest_at_or_before(stream_id, timestamp)
        return sample is not None and sample.value != 0.0

    return SolenoidStates(is_open(liquid_id), is_open(suction_id), is_open(hot_gas_id))


@dataclass(frozen=True)
class ModelParams:
    """Shape of the generated validation building."""

    floors: int = 1
    offices_per_floor: int = 5
    indoor_units_per_office: int = 10
    outdoor_units_per_office: int = 1
    graph: str = "http://example.com/b66#"
    prefix: str = "b66"

    def __post_init__(self) -> None:
        for name in ("floors", "offices_per_floor", "indoor_units_per_office", "outdoor_units_per_office"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


_FEEDS = IRI(BRICK_NS + "feeds")
_HAS_POINT = IRI(BRICK_NS + "hasPoint")
_IS_PART_OF = IRI(BRICK_NS + "isPartOf")
_IS_LOCATION_OF = IRI(BRICK_NS + "isLocationOf")

_UNIT_POINTS = (
    ("T1", "Return_Air_Temperature_Sensor"),
    ("T2", "Temperature_Sensor"),
    ("T2B", "Temperature_Sensor"),
    ("On_Off_Command", "On_Off_Command"),
)


def _brick(name: str) -> IRI:
    return IRI(BRICK_NS + name)


def generate_validation_model(params: ModelParams = ModelParams()) -> Graph:
    """Build the floors/offices/units validation model.

    Entity names follow `Floor_{i}_Office_{j}_VRF_Indoor_{k}`; each office
    holds one HVAC zone fed by its indoor units, and offices carry
    isLocationOf edges to their units so location queries bind directly.
    """
    ns = params.graph

    def ent(local: str) -> IRI:
        return IRI(ns + local)

    triples: list[Triple] = []
    building = ent("Building")
    triples.append(Triple(building, RDF_TYPE, _brick("Building")))
    for i in range(1, params.floors + 1):
        floor = ent(f"Floor_{i}")
        triples.append(Triple(floor, RDF_TYPE, _brick("Floor")))
        triples.append(Triple(floor, _IS_PART_OF, building))
        for j in range(1, params.offices_per_floor + 1):
            office = ent(f"Floor_{i}_Office_{j}")
            zone = ent(f"Floor_{i}_Office_{j}_HVAC_Zone")
            triples.append(Triple(office, RDF_TYPE, _brick("Office")))
            triples.append(Triple(office, _IS_PART_OF, floor))
            triples.append(Triple(zone, RDF_TYPE, _brick("HVAC_Zone")))
            triples.append(Triple(zone, _IS_PART_OF, office))
            units = []
            for k in range(1, params.indoor_units_per_office + 1):
                unit = ent(f"Floor_{i}_Office_{j}_VRF_Indoor_{k}")
                units.append(unit)
                triples.append(Triple(unit, RDF_TYPE, _brick("VRF_Indoor")))
                triples.append(Triple(office, _IS_LOCATION_OF, unit))
                triples.append(Triple(unit, _FEEDS, zone))
                for suffix, cls in _UNIT_POINTS:
                    point = ent(f"Floor_{i}_Office_{j}_VRF_Indoor_{k}_{suffix}")
                    triples.append(Triple(point, RDF_TYPE, _brick(cls)))
                    triples.append(Triple(unit, _HAS_POINT, point))
            for d in range(1, params.outdoor_units_per_office + 1):
                outdoor = ent(f"Floor_{i}_Office_{j}_VRF_Outdoor_{d}")
                triples.append(Triple(outdoor, RDF_TYPE, _brick("VRF_Outdoor")))
                triples.append(Triple(office, _IS_LOCATION_OF, outdoor))
                for unit in units:
                    triples.append(Triple(outdoor, _FEEDS, unit))
    return Graph(triples, namespaces={"brick": BRICK_NS, params.prefix: ns})


def validation_model_triple_count(params: ModelParams) -> int:
    """Closed-form size of generate_validation_model's output.

    1 building triple, 2 per floor, 4 per office (office + zone), 11 per
    indoor unit (type, location, feeds, 4 points at 2 each), and 2 + units
    per outdoor unit.
    """
    f = params.floors
    o = f * params.offices_per_floor
    u = o * params.indoor_units_per_office
    d = o * params.outdoor_units_per_office
    return 1 + 2 * f + 4 * o + 11 * u + d * (2 + params.indoor_units_per_office)


APPLICATION_GRAPH = "http://example.com/b6#"
APPLICATION_PREFIX = "b6"


def generate_application_model() -> Graph:
    """Build the fixed two-office application sector.

    Each office carries an HVAC zone and a lighting zone, three indoor
    units feeding the HVAC zone, one outdoor unit (lowercase `outdoor` in
    entity names, matching the deployed model's codes) feeding the indoor
    units, and an energy meter on the zone.  One outside-air temperature
    point hangs off the shared building.
    """
    ns = APPLICATION_GRAPH

    def ent(local: str) -> IRI:
        return IRI(ns + local)

    triples: list[Triple] = []
    building = ent("Building")
    oat = ent("Outside_Air_Temperature")
    triples.append(Triple(building, RDF_TYPE, _brick("Building")))
    triples.append(Triple(oat, RDF_TYPE, _brick("Outside_Air_Temperature_Sensor")))
    triples.append(Triple(building, _HAS_POINT, oat))
    for i in (1, 2):
        office = ent(f"Office_{i}")
        hvac = ent(f"Office_{i}_HVAC")
        lighting = ent(f"Office_{i}_lighting")
        meter = ent(f"Office_{i}_meter")
        outdoor = ent(f"Office_{i}_VRF_outdoor")
        triples.append(Triple(office, RDF_TYPE, _brick("Office")))
        triples.append(Triple(office, _IS_PART_OF, building))
        triples.append(Triple(hvac, RDF_TYPE, _brick("HVAC_Zone")))
        triples.append(Triple(hvac, _IS_PART_OF, office))
        triples.append(Triple(lighting, RDF_TYPE, _brick("Lighting_Zone")))
        triples.append(Triple(lighting, _IS_PART_OF, office))
        triples.append(Triple(meter, RDF_TYPE, _brick("Energy_Sensor")))
        triples.append(Triple(hvac, _HAS_POINT, meter))
        triples.append(Triple(outdoor, RDF_TYPE, _brick("VRF_Outdoor")))
        outdoor_cmd = ent(f"Office_{i}_VRF_outdoor_On_Off_Command")
        triples.append(Triple(outdoor_cmd, RDF_TYPE, _brick("On_Off_Command")))
        triples.append(Triple(outdoor, _HAS_POINT, outdoor_cmd))
        for k in (1, 2, 3):
            unit = ent(f"Office_{i}_VRF_Indoor_{k}")
            triples.append(Triple(unit, RDF_TYPE, _brick("VRF_Indoor")))
            triples.append(Triple(office, _IS_LOCATION_OF, unit))
            triples.append(Triple(unit, _FEEDS, hvac))
            triples.append(Triple(outdoor, _FEEDS, unit))
            for suffix, cls in _UNIT_POINTS:
                point = ent(f"Office_{i}_VRF_Indoor_{k}_{suffix}")
                triples.append(Triple(point, RDF_TYPE, _brick(cls)))
                triples.append(Triple(unit, _HAS_POINT, point))
    return Graph(triples, namespaces={"brick": BRICK_NS, APPLICATION_PREFIX: ns})
