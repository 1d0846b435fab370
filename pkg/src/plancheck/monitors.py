"""Plan execution through action handlers, and monitors that can refuse an
action at run time with evidence (fuel budget, gender fairness of trips).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from .grounding import ground_action
from .model import Domain, GroundAction, Plan, Problem, World
from .semantics import update_world

Handler = Callable[[GroundAction, World], World]


def canonical_handler(d: Domain, p: Problem | None = None) -> Handler:
    """Apply the action's ground effects; preconditions are not consulted.

    With a problem given, action arguments must be among its objects.
    """
    objects = p.objects if p is not None else None

    def handler(action: GroundAction, w: World) -> World:
        return update_world(ground_action(d, action, objects).effects, w)

    return handler


def execute(pl: Plan | Iterable[GroundAction], h: Handler, w0: World) -> World:
    w = w0
    for action in pl:
        w = h(action, w)
    return w


class MonitorError(Exception):
    kind = "monitor"

    def __init__(self, message: str, action: GroundAction, world: World) -> None:
        super().__init__(message)
        self.action = action
        self.world = world
        self.step: int | None = None


@dataclass(frozen=True)
class Monitor:
    """``transition(action, world_before, state)`` returns the next state or
    raises MonitorError. It must be deterministic and side-effect free."""

    name: str
    initial_state: Any
    transition: Callable[[GroundAction, World, Any], Any]


def compose(monitors: Sequence[Monitor]) -> Monitor:
    """Run monitors left to right on every action; the first refusal wins."""
    monitors = tuple(monitors)

    def transition(action: GroundAction, w: World, states: tuple) -> tuple:
        return tuple(m.transition(action, w, s) for m, s in zip(monitors, states))

    return Monitor(
        "+".join(m.name for m in monitors),
        tuple(m.initial_state for m in monitors),
        transition,
    )


@dataclass(frozen=True)
class ExecutionOutcome:
    """Either ``final_world`` or ``error`` is set, never both.

    ``worlds`` holds the world before each applied action.
    """

    final_world: World | None = None
    error: MonitorError | None = None
    monitor_state: Any = None
    worlds: tuple[World, ...] = ()

    @property
    def ok(self) -> bool:
        return self.error is None


def execute_monitored(
    pl: Plan | Iterable[GroundAction], h: Handler, m: Monitor, w0: World
) -> ExecutionOutcome:
    w = w0
    state = m.initial_state
    worlds = []
    for i, action in enumerate(pl):
        try:
            state = m.transition(action, w, state)
        except MonitorError as err:
            err.step = i
            return ExecutionOutcome(error=err, monitor_state=state, worlds=tuple(worlds))
        worlds.append(w)
        w = h(action, w)
    return ExecutionOutcome(final_world=w, monitor_state=state, worlds=tuple(worlds))


# Fuel


@dataclass(frozen=True)
class FuelState:
    remaining: int


class OutOfFuelError(MonitorError):
    kind = "out-of-fuel"

    def __init__(self, action: GroundAction, world: World) -> None:
        super().__init__(f"out of fuel before {action}", action, world)


def fuel_monitor(initial: int) -> Monitor:
    """Every action burns one unit; an action is refused once none is left."""
    if initial < 0:
        raise ValueError("fuel must be nonnegative")

    def transition(action: GroundAction, w: World, state: FuelState) -> FuelState:
        if state.remaining == 0:
            raise OutOfFuelError(action, w)
        return FuelState(state.remaining - 1)

    return Monitor("fuel", FuelState(initial), transition)


# Natural-number arithmetic


def div0(n: int, m: int) -> int:
    """Floor division that returns 0 for a zero denominator."""
    return n // m if m else 0


def monus(a: int, b: int) -> int:
    return max(a - b, 0)


# Fairness


class Gender(Enum):
    MALE = "male"
    FEMALE = "female"
    OTHER = "other"


@dataclass(frozen=True)
class TripCount:
    male: int = 0
    female: int = 0
    other: int = 0

    def __getitem__(self, g: Gender) -> int:
        return getattr(self, g.value)

    def incremented(self, g: Gender) -> TripCount:
        counts = self.as_dict()
        counts[g.value] += 1
        return TripCount(**counts)

    def as_dict(self) -> dict[str, int]:
        return {g.value: self[g] for g in Gender}


class FairnessConfigError(ValueError):
    pass


_CONFIG_KEYS = {"driver_type", "margin", "min_trip_factor", "trip_actions", "genders"}


def _natural(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise FairnessConfigError(f"{key} must be a nonnegative integer")
    return value


@dataclass(frozen=True)
class FairnessConfig:
    driver_type: str
    driver_gender: Mapping[str, Gender]
    trip_actions: Mapping[str, int]
    margin: int
    min_trip_factor: int = 10

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> FairnessConfig:
        if not isinstance(data, Mapping):
            raise FairnessConfigError("fairness config must be a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise FairnessConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
        for key in ("driver_type", "margin", "trip_actions", "genders"):
            if key not in data:
                raise FairnessConfigError(f"missing key {key}")
        if not isinstance(data["driver_type"], str):
            raise FairnessConfigError("driver_type must be a string")
        trips = data["trip_actions"]
        if not isinstance(trips, Mapping):
            raise FairnessConfigError("trip_actions must be an object")
        trip_actions = {}
        for name, entry in trips.items():
            if not isinstance(entry, Mapping) or set(entry) != {"driver_param"}:
                raise FairnessConfigError(
                    f"trip_actions.{name} must be exactly {{\"driver_param\": <int>}}"
                )
            trip_actions[name] = _natural(entry["driver_param"], f"{name}.driver_param")
        genders = data["genders"]
        if not isinstance(genders, Mapping):
            raise FairnessConfigError("genders must be an object")
        driver_gender = {}
        for obj, g in genders.items():
            try:
                driver_gender[obj] = Gender(g)
            except ValueError:
                raise FairnessConfigError(f"unknown gender {g!r} for {obj}") from None
        return cls(
            driver_type=data["driver_type"],
            driver_gender=driver_gender,
            trip_actions=trip_actions,
            margin=_natural(data["margin"], "margin"),
            min_trip_factor=_natural(data.get("min_trip_factor", 10), "min_trip_factor"),
        )

    @classmethod
    def load(cls, path: str | Path) -> FairnessConfig:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FairnessConfigError(f"{path}: invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        return {
            "driver_type": self.driver_type,
            "margin": self.margin,
            "min_trip_factor": self.min_trip_factor,
            "trip_actions": {k: {"driver_param": v} for k, v in self.trip_actions.items()},
            "genders": {k: g.value for k, g in self.driver_gender.items()},
        }

    def check(self, d: Domain, p: Problem) -> None:
        """Raise FairnessConfigError unless the config fits ``d`` and ``p``."""
        if self.driver_type not in d.types:
            raise FairnessConfigError(f"unknown driver type {self.driver_type}")
        for name, position in self.trip_actions.items():
            schema = d.schema(name)
            if schema is None:
                raise FairnessConfigError(f"unknown trip action {name}")
            if position >= schema.arity:
                raise FairnessConfigError(
                    f"{name}: driver_param {position} out of range for arity {schema.arity}"
                )
            if schema.params[position].type != self.driver_type:
                raise FairnessConfigError(
                    f"{name}: parameter {position} has type "
                    f"{schema.params[position].type}, not {self.driver_type}"
                )
        drivers = {o.name for o in p.objects_of_type(self.driver_type)}
        missing = sorted(drivers - set(self.driver_gender))
        if missing:
            raise FairnessConfigError(f"no gender given for {', '.join(missing)}")
        extra = sorted(set(self.driver_gender) - drivers)
        if extra:
            raise FairnessConfigError(
                f"genders lists non-{self.driver_type} objects: {', '.join(extra)}"
            )


def total_trips_taken(tc: TripCount) -> int:
    return tc.male + tc.female + tc.other


def gender_assignment_pct(g: Gender, tc: TripCount) -> int:
    """Share of trips assigned to ``g``, as a floored percentage."""
    return div0(tc[g] * 100, total_trips_taken(tc))


def total_drivers(cfg: FairnessConfig, p: Problem) -> int:
    return len(p.objects_of_type(cfg.driver_type))


def gender_driver_count(g: Gender, cfg: FairnessConfig, p: Problem) -> int:
    return sum(
        1 for o in p.objects_of_type(cfg.driver_type) if cfg.driver_gender.get(o.name) is g
    )


def gender_pct(g: Gender, cfg: FairnessConfig, p: Problem) -> int:
    return div0(gender_driver_count(g, cfg, p) * 100, total_drivers(cfg, p))


def lower_bound_pct(g: Gender, cfg: FairnessConfig, p: Problem) -> int:
    """The driver share of ``g`` less a ``1/margin`` fraction of itself."""
    share = gender_pct(g, cfg, p)
    return monus(share, div0(share, cfg.margin))


@dataclass(frozen=True)
class FairnessCheck:
    fair: bool
    assignment_pct: int
    lower_bound_pct: int

    def __bool__(self) -> bool:
        return self.fair


def is_fair(g: Gender, tc: TripCount, cfg: FairnessConfig, p: Problem) -> FairnessCheck:
    assigned = gender_assignment_pct(g, tc)
    bound = lower_bound_pct(g, cfg, p)
    return FairnessCheck(assigned >= bound, assigned, bound)


def under_minimum_trip_threshold(tc: TripCount, cfg: FairnessConfig, p: Problem) -> bool:
    return total_trips_taken(tc) < total_drivers(cfg, p) * cfg.min_trip_factor


def trip_agnostic(a: GroundAction, cfg: FairnessConfig) -> bool:
    return a.name not in cfg.trip_actions


class Justification(Enum):
    AGNOSTIC = "agnostic"
    UNDER_THRESHOLD = "underThreshold"
    FAIR_FOR_ALL = "fairForAll"


@dataclass(frozen=True)
class FairnessRefutation:
    action: GroundAction
    trip_count: TripCount
    gender: Gender
    assignment_pct: int
    lower_bound_pct: int


def action_preserves_fairness(
    a: GroundAction, tc: TripCount, cfg: FairnessConfig, p: Problem
) -> Union[Justification, FairnessRefutation]:
    """Why ``a`` is acceptable at trip count ``tc``, or evidence that it is not.

    The refutation names the first unfair gender in male, female, other order.
    """
    if trip_agnostic(a, cfg):
        return Justification.AGNOSTIC
    if under_minimum_trip_threshold(tc, cfg, p):
        return Justification.UNDER_THRESHOLD
    for g in Gender:
        check = is_fair(g, tc, cfg, p)
        if not check.fair:
            return FairnessRefutation(a, tc, g, check.assignment_pct, check.lower_bound_pct)
    return Justification.FAIR_FOR_ALL


def update_trip_count(a: GroundAction, tc: TripCount, cfg: FairnessConfig) -> TripCount:
    """Count one trip for the driver's gender when ``a`` is a trip action."""
    position = cfg.trip_actions.get(a.name)
    if position is None:
        return tc
    if position >= len(a.args):
        raise FairnessConfigError(f"{a}: no argument at driver position {position}")
    driver = a.args[position]
    if driver.type != cfg.driver_type:
        raise FairnessConfigError(f"{a}: {driver.name} is not a {cfg.driver_type}")
    if driver.name not in cfg.driver_gender:
        raise FairnessConfigError(f"no gender given for driver {driver.name}")
    return tc.incremented(cfg.driver_gender[driver.name])


class GenderBiasError(MonitorError):
    kind = "fairness"

    def __init__(self, refutation: FairnessRefutation, world: World) -> None:
        r = refutation
        super().__init__(
            f"{r.action} is unfair to {r.gender.value}: "
            f"{r.assignment_pct}% of trips < lower bound {r.lower_bound_pct}%",
            r.action,
            world,
        )
        self.refutation = refutation


def fairness_monitor(cfg: FairnessConfig, p: Problem) -> Monitor:
    """Count trips per gender and refuse an action whose updated count is unfair."""

    def transition(action: GroundAction, w: World, tc: TripCount) -> TripCount:
        updated = update_trip_count(action, tc, cfg)
        verdict = action_preserves_fairness(action, updated, cfg, p)
        if isinstance(verdict, FairnessRefutation):
            raise GenderBiasError(verdict, w)
        return updated

    return Monitor("fairness", TripCount(), transition)
