"""Plan validation by the halt/seq rules, producing an auditable derivation.

A plan is valid from a world when it is empty and the world satisfies the
goal (halt), or when the world satisfies the first action's preconditions
and the rest of the plan is valid from the updated world (seq). Only one
rule ever applies, so checking is a single forward simulation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .grounding import GroundingError, ground_action
from .model import Domain, GroundAction, GroundActionDescription, Literal, Plan, Problem, World
from .semantics import satisfies, update_world


@dataclass(frozen=True)
class DerivationStep:
    index: int
    action: GroundAction
    world_before: World
    description: GroundActionDescription


@dataclass(frozen=True)
class Derivation:
    steps: tuple[DerivationStep, ...]
    final_world: World

    def __len__(self) -> int:
        return len(self.steps)


class ValidationError(Exception):
    """Why a plan has no derivation.

    ``kind`` is precondition-unsatisfied, goal-unsatisfied or grounding-failed.
    """

    def __init__(
        self,
        kind: str,
        world: World,
        step: int | None = None,
        action: GroundAction | None = None,
        literal: Literal | None = None,
        cause: GroundingError | None = None,
    ) -> None:
        self.kind = kind
        self.world = world
        self.step = step
        self.action = action
        self.literal = literal
        self.cause = cause
        super().__init__(self.describe())

    def describe(self) -> str:
        if self.kind == "goal-unsatisfied":
            return f"goal literal {self.literal} does not hold in the final world"
        if self.kind == "grounding-failed":
            return f"step {self.step}: cannot ground {self.action}: {self.cause}"
        return f"step {self.step}: {self.action} needs {self.literal}"


class TamperDetected(Exception):
    def __init__(self, step: int | None, message: str) -> None:
        super().__init__(message)
        self.step = step


def check_plan(d: Domain, p: Problem, pl: Plan) -> Derivation:
    """Build the derivation of ``pl`` from ``p.initial_world`` to ``p.goal``.

    Raises ValidationError at the first failing step.
    """
    world = p.initial_world
    steps = []
    for i, action in enumerate(pl):
        try:
            desc = ground_action(d, action, p.objects)
        except GroundingError as exc:
            raise ValidationError(
                "grounding-failed", world, step=i, action=action, cause=exc
            ) from exc
        missing = satisfies(world, desc.preconditions)
        if missing is not None:
            raise ValidationError(
                "precondition-unsatisfied", world, step=i, action=action, literal=missing
            )
        steps.append(DerivationStep(i, action, world, desc))
        world = update_world(desc.effects, world)
    missing = satisfies(world, p.goal)
    if missing is not None:
        raise ValidationError("goal-unsatisfied", world, literal=missing)
    return Derivation(tuple(steps), world)


def replay(deriv: Derivation) -> World:
    """Recompute every world of ``deriv`` from its first one.

    Raises TamperDetected when a stored world or precondition check does not
    match the recomputation.
    """
    if not deriv.steps:
        return deriv.final_world
    world = deriv.steps[0].world_before
    for step in deriv.steps:
        if not world.set_eq(step.world_before):
            raise TamperDetected(step.index, f"step {step.index}: stored world differs")
        if satisfies(world, step.description.preconditions) is not None:
            raise TamperDetected(
                step.index, f"step {step.index}: preconditions do not hold"
            )
        world = update_world(step.description.effects, world)
    if not world.set_eq(deriv.final_world):
        raise TamperDetected(None, "stored final world differs")
    return deriv.final_world
