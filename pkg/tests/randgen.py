"""Random small planning instances for property and round-trip tests."""

from __future__ import annotations

import itertools
import random

from plancheck import (
    ActionSchema,
    Domain,
    GroundAction,
    GroundAtom,
    Literal,
    ObjectRef,
    Parameter,
    Plan,
    Polarity,
    PredicateDecl,
    Problem,
    SchemaLiteral,
    State,
    Variable,
    World,
)

NAMES = ["p", "on-top", "Is_At", "clear", "holding", "q_1", "Reach-2", "x"]
ACTIONS = ["move", "pick-up", "Drop", "stack_it", "a0", "go"]
OBJECT_NAMES = ["o1", "box-a", "Room_2", "b", "kit3", "z"]
TYPE_NAMES = ["thing", "place", "Agent-t"]


def random_domain(rng: random.Random, max_preds: int = 3, max_schemas: int = 3,
                  max_arity: int = 2) -> Domain:
    types = tuple(rng.sample(TYPE_NAMES, rng.randint(1, 2)))
    preds = tuple(
        PredicateDecl(name, tuple(rng.choice(types) for _ in range(rng.randint(0, max_arity))))
        for name in rng.sample(NAMES, rng.randint(1, max_preds))
    )
    schemas = []
    for name in rng.sample(ACTIONS, rng.randint(1, max_schemas)):
        params = tuple(Parameter(f"v{i}", rng.choice(types)) for i in range(rng.randint(0, 2)))
        candidates = []
        for p in preds:
            choices = [[Variable(q.name) for q in params if q.type == t] for t in p.param_types]
            candidates += [(p.name, args) for args in itertools.product(*choices)]

        def lits(lo: int, hi: int) -> tuple[SchemaLiteral, ...]:
            if not candidates:
                return ()
            k = min(rng.randint(lo, hi), len(candidates))
            return tuple(
                SchemaLiteral(rng.choice(list(Polarity)), n, tuple(a))
                for n, a in rng.sample(candidates, k)
            )

        schemas.append(ActionSchema(name, params, lits(0, 2), lits(1, 3)))
    reqs = rng.choice([(), (":strips",), (":strips", ":typing")])
    return Domain(f"dom-{rng.randint(0, 99)}", types, preds, tuple(schemas), reqs)


def all_atoms(d: Domain, objects: tuple[ObjectRef, ...]) -> list[GroundAtom]:
    out = []
    for p in d.predicates:
        choices = [[o for o in objects if o.type == t] for t in p.param_types]
        out += [GroundAtom(p.name, args) for args in itertools.product(*choices)]
    return out


def ground_actions(d: Domain, objects: tuple[ObjectRef, ...]) -> list[GroundAction]:
    out = []
    for s in d.schemas:
        choices = [[o for o in objects if o.type == q.type] for q in s.params]
        out += [GroundAction(s.name, args) for args in itertools.product(*choices)]
    return out


def random_problem(rng: random.Random, d: Domain, max_objects: int = 4,
                   allow_duplicates: bool = True) -> Problem:
    n = rng.randint(1, max_objects)
    objects = tuple(ObjectRef(name, rng.choice(d.types)) for name in rng.sample(OBJECT_NAMES, n))
    atoms = all_atoms(d, objects)
    init = rng.sample(atoms, rng.randint(0, len(atoms)))
    if allow_duplicates and init and rng.random() < 0.2:
        init.append(rng.choice(init))
    goal_atoms = rng.sample(atoms, min(len(atoms), rng.randint(0, 3)))
    goal = State(Literal(rng.choice(list(Polarity)), a) for a in goal_atoms)
    return Problem(f"prob{rng.randint(0, 9)}", d.name, objects, World(init), goal)


def random_plan(rng: random.Random, d: Domain, p: Problem, max_len: int = 4) -> Plan:
    actions = ground_actions(d, p.objects)
    if not actions:
        return Plan()
    return Plan(rng.choice(actions) for _ in range(rng.randint(0, max_len)))
