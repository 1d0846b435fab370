"""Instantiate an action schema for one ground action."""

from __future__ import annotations

from typing import Iterable, Mapping

from .model import (
    Domain,
    GroundAction,
    GroundActionDescription,
    GroundAtom,
    Literal,
    ObjectRef,
    SchemaLiteral,
    State,
    Variable,
)

Binding = Mapping[str, ObjectRef]


class GroundingError(Exception):
    """``kind`` is one of unknown-action, unknown-name, arity-mismatch,
    type-mismatch."""

    def __init__(self, kind: str, message: str, action: GroundAction | None = None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.action = action


def bind(d: Domain, a: GroundAction, objects: Iterable[ObjectRef] | None = None) -> Binding:
    """Positional binding of the schema's parameters to ``a.args``.

    With ``objects`` given, every argument must also be one of them.
    """
    schema = d.schema(a.name)
    if schema is None:
        raise GroundingError("unknown-action", f"unknown action {a.name}", a)
    if len(a.args) != schema.arity:
        raise GroundingError(
            "arity-mismatch",
            f"{a.name} expects {schema.arity} arguments, got {len(a.args)}",
            a,
        )
    if objects is not None:
        known = set(objects)
        for arg in a.args:
            if arg not in known:
                raise GroundingError("unknown-name", f"unknown object {arg.name}", a)
    binding = {}
    for param, arg in zip(schema.params, a.args):
        if arg.type != param.type:
            raise GroundingError(
                "type-mismatch",
                f"{a.name}: ?{param.name} expects {param.type}, "
                f"got {arg.name} of type {arg.type}",
                a,
            )
        binding[param.name] = arg
    return binding


def _substitute(lit: SchemaLiteral, binding: Binding) -> Literal:
    args = tuple(binding[t.name] if isinstance(t, Variable) else t for t in lit.args)
    return Literal(lit.polarity, GroundAtom(lit.predicate, args))


def ground_action(
    d: Domain, a: GroundAction, objects: Iterable[ObjectRef] | None = None
) -> GroundActionDescription:
    """Ground preconditions and effects of ``a``; literal order is kept."""
    binding = bind(d, a, objects)
    schema = d.schema(a.name)
    return GroundActionDescription(
        preconditions=State(_substitute(l, binding) for l in schema.preconditions),
        effects=State(_substitute(l, binding) for l in schema.effects),
    )
