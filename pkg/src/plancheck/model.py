"""Core vocabulary: typed objects, atoms, literals, states, worlds, schemas,
domains, problems and plans.

Every value here is an immutable dataclass. Sequences are stored as tuples so
order is preserved (world updates are order sensitive) and values hash.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Union


class Polarity(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def __str__(self) -> str:
        return self.value


def negate(z: Polarity) -> Polarity:
    return Polarity.NEGATIVE if z is Polarity.POSITIVE else Polarity.POSITIVE


@dataclass(frozen=True)
class ObjectRef:
    name: str
    type: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Variable:
    """A ``?name`` reference inside an action schema."""

    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


Term = Union[Variable, ObjectRef]


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    param_types: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.param_types)


@dataclass(frozen=True)
class GroundAtom:
    predicate: str
    args: tuple[ObjectRef, ...] = ()

    def __str__(self) -> str:
        return f"{self.predicate}({','.join(a.name for a in self.args)})"


@dataclass(frozen=True)
class Literal:
    polarity: Polarity
    atom: GroundAtom

    @property
    def positive(self) -> bool:
        return self.polarity is Polarity.POSITIVE

    def __str__(self) -> str:
        return f"{self.polarity}{self.atom}"


def pos(atom: GroundAtom) -> Literal:
    return Literal(Polarity.POSITIVE, atom)


def neg(atom: GroundAtom) -> Literal:
    return Literal(Polarity.NEGATIVE, atom)


@dataclass(frozen=True)
class State:
    """Ordered polarity-tagged literals (preconditions, effects, goals)."""

    literals: tuple[Literal, ...] = ()

    def __init__(self, literals: Iterable[Literal] = ()) -> None:
        object.__setattr__(self, "literals", tuple(literals))

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def is_normalized(self) -> bool:
        """True iff no atom occurs twice, whatever the polarities."""
        atoms = [lit.atom for lit in self.literals]
        return len(set(atoms)) == len(atoms)


@dataclass(frozen=True)
class World:
    """Ordered ground atoms; anything absent is false (closed world).

    Duplicates are allowed. Membership and :meth:`set_eq` ignore order and
    multiplicity.
    """

    atoms: tuple[GroundAtom, ...] = ()

    def __init__(self, atoms: Iterable[GroundAtom] = ()) -> None:
        object.__setattr__(self, "atoms", tuple(atoms))

    def __iter__(self) -> Iterator[GroundAtom]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms

    def as_set(self) -> frozenset[GroundAtom]:
        return frozenset(self.atoms)

    def set_eq(self, other: World) -> bool:
        return self.as_set() == other.as_set()


@dataclass(frozen=True)
class Parameter:
    name: str
    type: str

    def __str__(self) -> str:
        return f"?{self.name} - {self.type}"


@dataclass(frozen=True)
class SchemaLiteral:
    polarity: Polarity
    predicate: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[Parameter, ...] = ()
    preconditions: tuple[SchemaLiteral, ...] = ()
    effects: tuple[SchemaLiteral, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class GroundActionDescription:
    preconditions: State = field(default_factory=State)
    effects: State = field(default_factory=State)


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[ObjectRef, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join([self.name, *(a.name for a in self.args)]) + ")"


@dataclass(frozen=True)
class Domain:
    name: str = "domain"
    types: tuple[str, ...] = ()
    predicates: tuple[PredicateDecl, ...] = ()
    schemas: tuple[ActionSchema, ...] = ()
    requirements: tuple[str, ...] = ()

    def predicate(self, name: str) -> PredicateDecl | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def schema(self, name: str) -> ActionSchema | None:
        for s in self.schemas:
            if s.name == name:
                return s
        return None


@dataclass(frozen=True)
class Problem:
    name: str = "problem"
    domain_name: str = "domain"
    objects: tuple[ObjectRef, ...] = ()
    initial_world: World = field(default_factory=World)
    goal: State = field(default_factory=State)

    def object(self, name: str) -> ObjectRef | None:
        for o in self.objects:
            if o.name == name:
                return o
        return None

    def objects_of_type(self, type_name: str) -> tuple[ObjectRef, ...]:
        return tuple(o for o in self.objects if o.type == type_name)


@dataclass(frozen=True)
class Plan:
    actions: tuple[GroundAction, ...] = ()

    def __init__(self, actions: Iterable[GroundAction] = ()) -> None:
        object.__setattr__(self, "actions", tuple(actions))

    def __iter__(self) -> Iterator[GroundAction]:
        return iter(self.actions)

    def __len__(self) -> int:
        return len(self.actions)


def _duplicates(names: Iterable[str]) -> list[str]:
    seen: set[str] = set()
    dups: list[str] = []
    for n in names:
        if n in seen and n not in dups:
            dups.append(n)
        seen.add(n)
    return dups


def check_atom(
    d: Domain,
    predicate: str,
    arg_types: list[str],
    where: str,
) -> list[str]:
    """Arity and type violations of one atom against its declaration."""
    decl = d.predicate(predicate)
    if decl is None:
        return [f"{where}: unknown predicate {predicate}"]
    if decl.arity != len(arg_types):
        return [
            f"{where}: arity mismatch for {predicate}: "
            f"expected {decl.arity}, got {len(arg_types)}"
        ]
    return [
        f"{where}: argument type mismatch: {got} vs {want}"
        for want, got in zip(decl.param_types, arg_types)
        if want != got
    ]


def well_formed_domain(d: Domain) -> list[str]:
    """All violated domain invariants; an empty list means well formed."""
    violations = [f"duplicate type {t}" for t in _duplicates(d.types)]
    violations += [
        f"duplicate predicate {p}" for p in _duplicates(p.name for p in d.predicates)
    ]
    violations += [
        f"duplicate action {s}" for s in _duplicates(s.name for s in d.schemas)
    ]
    types = set(d.types)
    for p in d.predicates:
        for t in p.param_types:
            if t not in types:
                violations.append(f"predicate {p.name}: undeclared type {t}")
    for s in d.schemas:
        violations += [
            f"action {s.name}: duplicate parameter ?{v}"
            for v in _duplicates(p.name for p in s.params)
        ]
        params = {p.name: p.type for p in s.params}
        for p in s.params:
            if p.type not in types:
                violations.append(f"action {s.name}: undeclared type {p.type}")
        for section, lits in (("precondition", s.preconditions), ("effect", s.effects)):
            for lit in lits:
                arg_types = []
                for term in lit.args:
                    if isinstance(term, Variable):
                        if term.name not in params:
                            violations.append(
                                f"action {s.name} {section}: unbound variable ?{term.name}"
                            )
                            arg_types.append("?")
                        else:
                            arg_types.append(params[term.name])
                    else:
                        arg_types.append(term.type)
                        if term.type not in types:
                            violations.append(
                                f"action {s.name} {section}: undeclared type {term.type}"
                            )
                if "?" not in arg_types:
                    violations += check_atom(
                        d, lit.predicate, arg_types, f"action {s.name} {section}"
                    )
    return violations


def well_formed_problem(d: Domain, p: Problem) -> list[str]:
    """All violated problem invariants against ``d``; empty means well formed."""
    violations = [f"duplicate object {o}" for o in _duplicates(o.name for o in p.objects)]
    types = set(d.types)
    declared = {}
    for o in p.objects:
        if o.type not in types:
            violations.append(f"object {o.name}: undeclared type {o.type}")
        declared.setdefault(o.name, o)

    def check(atom: GroundAtom, where: str) -> None:
        for a in atom.args:
            if declared.get(a.name) != a:
                violations.append(f"{where}: unknown object {a.name}")
                return
        violations.extend(
            check_atom(d, atom.predicate, [a.type for a in atom.args], where)
        )

    for atom in p.initial_world:
        check(atom, f"init {atom}")
    for lit in p.goal:
        check(lit.atom, f"goal {lit}")
    return violations
