"""Satisfaction of states by worlds, and world update."""

from __future__ import annotations

from .model import GroundAtom, Literal, State, World


def satisfies(w: World, s: State) -> Literal | None:
    """Return the first literal of ``s`` that ``w`` violates, or None.

    Positive literals need their atom in ``w``; negative ones need it absent.
    """
    present = w.as_set()
    for lit in s:
        if (lit.atom in present) != lit.positive:
            return lit
    return None


def holds(w: World, s: State) -> bool:
    return satisfies(w, s) is None


def remove_all(p: GroundAtom, atoms: list[GroundAtom]) -> list[GroundAtom]:
    return [q for q in atoms if q != p]


def update_world(e: State, w: World) -> World:
    """Apply effects by the right fold: the tail is applied first, then the
    head literal is prepended (positive) or removed everywhere (negative).

    So for an atom repeated in ``e`` the earliest literal wins.
    """
    atoms = list(w.atoms)
    for lit in reversed(e.literals):
        if lit.positive:
            atoms.insert(0, lit.atom)
        else:
            atoms = remove_all(lit.atom, atoms)
    return World(atoms)


def world_set_eq(w1: World, w2: World) -> bool:
    return w1.set_eq(w2)
