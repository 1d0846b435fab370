"""Reader and printer for the STRIPS + typing subset of PDDL 1.2 and for plan
files.

Identifiers are case sensitive; PDDL keywords (``define``, ``and``,
``:action`` ...) are matched case-insensitively. Negative preconditions and
goals are accepted via ``(not <atom>)``.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .model import (
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

SUPPORTED_REQUIREMENTS = (":strips", ":typing")

# Formula heads and sections that exist in PDDL but not in the subset.
_UNSUPPORTED_HEADS = {
    "or", "imply", "exists", "forall", "when", "=", "<", ">", "<=", ">=",
    "increase", "decrease", "assign", "scale-up", "scale-down", "at", "over",
    "preference", "always", "sometime",
}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")
_SYMBOL = re.compile(r"(=|<|>|<=|>=|\+|\*|/|[0-9]+(\.[0-9]+)?)\Z")
_LEXEME = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


@dataclass(frozen=True)
class SourcePos:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    """``kind`` is one of lex, syntax, unknown-name, arity-mismatch,
    type-mismatch, unsupported-feature."""

    def __init__(self, pos: SourcePos, kind: str, message: str) -> None:
        super().__init__(f"{pos}: {kind}: {message}")
        self.pos = pos
        self.kind = kind
        self.message = message


@dataclass(frozen=True)
class Token:
    kind: str  # name, var, keyword, dash, symbol
    text: str
    pos: SourcePos

    @property
    def lower(self) -> str:
        return self.text.lower()


@dataclass(frozen=True)
class SList:
    items: tuple[Node, ...]
    pos: SourcePos


Node = Union[Token, SList]

_START = SourcePos(1, 1)


def _decode(text: str | bytes) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = text[: exc.start].decode("utf-8", errors="replace")
        line = prefix.count("\n") + 1
        column = len(prefix) - (prefix.rfind("\n") + 1) + 1
        raise ParseError(SourcePos(line, column), "lex", "input is not valid UTF-8") from None


def _classify(text: str) -> str | None:
    if text == "-":
        return "dash"
    if text[0] in "?:" and _IDENT.match(text, 1):
        return "var" if text[0] == "?" else "keyword"
    if _IDENT.match(text):
        return "name"
    if _SYMBOL.match(text):
        return "symbol"
    return None


def read_sexprs(text: str | bytes) -> list[Node]:
    """Tokenize and nest ``text`` into top-level nodes.

    Nesting uses an explicit stack, so arbitrarily deep input is fine.
    """
    text = _decode(text)
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def position(offset: int) -> SourcePos:
        line = bisect.bisect_right(line_starts, offset)
        return SourcePos(line, offset - line_starts[line - 1] + 1)

    top: list[Node] = []
    stack: list[tuple[SourcePos, list[Node]]] = []
    for m in _LEXEME.finditer(text):
        lexeme = m.group()
        if lexeme[0].isspace() or lexeme[0] == ";":
            continue
        pos = position(m.start())
        if lexeme == "(":
            stack.append((pos, []))
        elif lexeme == ")":
            if not stack:
                raise ParseError(pos, "syntax", "unbalanced ')'")
            open_pos, items = stack.pop()
            node = SList(tuple(items), open_pos)
            (stack[-1][1] if stack else top).append(node)
        else:
            kind = _classify(lexeme)
            if kind is None:
                raise ParseError(pos, "lex", f"invalid token {lexeme!r}")
            (stack[-1][1] if stack else top).append(Token(kind, lexeme, pos))
    if stack:
        raise ParseError(stack[-1][0], "syntax", "unclosed '('")
    return top


# Node helpers


def _pos(node: Node) -> SourcePos:
    return node.pos


def _is_kw(node: Node, word: str) -> bool:
    return isinstance(node, Token) and node.lower == word


def _expect_list(node: Node, what: str) -> SList:
    if not isinstance(node, SList):
        raise ParseError(_pos(node), "syntax", f"expected {what}, got {node.text!r}")
    return node


def _expect_name(node: Node, what: str) -> Token:
    if not isinstance(node, Token) or node.kind != "name":
        shown = node.text if isinstance(node, Token) else "(...)"
        raise ParseError(_pos(node), "syntax", f"expected {what}, got {shown!r}")
    return node


def _single_define(nodes: list[Node], what: str) -> tuple[Token, SList]:
    """Check ``(define (<what> NAME) ...)`` and return its name and body."""
    if not nodes:
        raise ParseError(_START, "syntax", f"empty input, expected (define ({what} ...))")
    if len(nodes) > 1:
        raise ParseError(_pos(nodes[1]), "syntax", "unexpected content after define")
    root = _expect_list(nodes[0], "(define ...)")
    if not root.items or not _is_kw(root.items[0], "define"):
        raise ParseError(root.pos, "syntax", "expected (define ...)")
    if len(root.items) < 2:
        raise ParseError(root.pos, "syntax", f"missing ({what} <name>)")
    header = _expect_list(root.items[1], f"({what} <name>)")
    if len(header.items) != 2 or not _is_kw(header.items[0], what):
        raise ParseError(header.pos, "syntax", f"expected ({what} <name>)")
    return _expect_name(header.items[1], f"{what} name"), root


def _sections(root: SList) -> Iterator[tuple[str, SList]]:
    for node in root.items[2:]:
        section = _expect_list(node, "a section")
        if not section.items or not (
            isinstance(section.items[0], Token) and section.items[0].kind == "keyword"
        ):
            raise ParseError(section.pos, "syntax", "expected a (:keyword ...) section")
        yield section.items[0].lower, section


def _unsupported(node: Node, what: str) -> ParseError:
    return ParseError(_pos(node), "unsupported-feature", f"{what} is not supported")


def _requirements(section: SList) -> tuple[str, ...]:
    reqs = []
    for node in section.items[1:]:
        if not isinstance(node, Token) or node.kind != "keyword":
            raise ParseError(_pos(node), "syntax", "expected a requirement keyword")
        if node.lower not in SUPPORTED_REQUIREMENTS:
            raise _unsupported(node, f"requirement {node.text}")
        reqs.append(node.lower)
    return tuple(reqs)


def _typed_list(items: tuple[Node, ...], kind: str) -> list[tuple[Token, str]]:
    """Parse ``a b - t c - u`` into (token, type) pairs; every entry needs a type."""
    out: list[tuple[Token, str]] = []
    pending: list[Token] = []
    i = 0
    while i < len(items):
        node = items[i]
        if isinstance(node, Token) and node.kind == "dash":
            if not pending:
                raise ParseError(node.pos, "syntax", "'-' without preceding names")
            if i + 1 >= len(items):
                raise ParseError(node.pos, "syntax", "missing type after '-'")
            type_node = items[i + 1]
            if isinstance(type_node, SList):
                raise _unsupported(type_node, "either-types")
            type_tok = _expect_name(type_node, "a type name")
            out.extend((tok, type_tok.text) for tok in pending)
            pending = []
            i += 2
            continue
        if not isinstance(node, Token) or node.kind != kind:
            expected = "a ?variable" if kind == "var" else "a name"
            shown = node.text if isinstance(node, Token) else "(...)"
            raise ParseError(_pos(node), "syntax", f"expected {expected}, got {shown!r}")
        pending.append(node)
        i += 1
    if pending:
        raise ParseError(pending[0].pos, "unsupported-feature",
                         f"untyped {pending[0].text}: every entry needs '- <type>'")
    return out


def _formula(node: Node) -> list[tuple[Polarity, SList]]:
    """Flatten a conjunction of atoms and negated atoms."""
    out: list[tuple[Polarity, SList]] = []
    todo = [node]
    while todo:
        current = _expect_list(todo.pop(), "a formula")
        if not current.items:
            continue
        head = current.items[0]
        if isinstance(head, SList):
            raise ParseError(head.pos, "syntax", "formula head must be a name")
        if head.lower == "and":
            todo.extend(reversed(current.items[1:]))
        elif head.lower == "not":
            if len(current.items) != 2:
                raise ParseError(current.pos, "syntax", "(not ...) takes one atom")
            inner = _expect_list(current.items[1], "an atom inside (not ...)")
            if not inner.items:
                raise ParseError(inner.pos, "syntax", "empty atom")
            inner_head = inner.items[0]
            if isinstance(inner_head, Token) and inner_head.lower in ("and", "not"):
                raise _unsupported(inner_head, f"({inner_head.text} ...) under not")
            out.append((Polarity.NEGATIVE, _atom_node(inner)))
        else:
            out.append((Polarity.POSITIVE, _atom_node(current)))
    return out


def _atom_node(node: SList) -> SList:
    head = node.items[0]
    if isinstance(head, SList):
        raise ParseError(head.pos, "syntax", "predicate name expected")
    if head.lower in _UNSUPPORTED_HEADS or head.kind == "symbol":
        raise _unsupported(head, f"({head.text} ...)")
    if head.kind != "name":
        raise ParseError(head.pos, "syntax", f"expected a predicate name, got {head.text!r}")
    for arg in node.items[1:]:
        if isinstance(arg, SList):
            raise _unsupported(arg, "function terms")
        if arg.kind == "symbol":
            raise _unsupported(arg, f"numeric term {arg.text}")
        if arg.kind not in ("name", "var"):
            raise ParseError(arg.pos, "syntax", f"unexpected {arg.text!r} in atom")
    return node


def _check_args(
    d: Domain, head: Token, arg_toks: tuple[Token, ...], arg_types: list[str]
) -> None:
    decl = d.predicate(head.text)
    if decl is None:
        raise ParseError(head.pos, "unknown-name", f"unknown predicate {head.text}")
    if decl.arity != len(arg_types):
        raise ParseError(
            head.pos,
            "arity-mismatch",
            f"{head.text} takes {decl.arity} arguments, got {len(arg_types)}",
        )
    for tok, want, got in zip(arg_toks, decl.param_types, arg_types):
        if want != got:
            raise ParseError(
                tok.pos,
                "type-mismatch",
                f"{head.text}: {tok.text} has type {got}, expected {want}",
            )


def _schema_literal(
    d: Domain, polarity: Polarity, node: SList, params: dict[str, str]
) -> SchemaLiteral:
    head = node.items[0]
    args = node.items[1:]
    arg_types = []
    terms = []
    for arg in args:
        if arg.kind == "var":
            name = arg.text[1:]
            if name not in params:
                raise ParseError(arg.pos, "unknown-name", f"unbound variable {arg.text}")
            arg_types.append(params[name])
            terms.append(Variable(name))
        else:
            raise ParseError(
                arg.pos, "unknown-name", f"unknown constant {arg.text} (no :constants)"
            )
    _check_args(d, head, args, arg_types)
    return SchemaLiteral(polarity, head.text, tuple(terms))


def _action(d: Domain, section: SList) -> ActionSchema:
    items = section.items
    if len(items) < 2:
        raise ParseError(section.pos, "syntax", "missing action name")
    name = _expect_name(items[1], "an action name").text
    params: tuple[Parameter, ...] = ()
    pre_node = eff_node = None
    seen = set()
    i = 2
    while i < len(items):
        key = items[i]
        if not isinstance(key, Token) or key.kind != "keyword":
            raise ParseError(_pos(key), "syntax", "expected :parameters, :precondition or :effect")
        if key.lower not in (":parameters", ":precondition", ":effect"):
            raise _unsupported(key, f"action field {key.text}")
        if key.lower in seen:
            raise ParseError(key.pos, "syntax", f"duplicate {key.text}")
        seen.add(key.lower)
        if i + 1 >= len(items):
            raise ParseError(key.pos, "syntax", f"missing value for {key.text}")
        value = items[i + 1]
        if key.lower == ":parameters":
            plist = _expect_list(value, "a parameter list")
            typed = _typed_list(plist.items, "var")
            names = set()
            for tok, t in typed:
                if tok.text[1:] in names:
                    raise ParseError(tok.pos, "syntax", f"duplicate parameter {tok.text}")
                if t not in d.types:
                    raise ParseError(tok.pos, "unknown-name", f"unknown type {t}")
                names.add(tok.text[1:])
            params = tuple(Parameter(tok.text[1:], t) for tok, t in typed)
        elif key.lower == ":precondition":
            pre_node = value
        else:
            eff_node = value
        i += 2
    bound = {p.name: p.type for p in params}
    pre = tuple(
        _schema_literal(d, z, atom, bound)
        for z, atom in (_formula(pre_node) if pre_node is not None else [])
    )
    eff = tuple(
        _schema_literal(d, z, atom, bound)
        for z, atom in (_formula(eff_node) if eff_node is not None else [])
    )
    return ActionSchema(name, params, pre, eff)


def parse_domain(text: str | bytes) -> Domain:
    """Parse a domain file; raises ParseError."""
    name_tok, root = _single_define(read_sexprs(text), "domain")
    d = Domain(name=name_tok.text)
    seen: set[str] = set()
    actions = []
    for key, section in _sections(root):
        head = section.items[0]
        if key != ":action":
            if key in seen:
                raise ParseError(head.pos, "syntax", f"duplicate {head.text} section")
            seen.add(key)
        if key == ":requirements":
            d = Domain(d.name, d.types, d.predicates, d.schemas, _requirements(section))
        elif key == ":types":
            types = []
            for node in section.items[1:]:
                if isinstance(node, Token) and node.kind == "dash":
                    raise _unsupported(node, "type hierarchies")
                tok = _expect_name(node, "a type name")
                if tok.text in types:
                    raise ParseError(tok.pos, "syntax", f"duplicate type {tok.text}")
                types.append(tok.text)
            d = Domain(d.name, tuple(types), d.predicates, d.schemas, d.requirements)
        elif key == ":predicates":
            decls: list[PredicateDecl] = []
            for node in section.items[1:]:
                pnode = _expect_list(node, "a predicate declaration")
                if not pnode.items:
                    raise ParseError(pnode.pos, "syntax", "empty predicate declaration")
                ptok = _expect_name(pnode.items[0], "a predicate name")
                if any(p.name == ptok.text for p in decls):
                    raise ParseError(ptok.pos, "syntax", f"duplicate predicate {ptok.text}")
                typed = _typed_list(pnode.items[1:], "var")
                for tok, t in typed:
                    if t not in d.types:
                        raise ParseError(tok.pos, "unknown-name", f"unknown type {t}")
                decls.append(PredicateDecl(ptok.text, tuple(t for _, t in typed)))
            d = Domain(d.name, d.types, tuple(decls), d.schemas, d.requirements)
        elif key == ":action":
            schema = _action(d, section)
            if any(s.name == schema.name for s in actions):
                raise ParseError(section.items[1].pos, "syntax",
                                 f"duplicate action {schema.name}")
            actions.append(schema)
        else:
            raise _unsupported(head, f"section {head.text}")
    return Domain(d.name, d.types, d.predicates, tuple(actions), d.requirements)


def _ground_atom(
    node: SList, d: Domain, objects: dict[str, ObjectRef]
) -> GroundAtom:
    head = node.items[0]
    args = node.items[1:]
    refs = []
    for arg in args:
        if arg.kind == "var":
            raise ParseError(arg.pos, "syntax", f"variable {arg.text} in a ground atom")
        ref = objects.get(arg.text)
        if ref is None:
            raise ParseError(arg.pos, "unknown-name", f"unknown object {arg.text}")
        refs.append(ref)
    _check_args(d, head, args, [r.type for r in refs])
    return GroundAtom(head.text, tuple(refs))


def parse_problem(text: str | bytes, d: Domain) -> Problem:
    """Parse a problem file against ``d``; raises ParseError."""
    name_tok, root = _single_define(read_sexprs(text), "problem")
    domain_name = d.name
    objects: dict[str, ObjectRef] = {}
    init: list[GroundAtom] = []
    goal: list[Literal] = []
    seen: set[str] = set()
    for key, section in _sections(root):
        head = section.items[0]
        if key in seen:
            raise ParseError(head.pos, "syntax", f"duplicate {head.text} section")
        seen.add(key)
        if key == ":domain":
            if len(section.items) != 2:
                raise ParseError(section.pos, "syntax", "expected (:domain <name>)")
            tok = _expect_name(section.items[1], "a domain name")
            if tok.text != d.name:
                raise ParseError(tok.pos, "unknown-name",
                                 f"problem is for domain {tok.text}, not {d.name}")
            domain_name = tok.text
        elif key == ":requirements":
            _requirements(section)
        elif key == ":objects":
            for tok, t in _typed_list(section.items[1:], "name"):
                if tok.text in objects:
                    raise ParseError(tok.pos, "syntax", f"duplicate object {tok.text}")
                if t not in d.types:
                    raise ParseError(tok.pos, "unknown-name", f"unknown type {t}")
                objects[tok.text] = ObjectRef(tok.text, t)
        elif key == ":init":
            for node in section.items[1:]:
                atom = _expect_list(node, "an init atom")
                if not atom.items:
                    raise ParseError(atom.pos, "syntax", "empty atom")
                if _is_kw(atom.items[0], "not"):
                    raise _unsupported(atom.items[0], "negative init literals")
                if _is_kw(atom.items[0], "and"):
                    raise ParseError(atom.pos, "syntax", ":init lists atoms, not formulas")
                init.append(_ground_atom(_atom_node(atom), d, objects))
        elif key == ":goal":
            if len(section.items) != 2:
                raise ParseError(section.pos, "syntax", "expected (:goal <formula>)")
            goal = [
                Literal(z, _ground_atom(atom, d, objects))
                for z, atom in _formula(section.items[1])
            ]
        else:
            raise _unsupported(head, f"section {head.text}")
    return Problem(
        name=name_tok.text,
        domain_name=domain_name,
        objects=tuple(objects.values()),
        initial_world=World(init),
        goal=State(goal),
    )


def parse_plan(text: str | bytes, d: Domain, p: Problem) -> Plan:
    """Parse ``(action arg ...)`` forms; ``;`` starts a comment."""
    objects = {o.name: o for o in p.objects}
    actions = []
    for node in read_sexprs(text):
        form = _expect_list(node, "(action arg ...)")
        if not form.items:
            raise ParseError(form.pos, "syntax", "empty action")
        for item in form.items:
            if isinstance(item, SList):
                raise ParseError(item.pos, "syntax", "nested list in a plan action")
        head = _expect_name(form.items[0], "an action name")
        schema = d.schema(head.text)
        if schema is None:
            raise ParseError(head.pos, "unknown-name", f"unknown action {head.text}")
        args = form.items[1:]
        if len(args) != schema.arity:
            raise ParseError(
                head.pos,
                "arity-mismatch",
                f"{head.text} takes {schema.arity} arguments, got {len(args)}",
            )
        refs = []
        for arg, param in zip(args, schema.params):
            tok = _expect_name(arg, "an object name")
            ref = objects.get(tok.text)
            if ref is None:
                raise ParseError(tok.pos, "unknown-name", f"unknown object {tok.text}")
            if ref.type != param.type:
                raise ParseError(
                    tok.pos,
                    "type-mismatch",
                    f"{head.text}: {tok.text} has type {ref.type}, expected {param.type}",
                )
            refs.append(ref)
        actions.append(GroundAction(head.text, tuple(refs)))
    return Plan(actions)


# Printing


def _term(t: Variable | ObjectRef) -> str:
    return f"?{t.name}" if isinstance(t, Variable) else t.name


def _atom_text(predicate: str, args: list[str]) -> str:
    return "(" + " ".join([predicate, *args]) + ")"


def _literal_text(polarity: Polarity, text: str) -> str:
    return text if polarity is Polarity.POSITIVE else f"(not {text})"


def _conjunction(parts: list[str]) -> str:
    return "(and " + " ".join(parts) + ")" if parts else "(and)"


def _typed(pairs: list[tuple[str, str]]) -> str:
    """``a b - t c - u``, grouping consecutive entries of one type."""
    chunks: list[str] = []
    group: list[str] = []
    for i, (name, t) in enumerate(pairs):
        group.append(name)
        if i + 1 == len(pairs) or pairs[i + 1][1] != t:
            chunks.append(" ".join(group) + f" - {t}")
            group = []
    return " ".join(chunks)


def print_domain(d: Domain) -> str:
    lines = [f"(define (domain {d.name})"]
    if d.requirements:
        lines.append(f"  (:requirements {' '.join(d.requirements)})")
    if d.types:
        lines.append(f"  (:types {' '.join(d.types)})")
    if d.predicates:
        lines.append("  (:predicates")
        for p in d.predicates:
            params = _typed([(f"?x{i}", t) for i, t in enumerate(p.param_types)])
            lines.append(f"    ({p.name}{' ' + params if params else ''})")
        lines[-1] += ")"
    for s in d.schemas:
        params = _typed([(f"?{p.name}", p.type) for p in s.params])
        pre = [
            _literal_text(l.polarity, _atom_text(l.predicate, [_term(t) for t in l.args]))
            for l in s.preconditions
        ]
        eff = [
            _literal_text(l.polarity, _atom_text(l.predicate, [_term(t) for t in l.args]))
            for l in s.effects
        ]
        lines += [
            f"  (:action {s.name}",
            f"    :parameters ({params})",
            f"    :precondition {_conjunction(pre)}",
            f"    :effect {_conjunction(eff)})",
        ]
    return "\n".join(lines) + ")\n"


def print_problem(p: Problem) -> str:
    lines = [f"(define (problem {p.name})", f"  (:domain {p.domain_name})"]
    lines.append(f"  (:objects {_typed([(o.name, o.type) for o in p.objects])})")
    init = [_atom_text(a.predicate, [o.name for o in a.args]) for a in p.initial_world]
    lines.append("  (:init" + "".join(f"\n    {a}" for a in init) + ")")
    goal = [
        _literal_text(l.polarity, _atom_text(l.atom.predicate, [o.name for o in l.atom.args]))
        for l in p.goal
    ]
    lines.append(f"  (:goal {_conjunction(goal)}))")
    return "\n".join(lines) + "\n"


def print_plan(pl: Plan) -> str:
    return "".join(f"{a}\n" for a in pl)
