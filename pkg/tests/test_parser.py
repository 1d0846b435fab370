import random

import pytest
from hypothesis import given, settings, strategies as st

from plancheck import GroundAction, Plan, Polarity, well_formed_domain, well_formed_problem
from plancheck.parser import (
    ParseError,
    parse_domain,
    parse_plan,
    parse_problem,
    print_domain,
    print_plan,
    print_problem,
    read_sexprs,
)

from conftest import FIXTURES, act, atom
from randgen import random_domain, random_plan, random_problem

ALT_ORDER = """\
(drive_passenger taxi3 person3 loc3 loc1);
(drive taxi1 loc1 loc2);
(drive_passenger taxi3 person1 loc1 loc3)
"""


def kind_of(fn, *args):
    with pytest.raises(ParseError) as info:
        fn(*args)
    return info.value.kind


def test_taxi_domain(taxi_domain):
    assert taxi_domain.name == "taxi"
    assert taxi_domain.types == ("taxi", "location", "person")
    assert [p.name for p in taxi_domain.predicates] == ["taxiIn", "personIn"]
    assert [(s.name, s.arity) for s in taxi_domain.schemas] == [
        ("drive_passenger", 4), ("drive", 3),
    ]
    assert well_formed_domain(taxi_domain) == []


def test_minimal_domain():
    d = parse_domain("(define (domain d) (:requirements :strips))")
    assert (d.types, d.predicates, d.schemas) == ((), (), ())


def test_keywords_are_case_insensitive():
    d = parse_domain("(DEFINE (Domain d) (:Requirements :STRIPS) (:TYPES t) "
                     "(:predicates (p ?x - t)) (:ACTION a :Parameters (?x - t) "
                     ":effect (AND (NOT (p ?x)))))")
    assert d.schemas[0].effects[0].polarity is Polarity.NEGATIVE


def test_identifiers_are_case_sensitive(taxi_domain, taxi_problem):
    assert kind_of(parse_plan, "(Drive taxi1 loc1 loc2)", taxi_domain, taxi_problem) == "unknown-name"


@pytest.mark.parametrize(
    "old, new",
    [
        ("(and\n        (taxiIn ?t1 ?l1)\n        (personIn ?p1 ?l1))",
         "(or (taxiIn ?t1 ?l1) (personIn ?p1 ?l1))"),
        ("(:types taxi location person)", "(:types taxi location person)\n  (:functions (f))"),
        ("(taxiIn ?t1 ?l1)\n    :effect", "(= ?l1 ?l2)\n    :effect"),
        (":strips :typing", ":strips :typing :adl"),
        ("(:types taxi location person)", "(:types taxi location person - object)"),
        ("(and\n        (taxiIn ?t1 ?l1)\n        (personIn ?p1 ?l1))",
         "(forall (?x - taxi) (taxiIn ?x ?l1))"),
    ],
)
def test_unsupported_features(domain_text, old, new):
    assert old in domain_text
    assert kind_of(parse_domain, domain_text.replace(old, new, 1)) == "unsupported-feature"


def test_domain_errors():
    assert kind_of(parse_domain, "(define (domain d) (:types t) (:predicates (p ?x - u)))") == "unknown-name"
    assert kind_of(parse_domain, "(define (domain d) (:types t t))") == "syntax"
    assert kind_of(parse_domain, "(define (domain d) (:types t) (:predicates (p ?x - t) (p ?y - t)))") == "syntax"
    assert kind_of(parse_domain, "(define (domain d) (:types t) (:predicates (p ?x - t)) "
                                 "(:action a :parameters (?x - t) :effect (p ?y)))") == "unknown-name"
    assert kind_of(parse_domain, "(define (domain d) (:types t) (:predicates (p ?x - t)) "
                                 "(:action a :parameters (?x - t) :effect (p ?x ?x)))") == "arity-mismatch"
    assert kind_of(parse_domain, "(define (domain d) (:types t u) (:predicates (p ?x - t)) "
                                 "(:action a :parameters (?x - u) :effect (p ?x)))") == "type-mismatch"
    assert kind_of(parse_domain, "(define (domain d) (:types t) (:predicates (p ?x)))") == "unsupported-feature"
    assert kind_of(parse_domain, "(define (domain d) @)") == "lex"
    assert kind_of(parse_domain, "") == "syntax"


def test_negative_preconditions_accepted():
    d = parse_domain("(define (domain d) (:types t) (:predicates (p ?x - t)) "
                     "(:action a :parameters (?x - t) :precondition (not (p ?x)) :effect (p ?x)))")
    assert d.schemas[0].preconditions[0].polarity is Polarity.NEGATIVE


def test_taxi_problem(taxi_domain, taxi_problem):
    assert len(taxi_problem.objects) == 9
    assert len(taxi_problem.initial_world) == 6
    assert len(taxi_problem.goal) == 3
    assert all(l.polarity is Polarity.POSITIVE for l in taxi_problem.goal)
    assert taxi_problem.initial_world.atoms[0] == atom("taxiIn", "taxi1", "loc1")
    assert well_formed_problem(taxi_domain, taxi_problem) == []


def test_negative_goal_literal(taxi_domain, problem_text):
    text = problem_text.replace("(taxiIn taxi1 loc2)", "(not (taxiIn taxi1 loc1))")
    p = parse_problem(text, taxi_domain)
    assert p.goal.literals[0].polarity is Polarity.NEGATIVE
    assert p.goal.literals[0].atom == atom("taxiIn", "taxi1", "loc1")


def test_init_type_mismatch(taxi_domain, problem_text):
    text = problem_text.replace("(taxiIn taxi1 loc1)", "(taxiIn person1 loc1)")
    with pytest.raises(ParseError) as info:
        parse_problem(text, taxi_domain)
    assert info.value.kind == "type-mismatch"
    assert (info.value.pos.line, info.value.pos.column) == (7, 19)


def test_problem_errors(taxi_domain, problem_text):
    assert kind_of(parse_problem, problem_text.replace("(taxiIn taxi2 loc2)", "(taxiIn taxi9 loc2)"),
                   taxi_domain) == "unknown-name"
    assert kind_of(parse_problem, problem_text.replace("(:domain taxi)", "(:domain cab)"),
                   taxi_domain) == "unknown-name"
    assert kind_of(parse_problem, problem_text.replace("(taxiIn taxi2 loc2)", "(not (taxiIn taxi2 loc2))"),
                   taxi_domain) == "unsupported-feature"
    assert kind_of(parse_problem, problem_text.replace("(taxiIn taxi2 loc2)", "(= taxi2 loc2)"),
                   taxi_domain) == "unsupported-feature"
    assert kind_of(parse_problem, problem_text.replace("loc1 loc2 loc3 - location", "loc1 loc1 - location"),
                   taxi_domain) == "syntax"


def test_empty_problem(taxi_domain):
    p = parse_problem("(define (problem e) (:domain taxi) (:objects) (:init) (:goal (and)))", taxi_domain)
    assert (p.objects, len(p.initial_world), len(p.goal)) == ((), 0, 0)


def test_alt_order_plan(taxi_domain, taxi_problem):
    plan = parse_plan(ALT_ORDER, taxi_domain, taxi_problem)
    assert plan.actions == (
        act("drive_passenger", "taxi3", "person3", "loc3", "loc1"),
        act("drive", "taxi1", "loc1", "loc2"),
        act("drive_passenger", "taxi3", "person1", "loc1", "loc3"),
    )


def test_plan_comments_and_blank_lines(taxi_domain, taxi_problem):
    text = "; produced by a planner\n\n(drive taxi1 loc1 loc2) ; first\n\n"
    assert len(parse_plan(text, taxi_domain, taxi_problem)) == 1


def test_empty_plan(taxi_domain, taxi_problem):
    assert parse_plan("", taxi_domain, taxi_problem) == Plan()


@pytest.mark.parametrize(
    "text, kind",
    [
        ("(drive taxi1 loc1)", "arity-mismatch"),
        ("(drive person1 loc1 loc2)", "type-mismatch"),
        ("(drive taxi1 loc9 loc2)", "unknown-name"),
        ("(fly taxi1 loc1 loc2)", "unknown-name"),
        ("(drive taxi1 loc1 loc2", "syntax"),
        ("drive taxi1 loc1 loc2", "syntax"),
        ("(drive taxi1 (loc1) loc2)", "syntax"),
    ],
)
def test_plan_errors(taxi_domain, taxi_problem, text, kind):
    assert kind_of(parse_plan, text, taxi_domain, taxi_problem) == kind


def test_error_positions_point_at_token():
    with pytest.raises(ParseError) as info:
        read_sexprs("(a b)\n  (c $)")
    assert (info.value.pos.line, info.value.pos.column) == (2, 6)
    with pytest.raises(ParseError) as info:
        read_sexprs("(a\n (b)")
    assert (info.value.pos.line, info.value.pos.column) == (1, 1)


def test_invalid_utf8_is_a_lex_error():
    with pytest.raises(ParseError) as info:
        parse_domain(b"(define\n (domain \xff))")
    assert info.value.kind == "lex"
    assert (info.value.pos.line, info.value.pos.column) == (2, 10)


def test_deep_nesting_does_not_crash():
    text = "(" * 100_000 + ")" * 100_000
    assert kind_of(parse_domain, text) == "syntax"
    nested = "(and " * 5000 + "(p)" + ")" * 5000
    d = parse_domain(f"(define (domain d) (:predicates (p)) (:action a :effect {nested}))")
    assert len(d.schemas[0].effects) == 1


def test_print_round_trips_taxi(taxi_domain, taxi_problem, taxi_plan):
    assert parse_domain(print_domain(taxi_domain)) == taxi_domain
    assert parse_problem(print_problem(taxi_problem), taxi_domain) == taxi_problem
    assert parse_plan(print_plan(taxi_plan), taxi_domain, taxi_problem) == taxi_plan


def test_print_empty_plan():
    assert print_plan(Plan()) == ""


def test_alt_order_plan_round_trip(taxi_domain, taxi_problem):
    plan = parse_plan(ALT_ORDER, taxi_domain, taxi_problem)
    assert parse_plan(print_plan(plan), taxi_domain, taxi_problem) == plan


def test_random_round_trips():
    rng = random.Random(7)
    for _ in range(200):
        d = random_domain(rng)
        p = random_problem(rng, d)
        pl = random_plan(rng, d, p)
        assert parse_domain(print_domain(d)) == d
        assert parse_problem(print_problem(p), d) == p
        assert parse_plan(print_plan(pl), d, p) == pl


def _total(fn, data):
    try:
        fn(data)
    except ParseError as exc:
        lines = data.splitlines() if isinstance(data, str) else data.split(b"\n")
        assert 1 <= exc.pos.line <= max(len(lines), 1)
        assert exc.pos.column >= 1
        assert exc.message


@settings(max_examples=300)
@given(st.text(alphabet=st.sampled_from(list("()?:-; \n\tabdefinotpqrsx=0é@"))))
def test_domain_parsing_is_total_on_text(text):
    _total(parse_domain, text)


@settings(max_examples=200)
@given(st.binary())
def test_domain_parsing_is_total_on_bytes(data):
    _total(parse_domain, data)


@settings(max_examples=200)
@given(st.text())
def test_plan_parsing_is_total(text):
    d = parse_domain((FIXTURES / "taxi-domain.pddl").read_text())
    p = parse_problem((FIXTURES / "taxi-problem.pddl").read_text(), d)
    try:
        parse_plan(text, d, p)
    except ParseError as exc:
        assert exc.pos.line >= 1 and exc.pos.column >= 1


def test_mutated_fixtures_never_crash(domain_text):
    rng = random.Random(3)
    for _ in range(500):
        chars = list(domain_text)
        for _ in range(rng.randint(1, 4)):
            i = rng.randrange(len(chars))
            op = rng.random()
            if op < 0.4:
                del chars[i]
            elif op < 0.8:
                chars.insert(i, rng.choice("()?:- ;x"))
            else:
                chars[i] = rng.choice("()\n")
        _total(parse_domain, "".join(chars))


def test_ground_action_rendering():
    assert str(GroundAction("halt")) == "(halt)"
