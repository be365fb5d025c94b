import pytest

from gosil.errors import BoundMissing, ExplosionGuard, IllTypedSentence
from gosil.models import find_models
from gosil.parser import parse_formula, parse_theory
from gosil.semantics import format_structure, satisfies


def small_theory(axiom: str = "true"):
    return parse_theory(
        f"""
        type Animal
        type Cat <: Animal
        type Dog <: Animal
        pred meow : Cat
        pred bark : Dog
        pred makingSound : Animal
        axiom main: {axiom}
        """
    )


def test_unsatisfiable_theory_has_no_models():
    theory = parse_theory("type T\naxiom no: false")
    assert find_models(theory, {"T": 1}) == []


def test_satisfiable_theory_has_models():
    theory = parse_theory("type T\naxiom some: ?x[T]: true")
    assert len(find_models(theory, {"T": 1})) >= 1


def test_bound_required_for_maximal_types():
    theory = small_theory()
    with pytest.raises(BoundMissing):
        find_models(theory, {})
    with pytest.raises(BoundMissing):
        find_models(theory, {"Animal": 0})


def test_explosion_guard():
    theory = small_theory()
    with pytest.raises(ExplosionGuard):
        find_models(theory, {"Animal": 3}, explosion_cap=10)


def test_ill_typed_axiom_rejected():
    theory = parse_theory(
        "type Cat\nconst tom : Cat\ntype Dog\npred bark : Dog\naxiom bad: bark(tom)"
    )
    with pytest.raises(IllTypedSentence):
        find_models(theory, {"Cat": 1, "Dog": 1})


def test_returned_models_satisfy_axioms_and_nothing_else_does():
    axiom = "!a[Animal]: makingSound(a) <=> (Cat(a) & meow(a)) | (Dog(a) & bark(a))"
    constrained = small_theory(axiom)
    unconstrained = small_theory("true")
    everything = find_models(unconstrained, {"Animal": 1})
    sentence = parse_formula(axiom, constrained.vocabulary)
    expected = [s for s in everything if satisfies(s, sentence)]
    got = find_models(constrained, {"Animal": 1})
    assert [format_structure(s) for s in got] == [format_structure(s) for s in expected]
    assert 0 < len(got) < len(everything)


def test_making_sound_pinned_by_definition():
    axiom = "!a[Animal]: makingSound(a) <=> (Cat(a) & meow(a)) | (Dog(a) & bark(a))"
    theory = small_theory(axiom)
    models = find_models(theory, {"Animal": 2})
    assert models
    for s in models:
        sound_makers = {
            args[0]
            for name in ("meow", "bark")
            for args, value in s.graphs[name].rows
        }
        making = {args[0] for args, _ in s.graphs["makingSound"].rows}
        assert making == sound_makers


def test_limit_and_determinism():
    theory = small_theory("?a[Animal]: makingSound(a)")
    first = find_models(theory, {"Animal": 1}, limit=3)
    second = find_models(theory, {"Animal": 1}, limit=3)
    assert [format_structure(s) for s in first] == [format_structure(s) for s in second]
    assert len(first) == 3
    full = find_models(theory, {"Animal": 1})
    assert len(full) == 4  # meow/bark/makingSound free over one element
    assert [format_structure(s) for s in full[:3]] == [format_structure(s) for s in first]


def test_concept_functions_pinned_by_facts():
    theory = parse_theory(
        """
        type Cat
        pred meow : Cat
        type Sound <: Concept := { meow }
        type Kind <: Concept := { Cat }
        func soundOfKind : Kind -> Sound
        define soundOfKind(`Cat) = `meow
        axiom some: ?c[Cat]: true
        """
    )
    models = find_models(theory, {"Cat": 1})
    assert models
    for s in models:
        rows = s.graphs["soundOfKind"].rows
        assert len(rows) == 1
