from itertools import product

import pytest

from wordeq.edt0l import (EDT0LSystem, EndoNFA, Endomorphism, apply, compose, deserialize,
                          enumerate_language, evaluate_path, example_one, is_empty, is_finite,
                          serialize, to_dot)
from wordeq.errors import BudgetError, WordEqError


def test_example_one_language():
    system, _ = example_one()
    a = system.alphabet
    x, y = a.sym("a"), a.sym("b")
    want = {v + v for n in range(5) for v in product((x, y), repeat=n)}
    assert enumerate_language(system, 8) == want


def test_example_one_path():
    system, h = example_one()
    a = system.alphabet
    # h(g_a(g_b(f(#)))) along 0 -> 1 -> 1 -> 1 -> 2
    w = evaluate_path(system, [h["h"], h["g_a"], h["g_b"], h["f"]], [0, 1, 1, 1, 2])
    assert a.show(w) == "a b a b"


def test_path_must_be_accepted():
    system, h = example_one()
    with pytest.raises(WordEqError):
        evaluate_path(system, [h["h"]], [0, 1])


def test_composition_order():
    g = Endomorphism({1: (1, 2)})
    h = Endomorphism({2: ()})
    assert apply(compose(g, h), (1,)) == apply(g, apply(h, (1,)))


def test_serialization_round_trip():
    system, _ = example_one()
    text = serialize(system)
    again = deserialize(text)
    assert serialize(again) == text
    assert enumerate_language(again, 6) == enumerate_language(system, 6)
    assert to_dot(system) == to_dot(again)


def test_classification():
    system, _ = example_one()
    assert is_empty(system) is False
    assert is_finite(system) == ("infinite", "infinite")
    a = system.alphabet
    lone = EndoNFA(2, {0}, {1})
    lone.add(0, Endomorphism({0: (a.sym("a"),)}, extraction=True), 1)
    assert is_finite(EDT0LSystem(a, {a.sym("a")}, lone)) == ("finite", "finite")
    assert is_empty(EDT0LSystem(a, {a.sym("a")}, EndoNFA(2, {0}, {1})))


def test_enumeration_budget():
    system, _ = example_one()
    with pytest.raises(BudgetError):
        enumerate_language(system, 20, budget=50)
