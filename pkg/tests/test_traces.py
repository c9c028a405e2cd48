import random

from wordeq.alphabet import VARIABLE, Alphabet
from wordeq.traces import (close_theta, representatives, trace_equal, trace_normal_form,
                           validate_theta)


def _setup():
    a = Alphabet()
    c, cb = a.add_pair("c")
    m, mb = a.add_pair("m")
    b, bb = a.add_pair("b")
    X, Xb = a.add_pair("X", kind=VARIABLE)
    return a, (c, cb, m, mb, b, bb, X, Xb)


def test_pair_shape_commutes_marks():
    a, (c, cb, m, mb, *_ ) = _setup()
    theta = close_theta(a, [((m, mb), (c, cb))])
    assert not validate_theta(a, theta)
    u = (m, mb, c, cb, c, cb)
    v = (c, cb, m, mb, c, cb)
    assert trace_equal(u, v, theta)
    assert not trace_equal(u, v, frozenset())


def test_letter_shape_commutes_variable():
    a, (c, cb, m, mb, b, bb, X, Xb) = _setup()
    theta = close_theta(a, [((X,), (c,))])
    assert not validate_theta(a, theta)
    assert trace_equal((c, c, X, b), (X, c, c, b), theta)
    assert not trace_equal((c, b, X), (X, b, c), theta)


def test_invalid_relations_are_reported():
    a, (c, cb, m, mb, b, bb, X, Xb) = _setup()
    assert "not closed under involution" in validate_theta(a, frozenset({((X,), (c,))}))
    mixed = close_theta(a, [((X,), (c,)), ((m, mb), (c, cb))])
    assert "mixed shapes" in validate_theta(a, mixed)


def test_normal_form_matches_swap_closure():
    a, (c, cb, m, mb, b, bb, X, Xb) = _setup()
    theta = close_theta(a, [((X,), (c,))])
    rng = random.Random(0)
    pool = [c, cb, b, X, Xb]
    for _ in range(200):
        w = tuple(rng.choice(pool) for _ in range(rng.randint(0, 7)))
        reps = representatives(w, theta)
        assert w in reps
        nf = trace_normal_form(w, theta)
        assert nf in reps
        for r in reps:
            assert trace_normal_form(r, theta) == nf
