import random
from itertools import product

import pytest

from wordeq.freeproduct import enumerate_geodesics, pi_normal_form
from wordeq.problem import parse_problem
from wordeq.rational import (RationalSubsetNFA, benois_saturate, complement, image_within,
                             intersection, rat_boolean_ops, reduce_equation_over_F,
                             reduce_inequality, solve_branch)


def random_nfa(spec, rng, max_states=5):
    n = rng.randint(1, max_states)
    labels = list(spec.letters) + [None]
    trans = {(rng.randrange(n), rng.choice(labels), rng.randrange(n))
             for _ in range(rng.randint(1, 2 * n + 1))}
    final = frozenset(rng.sample(range(n), rng.randint(1, n)))
    return RationalSubsetNFA(n, frozenset({0}), final, trans)


def test_single_rule_application(free2):
    a = free2.alphabet
    x, xb = a.sym("a"), a.sym("a~")
    nfa = RationalSubsetNFA(3, frozenset({0}), frozenset({2}), {(0, x, 1), (1, xb, 2)})
    sat = benois_saturate(nfa, free2.spec)
    assert sat.transitions - nfa.transitions == {(0, None, 2)}
    assert sat.accepts(())


def test_saturation_idempotent(z2z3):
    rng = random.Random(3)
    for _ in range(20):
        sat = benois_saturate(random_nfa(z2z3.spec, rng), z2z3.spec)
        assert benois_saturate(sat, z2z3.spec).transitions == sat.transitions
        bound = sat.n ** 2 * (len(z2z3.spec.letters) + 1)
        assert len(sat.transitions) <= bound + sat.n ** 2


def test_membership_of_reduced_random_words(free2):
    rng = random.Random(7)
    spec = free2.spec
    for _ in range(10):
        nfa = random_nfa(spec, rng)
        sat = benois_saturate(nfa, spec)
        image = image_within(nfa, spec, 9)
        for _ in range(10):
            w = tuple(rng.choice(spec.letters) for _ in range(rng.randint(0, 5)))
            g = pi_normal_form(w, spec)
            assert sat.accepts(g) == (g in image)


def test_complement_of_empty_is_everything(z2z3):
    spec = z2z3.spec
    empty = RationalSubsetNFA(1, frozenset({0}), frozenset(), set())
    comp = complement(benois_saturate(empty, spec), spec)
    assert all(comp.accepts(g) for g in enumerate_geodesics(spec, 5))


def test_l_and_not_l_is_empty(z2z3):
    rng = random.Random(11)
    spec = z2z3.spec
    for _ in range(5):
        sat = benois_saturate(random_nfa(spec, rng), spec)
        both = intersection(sat, complement(sat, spec), spec)
        assert not any(both.accepts(g) for g in enumerate_geodesics(spec, 5))


def test_de_morgan(free2):
    rng = random.Random(13)
    spec = free2.spec
    for _ in range(3):
        ops = rat_boolean_ops(random_nfa(spec, rng), random_nfa(spec, rng), spec)
        neg_union = complement(ops.union, spec)
        meet = intersection(benois_saturate(ops.complement1, spec),
                            benois_saturate(ops.complement2, spec), spec)
        for g in enumerate_geodesics(spec, 5):
            assert neg_union.accepts(g) == meet.accepts(g)


@pytest.mark.parametrize("text", [
    "mode free-product\nfactor finite-group Z2 s table 1\n"
    "factor finite-group Z3 t u table u 1 ; 1 t\nvars X\neq X = X\n",
    "mode free-product\nfactor finite-group Z3 t u table u 1 ; 1 t\n"
    "factor free-group a\nvars X\neq X = X\n",
])
def test_equation_reduction_exhaustive(text):
    spec = parse_problem(text).spec
    branches = reduce_equation_over_F("x", "y", "z", spec)
    geos = enumerate_geodesics(spec, 2)
    for x, y, z in product(geos, repeat=3):
        vals = {"x": x, "y": y, "z": z}
        got = any(solve_branch(b, vals, spec) is not None for b in branches)
        assert got == (x == pi_normal_form(y + z, spec))


def test_equation_reduction_z3_example(z2z3):
    spec = z2z3.spec
    t, u = z2z3.alphabet.sym("t"), z2z3.alphabet.sym("u")
    branches = reduce_equation_over_F("x", "y", "z", spec)
    hit = [b for b in branches if b.letters == ((u,), (t,), (t,))]
    assert len(hit) == 1
    env = solve_branch(hit[0], {"x": (u,), "y": (t,), "z": (t,)}, spec)
    assert env["P"] == env["Q"] == env["R"] == ()


def test_free_group_branch_is_triangle_split(free2):
    branches = reduce_equation_over_F("x", "y", "z", free2.spec)
    # a free group has no letter products of length one: only a = b = c = 1 remains
    assert [b.letters for b in branches] == [((), (), ())]


@pytest.mark.parametrize("text", [
    "mode free-product\nfactor finite-group Z2 s table 1\n"
    "factor finite-group Z3 t u table u 1 ; 1 t\nvars X\neq X = X\n",
    "mode free-product\nfactor finite-group Z3 t u table u 1 ; 1 t\n"
    "factor free-group a\nvars X\neq X = X\n",
])
def test_inequality_reduction_exhaustive(text):
    spec = parse_problem(text).spec
    branches = reduce_inequality("x", "y", spec)
    for x, y in product(enumerate_geodesics(spec, 2), repeat=2):
        got = any(solve_branch(b, {"x": x, "y": y}, spec) is not None for b in branches)
        assert got == (x != y)
