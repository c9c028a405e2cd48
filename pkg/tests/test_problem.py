import pytest
from hypothesis import given, settings, strategies as st

from wordeq.errors import ParseError
from wordeq.oracle import free_reduce, solve_bruteforce
from wordeq.problem import parse_problem


def test_minimal_problem():
    p = parse_problem("mode free-monoid\nfactor free-monoid a b\nvars X\neq X = a b\n")
    assert p.mode == "free-monoid"
    assert p.target == p.variables
    assert p.alphabet.bar(p.alphabet.sym("a")) == p.alphabet.sym("a~")


@pytest.mark.parametrize("text,line", [
    ("mode free-monoid\nfactor free-monoid a\nvars X X\neq X = a\n", 3),
    ("mode free-monoid\nfactor free-monoid a\nvars X\neq X = q\n", 4),
    ("mode nonsense\n", 1),
    ("mode free-group\nfactor free-group a\nvars x\n", 3),
    ("mode free-product\nfactor finite-group Z2 s table s\nvars X\neq X = s\n", 2),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_problem(text)
    assert exc.value.line == line


def test_finite_free_product_rejected():
    with pytest.raises(ParseError):
        parse_problem("mode free-product\nfactor finite-group Z2 s table 1\nvars X\neq X = s\n")


def test_comments_and_constraints():
    p = parse_problem("mode free-group  # comment\nfactor free-group a\nvars X\n"
                      "eq a X = X a\nconstraint X in len2:1\nconstraint X notin N:a.a\n")
    assert len(p.atoms()) == 3


WORDS = st.lists(st.sampled_from(["a", "a~", "b", "X", "X~", "Y"]), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(WORDS, WORDS), min_size=1, max_size=3),
       st.sampled_from(["free-group", "free-monoid"]), st.booleans())
def test_round_trip(eqs, mode, with_constraint):
    lines = [f"mode {mode}", f"factor {mode} a b", "vars X Y"]
    lines += [f"eq {' '.join(l)} = {' '.join(r)}" for l, r in eqs]
    if with_constraint:
        lines.append("constraint Y notin len3:2")
    p = parse_problem("\n".join(lines) + "\n")
    q = parse_problem(p.to_text())
    assert q.to_text() == p.to_text()
    assert q.formula == p.formula


def test_oracle_examples():
    p = parse_problem("mode free-monoid\nfactor free-monoid a b\nvars X\neq X = a b\n")
    a = p.alphabet
    assert solve_bruteforce(p, 6) == {(a.word("a b"),)}
    p = parse_problem("mode free-monoid\nfactor free-monoid a\nvars X\neq X X = a\n")
    assert solve_bruteforce(p, 6) == set()
    p = parse_problem("mode free-group\nfactor free-group a b\nvars X\neq a X = X a\n")
    g = p.alphabet
    sols = solve_bruteforce(p, 6)
    assert len(sols) == 13
    assert all(set(w) <= {g.sym("a"), g.sym("a~")} for (w,) in sols)


def test_oracle_respects_inequality_and_constraints():
    p = parse_problem("mode free-group\nfactor free-group a\nvars X\neq a X = X a\nneq X 1\n"
                      "constraint X in len2:0\n")
    sols = solve_bruteforce(p, 6)
    assert sols and all(w and len(w) % 2 == 0 for (w,) in sols)


def test_free_reduce():
    p = parse_problem("mode free-group\nfactor free-group a b\nvars X\neq X = X\n")
    a = p.alphabet
    assert free_reduce(a, a.word("a b b~ a~ b")) == a.word("b")
