from collections import Counter
from fractions import Fraction

from wordeq.alphabet import Alphabet
from wordeq.edt0l import is_finite
from wordeq.oracle import solve_bruteforce
from wordeq.problem import parse_problem
from wordeq.recompression import (compressed_length, enumerate_solutions,
                                  expected_compressed_length, nfa_of, solve_all)

FP = "mode free-product\nfactor free-monoid a b\nfactor finite-group Z2 s table 1\nvars X\n"


def _kinds(result, phase):
    return Counter(r.kind for run in result.runs for r in run.report.records if r.phase.startswith(phase))


def test_expectation_abc():
    a = Alphabet()
    x, y, z = (a.add_pair(n)[0] for n in "abc")
    assert expected_compressed_length(a, (x, y, z)) == Fraction(5, 2)


def test_expectation_free_product_bound():
    a = Alphabet()
    x, _ = a.add_pair("a")
    y, yb = a.add_pair("b")
    assert expected_compressed_length(a, (x, y, yb), part2=True) == Fraction(11, 4)
    assert compressed_length(a, (y, yb), {y}, part2=True) == 2


def test_witness_extraction_matches():
    p = parse_problem("mode free-monoid\nfactor free-monoid a b\nvars X\neq X = a b\n")
    r = solve_all(p, 4)
    (run,) = r.runs
    assert run.extracted(1) == (p.alphabet.word("a b"),)


def test_visible_block_is_compressed_and_restored():
    p = parse_problem("mode free-monoid\nfactor free-monoid a b\nvars X\neq X = a b b b b a\n")
    r = solve_all(p, 6)
    kinds = _kinds(r, "block")
    assert kinds["df1"] >= 1 and kinds["df2"] >= 1
    assert enumerate_solutions(r, 6) == solve_bruteforce(p, 6)
    assert not r.violations


def _single(eq, word):
    p = parse_problem(FP + f"eq X = {word}\n")
    X = p.variables[0]
    r = solve_all(p, witnesses=[{X: p.alphabet.word(word)}])
    return p, r


def test_pair_blocks_are_compressed():
    word = "b a a~ a a~ a a~ b~ a b a b~ a"
    p, r = _single("X", word)
    kinds = _kinds(r, "nonstandard")
    assert kinds["df1"] >= 1 and kinds["df3"] >= 1
    assert enumerate_solutions(r, 13) == {(p.alphabet.word(word),)}
    assert not r.violations


def test_single_pair_block():
    word = "b a a~ b~ a b a b~ a b a b~ a b a b~"
    p, r = _single("X", word)
    assert _kinds(r, "nonstandard")["df1"] >= 1
    assert enumerate_solutions(r, 16) == {(p.alphabet.word(word),)}


def test_long_pair_block_halving():
    word = "b" + " a a~" * 6 + " b~"
    p, r = _single("X", word)
    kinds = _kinds(r, "nonstandard")
    assert kinds["df2"] >= 1
    assert enumerate_solutions(r, 14) == {(p.alphabet.word(word),)}
    assert not r.violations


def test_no_pair_blocks_means_no_renaming():
    word = "b b a b b a b b a b b"
    p, r = _single("X", word)
    assert _kinds(r, "nonstandard")["df1"] == 0


def test_partitions_are_exhaustive_at_desk_scale():
    p = parse_problem("mode free-group\nfactor free-group a b\nvars X\neq X = a b a b\n")
    r = solve_all(p, 4)
    parts = [q for run in r.runs for q in run.report.partitions]
    assert parts and all(mode == "exhaustive" for mode, _, _ in parts)


def test_infinite_family_has_cycle():
    p = parse_problem("mode free-monoid\nfactor free-monoid a\nvars X\neq a X = X a\n")
    r = solve_all(p, 6)
    assert is_finite(nfa_of(r))[1] == "infinite"
    got = enumerate_solutions(r, 6)
    assert got == solve_bruteforce(p, 6)


def test_unsatisfiable_gives_empty_nfa():
    p = parse_problem("mode free-monoid\nfactor free-monoid a\nvars X\neq X X = a\n")
    r = solve_all(p, 6)
    assert not r.runs
    assert is_finite(nfa_of(r))[1] == "empty"
