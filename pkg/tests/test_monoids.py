from itertools import product

from wordeq.alphabet import MARKER, Alphabet, is_reduced_free_group
from wordeq.monoids import (ONE, ZERO, BoolMatrixMonoid, boolean_matrix_monoid,
                            build_reduced_word_monoid, check_associativity, check_involution,
                            dual_lift)


def _free(n):
    a = Alphabet()
    letters = []
    for name in "abcd"[:n]:
        letters.extend(a.add_pair(name))
    return a, letters


def test_mu0_zero_iff_unreduced_or_marker():
    a, letters = _free(2)
    N, mu0 = build_reduced_word_monoid(a, letters)
    syms = letters + [MARKER]
    for k in range(5):
        for w in product(syms, repeat=k):
            ok = MARKER not in w and is_reduced_free_group(a, w)
            assert (mu0.eval(w) != ZERO) == ok


def test_mu0_examples():
    a, letters = _free(1)
    x, xb = letters
    N, mu0 = build_reduced_word_monoid(a, letters)
    assert mu0.eval(()) == ONE
    assert mu0.eval((x, xb)) == ZERO
    assert mu0.eval((x, x, x)) == (x, x)


def test_pair_monoid_laws():
    a, letters = _free(2)
    N, _ = build_reduced_word_monoid(a, letters)
    assert check_associativity(N)
    assert check_involution(N)


def test_dual_lift_projects_back():
    a, letters = _free(1)
    N, mu0 = build_reduced_word_monoid(a, letters)
    D, mu = dual_lift(mu0, a)
    x, xb = letters
    for w in [(x,), (x, x), (xb, x)]:
        assert mu.eval(w)[0] == mu0.eval(w)
        assert mu.eval(a.involute(w)) == D.inv(mu.eval(w))


def test_boolean_matrices_recognize_even_length():
    nfa = {"states": 2, "initial": [0], "final": [0],
           "delta": [(0, "a", 1), (1, "a", 0)]}
    M, mor, accept = boolean_matrix_monoid(nfa)
    assert isinstance(M, BoolMatrixMonoid)
    for n in range(6):
        assert accept(mor.eval("a" * n)) == (n % 2 == 0)
    assert check_associativity(M, [mor.eval("a" * n) for n in range(3)])
