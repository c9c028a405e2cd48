from itertools import product

from wordeq.alphabet import Alphabet
from wordeq.freeproduct import (FREE_MONOID, Factor, FreeProductSpec, IotaCodec,
                                build_product_constraint_monoid, enumerate_geodesics,
                                eta_decode, finite_group_factor, iota_encode, is_geodesic,
                                pi_normal_form)
from wordeq.monoids import ONE, ZERO
from wordeq.problem import parse_problem


def _brute_normal_form(w, spec, rules):
    """Shortest word reachable from ``w`` by applying the length-reducing rules."""
    seen = {tuple(w)}
    frontier = [tuple(w)]
    best = tuple(w)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(len(v) - 1):
                for r in rules.get(v[i:i + 2], ()):
                    u = v[:i] + r + v[i + 2:]
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
                        if len(u) < len(best):
                            best = u
        frontier = nxt
    return best


def test_geodesic_rules(z2z3, free2):
    a = free2.alphabet
    x, xb = a.sym("a"), a.sym("a~")
    assert not is_geodesic((x, xb), free2.spec)
    t = z2z3.alphabet.sym("t")
    assert not is_geodesic((t, t), z2z3.spec)
    al = Alphabet()
    c, cb = al.add_pair("c")
    fm = FreeProductSpec(al, [Factor(FREE_MONOID, [c, cb])])
    assert is_geodesic((c, cb), fm)


def test_normal_form_examples(z2z3, free2):
    a = z2z3.alphabet
    t, u = a.sym("t"), a.sym("u")
    assert pi_normal_form((t, t), z2z3.spec) == (u,)
    x, xb = free2.alphabet.sym("a"), free2.alphabet.sym("a~")
    assert pi_normal_form((x, xb), free2.spec) == ()


def test_normal_form_against_rewriting(z2z3):
    spec = z2z3.spec
    rules = {}
    for p in spec.letters:
        for q in spec.letters:
            if not spec.compatible(p, q):
                rules[(p, q)] = [spec.multiply(p, q)]
    for n in range(7):
        for w in product(spec.letters, repeat=n):
            nf = pi_normal_form(w, spec)
            assert is_geodesic(nf, spec)
            assert pi_normal_form(nf, spec) == nf
            if n <= 4:
                assert nf == _brute_normal_form(w, spec, rules)


def test_psi_recognizes_geodesics_and_units():
    text = "mode free-product\nfactor finite-group Z2 s table 1\nfactor free-monoid c\n" \
           "vars X\neq X = X\n"
    p = parse_problem(text)
    spec = p.spec
    monoid, psi = build_product_constraint_monoid(spec)
    assert psi.eval(()) == monoid.one
    for n in range(5):
        for w in product(spec.letters, repeat=n):
            m = psi.eval(w)
            assert (m[0] != ZERO) == is_geodesic(w, spec)
            assert (m[1] == ONE) == all(spec.is_unit(x) for x in w)


def test_finite_group_table_validation():
    import pytest
    from wordeq.errors import ParseError
    with pytest.raises(ParseError):
        finite_group_factor(Alphabet(), "bad", ["g", "h"], [["g", "1"], ["1", "h"]])


def test_iota_round_trip():
    al = Alphabet()
    s = al.add_self("s")
    a, ab = al.add_pair("a")
    codec = IotaCodec(al)
    enc = codec.encoded
    assert iota_encode(codec, (s,)) == (s, codec.hat[s])
    assert iota_encode(codec, (a, ab)) == (a, ab)
    for n in range(6):
        for w in product((s, a, ab), repeat=n):
            e = iota_encode(codec, w)
            assert eta_decode(codec, e) == w
            assert codec.is_codeword(e)
            assert iota_encode(codec, al.involute(w)) == enc.involute(e)


def test_enumerate_geodesics_counts(z2z3):
    # Z/2 * Z/3: after s come two letters, after t or u only s
    counts = [0] * 5
    for w in enumerate_geodesics(z2z3.spec, 4):
        counts[len(w)] += 1
    assert counts == [1, 3, 4, 6, 8]
