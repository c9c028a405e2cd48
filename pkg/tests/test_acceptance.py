"""Acceptance checks, one test and one PASS/FAIL line per criterion.

The PASS/FAIL lines appear in the terminal summary of any pytest run
that includes this module. The corpus is solved once per session; expect a few
minutes in total.
"""

import random
import sys
from fractions import Fraction
from itertools import product

import pytest
from click.testing import CliRunner

from conftest import CORPUS, corpus_names, load
from wordeq.alphabet import MARKER, Alphabet, is_reduced_free_group
from wordeq.cli import main as cli
from wordeq.edt0l import enumerate_language, example_one, is_empty, is_finite
from wordeq.freeproduct import enumerate_geodesics
from wordeq.graph import is_final
from wordeq.monoids import ZERO, build_reduced_word_monoid
from wordeq.oracle import solve_bruteforce
from wordeq.problem import parse_problem
from wordeq.rational import (RationalSubsetNFA, benois_saturate, complement, image_within,
                             intersection)
from wordeq.recompression import (BLOCK_EXIT, BLOCK_PEAK, PAIR_EXIT, enumerate_solutions,
                                  expected_compressed_length, nfa_of, solve_all)

L = 6
STRUCTURAL = ("square after block compression", "factor a a~ a", "self-involuting letter")


VERDICTS = {}  # printed by the terminal summary hook in conftest


def verdict(n, ok, detail=""):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    VERDICTS[n] = line
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    out = {}
    for name in corpus_names():
        problem = load(name)
        out[name] = (problem, solve_all(problem, L))
    return out


def _runs(corpus):
    return [run for _, result in corpus.values() for run in result.runs]


def test_1_oracle_equivalence(corpus):
    bad = []
    for name, (problem, result) in corpus.items():
        if result.incomplete or enumerate_solutions(result, L) != solve_bruteforce(problem, L):
            bad.append(name)
    modes = {p.mode for p, _ in corpus.values()}
    ok = not bad and len(corpus) >= 20 and len(modes) == 3
    verdict(1, ok, f"{len(corpus) - len(bad)}/{len(corpus)} instances equal at L={L}")


def test_2_example_one():
    system, _ = example_one()
    a = system.alphabet
    letters = (a.sym("a"), a.sym("b"))
    want = {v + v for n in range(5) for v in product(letters, repeat=n)}
    got = enumerate_language(system, 8)
    verdict(2, got == want, f"{len(got)} words")


def test_3_expectations():
    a = Alphabet()
    x, y, z = (a.add_pair(n)[0] for n in "abc")
    plain = expected_compressed_length(a, (x, y, z))
    b = Alphabet()
    p, _ = b.add_pair("a")
    q, qb = b.add_pair("b")
    fp = expected_compressed_length(b, (p, q, qb), part2=True)
    verdict(3, plain == Fraction(5, 2) and fp <= Fraction(11, 4), f"{plain} and {fp}")


def test_4_forward_invariant(corpus):
    records = [rec for run in _runs(corpus) for rec in run.report.records]
    failed = sum(not rec.forward for rec in records)
    verdict(4, records and not failed, f"{len(records) - failed}/{len(records)} arcs")


def test_5_length_discipline(corpus):
    bounds = {"block exit": BLOCK_EXIT, "block step 1": BLOCK_EXIT, "block marks": BLOCK_PEAK,
              "block loop": BLOCK_PEAK, "pair exit": PAIR_EXIT}
    checks = bad = 0
    for run in _runs(corpus):
        for name, size, limit in run.report.checkpoints:
            checks += 1
            n = run.v.n
            bad += size > limit or (name in bounds and limit > bounds[name] * n)
        bad += sum("kappa" in v or "|W|" in v for v in run.report.violations)
    verdict(5, checks and not bad, f"{checks} checkpoints, {bad} violations")


def test_6_termination(corpus):
    runs = _runs(corpus)
    final = all(is_final(run.v, run.a) for run in runs)
    rounds = [r for run in runs for r in run.report.rounds]
    # a round without pops can only occur once every value is empty;
    # it must then shrink W instead
    popped = [r for r in rounds if r.pops]
    idle = [r for r in rounds if not r.pops]
    ok = all(r.after < r.before for r in popped) and all(
        r.before == r.after == 0 and r.length_after < r.length_before for r in idle)
    verdict(6, final and ok, f"{len(runs)} runs, {len(popped)} rounds with pops, "
                             f"{len(idle)} constant-only rounds")


def test_7_classification(corpus):
    runner = CliRunner()
    want = {"fm_x_ab": "finite", "fm_ax_xa": "infinite", "fm_xx_a": "empty"}
    ok = True
    for name, cls in want.items():
        problem, result = corpus[name]
        system = nfa_of(result)
        oracle = solve_bruteforce(problem, L)
        got = is_finite(system)[1]
        sat = runner.invoke(cli, ["--max-len", str(L), "sat", str(CORPUS / f"{name}.weq")])
        ok &= got == cls
        ok &= len(enumerate_solutions(result, L)) == len(oracle)
        ok &= (len(oracle) == 0) == (cls == "empty") == is_empty(system)
        ok &= sat.exit_code == (1 if is_empty(system) else 0)
    verdict(7, ok)


def _random_nfa(spec, rng):
    n = rng.randint(1, 5)
    labels = list(spec.letters) + [None]
    trans = {(rng.randrange(n), rng.choice(labels), rng.randrange(n))
             for _ in range(rng.randint(1, 2 * n + 1))}
    final = frozenset(rng.sample(range(n), rng.randint(1, n)))
    return RationalSubsetNFA(n, frozenset({0}), final, trans)


def _image(nfa, spec):
    # two exploration bounds must agree on short words
    small = {w for w in image_within(nfa, spec, 8) if len(w) <= L}
    large = {w for w in image_within(nfa, spec, 10) if len(w) <= L}
    assert small == large
    return large


def test_8_benois():
    specs = {
        "Z2*Z3": "mode free-product\nfactor finite-group Z2 s table 1\n"
                 "factor finite-group Z3 t u table u 1 ; 1 t\nvars X\neq X = X\n",
        "F2": "mode free-group\nfactor free-group a b\nvars X\neq X = X\n",
    }
    rng = random.Random(2024)
    checked = bad = 0
    for text in specs.values():
        spec = parse_problem(text).spec
        geos = list(enumerate_geodesics(spec, L))
        for _ in range(10):
            n1, n2 = _random_nfa(spec, rng), _random_nfa(spec, rng)
            s1, s2 = benois_saturate(n1, spec), benois_saturate(n2, spec)
            i1, i2 = _image(n1, spec), _image(n2, spec)
            comp, inter = complement(s1, spec), intersection(s1, s2, spec)
            for g in geos:
                checked += 1
                bad += s1.accepts(g) != (g in i1)
                bad += comp.accepts(g) != (g not in i1)
                bad += inter.accepts(g) != (g in i1 and g in i2)
    verdict(8, not bad, f"{checked} geodesics, {bad} mismatches")


def test_9_mu0():
    a = Alphabet()
    letters = [s for name in "ab" for s in a.add_pair(name)]
    _, mu0 = build_reduced_word_monoid(a, letters)
    bad = total = 0
    for k in range(6):
        for w in product(letters + [MARKER], repeat=k):
            total += 1
            bad += (mu0.eval(w) != ZERO) != (MARKER not in w and is_reduced_free_group(a, w))
    verdict(9, not bad, f"{total} words")


def test_10_structure(corpus):
    found = [v for run in _runs(corpus) for v in run.report.violations
             if any(v.startswith(s) for s in STRUCTURAL)]
    verdict(10, not found, f"{len(found)} violations")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
