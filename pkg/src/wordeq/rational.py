"""Rational subsets of a free product.

An NFA reads letters of the free product; its transitions may also carry
``None`` (the empty word). After :func:`benois_saturate`, a geodesic word
lies in the image of the language iff the NFA accepts it, which makes the
Boolean operations plain automaton constructions intersected with the
geodesic words.
"""

from dataclasses import dataclass, field
from itertools import product

from .freeproduct import pi_normal_form


@dataclass
class RationalSubsetNFA:
    n: int
    initial: frozenset
    final: frozenset
    transitions: set = field(default_factory=set)  # (p, letter or None, q)

    def copy(self):
        return RationalSubsetNFA(self.n, self.initial, self.final, set(self.transitions))

    def _eps_closure(self, states):
        eps = {}
        for p, a, q in self.transitions:
            if a is None:
                eps.setdefault(p, []).append(q)
        seen = set(states)
        todo = list(states)
        while todo:
            for q in eps.get(todo.pop(), ()):
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return frozenset(seen)

    def accepts(self, w):
        step = {}
        for p, a, q in self.transitions:
            if a is not None:
                step.setdefault((p, a), set()).add(q)
        closure = {p: self._eps_closure({p}) for p in range(self.n)}
        cur = self._eps_closure(self.initial)
        for x in w:
            cur = {r for p in cur for q in step.get((p, x), ()) for r in closure[q]}
            if not cur:
                return False
        return bool(cur & self.final)


def _one_step(nfa):
    """``{(p, a, q)}`` such that the single letter ``a`` leads from ``p`` to ``q``."""
    closure = [nfa._eps_closure({p}) for p in range(nfa.n)]
    out = set()
    for p in range(nfa.n):
        for p1, a, q1 in nfa.transitions:
            if a is not None and p1 in closure[p]:
                for q in closure[q1]:
                    out.add((p, a, q))
    return out


def benois_saturate(nfa, spec):
    """Add shortcut transitions until every reducible two-letter path has one.

    Whenever ``ab`` labels a path ``p -> r`` and ``pi(ab)`` is a single
    letter or empty (and differs from ``ab``), the transition
    ``(p, pi(ab), r)`` is added. The input is not modified.
    """
    sat = nfa.copy()
    while True:
        steps = _one_step(sat)
        by_source = {}
        for p, a, q in steps:
            by_source.setdefault(p, []).append((a, q))
        new = set()
        for p, a, q in steps:
            for b, r in by_source.get(q, ()):
                if spec.compatible(a, b):
                    continue
                c = spec.multiply(a, b)
                t = (p, c[0] if c else None, r)
                if t not in sat.transitions:
                    new.add(t)
        if not new:
            return sat
        sat.transitions |= new


def _determinize(nfa, letters):
    """Reachable subset automaton; returns ``(states, delta, start)``."""
    start = nfa._eps_closure(nfa.initial)
    index = {start: 0}
    states = [start]
    delta = {}
    todo = [start]
    while todo:
        s = todo.pop()
        for a in letters:
            t = nfa._eps_closure({q for p, x, q in nfa.transitions if p in s and x == a})
            if t not in index:
                index[t] = len(states)
                states.append(t)
                todo.append(t)
            delta[(index[s], a)] = index[t]
    return states, delta, 0


def _from_dfa(spec, states, delta, start, accept):
    """The DFA ``(states, delta)`` intersected with the geodesic words.

    States of the result are pairs (DFA state, last letter or ``None``).
    """
    letters = spec.letters
    index = {(start, None): 0}
    todo = [(start, None)]
    trans = set()
    while todo:
        s, last = todo.pop()
        for a in letters:
            if last is not None and not spec.compatible(last, a):
                continue
            t = (delta[(s, a)], a)
            if t not in index:
                index[t] = len(index)
                todo.append(t)
            trans.add((index[(s, last)], a, index[t]))
    final = frozenset(i for (s, _), i in index.items() if accept(s))
    return RationalSubsetNFA(len(index), frozenset({0}), final, trans)


def complement(sat, spec):
    """Geodesic words outside ``pi(L(sat))``; ``sat`` must be saturated."""
    states, delta, start = _determinize(sat, spec.letters)
    return _from_dfa(spec, states, delta, start, lambda s: not (states[s] & sat.final))


def intersection(sat1, sat2, spec):
    """Geodesic words in both images; both inputs must be saturated."""
    letters = spec.letters
    s1, d1, _ = _determinize(sat1, letters)
    s2, d2, _ = _determinize(sat2, letters)
    pairs = {(i, j): k for k, (i, j) in enumerate(product(range(len(s1)), range(len(s2))))}
    delta = {(pairs[(i, j)], a): pairs[(d1[(i, a)], d2[(j, a)])]
             for (i, j) in pairs for a in letters}
    inv = {k: ij for ij, k in pairs.items()}
    return _from_dfa(spec, list(pairs), delta, pairs[(0, 0)],
                     lambda k: bool(s1[inv[k][0]] & sat1.final) and bool(s2[inv[k][1]] & sat2.final))


def union(nfa1, nfa2):
    n = nfa1.n
    trans = set(nfa1.transitions) | {(p + n, a, q + n) for p, a, q in nfa2.transitions}
    return RationalSubsetNFA(n + nfa2.n, nfa1.initial | {q + n for q in nfa2.initial},
                             nfa1.final | {q + n for q in nfa2.final}, trans)


@dataclass
class BooleanOps:
    complement1: RationalSubsetNFA
    complement2: RationalSubsetNFA
    intersection: RationalSubsetNFA
    union: RationalSubsetNFA


def rat_boolean_ops(nfa1, nfa2, spec):
    """Complements, intersection and union of two rational subsets.

    Inputs are saturated first, so unsaturated NFAs are accepted too. All
    returned automata accept only geodesic words, except ``union`` which
    is the saturated disjoint union.
    """
    s1, s2 = benois_saturate(nfa1, spec), benois_saturate(nfa2, spec)
    return BooleanOps(complement(s1, spec), complement(s2, spec),
                      intersection(s1, s2, spec), benois_saturate(union(s1, s2), spec))


def image_within(nfa, spec, bound):
    """Brute force: the elements of ``pi(L(nfa))`` of length at most ``bound``.

    Explores (state, reduced prefix) pairs whose reduced prefix never gets
    longer than ``bound``. This misses an element only if every accepting
    path for it passes through longer prefixes, so callers compare two
    bounds.
    """
    out_edges = {}
    for p, a, q in nfa.transitions:
        out_edges.setdefault(p, []).append((a, q))
    start = {(p, ()) for p in nfa._eps_closure(nfa.initial)}
    seen = set(start)
    todo = list(start)
    while todo:
        p, w = todo.pop()
        for a, q in out_edges.get(p, ()):
            w2 = w if a is None else pi_normal_form(w + (a,), spec)
            if len(w2) <= bound and (q, w2) not in seen:
                seen.add((q, w2))
                todo.append((q, w2))
    return {w for p, w in seen if p in nfa.final}


# ---------------------------------------------------------------------------
# equations and inequalities over F as monoid equations


@dataclass(frozen=True)
class Branch:
    """Monoid equations whose values range over geodesic words.

    ``equations`` holds pairs of words mixing caller variables (any
    non-integer hashables) and letter ids; variables in ``units`` must take values over unit letters.
    """
    equations: tuple
    units: tuple = ()
    letters: tuple = ()


def reduce_equation_over_F(x, y, z, spec, fresh=("P", "Q", "R")):
    """Branches for ``x = pi(yz)``: ``x = P a Q``, ``y = P b R``, ``z = R~ c Q``.

    ``a, b, c`` range over letters and the empty word with ``a = pi(bc)``;
    for a free group only ``a = b = c = 1`` remains.
    The caller's variables ``x, y, z`` and ``fresh`` may be any hashables;
    ``R~`` is written ``("bar", R)``.
    """
    P, Q, R = fresh
    combos = [((), (), ())]
    for b in spec.letters:
        for c in spec.letters:
            # bc = 1 needs no branch of its own: R absorbs the cancellation
            if not spec.compatible(b, c) and len(spec.multiply(b, c)) == 1:
                combos.append((tuple(spec.multiply(b, c)), (b,), (c,)))
    return [Branch(((( x,), (P,) + a + (Q,)),
                    ((y,), (P,) + b + (R,)),
                    ((z,), (("bar", R),) + c + (Q,))), units=(R,), letters=(a, b, c))
            for a, b, c in combos]


def reduce_inequality(x, y, spec, fresh=("P", "Q", "R")):
    """Branches for ``x != y`` over geodesic values.

    The padded branches read ``x a = P b Q`` and ``y a = P c R`` with
    letters ``b != c``. They miss pairs where one value is a proper prefix
    of the other and no padding letter separates them (``1`` against
    ``s t`` in ``Z/2 * Z/3``) or where no letter may follow both values
    (``s`` against ``t``). Unpadded branches ``x = P b Q``, ``y = P c R``
    and prefix branches ``x = y b Q``, ``y = x b Q`` close both gaps.
    """
    P, Q, R = fresh
    out = []
    for a in spec.letters:
        for b in spec.letters:
            for c in spec.letters:
                if b != c:
                    out.append(Branch((((x, a), (P, b, Q)), ((y, a), (P, c, R))),
                                      letters=(a, b, c)))
    for b in spec.letters:
        for c in spec.letters:
            if b != c:
                out.append(Branch((((x,), (P, b, Q)), ((y,), (P, c, R))),
                                  letters=((), (b,), (c,))))
        out.append(Branch((((x,), (y, b, Q)),), letters=((), (b,), ())))
        out.append(Branch((((y,), (x, b, Q)),), letters=((), (b,), ())))
    return out


def branch_holds(branch, values, spec):
    """Check ``branch`` under ``values`` (variable -> geodesic word) as words."""
    raw = spec.alphabet

    def ev(w):
        out = []
        for s in w:
            if isinstance(s, tuple) and s[:1] == ("bar",):
                out.extend(raw.involute(values[s[1]]))
            elif isinstance(s, int):
                out.append(s)
            else:
                out.extend(values[s])
        return tuple(out)

    for v in branch.units:
        if not all(spec.is_unit(a) for a in values[v]):
            return False
    for lhs, rhs in branch.equations:
        l, r = ev(lhs), ev(rhs)
        if l != r or not all(spec.compatible(p, q) for p, q in zip(l, l[1:])):
            return False
    return True


def solve_branch(branch, values, spec):
    """Values for the fresh variables making ``branch`` hold, or ``None``.

    Every left-hand side must be known from ``values``; each right-hand
    side is ``V1 letters V2``, so trying every split position suffices.
    """
    raw = spec.alphabet

    def known(w, env):
        out = []
        for s in w:
            if isinstance(s, int):
                out.append(s)
            else:
                out.extend(env[s])
        return tuple(out)

    def unbar(s, word):
        if isinstance(s, tuple) and s[:1] == ("bar",):
            return s[1], raw.involute(word)
        return s, word

    def go(k, env):
        if k == len(branch.equations):
            return env if branch_holds(branch, env, spec) else None
        lhs, rhs = branch.equations[k]
        w = known(lhs, env)
        mid = rhs[1:-1]
        for i in range(len(w) - len(mid) + 1):
            if w[i:i + len(mid)] != mid:
                continue
            env2 = dict(env)
            ok = True
            for s, part in ((rhs[0], w[:i]), (rhs[-1], w[i + len(mid):])):
                v, part = unbar(s, part)
                if env2.setdefault(v, part) != part:
                    ok = False
            if ok:
                found = go(k + 1, env2)
                if found is not None:
                    return found
        return None

    return go(0, dict(values))
