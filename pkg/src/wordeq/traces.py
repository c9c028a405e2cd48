"""Partially commutative words under restricted type relations.

A type relation is a frozenset of pairs ``(x, p)`` of tuples: the factor
``x`` (a letter, a variable, or a pair ``a a~``) commutes with ``p``, which
is a single letter ``c`` (shape I1) or the pair ``c c~`` (shape I2).
Within one relation every right component is built from one distinguished
letter ``c``.
"""

from collections import deque

from .alphabet import MARKER, involute_word


def close_theta(alphabet, pairs):
    """Close a set of ``(x, p)`` pairs under involution."""
    out = set()
    for x, p in pairs:
        x, p = tuple(x), tuple(p)
        out.add((x, p))
        out.add((involute_word(alphabet, x), involute_word(alphabet, p)))
    return frozenset(out)


def theta_partner(theta):
    """Mapping ``x -> p`` (each ``x`` has at most one partner)."""
    return {x: p for x, p in theta}


def validate_theta(alphabet, theta):
    """Return a list of violated conditions (empty when ``theta`` is a type)."""
    problems = []
    part = {}
    for x, p in theta:
        if x == p:
            problems.append("reflexive pair")
        if (p, x) in theta:
            problems.append("not antisymmetric")
        if x in part and part[x] != p:
            problems.append("more than one partner")
        part[x] = p
        if (involute_word(alphabet, x), involute_word(alphabet, p)) not in theta:
            problems.append("not closed under involution")
    rights = {p for _, p in theta}
    singles = {p for p in rights if len(p) == 1}
    doubles = {p for p in rights if len(p) == 2}
    if singles and doubles:
        problems.append("mixed shapes")
    if any(len(p) not in (1, 2) for p in rights):
        problems.append("bad right component")
    if singles:
        letters = {p[0] for p in singles}
        if len(letters) > 2 or (len(letters) == 2 and
                                alphabet.bar(min(letters)) != max(letters)):
            problems.append("more than one distinguished letter")
        for x, p in theta:
            if x[0] in letters:
                problems.append("distinguished letter on the left")
    if doubles:
        if len(doubles) != 1:
            problems.append("more than one distinguished pair")
        (c, cb), = list(doubles)[:1] or [(None, None)]
        if c is not None and alphabet.bar(c) != cb:
            problems.append("right component is not c c~")
        for x, _ in theta:
            ok = (len(x) == 1 and alphabet.is_variable(x[0])) or \
                 (len(x) == 2 and alphabet.bar(x[0]) == x[1])
            if not ok:
                problems.append("left component must be a variable or a pair a a~")
    return sorted(set(problems))


def _tokens(w, theta):
    """Split ``w`` into units: ``('p', p)``, ``('s', p, x)`` or ``('o', letter)``."""
    rights = {p for _, p in theta}
    lefts = theta_partner(theta)
    maxlen = max((len(t) for t in list(rights) + list(lefts)), default=1)
    out = []
    i = 0
    n = len(w)
    while i < n:
        for k in range(min(maxlen, n - i), 0, -1):
            u = tuple(w[i:i + k])
            if u in rights:
                out.append(("p", u, u))
                break
            if u in lefts:
                out.append(("s", lefts[u], u))
                break
        else:
            k = 1
            out.append(("o", None, (w[i],)))
        i += k
    return out


def trace_normal_form(w, theta):
    """Lexicographically least representative of the trace of ``w``."""
    w = tuple(w)
    if not theta:
        return w
    toks = _tokens(w, theta)
    out = []
    i = 0
    while i < len(toks):
        kind, p, u = toks[i]
        if kind == "o":
            out.extend(u)
            i += 1
            continue
        j = i
        count = 0
        seq = []
        while j < len(toks) and toks[j][0] != "o" and toks[j][1] == p:
            if toks[j][0] == "p":
                count += 1
            else:
                seq.append(toks[j][2])
            j += 1
        placed = False
        for s in seq:
            if not placed and p < s:
                out.extend(p * count)
                placed = True
            out.extend(s)
        if not placed:
            out.extend(p * count)
        i = j
    return tuple(out)


def trace_equal(u, v, theta):
    if len(u) != len(v):
        return False
    return trace_normal_form(u, theta) == trace_normal_form(v, theta)


def representatives(w, theta, cap=10000):
    """All words of the trace of ``w`` (breadth-first, at most ``cap``)."""
    w = tuple(w)
    pairs = [(x, p) for x, p in theta]
    seen = {w}
    todo = deque([w])
    while todo and len(seen) < cap:
        v = todo.popleft()
        for x, p in pairs:
            for left, right in ((x, p), (p, x)):
                k = len(left) + len(right)
                for i in range(len(v) - k + 1):
                    if v[i:i + len(left)] == left and v[i + len(left):i + k] == right:
                        u = v[:i] + right + left + v[i + k:]
                        if u not in seen:
                            seen.add(u)
                            todo.append(u)
    return seen


def is_trace_factor(f, W, theta):
    """Does some representative of ``W`` contain a representative of ``f``?"""
    fs = representatives(f, theta)
    for v in representatives(W, theta):
        for u in fs:
            k = len(u)
            if any(v[i:i + k] == u for i in range(len(v) - k + 1)):
                return True
    return False


def segments(W):
    """Maximal marker-free factors of ``W`` (possibly empty)."""
    out = []
    cur = []
    for x in W:
        if x == MARKER:
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    out.append(tuple(cur))
    return out


def well_formed_problems(W, B, X, theta, mu, n, *, kappa, markers, letters, alphabet):
    """List the violated clauses of well-formedness (empty list = well-formed)."""
    problems = []
    monoid = mu.monoid
    if len(W) > kappa * n:
        problems.append("length")
    if sum(1 for x in W if x == MARKER) != markers:
        problems.append("marker count")
    for x in W:
        if x not in B and x not in X:
            problems.append(f"symbol {alphabet.name(x)} outside B and X")
            break
    for x in list(B) + list(X):
        if x == MARKER:
            continue
        if x not in mu or monoid.is_zero(mu[x]):
            problems.append(f"mu({alphabet.name(x)}) is zero")
        if x in B and mu[x] == monoid.one:
            problems.append(f"mu({alphabet.name(x)}) is one")
    segs = segments(W)
    forms = set()
    for s in segs:
        if s and monoid.is_zero(mu.eval(s)):
            problems.append("factor with mu zero")
            break
    for s in segs:
        if s:
            forms.add(trace_normal_form(s, theta))
    for s in segs:
        if s and trace_normal_form(involute_word(alphabet, s), theta) not in forms:
            problems.append("factors not closed under involution")
            break
    singles = {s[0] for s in segs if len(s) == 1}
    for a in letters:
        if a not in singles:
            problems.append(f"no factor #{alphabet.name(a)}#")
            break
    return problems


def is_well_formed(W, B, X, theta, mu, n, **ctx):
    return not well_formed_problems(W, B, X, theta, mu, n, **ctx)
