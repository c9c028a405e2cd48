"""Extended equations, the six arc kinds, and the NFA built from them."""

from collections import deque

from .alphabet import MARKER, involute_word
from .edt0l import EDT0LSystem, EndoNFA, Endomorphism, apply
from .errors import ArcRejected, WordEqError
from .traces import (close_theta, segments, trace_equal, trace_normal_form, validate_theta,
                     well_formed_problems)

KINDS = ("df1", "df2", "df3", "df4", "df5", "df6")


class Vertex:
    """An extended equation ``(W, B, X, theta, mu)``.

    ``W`` is stored as its trace normal form; ``mu`` maps every symbol of
    ``B`` and ``X`` to a monoid element; ``n`` is the length of the initial
    word of the run, which fixes the length budget.
    """

    __slots__ = ("W", "B", "X", "theta", "mu", "n", "_key")

    def __init__(self, W, B, X, theta, mu, n):
        self.theta = frozenset(theta)
        self.W = trace_normal_form(tuple(W), self.theta)
        self.B = frozenset(B)
        self.X = frozenset(X)
        self.mu = dict(mu)
        self.n = n
        self._key = None

    @property
    def key(self):
        if self._key is None:
            mu = tuple((x, self.mu[x]) for x in sorted(self.mu) if x in self.B or x in self.X)
            self._key = (self.W, tuple(sorted(self.B)), tuple(sorted(self.X)),
                         tuple(sorted(self.theta)), mu, self.n)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Vertex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def replace(self, **kw):
        d = dict(W=self.W, B=self.B, X=self.X, theta=self.theta, mu=self.mu, n=self.n)
        d.update(kw)
        return Vertex(**d)

    def text(self, alphabet):
        w = " ".join(alphabet.name(x) for x in self.W)
        th = ", ".join(f"({' '.join(alphabet.name(y) for y in x)}|{' '.join(alphabet.name(y) for y in p)})"
                       for x, p in sorted(self.theta))
        return f"W={w} |B|={len(self.B)} |X|={len(self.X)} theta=[{th}]"


class Arc:
    __slots__ = ("source", "target", "kind", "label")

    def __init__(self, source, target, kind, label):
        self.source = source
        self.target = target
        self.kind = kind
        self.label = label


def is_final(v, alphabet):
    return not v.X and not v.theta and v.W == involute_word(alphabet, v.W)


def symbols_of(W, alphabet):
    return {x for x in W if not alphabet.is_variable(x)}, {x for x in W if alphabet.is_variable(x)}


class Checker:
    """Validates arcs against the side conditions of their kind."""

    def __init__(self, universe):
        self.u = universe
        self.alphabet = universe.alphabet
        self.monoid = universe.monoid

    # -- helpers ----------------------------------------------------------------

    def mu_eval(self, mu, w):
        m = self.monoid
        acc = m.one
        for x in w:
            acc = m.mul(acc, mu[x])
        return acc

    def reject(self, clause, msg=""):
        raise ArcRejected(clause, msg)

    def _morphism_ok(self, h, theta_src, theta_dst):
        """``h`` maps every commutation of ``theta_dst`` to one of ``theta_src``."""
        for x, p in theta_dst:
            hx, hp = apply(h, x), apply(h, p)
            if not trace_equal(hx + hp, hp + hx, theta_src):
                return False
        return True

    def finish(self, source, W, B, X, theta, mu, kind):
        """Common target checks; returns the target vertex."""
        a = self.alphabet
        theta = frozenset(theta)
        problems = validate_theta(a, theta)
        if problems:
            self.reject(f"{kind}: type relation", "; ".join(problems))
        cons, vars_ = symbols_of(W, a)
        if not cons <= set(B):
            self.reject(f"{kind}: letters outside B")
        if vars_ != set(X):
            self.reject(f"{kind}: X must be the variables of W")
        for x, p in theta:
            if self.mu_eval(mu, x + p) != self.mu_eval(mu, p + x):
                self.reject(f"{kind}: mu incompatible with theta")
        for x in B:
            if x != MARKER and a.partner[x] == x:
                self.reject(f"{kind}: self-involuting letter")
        target = Vertex(W, B, X, theta, {x: mu[x] for x in set(B) | set(X)}, source.n)
        problems = well_formed_problems(
            target.W, target.B, target.X, target.theta, _Mor(self.monoid, target.mu), target.n,
            kappa=self.u.kappa, markers=sum(1 for x in source.W if x == MARKER),
            letters=self.u.letters, alphabet=a)
        if problems:
            self.reject(f"{kind}: not well-formed", "; ".join(problems))
        return target

    # -- compression arcs --------------------------------------------------------

    def df1(self, v, c, a_letter, W2, theta2):
        al = self.alphabet
        cb = al.bar(c)
        if c in v.B or cb in v.B or c == cb:
            self.reject("df1: c must be fresh")
        if a_letter not in v.B or a_letter == MARKER:
            self.reject("df1: h(c) must be a letter of B")
        theta2 = frozenset(theta2)
        if not v.theta <= theta2:
            self.reject("df1: theta must grow")
        h = Endomorphism({c: (a_letter,), cb: (al.bar(a_letter),)})
        mu = dict(v.mu)
        mu[c] = v.mu[a_letter]
        mu[cb] = self.monoid.inv(mu[c])
        self._nonunit(mu[c], "df1")
        if not trace_equal(apply(h, W2), v.W, v.theta):
            self.reject("df1: W != h(W')")
        if not self._morphism_ok(h, v.theta, theta2):
            self.reject("df1: h does not respect theta'")
        return self.finish(v, W2, v.B | {c, cb}, v.X, theta2, mu, "df1"), h

    def df2(self, v, c, u, W2):
        al = self.alphabet
        u = tuple(u)
        cb = al.bar(c)
        if not u or MARKER in u or any(al.is_variable(x) for x in u):
            self.reject("df2: h(c) must be a nonempty word over B")
        if not set(u) <= v.B:
            self.reject("df2: h(c) must be a word over B")
        if len(u) > 3 or (len(u) == 3 and not self._three_ok(v, c, u)):
            self.reject("df2: |h(c)| too long")
        if u == (c,):
            self.reject("df2: h(c) = c")
        fresh = c not in v.B
        if fresh and (cb in v.B or c == cb):
            self.reject("df2: bad fresh letter")
        if fresh and v.theta:
            self.reject("df2: fresh letter needs an empty type relation")
        h = Endomorphism({c: u, cb: involute_word(al, u)})
        if c == cb or (not h.respects_involution(al)):
            self.reject("df2: label does not respect the involution")
        mu = dict(v.mu)
        mu[c] = self.mu_eval(v.mu, u)
        mu[cb] = self.monoid.inv(mu[c])
        self._nonunit(mu[c], "df2")
        if not trace_equal(apply(h, W2), v.W, v.theta):
            self.reject("df2: W != h(W')")
        if not self._morphism_ok(h, v.theta, v.theta):
            self.reject("df2: h does not respect theta")
        return self.finish(v, W2, v.B | {c, cb}, v.X, v.theta, mu, "df2"), h

    def _three_ok(self, v, c, u):
        if not self.u.part2:
            return False
        al = self.alphabet
        a, ab, cc = u
        if al.bar(a) != ab:
            return False
        if a == cc:
            return True
        pair, other = (a, ab), (cc, al.bar(cc))
        return (pair, other) in v.theta or (other, pair) in v.theta

    def _nonunit(self, m, kind):
        if self.monoid.is_zero(m):
            self.reject(f"{kind}: mu(c) = 0")
        if m == self.monoid.one:
            self.reject(f"{kind}: mu(c) = 1")

    def df3(self, v, B2):
        B2 = frozenset(B2)
        if not B2 < v.B:
            self.reject("df3: B' must be a proper subset")
        if not self.u.A <= B2:
            self.reject("df3: A must stay")
        return self.finish(v, v.W, B2, v.X, frozenset(), v.mu, "df3"), Endomorphism()

    # -- substitution arcs -------------------------------------------------------

    def df4(self, v, X):
        al = self.alphabet
        if X not in v.X:
            self.reject("df4: not a variable of W")
        if v.mu[X] != self.monoid.one:
            self.reject("df4: mu(X) must be 1")
        Xb = al.bar(X)
        W2 = tuple(x for x in v.W if x not in (X, Xb))
        theta2 = {(x, p) for x, p in v.theta if X not in x and Xb not in x}
        return self.finish(v, W2, v.B, v.X - {X, Xb}, theta2, v.mu, "df4"), Endomorphism()

    def df5(self, v, X, p):
        al = self.alphabet
        p = tuple(p)
        if X not in v.X:
            self.reject("df5: not a variable of W")
        if any(x == (X,) or x == (al.bar(X),) for x, _ in v.theta):
            self.reject("df5: X is already typed")
        if not p or not set(p) <= v.B - {MARKER}:
            self.reject("df5: p must be a nonempty word over B")
        if self.mu_eval(v.mu, (X,) + p) != self.mu_eval(v.mu, p + (X,)):
            self.reject("df5: mu(Xp) != mu(pX)")
        theta2 = set(v.theta) | close_theta(al, [((X,), p)])
        return self.finish(v, v.W, v.B, v.X, theta2, v.mu, "df5"), Endomorphism()

    def df6(self, v, X, p, mu_x):
        al = self.alphabet
        p = tuple(p)
        if X not in v.X:
            self.reject("df6: not a variable of W")
        if not p or not set(p) <= v.B - {MARKER}:
            self.reject("df6: p must be a nonempty word over B")
        typed = [q for x, q in v.theta if x == (X,)]
        if typed and typed != [p]:
            self.reject("df6: theta(X) must be contained in {p}")
        m = self.monoid
        if m.mul(self.mu_eval(v.mu, p), mu_x) != v.mu[X]:
            self.reject("df6: mu(X) != mu(p) mu'(X)")
        Xb = al.bar(X)
        pb = involute_word(al, p)
        W2 = []
        for x in v.W:
            if x == X:
                W2.extend(p + (X,))
            elif x == Xb:
                W2.extend((Xb,) + pb)
            else:
                W2.append(x)
        mu = dict(v.mu)
        mu[X] = mu_x
        mu[Xb] = m.inv(mu_x)
        return self.finish(v, W2, v.B, v.X, v.theta, mu, "df6"), Endomorphism()


class _Mor:
    """Minimal morphism view over a plain dict."""

    def __init__(self, monoid, images):
        self.monoid = monoid
        self.images = images

    def __getitem__(self, x):
        return self.images[x]

    def __contains__(self, x):
        return x in self.images

    def eval(self, w):
        m = self.monoid
        acc = m.one
        for x in w:
            acc = m.mul(acc, self.images[x])
        return acc


def make_arc(checker, kind, source, **data):
    """Validate and build one arc; raises :class:`ArcRejected` on failure."""
    if kind not in KINDS:
        raise WordEqError(f"unknown arc kind {kind!r}")
    target, label = getattr(checker, kind)(source, **data)
    return Arc(source, target, kind, label)


def check_forward(arc, alpha, sigma, alpha2, sigma2, alphabet):
    """``alpha sigma(W) == alpha' sigma'(W')`` in ``A*`` (with ``alpha' = alpha h``)."""
    return expand(arc.source.W, alpha, sigma, alphabet) == expand(arc.target.W, alpha2, sigma2, alphabet)


def expand(W, alpha, sigma, alphabet):
    """``alpha(sigma(W))`` as a word over ``A``."""
    out = []
    for x in W:
        if alphabet.is_variable(x):
            for y in var_value(sigma, x, alphabet):
                out.extend(alpha.get(y, (y,)))
        else:
            out.extend(alpha.get(x, (x,)))
    return tuple(out)


def var_value(sigma, x, alphabet):
    if x in sigma:
        return sigma[x]
    return involute_word(alphabet, sigma[alphabet.bar(x)])


def substitute(W, sigma, alphabet):
    out = []
    for x in W:
        if alphabet.is_variable(x):
            out.extend(var_value(sigma, x, alphabet))
        else:
            out.append(x)
    return tuple(out)


def solves(v, sigma, alphabet):
    """Is ``sigma`` a ``B``-solution of ``v`` (types and palindrome condition)?"""
    s = substitute(v.W, sigma, alphabet)
    th = frozenset((x, p) for x, p in v.theta if not any(alphabet.is_variable(y) for y in x))
    if not trace_equal(s, involute_word(alphabet, s), th):
        return False
    for x, p in v.theta:
        if len(x) == 1 and alphabet.is_variable(x[0]):
            val = var_value(sigma, x[0], alphabet)
            k = len(p)
            if len(val) % k or any(val[i:i + k] != p for i in range(0, len(val), k)):
                return False
    return True


# ---------------------------------------------------------------------------
# canonical forms


def canonicalize_vertex(v, universe, max_rounds=6):
    """Rename the fresh constants of ``v`` to the lowest slots.

    Letters are numbered by first occurrence in the normal form of ``W``;
    since renaming can change the normal form this is iterated. Returns
    ``(vertex, rho)`` where ``rho`` maps old letters to new ones (moved
    letters only).
    """
    a = universe.alphabet
    A = universe.A
    current = v
    total = {x: x for x in v.B if x not in A}
    for _ in range(max_rounds):
        order = []
        seen = set()
        for x in current.W:
            if x not in A and x in current.B and x not in seen:
                seen.update((x, a.bar(x)))
                order.append(x)
        rest = sorted((x for x in current.B if x not in A and x not in seen),
                      key=lambda x: (_theta_rank(current, x, a), repr(current.mu.get(x)), x))
        for x in rest:
            if x not in seen:
                seen.update((x, a.bar(x)))
                order.append(x)
        rho = {}
        for i, x in enumerate(order):
            s, sb = universe.slot(i)
            rho[x], rho[a.bar(x)] = s, sb
        rho = {x: y for x, y in rho.items() if x != y}
        if not rho:
            break
        current = rename_vertex(current, rho)
        total = {x: rho.get(y, y) for x, y in total.items()}
    return current, {x: y for x, y in total.items() if x != y}


def _theta_rank(v, x, alphabet):
    def key(t):
        return (tuple(y for y in t[0] if alphabet.is_variable(y)), len(t[1]))
    for i, (l, p) in enumerate(sorted(v.theta, key=key)):
        if x in l or x in p:
            return i
    return len(v.theta)


def rename_word(w, rho):
    return tuple(rho.get(x, x) for x in w)


def rename_vertex(v, rho):
    theta = frozenset((rename_word(x, rho), rename_word(p, rho)) for x, p in v.theta)
    mu = {rho.get(x, x): m for x, m in v.mu.items()}
    return Vertex(rename_word(v.W, rho), {rho.get(x, x) for x in v.B}, v.X, theta, mu, v.n)


def rename_label(h, rho, B):
    """Label for a target whose letters ``B`` were renamed by ``rho``.

    The new label maps ``rho(y)`` to ``h(y)`` for every ``y`` in ``B``.
    """
    images = {rho.get(y, y): h.images.get(y, (y,)) for y in B}
    return Endomorphism(images, h.extraction)


# ---------------------------------------------------------------------------
# graph and NFA


class Graph:
    """Materialized part of the equation graph."""

    def __init__(self, universe):
        self.universe = universe
        self.index = {}
        self.vertices = []
        self.arcs = set()
        self.initial = set()

    def intern(self, v):
        k = v.key
        i = self.index.get(k)
        if i is None:
            i = len(self.vertices)
            self.index[k] = i
            self.vertices.append(v)
        return i

    def add_arc(self, source, target, label, kind):
        p, q = self.intern(source), self.intern(target)
        self.arcs.add((p, q, label, kind))
        return p, q

    def finals(self):
        a = self.universe.alphabet
        return [i for i, v in enumerate(self.vertices) if is_final(v, a)]


def compute_useful(n, edges, initial, final):
    """Vertices on some path from ``initial`` to ``final``."""
    out = [[] for _ in range(n)]
    inc = [[] for _ in range(n)]
    for p, q in edges:
        out[p].append(q)
        inc[q].append(p)

    def reach(start, nbr):
        seen = set(start)
        todo = deque(start)
        while todo:
            x = todo.popleft()
            for y in nbr[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    fw = reach(initial, out)
    bw = reach(final, inc)
    return [i in fw and i in bw for i in range(n)]


def extraction_label(W, k):
    """``g(#) = u1#...#uk`` for ``W = #u1#u2#...``."""
    segs = segments(W)[1:k + 1]
    if len(segs) < k:
        raise WordEqError("final word has too few factors")
    out = []
    for i, s in enumerate(segs):
        if i:
            out.append(MARKER)
        out.extend(s)
    return Endomorphism({MARKER: tuple(out)}, extraction=True)


def assemble_nfa(graph, k):
    """EndoNFA with one state per useful vertex plus the sink ``#``."""
    a = graph.universe.alphabet
    n = len(graph.vertices)
    finals = graph.finals()
    edges = [(p, q) for p, q, _, _ in graph.arcs]
    useful = compute_useful(n, edges, graph.initial, finals)
    keep = [i for i in range(n) if useful[i]]
    ids = {v: j for j, v in enumerate(keep)}
    nfa = EndoNFA()
    for i in keep:
        nfa.add_state(f"v{i}")
    sink = nfa.add_state("#")
    nfa.final.add(sink)
    nfa.initial |= {ids[i] for i in graph.initial if i in ids}
    seen = set()
    for p, q, h, _ in sorted(graph.arcs, key=lambda t: (t[0], t[1], t[3], repr(t[2].key))):
        if p in ids and q in ids:
            item = (ids[p], ids[q], h.key)
            if item not in seen:
                seen.add(item)
                nfa.add(ids[p], h, ids[q])
    for i in finals:
        if i in ids:
            nfa.add(ids[i], extraction_label(graph.vertices[i].W, k), sink)
    if not keep:
        nfa = EndoNFA(1, names=["#"])
    return EDT0LSystem(a, graph.universe.A, nfa)
