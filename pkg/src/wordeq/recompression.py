"""Witness-guided recompression.

A :class:`Run` walks from an initial vertex to a final one, choosing arcs
with the help of a known solution. The run works with its own letter
names; every arc is validated by the :class:`~wordeq.graph.Checker`, the
forward property is checked on the spot, and the arc is added, in
canonical form, to a shared :class:`~wordeq.graph.Graph`. The union of all
runs is the NFA of the solver.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
import random

from .alphabet import MARKER, involute_word
from .edt0l import Endomorphism, apply as apply_endo
from .errors import BudgetError, WordEqError
from .graph import (Checker, Graph, Vertex, assemble_nfa, canonicalize_vertex, expand, is_final,
                    make_arc, rename_word, solves)
from .reduction import Universe, build_Winit, mu_init, systems_for, winit_variables
from .traces import close_theta, trace_normal_form

DEFAULT_STEPS = 20_000
DEFAULT_ROUNDS = 200
BLOCK_ENTRY, BLOCK_EXIT, BLOCK_PEAK, PAIR_EXIT = 29, 31, 35, 29
EXHAUSTIVE_LETTERS = 12
SAMPLE_CAP = 4096


@dataclass
class ArcRecord:
    kind: str
    label: str
    length: int
    measure: int
    forward: bool
    phase: str


@dataclass
class Round:
    """Measure, pop count and ``|W|`` around one round."""
    before: int
    after: int
    pops: int
    length_before: int
    length_after: int


@dataclass
class RunReport:
    """Bookkeeping of one witness run (trace output and the tests)."""
    records: list = field(default_factory=list)
    checkpoints: list = field(default_factory=list)
    rounds: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    partitions: list = field(default_factory=list)


class Token:
    """A visible letter (``var is None``) or a variable occurrence with its value."""

    __slots__ = ("letter", "var", "content")

    def __init__(self, letter=None, var=None, content=None):
        self.letter = letter
        self.var = var
        self.content = content


def _flatten(toks):
    """Positions ``(token, offset)`` of the solution word; offset ``None`` = visible."""
    out = []
    for ti, t in enumerate(toks):
        if t.var is None:
            out.append((ti, None))
        else:
            out.extend((ti, ci) for ci in range(len(t.content)))
    return out


def _get(toks, pos):
    ti, ci = pos
    return toks[ti].letter if ci is None else toks[ti].content[ci]


def _runs(toks, flat, letters):
    """Maximal runs of consecutive positions whose letters lie in ``letters``."""
    out, cur = [], []
    for pos in flat:
        if _get(toks, pos) in letters:
            cur.append(pos)
        elif cur:
            out.append(cur)
            cur = []
    if cur:
        out.append(cur)
    return out


def _pair_blocks(toks, flat, units):
    """Maximal sequences of consecutive two-letter units from ``units``.

    Returns lists of units, each unit being a pair of positions.
    """
    out, cur = [], []
    i = 0
    while i < len(flat):
        if i + 1 < len(flat) and (_get(toks, flat[i]), _get(toks, flat[i + 1])) in units:
            cur.append((flat[i], flat[i + 1]))
            i += 2
            continue
        if cur:
            out.append(cur)
            cur = []
        i += 1
    if cur:
        out.append(cur)
    return out


def _insert(toks, inserts):
    """Insert visible letters; ``inserts`` maps ``i`` (after token i) or ``i - 0.5`` (before)."""
    out = []
    for ti, t in enumerate(toks):
        out.extend(Token(letter=m) for m in inserts.get(ti - 0.5, ()))
        if t.var is not None or t.letter is not None:
            out.append(t)
        out.extend(Token(letter=m) for m in inserts.get(ti, ()))
    return out


def _owner(pos):
    return "visible" if pos[1] is None else pos[0]


def _subst(w, beta):
    out = []
    for x in w:
        out.extend(beta.get(x, (x,)))
    return tuple(out)


def _prefix_len(w, letter):
    k = 0
    while k < len(w) and w[k] == letter:
        k += 1
    return k


def compressed_length(alphabet, u, left, part2=False):
    """Length of ``u`` after compressing every factor in ``LR``.

    ``left`` is the set ``L``; pairs ``a a~`` are never compressed.
    """
    pairs = 0
    i = 0
    while i + 1 < len(u):
        x, y = u[i], u[i + 1]
        if x in left and y not in left and y != alphabet.bar(x):
            pairs += 1
            i += 2
        else:
            i += 1
    return len(u) - pairs


def expected_compressed_length(alphabet, u, part2=False):
    """Exact mean of :func:`compressed_length` over all partitions of the letters of ``u``."""
    pos = alphabet.positive(u)
    total = Fraction(0)
    count = 0
    for bits in cartesian((0, 1), repeat=len(pos)):
        left = set()
        for p, bit in zip(pos, bits):
            left.add(p if bit else alphabet.bar(p))
        total += compressed_length(alphabet, u, left, part2)
        count += 1
    return total / count


class Run:
    """State ``(vertex, alpha, sigma)`` of one witness-guided walk."""

    def __init__(self, universe, graph, vertex, sigma, steps=DEFAULT_STEPS, seed=0,
                 rounds=DEFAULT_ROUNDS):
        self.u = universe
        self.a = universe.alphabet
        self.graph = graph
        self.checker = Checker(universe)
        self.v = vertex
        self.alpha = {}
        a = self.a
        self.sigma = {}
        for x, w in sigma.items():
            p = min(x, a.bar(x))
            if p in vertex.X:
                self.sigma[p] = tuple(w) if x == p else involute_word(a, tuple(w))
        self.steps = steps
        self.max_rounds = rounds
        self.rng = random.Random(seed)
        self.report = RunReport()
        self.phase = "init"
        self.labels = []
        self.path = []
        self.F = expand(vertex.W, self.alpha, self.sigma, a)
        self.canon, self.rho = canonicalize_vertex(vertex, universe)
        self.start = graph.intern(self.canon)
        graph.initial.add(self.start)
        self._check_structure(vertex)

    # -- values ----------------------------------------------------------------

    def val(self, x, sigma=None):
        sigma = self.sigma if sigma is None else sigma
        if x in sigma:
            return sigma[x]
        return involute_word(self.a, sigma[self.a.bar(x)])

    def positive_vars(self):
        return sorted({min(x, self.a.bar(x)) for x in self.v.X})

    def all_vars(self):
        return sorted(self.v.X)

    def measure(self):
        return sum(len(expand((x,), self.alpha, self.sigma, self.a)) for x in self.positive_vars())

    def mu_word(self, w):
        return self.checker.mu_eval(self.v.mu, w)

    def fresh(self):
        """The lowest slot pair not used in ``B``."""
        i = 0
        while True:
            c, cb = self.u.slot(i)
            if c not in self.v.B and cb not in self.v.B:
                break
            i += 1
        if len(self.v.B) + 2 > self.u.kappa * self.v.n:
            raise WordEqError("alphabet budget exceeded")
        return c

    def _set(self, sigma, x, w):
        if x < self.a.bar(x):
            sigma[x] = tuple(w)
        else:
            sigma[self.a.bar(x)] = involute_word(self.a, tuple(w))

    def type_of(self, x):
        for l, p in self.v.theta:
            if l == (x,):
                return p
        return None

    # -- arcs --------------------------------------------------------------------

    def apply(self, kind, sigma2=None, **data):
        """Follow one arc; ``sigma2`` is the new witness (defaults to the old one)."""
        self.steps -= 1
        if self.steps < 0:
            raise BudgetError("step budget exceeded")
        arc = make_arc(self.checker, kind, self.v, **data)
        t, h = arc.target, arc.label
        alpha2 = dict(self.alpha)
        sigma2 = dict(self.sigma if sigma2 is None else sigma2)
        if kind in ("df1", "df2"):
            for c, w in h.images.items():
                alpha2[c] = expand(w, self.alpha, {}, self.a)
        elif kind == "df3":
            beta = {b: alpha2.get(b, (b,)) for b in self.v.B - t.B}
            sigma2 = {x: _subst(w, beta) for x, w in sigma2.items()}
            alpha2 = {b: w for b, w in alpha2.items() if b in t.B}
        sigma2 = {x: w for x, w in sigma2.items() if x in t.X}
        self._check_witness(t, alpha2, sigma2, kind)
        forward = expand(t.W, alpha2, sigma2, self.a) == self.F
        canon, rho = canonicalize_vertex(t, self.u)
        images = {rho.get(y, y): rename_word(h.images.get(y, (y,)), self.rho) for y in t.B}
        label = Endomorphism(images)
        p, q = self.graph.add_arc(self.canon, canon, label, kind)
        self.path.append((p, label, q))
        self.labels.append(h)
        self.v, self.alpha, self.sigma = t, alpha2, sigma2
        self.canon, self.rho = canon, rho
        rec = ArcRecord(kind, h.text(self.a), len(t.W), self.measure(), forward, self.phase)
        self.report.records.append(rec)
        if not forward:
            self.report.violations.append(f"forward property fails at {kind}")
            raise WordEqError(f"forward property violated by {kind}")
        self._check_structure(t)
        return t

    def _check_witness(self, t, alpha2, sigma2, kind):
        if not solves(t, sigma2, self.a):
            raise WordEqError(f"witness does not solve the target of {kind}")
        for x in t.X:
            w = self.val(x, sigma2)
            if self.checker.mu_eval(t.mu, w) != t.mu[x]:
                raise WordEqError(f"mu(sigma(X)) != mu(X) after {kind}")
            if any(y not in t.B for y in w):
                raise WordEqError(f"witness uses letters outside B after {kind}")
        for b in t.B - self.v.B:
            if self.u.mu_of(alpha2[b]) != t.mu[b]:
                raise WordEqError(f"mu0(alpha) != mu after {kind}")

    def _check_structure(self, v):
        a = self.a
        if len(v.W) > self.u.kappa * v.n:
            self.report.violations.append(f"|W| = {len(v.W)} > kappa n")
        for x in v.B:
            if x != MARKER and a.partner[x] == x:
                self.report.violations.append("self-involuting letter")

    def record_checkpoint(self, name, bound):
        size = len(self.v.W)
        self.report.checkpoints.append((name, size, bound * self.v.n))
        if size > bound * self.v.n:
            self.report.violations.append(f"{name}: |W| = {size} > {bound}n")

    # -- annotated solution word ---------------------------------------------

    def tokens(self):
        out = []
        for x in self.v.W:
            if self.a.is_variable(x):
                out.append(Token(var=x, content=list(self.val(x))))
            else:
                out.append(Token(letter=x))
        return out

    def rebuild(self, toks, theta=None):
        """``(W', sigma')`` from edited tokens; occurrences must agree as traces."""
        a = self.a
        theta = self.v.theta if theta is None else theta
        theta_c = frozenset((x, p) for x, p in theta if not any(a.is_variable(y) for y in x))
        W, sigma = [], {}
        for t in toks:
            if t.var is None:
                W.append(t.letter)
                continue
            W.append(t.var)
            x = min(t.var, a.bar(t.var))
            w = tuple(t.content) if t.var == x else involute_word(a, tuple(t.content))
            if x in sigma:
                if trace_normal_form(sigma[x], theta_c) != trace_normal_form(w, theta_c):
                    raise WordEqError(f"occurrences of {a.name(x)} disagree")
            else:
                sigma[x] = w
        return tuple(W), sigma

    @staticmethod
    def edit(toks, positions, letter):
        for ti, ci in positions:
            if ci is None:
                toks[ti].letter = letter
            else:
                toks[ti].content[ci] = letter

    @staticmethod
    def delete_marked(toks, positions):
        """Like :meth:`delete` but keeps token indices (deleted letters become ``None``)."""
        dead = set(positions)
        for ti, t in enumerate(toks):
            if t.var is None:
                if (ti, None) in dead:
                    t.letter = None
            else:
                t.content = [y for ci, y in enumerate(t.content) if (ti, ci) not in dead]
        return toks

    @staticmethod
    def delete(toks, positions):
        dead = set(positions)
        for ti, t in enumerate(toks):
            if t.var is None:
                if (ti, None) in dead:
                    t.letter = None
            else:
                t.content = [y for ci, y in enumerate(t.content) if (ti, ci) not in dead]
        return [t for t in toks if t.var is not None or t.letter is not None]

    # -- substitution helpers ------------------------------------------------

    def pop(self, x, p):
        """``X -> pX`` where ``p`` is a prefix of ``sigma(X)``."""
        p = tuple(p)
        w = self.val(x)
        if w[:len(p)] != p:
            raise WordEqError("pop: p is not a prefix")
        rest = w[len(p):]
        sigma2 = dict(self.sigma)
        self._set(sigma2, x, rest)
        self.apply("df6", sigma2, X=x, p=p, mu_x=self.mu_word(rest))

    def drop(self, x):
        p = min(x, self.a.bar(x))
        self.apply("df4", {k: w for k, w in self.sigma.items() if k != p}, X=p)

    def drop_empty(self):
        for x in self.positive_vars():
            if x in self.v.X and not self.val(x):
                self.drop(x)

    def remove_short(self, t):
        """Pop and erase every variable with ``|sigma(X)| <= t``."""
        for x in self.positive_vars():
            if x not in self.v.X or len(self.val(x)) > t:
                continue
            p = self.type_of(x)
            while self.val(x):
                self.pop(x, p if p is not None else self.val(x)[:1])
            self.drop(x)

    def pop_first_letters(self):
        """``X -> bX`` for every variable (bars included), then erase empty ones."""
        for x in self.all_vars():
            if x in self.v.X and self.val(x):
                self.pop(x, self.val(x)[:1])
        self.drop_empty()

    def reduce_alphabet(self):
        """Alphabet reduction to ``A`` plus the letters of ``W``."""
        keep = frozenset(self.u.A) | {x for x in self.v.W if not self.a.is_variable(x)}
        if keep != self.v.B:
            self.apply("df3", B2=keep)

    # -- block compression -----------------------------------------------------

    def block_compression(self):
        """Compress every maximal block ``b^l`` (``l >= 2``) with a visible position."""
        self.phase = "block"
        self.record_checkpoint("block entry", BLOCK_ENTRY)
        self.remove_short(2)
        self.pop_first_letters()
        self.record_checkpoint("block step 1", BLOCK_EXIT)
        for b in self.a.positive(x for x in self.v.B if x != MARKER):
            if b in self.v.B:
                self.compress_letter_blocks(b)
        self.phase = "block"
        self.reduce_alphabet()
        self.record_checkpoint("block exit", BLOCK_EXIT)
        for x, y in zip(self.v.W, self.v.W[1:]):
            if x == y and x != MARKER and not self.a.is_variable(x):
                self.report.violations.append("square after block compression")

    def crossing_vars(self, b):
        """``X_b``: ``sigma(X)`` starts with ``b`` and every occurrence is preceded by ``b``."""
        out = []
        W = self.v.W
        for x in self.all_vars():
            if self.val(x)[:1] != (b,):
                continue
            occ = [i for i, y in enumerate(W) if y == x]
            if occ and all(i > 0 and W[i - 1] == b for i in occ):
                out.append(x)
        return out

    def block_lengths(self, b):
        toks = self.tokens()
        flat = _flatten(toks)
        lam = set()
        for letter in (b, self.a.bar(b)):
            for r in _runs(toks, flat, {letter}):
                if len(r) >= 2 and any(ci is None for _, ci in r):
                    lam.add(len(r))
        return lam

    def compress_letter_blocks(self, b):
        a = self.a
        bb = a.bar(b)
        lam = self.block_lengths(b)
        if not lam:
            return
        crossing = {b: self.crossing_vars(b), bb: self.crossing_vars(bb)}
        c = self.fresh()
        cb = a.bar(c)
        toks = self.tokens()
        flat = _flatten(toks)
        for letter, new in ((b, c), (bb, cb)):
            for r in _runs(toks, flat, {letter}):
                if len(r) in lam:
                    self.edit(toks, r, new)
        W2, sigma2 = self.rebuild(toks)
        self.apply("df1", sigma2, c=c, a_letter=b, W2=W2, theta2=self.v.theta)
        cross = set(crossing[b]) | {a.bar(x) for x in crossing[bb]}
        for x in self.positive_vars():
            w = self.val(x)
            if w and set(w) == {c} and x in cross:
                self.apply("df5", X=x, p=(c,))
            elif w and set(w) == {cb} and a.bar(x) in cross:
                self.apply("df5", X=x, p=(cb,))
        marks = []
        for l in sorted(lam):
            marks.append(self.mark_blocks(c, l, marks))
        self.record_checkpoint("block marks", BLOCK_PEAK)
        cx = {c: crossing[b], cb: crossing[bb]}
        self.phase = "block-loop"
        while self._letter_left(c):
            for letter in (c, cb):
                for x in cx[letter]:
                    if x in self.v.X and _prefix_len(self.val(x), letter) % 2:
                        self.pop(x, (letter,))
            for m in marks:
                if self._block_count(c, m, marks) % 2:
                    self.absorb(c, m, marks)
            self.halve(c, marks)
            self.drop_empty()
            self.record_checkpoint("block loop", BLOCK_PEAK)
        self.phase = "block"
        self.apply("df3", B2=self.v.B - {c, cb})

    def mark_blocks(self, c, l, marks):
        """Replace one ``c`` of every unmarked block of length ``l`` by a fresh ``c_l``."""
        a = self.a
        cb = a.bar(c)
        old = set(marks) | {a.bar(m) for m in marks}
        toks = self.tokens()
        flat = _flatten(toks)
        cl = self.fresh()
        inserts, dead = {}, []
        for letter, new, last in ((c, cl, False), (cb, a.bar(cl), True)):
            for r in _runs(toks, flat, {letter} | old):
                if len(r) != l or any(_get(toks, p) in old for p in r):
                    continue
                vis = [p for p in r if p[1] is None]
                if not vis:
                    self.edit(toks, [r[-1] if last else r[0]], new)
                    continue
                # marks do not commute with typed variables: put the mark at the
                # outer end of the visible part so the mirror block agrees
                inside = set(r)
                middle = [ti for ti in sorted({ti for ti, _ in r})
                          if toks[ti].var is None or
                          all((ti, ci) in inside for ci in range(len(toks[ti].content)))]
                dead.append(vis[0])
                if last:
                    inserts.setdefault(middle[-1], []).append(new)
                else:
                    inserts.setdefault(middle[0] - 0.5, []).append(new)
        toks = _insert(self.delete_marked(toks, dead), inserts)
        theta2 = self.v.theta | close_theta(a, [((cl,), (c,))])
        W2, sigma2 = self.rebuild(toks, theta2)
        self.apply("df1", sigma2, c=cl, a_letter=c, W2=W2, theta2=theta2)
        return cl

    def _letter_left(self, c):
        cb = self.a.bar(c)
        if any(self.a.is_variable(l[0]) for l, _ in self.v.theta):
            return True
        if c in self.v.W or cb in self.v.W:
            return True
        return any(c in w or cb in w for w in self.sigma.values())

    def _mark_runs(self, c, marks):
        a = self.a
        toks = self.tokens()
        flat = _flatten(toks)
        letters = {c, a.bar(c)} | set(marks) | {a.bar(m) for m in marks}
        return toks, [r for r in _runs(toks, flat, letters)]

    def _block_count(self, c, m, marks):
        toks, runs = self._mark_runs(c, marks)
        for r in runs:
            letters = [_get(toks, p) for p in r]
            if m in letters:
                return sum(1 for y in letters if y == c)
        return 0

    def absorb(self, c, m, marks):
        """``h(c_l) = c c_l``: one ``c`` of each block marked ``c_l`` joins the mark."""
        a = self.a
        toks, runs = self._mark_runs(c, marks)
        dead = []
        for r in runs:
            letters = [_get(toks, p) for p in r]
            for mark, letter in ((m, c), (a.bar(m), a.bar(c))):
                if mark not in letters:
                    continue
                owner = _owner(r[letters.index(mark)])
                cand = [p for p, y in zip(r, letters) if y == letter and _owner(p) == owner]
                if not cand:
                    raise WordEqError("absorb: no c next to the mark")
                dead.append(cand[0])
        W2, sigma2 = self.rebuild(self.delete(toks, dead))
        self.apply("df2", sigma2, c=m, u=(c, m), W2=W2)

    def halve(self, c, marks):
        """``h(c) = cc`` on every block."""
        a = self.a
        toks, runs = self._mark_runs(c, marks)
        dead = []
        for r in runs:
            for letter in (c, a.bar(c)):
                groups = {}
                for p in r:
                    if _get(toks, p) == letter:
                        groups.setdefault(_owner(p), []).append(p)
                for ps in groups.values():
                    if len(ps) % 2:
                        raise WordEqError("halve: odd block part")
                    dead.extend(ps[1::2])
        if not dead:
            return
        W2, sigma2 = self.rebuild(self.delete(toks, dead))
        self.apply("df2", sigma2, c=c, u=(c, c), W2=W2)

    # -- non-standard block compression --------------------------------------

    def nonstandard_block_compression(self):
        """Replace every maximal ``(a a~)^l`` with a visible position by ``c_l c_l~``."""
        self.phase = "nonstandard"
        self.remove_short(10)
        if is_final(self.v, self.a):
            return
        self.pop_first_letters()
        for x in self.a.positive(y for y in self.v.B if y != MARKER):
            if x in self.v.B:
                self.compress_pair_blocks(x)
        self.phase = "nonstandard"
        self.reduce_alphabet()
        W = self.v.W
        for i in range(len(W) - 2):
            x = W[i]
            if not self.a.is_variable(x) and x != MARKER and W[i + 1] == self.a.bar(x) and W[i + 2] == x:
                self.report.violations.append("factor a a~ a after non-standard block compression")

    def _aa_blocks(self, a_letter, toks=None):
        a = self.a
        toks = self.tokens() if toks is None else toks
        flat = _flatten(toks)
        return toks, _pair_blocks(toks, flat, {(a_letter, a.bar(a_letter))})

    def uncross_pair_blocks(self, a_letter):
        """Pop until no maximal ``(a a~)^l`` crosses a variable boundary."""
        while True:
            toks, blocks = self._aa_blocks(a_letter)
            todo = {}
            for blk in blocks:
                owners = {_owner(p) for u in blk for p in u}
                if len(owners) < 2:
                    continue
                for u in blk:
                    for p in u:
                        if p[1] is None:
                            continue
                        t = toks[p[0]]
                        n = len(t.content)
                        pre = p[1] + 1
                        suf = n - p[1]
                        if pre <= suf:
                            todo[t.var] = max(todo.get(t.var, 0), pre)
                        else:
                            xb = self.a.bar(t.var)
                            todo[xb] = max(todo.get(xb, 0), suf)
            if not todo:
                return
            for x in sorted(todo):
                if x in self.v.X and self.val(x):
                    self.pop(x, self.val(x)[:min(todo[x], len(self.val(x)))])
            self.drop_empty()

    def compress_pair_blocks(self, a_letter):
        a = self.a
        toks, blocks = self._aa_blocks(a_letter)
        lam = {len(blk) for blk in blocks if any(p[1] is None for u in blk for p in u)}
        if not lam:
            return
        self.uncross_pair_blocks(a_letter)
        toks, blocks = self._aa_blocks(a_letter)
        lam = {len(blk) for blk in blocks if any(p[1] is None for u in blk for p in u)}
        if not lam:
            return
        c = self.fresh()
        cb = a.bar(c)
        for blk in blocks:
            if len(blk) in lam:
                for p, q in blk:
                    self.edit(toks, [p], c)
                    self.edit(toks, [q], cb)
        W2, sigma2 = self.rebuild(toks)
        self.apply("df1", sigma2, c=c, a_letter=a_letter, W2=W2, theta2=self.v.theta)
        marks = []
        while True:
            toks, blocks = self._unit_blocks(c, marks)
            if not any(y in (c, cb) for _, y in self._letters(toks)):
                break
            self._mark_odd(c, marks)
            self._absorb_pairs(c, marks)
            self._halve_pairs(c, marks)
            self.remove_short(10)
            self.uncross_pair_blocks(c)
        self.apply("df3", B2=self.v.B - {c, cb})

    def _letters(self, toks):
        for pos in _flatten(toks):
            yield pos, _get(toks, pos)

    def _unit_blocks(self, c, marks):
        a = self.a
        units = {(c, a.bar(c))} | {(m, a.bar(m)) for m in marks}
        toks = self.tokens()
        return toks, _pair_blocks(toks, _flatten(toks), units)

    @staticmethod
    def _block_info(toks, blk, c):
        marks = [_get(toks, u[0]) for u in blk if _get(toks, u[0]) != c]
        return len(blk) - len(marks), marks

    def _mark_odd(self, c, marks):
        """Unmarked blocks of odd length ``l`` become ``c_l c_l~ (c c~)^(l-1)``."""
        a = self.a
        while True:
            toks, blocks = self._unit_blocks(c, marks)
            odd = set()
            for blk in blocks:
                count, ms = self._block_info(toks, blk, c)
                if not ms and count % 2:
                    odd.add(count)
            if not odd:
                return
            l = max(odd)
            m = self.fresh()
            theta2 = self.v.theta | close_theta(a, [((m, a.bar(m)), (c, a.bar(c)))])
            for blk in blocks:
                count, ms = self._block_info(toks, blk, c)
                if ms or count != l:
                    continue
                vis = [u for u in blk if u[0][1] is None and u[1][1] is None]
                p, q = (vis or blk)[0]
                self.edit(toks, [p], m)
                self.edit(toks, [q], a.bar(m))
            W2, sigma2 = self.rebuild(toks, theta2)
            self.apply("df1", sigma2, c=m, a_letter=c, W2=W2, theta2=theta2)
            marks.append(m)

    def _absorb_pairs(self, c, marks):
        """``h(m) = c c~ m`` for marks sitting in blocks with ``2 mod 4`` units ``c c~``."""
        while True:
            toks, blocks = self._unit_blocks(c, marks)
            todo = {}
            for blk in blocks:
                count, ms = self._block_info(toks, blk, c)
                if ms and count % 4 == 2:
                    todo.setdefault(ms[0], count)
            if not todo:
                return
            m = max(todo, key=lambda k: (todo[k], k))
            dead = []
            for blk in blocks:
                count, ms = self._block_info(toks, blk, c)
                if ms != [m]:
                    continue
                owner = _owner([u for u in blk if _get(toks, u[0]) == m][0][0])
                cand = [u for u in blk if _get(toks, u[0]) == c and _owner(u[0]) == owner]
                # h(m m~) = c c~ m m~ c c~, and m m~ commutes with c c~
                for u in cand[:2]:
                    dead.extend(u)
            W2, sigma2 = self.rebuild(self.delete(toks, dead))
            self.apply("df2", sigma2, c=m, u=(c, self.a.bar(c), m), W2=W2)

    def _halve_pairs(self, c, marks):
        """``h(c) = c c~``: every ``(c c~)^(2k)`` becomes ``(c c~)^k``."""
        toks, blocks = self._unit_blocks(c, marks)
        dead = []
        for blk in blocks:
            groups = {}
            for u in blk:
                if _get(toks, u[0]) == c:
                    groups.setdefault(_owner(u[0]), []).append(u)
            for us in groups.values():
                if len(us) % 2:
                    raise WordEqError("halve: odd (c c~) block")
                for u in us[1::2]:
                    dead.extend(u)
        if not dead:
            return
        W2, sigma2 = self.rebuild(self.delete(toks, dead))
        self.apply("df2", sigma2, c=c, u=(c, self.a.bar(c)), W2=W2)

    # -- pair compression ----------------------------------------------------

    def visible_pairs(self):
        """Counts of adjacent constant pairs of ``W`` (marker excluded)."""
        a = self.a
        counts = {}
        for x, y in zip(self.v.W, self.v.W[1:]):
            if x == MARKER or y == MARKER or a.is_variable(x) or a.is_variable(y):
                continue
            if y == a.bar(x):
                continue
            counts[(x, y)] = counts.get((x, y), 0) + 1
        return counts

    def choose_partition(self):
        """The set ``L`` of a partition ``B = L u R`` with many compressible pairs."""
        a = self.a
        counts = self.visible_pairs()
        positive = a.positive(x for x in self.v.B if x != MARKER)
        relevant = a.positive({x for pair in counts for x in pair})

        def left_of(bits, letters):
            return {p if bit else a.bar(p) for p, bit in zip(letters, bits)}

        def score(left):
            return sum(k for (x, y), k in counts.items() if x in left and y not in left)

        bound = PAIR_EXIT * self.v.n
        if len(relevant) <= EXHAUSTIVE_LETTERS:
            best, best_score = None, -1
            for bits in cartesian((1, 0), repeat=len(relevant)):
                left = left_of(bits, relevant)
                s = score(left)
                if s > best_score:
                    best, best_score = left, s
            mode = "exhaustive"
        else:
            for _ in range(SAMPLE_CAP):
                left = left_of([self.rng.random() < 0.5 for _ in relevant], relevant)
                best_score = score(left)
                best = left
                if len(self.v.W) + 2 * len(self.v.X) - best_score <= bound:
                    break
            else:
                raise WordEqError("no partition meets the length threshold")
            mode = "sampled"
        others = [p for p in positive if p not in relevant]
        best = set(best) | set(others)
        self.report.partitions.append((mode, sorted(best), best_score))
        return best

    def pair_compression(self):
        a = self.a
        self.phase = "pair"
        self.drop_empty()
        left = self.choose_partition()
        for x in self.all_vars():
            if x in self.v.X and self.val(x) and self.val(x)[0] not in left:
                self.pop(x, self.val(x)[:1])
        self.drop_empty()
        done = set()
        orig = set(self.v.B)
        while True:
            toks = self.tokens()
            flat = _flatten(toks)
            pairs = {}
            for p, q in zip(flat, flat[1:]):
                x, y = _get(toks, p), _get(toks, q)
                if x in left and y not in left and y != a.bar(x) and MARKER not in (x, y) \
                        and x in orig and y in orig:
                    if _owner(p) != _owner(q):
                        raise WordEqError("crossing pair after uncrossing")
                    key = min((x, y), (a.bar(y), a.bar(x)))
                    if key in done:
                        continue
                    vis = p[1] is None
                    pairs[key] = pairs.get(key, False) or vis
            todo = sorted(k for k, vis in pairs.items() if vis)
            if not todo:
                break
            x, y = todo[0]
            done.add((x, y))
            c = self.fresh()
            mirror = (a.bar(y), a.bar(x))
            new = []
            dead = []
            i = 0
            while i < len(flat):
                if i + 1 < len(flat):
                    pq = (_get(toks, flat[i]), _get(toks, flat[i + 1]))
                    if pq == (x, y) or pq == mirror:
                        new.append((flat[i], c if pq == (x, y) else a.bar(c)))
                        dead.append(flat[i + 1])
                        i += 2
                        continue
                i += 1
            for pos, letter in new:
                self.edit(toks, [pos], letter)
            W2, sigma2 = self.rebuild(self.delete(toks, dead))
            self.apply("df2", sigma2, c=c, u=(x, y), W2=W2)
        self.reduce_alphabet()
        self.record_checkpoint("pair exit", PAIR_EXIT)

    # -- driver ---------------------------------------------------------------

    def solve(self):
        """Rounds of block, non-standard block and pair compression until final."""
        rounds = 0
        while not is_final(self.v, self.a):
            rounds += 1
            if rounds > self.max_rounds:
                raise BudgetError("round budget exceeded")
            start = Round(self.measure(), 0, 0, len(self.v.W), 0)
            first = len(self.report.records)
            self.block_compression()
            if not is_final(self.v, self.a):
                if self.u.part2:
                    self.nonstandard_block_compression()
                if not is_final(self.v, self.a):
                    self.pair_compression()
            start.after, start.length_after = self.measure(), len(self.v.W)
            start.pops = sum(r.kind == "df6" for r in self.report.records[first:])
            self.report.rounds.append(start)
        return self

    def extracted(self, k):
        """``h1...ht(g(#))`` along this run's own labels: the solution tuple it certifies."""
        from .graph import extraction_label
        w = extraction_label(self.v.W, k).images[MARKER]
        for h in reversed(self.labels):
            w = apply_endo(h, w)
        return tuple(_split_marker(w))


def _split_marker(w):
    out, cur = [], []
    for x in w:
        if x == MARKER:
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    out.append(tuple(cur))
    return out


# ---------------------------------------------------------------------------
# initial vertices and the solver


def initial_vertex(universe, system):
    W = build_Winit(universe, system)
    X = winit_variables(universe, W)
    mu = mu_init(universe, W, system.sigma)
    return Vertex(W, universe.A, X, frozenset(), mu, len(W))


@dataclass
class SolveResult:
    universe: object
    graph: object
    system: object
    runs: list
    witnesses: list
    incomplete: bool = False
    errors: list = field(default_factory=list)

    @property
    def violations(self):
        return [v for r in self.runs for v in r.report.violations]


def solve_witness(universe, graph, system, steps=DEFAULT_STEPS, seed=0):
    """One run from the initial vertex of ``system`` guided by its witness."""
    v = initial_vertex(universe, system)
    run = Run(universe, graph, v, system.sigma, steps=steps, seed=seed)
    return run.solve()


def solve_all(problem, max_len=6, kappa=100, seed=0, steps=DEFAULT_STEPS, oracle_budget=None,
              witnesses=None, all_branches=False):
    """Union of witness runs for every oracle solution of length <= ``max_len``."""
    from .oracle import DEFAULT_BUDGET, solve_bruteforce
    universe = Universe(problem, kappa)
    graph = Graph(universe)
    incomplete = False
    if witnesses is None:
        variables = list(problem.variables)
        try:
            tuples = solve_bruteforce(problem, max_len, variables=variables, target=variables,
                                      budget=oracle_budget or DEFAULT_BUDGET)
        except BudgetError:
            tuples, incomplete = set(), True
        witnesses = [dict(zip(variables, t)) for t in sorted(tuples)]
    runs, errors = [], []
    for i, sigma0 in enumerate(witnesses):
        systems = systems_for(universe, sigma0)
        for system in systems if all_branches else systems[:1]:
            try:
                runs.append(solve_witness(universe, graph, system, steps=steps, seed=seed + i))
            except BudgetError as e:
                incomplete = True
                errors.append(str(e))
    return SolveResult(universe, graph, None, runs, witnesses, incomplete, errors)


def nfa_of(result):
    return assemble_nfa(result.graph, len(result.universe.problem.target))


def enumerate_solutions(result, max_len, budget=None):
    """Decoded solution tuples of the NFA with every component of length <= ``max_len``."""
    from .edt0l import DEFAULT_ENUM_BUDGET, enumerate_language
    u = result.universe
    k = len(u.problem.target)
    system = nfa_of(result)
    hats = set(u.codec.base) if u.codec else set()
    words = enumerate_language(system, max_len, budget or DEFAULT_ENUM_BUDGET, separator=MARKER,
                               weight=lambda x: 0 if x in hats else 1)
    out = set()
    for w in words:
        parts = tuple(u.decode(p) for p in _split_marker(w))
        if len(parts) == k and all(len(p) <= max_len for p in parts):
            out.add(parts)
    return out
