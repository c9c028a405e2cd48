"""EDT0L systems given by an NFA whose transitions carry endomorphisms.

A path ``q0 -h1-> q1 ... -ht-> qt`` with ``qt`` accepting denotes the
endomorphism ``h1 h2 ... ht`` (rightmost applied first) and contributes
``h1(h2(...ht(seed)...))`` to the language.
"""

from collections import deque

from .alphabet import Alphabet, MARKER
from .errors import BudgetError, ParseError, WordEqError

DEFAULT_ENUM_BUDGET = 2_000_000


class Endomorphism:
    """Letter-to-word map, identity on unmapped letters.

    ``extraction`` marks labels that need not respect the involution.
    """

    __slots__ = ("images", "extraction", "_key")

    def __init__(self, images=None, extraction=False):
        self.images = {c: tuple(w) for c, w in (images or {}).items() if tuple(w) != (c,)}
        self.extraction = extraction
        self._key = None

    @property
    def key(self):
        if self._key is None:
            self._key = (self.extraction, tuple(sorted(self.images.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Endomorphism({self.images!r})"

    def __call__(self, w):
        return apply(self, w)

    def is_identity(self):
        return not self.images

    def respects_involution(self, alphabet):
        for c, w in self.images.items():
            if self.images.get(alphabet.bar(c), (alphabet.bar(c),)) != alphabet.involute(w):
                return False
        return True

    def text(self, alphabet):
        if not self.images:
            return "id"
        parts = []
        for c, w in sorted(self.images.items()):
            parts.append(f"{alphabet.name(c)}->" + ",".join(alphabet.name(x) for x in w))
        return " ".join(parts)


IDENTITY = Endomorphism()


def apply(h, w):
    img = h.images
    if not img:
        return tuple(w)
    out = []
    for x in w:
        y = img.get(x)
        if y is None:
            out.append(x)
        else:
            out.extend(y)
    return tuple(out)


def compose(g, h):
    """The endomorphism ``g ∘ h``: first ``h``, then ``g``."""
    images = {c: apply(g, w) for c, w in h.images.items()}
    for c, w in g.images.items():
        if c not in h.images:
            images[c] = w
    return Endomorphism(images, g.extraction or h.extraction)


class EndoNFA:
    """States are ``0..n-1``; transitions are ``(p, label, q)``."""

    def __init__(self, n=0, initial=(), final=(), transitions=(), names=None):
        self.n = n
        self.initial = set(initial)
        self.final = set(final)
        self.transitions = list(transitions)
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        self.flags = set()

    def add_state(self, name=None):
        self.names.append(str(self.n) if name is None else name)
        self.n += 1
        return self.n - 1

    def add(self, p, h, q):
        self.transitions.append((p, h, q))

    def out_edges(self):
        out = [[] for _ in range(self.n)]
        for p, h, q in self.transitions:
            out[p].append((h, q))
        return out

    def in_edges(self):
        inc = [[] for _ in range(self.n)]
        for p, h, q in self.transitions:
            inc[q].append((p, h))
        return inc

    def forward_reachable(self):
        out = self.out_edges()
        seen = set(self.initial)
        todo = list(seen)
        while todo:
            p = todo.pop()
            for _, q in out[p]:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
        return seen

    def backward_reachable(self):
        inc = self.in_edges()
        seen = set(self.final)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for p, _ in inc[q]:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def useful(self):
        return self.forward_reachable() & self.backward_reachable()


class EDT0LSystem:
    """``alphabet`` names the extended alphabet C; ``target`` is A ⊆ C."""

    def __init__(self, alphabet, target, nfa, seed=MARKER):
        self.alphabet = alphabet
        self.target = frozenset(target)
        self.nfa = nfa
        self.seed = seed
        self.meta = {}


def evaluate_path(system, labels, states=None):
    """``h1(h2(...ht(seed)...))`` for the label sequence ``(h1, ..., ht)``.

    If ``states`` is given (``t+1`` of them) the path must be accepted.
    """
    if states is not None:
        nfa = system.nfa
        if len(states) != len(labels) + 1 or states[0] not in nfa.initial or \
                states[-1] not in nfa.final:
            raise WordEqError("path is not accepted")
        edges = set((p, h.key, q) for p, h, q in nfa.transitions)
        for i, h in enumerate(labels):
            if (states[i], h.key, states[i + 1]) not in edges:
                raise WordEqError("path is not accepted")
    w = (system.seed,)
    for h in reversed(labels):
        w = apply(h, w)
    return w


def _weight_bounds(system, weight):
    """Lower bound, per letter, on the weight of any word it can still turn into.

    Least fixpoint of ``lb(x) = min(weight(x), min_h sum lb(h(x)))``, where the
    first term only applies to target letters and the marker.
    """
    inf = float("inf")
    labels = {h for _, h, _ in system.nfa.transitions}
    lb = {}
    for x in range(len(system.alphabet)):
        lb[x] = weight(x) if x in system.target else inf
    lb[system.seed] = 0
    changed = True
    while changed:
        changed = False
        for h in labels:
            for c, w in h.images.items():
                v = sum(lb.get(y, inf) for y in w)
                if v < lb.get(c, inf):
                    lb[c] = v
                    changed = True
    return lb


def enumerate_language(system, max_len, budget=DEFAULT_ENUM_BUDGET, separator=None,
                       weight=None):
    """All words ``phi(seed)`` in the target alphabet with bounded length.

    With ``separator`` set, the bound applies to every maximal
    separator-free segment instead of the whole word. ``weight`` maps a
    letter to its contribution towards the bound (default 1).
    """
    nfa = system.nfa
    useful = nfa.useful()
    inc = nfa.in_edges()
    target = system.target | ({separator} if separator is not None else set())
    lb = _weight_bounds(system, weight or (lambda x: 1))

    def cost(x):
        return lb.get(x, 0)

    def too_long(w):
        if separator is None:
            return sum(cost(x) for x in w) > max_len
        acc = 0
        for x in w:
            if x == separator:
                acc = 0
            else:
                acc += cost(x)
                if acc > max_len:
                    return True
        return False

    start = [(q, (system.seed,)) for q in nfa.final if q in useful]
    seen = set(start)
    todo = deque(start)
    out = set()
    steps = 0
    while todo:
        q, w = todo.popleft()
        if q in nfa.initial and all(x in target for x in w):
            out.add(w)
        for p, h in inc[q]:
            if p not in useful:
                continue
            steps += 1
            if steps > budget:
                raise BudgetError("enumeration budget exceeded")
            v = apply(h, w)
            if too_long(v):
                continue
            item = (p, v)
            if item not in seen:
                seen.add(item)
                todo.append(item)
    return out


def is_empty(system):
    nfa = system.nfa
    return not (nfa.forward_reachable() & nfa.final)


def _sccs(n, edges):
    """Tarjan's algorithm, iterative; returns a component id per node."""
    index = [None] * n
    low = [0] * n
    comp = [None] * n
    on = [False] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on[v] = True
            recurse = False
            while i < len(edges[v]):
                w = edges[v][i]
                i += 1
                if index[w] is None:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comp


def _shortest(nfa, sources, goals, allowed):
    """Shortest path of transitions from ``sources`` to ``goals`` inside ``allowed``."""
    out = nfa.out_edges()
    prev = {s: None for s in sources if s in allowed}
    todo = deque(prev)
    while todo:
        p = todo.popleft()
        if p in goals:
            path = []
            while prev[p] is not None:
                a, h = prev[p]
                path.append((a, h, p))
                p = a
            return path[::-1]
        for h, q in out[p]:
            if q in allowed and q not in prev:
                prev[q] = (p, h)
                todo.append(q)
    return None


def is_finite(system):
    """Classify as ``empty``, ``finite`` or ``infinite``.

    Returns ``(morphism_level, output_level)``. The first looks for a useful
    state on a cycle; the second pumps each such cycle and reports
    ``infinite`` only if the produced word actually grows.
    """
    nfa = system.nfa
    useful = nfa.useful()
    if not (useful & nfa.final) or not (useful & nfa.initial):
        return "empty", "empty"
    edges = [[] for _ in range(nfa.n)]
    for p, _, q in nfa.transitions:
        if p in useful and q in useful:
            edges[p].append(q)
    comp = _sccs(nfa.n, edges)
    sizes = {}
    for v in useful:
        sizes[comp[v]] = sizes.get(comp[v], 0) + 1
    cyc = [(p, h, q) for p, h, q in nfa.transitions
           if p in useful and q in useful and comp[p] == comp[q]]
    if not cyc:
        return "finite", "finite"
    for p, h, q in cyc:
        members = {v for v in useful if comp[v] == comp[p]}
        back = _shortest(nfa, [q], {p}, members)
        if back is None:
            continue
        loop = [(p, h, q)] + back
        pre = _shortest(nfa, list(nfa.initial & useful), {p}, useful)
        post = _shortest(nfa, [p], nfa.final, useful)
        if pre is None or post is None:
            continue
        lengths = []
        for j in (1, 2, 3):
            labels = [t[1] for t in pre + loop * j + post]
            lengths.append(len(evaluate_path(system, labels)))
        if lengths[0] < lengths[1] < lengths[2]:
            return "infinite", "infinite"
    return "infinite", "finite"


# ---------------------------------------------------------------------------
# text formats


def serialize(system):
    """Line-oriented, byte-stable text form."""
    a = system.alphabet
    nfa = system.nfa
    lines = ["edt0l 1"]
    for i in range(len(a)):
        lines.append(f"symbol {i} {a.names[i]} {a.partner[i]} {a.kinds[i]}")
    lines.append("target " + " ".join(str(x) for x in sorted(system.target)))
    lines.append(f"seed {system.seed}")
    for k in sorted(system.meta):
        lines.append(f"meta {k} {system.meta[k]}")
    lines.append(f"states {nfa.n}")
    lines.append("initial " + " ".join(str(q) for q in sorted(nfa.initial)))
    lines.append("final " + " ".join(str(q) for q in sorted(nfa.final)))
    for flag in sorted(nfa.flags):
        lines.append(f"flag {flag}")
    for p, h, q in sorted(nfa.transitions, key=lambda t: (t[0], t[2], t[1].key)):
        kind = "g" if h.extraction else "h"
        body = " ".join(f"{c}:" + ",".join(str(x) for x in w) for c, w in sorted(h.images.items()))
        lines.append(f"arc {p} {q} {kind} {body}".rstrip())
    return "\n".join(lines) + "\n"


def deserialize(text):
    a = None
    target, seed, n = set(), MARKER, None
    initial, final, transitions, flags, meta = set(), set(), [], set(), {}
    lines = text.splitlines()
    if not lines or lines[0].strip() != "edt0l 1":
        raise ParseError("missing header 'edt0l 1'", 1)
    a = Alphabet()
    a.names, a.kinds, a.partner, a.index = [], [], [], {}
    try:
        for lineno, line in enumerate(lines[1:], 2):
            parts = line.split()
            if not parts:
                continue
            head = parts[0]
            if head == "symbol":
                sid, name, partner, kind = int(parts[1]), parts[2], int(parts[3]), parts[4]
                if sid != len(a.names):
                    raise ParseError("symbols must be listed in order", lineno)
                a.names.append(name)
                a.kinds.append(kind)
                a.partner.append(partner)
                a.index[name] = sid
            elif head == "target":
                target = {int(x) for x in parts[1:]}
            elif head == "seed":
                seed = int(parts[1])
            elif head == "meta":
                meta[parts[1]] = " ".join(parts[2:])
            elif head == "states":
                n = int(parts[1])
            elif head == "initial":
                initial = {int(x) for x in parts[1:]}
            elif head == "final":
                final = {int(x) for x in parts[1:]}
            elif head == "flag":
                flags.add(parts[1])
            elif head == "arc":
                p, q, kind = int(parts[1]), int(parts[2]), parts[3]
                if kind not in ("g", "h"):
                    raise ParseError(f"bad arc kind {kind!r}", lineno)
                images = {}
                for item in parts[4:]:
                    c, _, w = item.partition(":")
                    if not _:
                        raise ParseError(f"bad image {item!r}", lineno)
                    images[int(c)] = tuple(int(x) for x in w.split(",")) if w else ()
                transitions.append((p, Endomorphism(images, kind == "g"), q))
            else:
                raise ParseError(f"unknown line {head!r}", lineno)
    except (ValueError, IndexError):
        raise ParseError("malformed line", lineno) from None
    if n is None:
        raise ParseError("missing 'states' line", len(lines))
    ids = set(range(n))
    if not (initial <= ids and final <= ids) or any(p not in ids or q not in ids
                                                    for p, _, q in transitions):
        raise ParseError("state index out of range", len(lines))
    for i, p in enumerate(a.partner):
        if not 0 <= p < len(a.partner) or a.partner[p] != i:
            raise ParseError("partner table is not an involution", len(lines))
    nfa = EndoNFA(n, initial, final, transitions)
    nfa.flags = flags
    system = EDT0LSystem(a, target, nfa, seed)
    system.meta = meta
    return system


def to_dot(system):
    """Graphviz rendering; byte-stable."""
    a = system.alphabet
    nfa = system.nfa
    lines = ["digraph edt0l {", "  rankdir=LR;", '  node [shape=circle];']
    for q in range(nfa.n):
        shape = "doublecircle" if q in nfa.final else "circle"
        style = ', style=bold' if q in nfa.initial else ""
        lines.append(f'  q{q} [label="{q}", shape={shape}{style}];')
    for p, h, q in sorted(nfa.transitions, key=lambda t: (t[0], t[2], t[1].key)):
        label = h.text(a).replace('"', '\\"')
        lines.append(f'  q{p} -> q{q} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def example_one():
    """The two-letter system whose language is ``{vv}``.

    ``f(#) = $$``, ``g_a($) = $a``, ``g_b($) = $b``, ``h($) = 1``.
    """
    a = Alphabet()
    x, _ = a.add_pair("a")
    y, _ = a.add_pair("b")
    d, _ = a.add_pair("$")
    f = Endomorphism({MARKER: (d, d)}, extraction=True)
    ga = Endomorphism({d: (d, x)}, extraction=True)
    gb = Endomorphism({d: (d, y)}, extraction=True)
    h = Endomorphism({d: ()}, extraction=True)
    nfa = EndoNFA(3, {0}, {2})
    nfa.add(0, h, 1)
    nfa.add(1, ga, 1)
    nfa.add(1, gb, 1)
    nfa.add(1, f, 2)
    return EDT0LSystem(a, {x, y}, nfa), {"f": f, "g_a": ga, "g_b": gb, "h": h}
