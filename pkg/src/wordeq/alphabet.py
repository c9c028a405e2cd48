"""Involutive symbol universe.

Symbols are dense small integers. Id 0 is always the marker ``#``, the
only self-involuting symbol once the alphabet is in normal (encoded) form.
"""

from .errors import AlphabetError

MARKER = 0
DEFAULT_KAPPA = 100

CONSTANT = "constant"
VARIABLE = "variable"
MARKER_KIND = "marker"


class Alphabet:
    """Symbols with an explicit partner table.

    The alphabet has value semantics in the solver: every witness run works
    on its own :meth:`copy`, so fresh-letter allocation never leaks between
    runs.
    """

    def __init__(self, capacity=None):
        self.names = ["#"]
        self.kinds = [MARKER_KIND]
        self.partner = [MARKER]
        self.index = {"#": MARKER}
        self.capacity = capacity
        self._fresh = 0

    def __len__(self):
        return len(self.names)

    def copy(self):
        other = Alphabet(self.capacity)
        other.names = list(self.names)
        other.kinds = list(self.kinds)
        other.partner = list(self.partner)
        other.index = dict(self.index)
        other._fresh = self._fresh
        return other

    def _new(self, name, kind):
        if name in self.index:
            raise AlphabetError(f"duplicate symbol {name!r}")
        sid = len(self.names)
        self.names.append(name)
        self.kinds.append(kind)
        self.partner.append(sid)
        self.index[name] = sid
        return sid

    def add_pair(self, name, bar_name=None, kind=CONSTANT):
        """Register ``name`` and its partner; returns both ids."""
        if bar_name is None:
            bar_name = name + "~"
        x = self._new(name, kind)
        y = self._new(bar_name, kind)
        self.partner[x] = y
        self.partner[y] = x
        return x, y

    def add_self(self, name, kind=CONSTANT):
        """Register a self-involuting constant (raw free-product input only)."""
        return self._new(name, kind)

    def set_capacity(self, n, kappa=DEFAULT_KAPPA):
        self.capacity = kappa * n

    def fresh_letters(self, count, kind=CONSTANT, prefix="c"):
        """Allocate ``count`` new involutive pairs and return them."""
        if self.capacity is not None and len(self.names) + 2 * count > self.capacity:
            raise AlphabetError("alphabet budget exceeded")
        pairs = []
        for _ in range(count):
            self._fresh += 1
            name = f"{prefix}{self._fresh}"
            while name in self.index:
                self._fresh += 1
                name = f"{prefix}{self._fresh}"
            pairs.append(self.add_pair(name, name + "~", kind))
        return pairs

    def bar(self, x):
        try:
            return self.partner[x]
        except (IndexError, TypeError):
            raise AlphabetError(f"unknown symbol id {x!r}") from None

    def is_variable(self, x):
        return self.kinds[x] == VARIABLE

    def is_constant(self, x):
        return self.kinds[x] != VARIABLE

    def is_self_involuting(self, x):
        return self.partner[x] == x

    def name(self, x):
        return self.names[x]

    def sym(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise AlphabetError(f"unknown symbol {name!r}") from None

    def word(self, text):
        """Parse a whitespace separated list of symbol names."""
        return tuple(self.sym(t) for t in text.split())

    def show(self, w, sep=" "):
        return sep.join(self.names[x] for x in w)

    def involute(self, w):
        return involute_word(self, w)

    def constants(self):
        return [i for i, k in enumerate(self.kinds) if k != VARIABLE]

    def variables(self):
        return [i for i, k in enumerate(self.kinds) if k == VARIABLE]

    def positive(self, ids):
        """Orientation B+: the smaller id of each pair, marker excluded."""
        return sorted({min(x, self.partner[x]) for x in ids if self.partner[x] != x})


def involute_word(alphabet, w):
    """Reverse ``w`` and replace every symbol by its partner."""
    partner = alphabet.partner
    n = len(partner)
    out = []
    for x in reversed(w):
        if not (isinstance(x, int) and 0 <= x < n):
            raise AlphabetError(f"unknown symbol id {x!r}")
        out.append(partner[x])
    return tuple(out)


def is_reduced_free_group(alphabet, w):
    """True iff ``w`` has no factor ``a a~``."""
    partner = alphabet.partner
    return all(partner[x] != y for x, y in zip(w, w[1:]))


def fresh_letters(alphabet, count):
    return alphabet.fresh_letters(count)
