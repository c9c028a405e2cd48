"""Free products of free groups, free monoids with involution and finite groups.

A :class:`FreeProductSpec` fixes which letters belong to which factor.
Plain free groups and free monoids are the one-factor special cases, so
the oracle and the reductions use the same geodesic rules everywhere.
"""

from .alphabet import CONSTANT
from .errors import MonoidError, ParseError
from .monoids import ONE, ZERO, PairMonoid, FiniteMonoid, UnitMonoid, ProductMonoid, \
    ConstraintMorphism

FREE_GROUP = "free-group"
FREE_MONOID = "free-monoid"
FINITE_GROUP = "finite-group"


class Factor:
    def __init__(self, kind, letters, name=None, table=None):
        self.kind = kind
        self.letters = tuple(letters)
        self.name = name or kind
        # finite groups: (g, h) -> product letter, or None for the identity
        self.table = table or {}

    @property
    def is_group(self):
        return self.kind in (FREE_GROUP, FINITE_GROUP)


class FreeProductSpec:
    """Geodesic rules for the free product of the given factors."""

    def __init__(self, alphabet, factors):
        self.alphabet = alphabet
        self.factors = list(factors)
        self.factor_of = {}
        for i, f in enumerate(self.factors):
            for a in f.letters:
                if a in self.factor_of:
                    raise MonoidError(f"letter {alphabet.name(a)!r} in two factors")
                self.factor_of[a] = i
        self.letters = tuple(sorted(self.factor_of))

    @property
    def kinds(self):
        return {f.kind for f in self.factors}

    def is_infinite(self):
        if any(f.letters for f in self.factors if f.kind != FINITE_GROUP):
            return True
        return sum(1 for f in self.factors if f.kind == FINITE_GROUP and f.letters) >= 2

    def is_unit(self, a):
        return self.factors[self.factor_of[a]].is_group

    def compatible(self, b, c):
        """May ``b`` be followed by ``c`` in a geodesic word?"""
        fb = self.factor_of[b]
        if fb != self.factor_of[c]:
            return True
        kind = self.factors[fb].kind
        if kind == FREE_GROUP:
            return self.alphabet.partner[b] != c
        if kind == FINITE_GROUP:
            return False
        return True

    def multiply(self, b, c):
        """Geodesic word for ``pi(bc)``; length at most 2."""
        if self.compatible(b, c):
            return (b, c)
        f = self.factors[self.factor_of[b]]
        if f.kind == FREE_GROUP:
            return ()
        g = f.table[(b, c)]
        return () if g is None else (g,)


def is_geodesic(w, spec):
    """Every adjacent pair of ``w`` obeys the geodesic rule."""
    comp = spec.compatible
    return all(comp(x, y) for x, y in zip(w, w[1:]))


def pi_normal_form(w, spec):
    """The geodesic representative of the element ``w`` of the free product."""
    stack = []
    for x in w:
        if stack and not spec.compatible(stack[-1], x):
            stack.extend(spec.multiply(stack.pop(), x))
        else:
            stack.append(x)
    return tuple(stack)


def build_free_group_spec(alphabet, letters):
    return FreeProductSpec(alphabet, [Factor(FREE_GROUP, letters)])


def finite_group_factor(alphabet, name, elements, rows):
    """Register a finite group given by its multiplication table.

    ``elements`` are the names of the non-identity elements and ``rows[i][j]``
    the name of ``elements[i] * elements[j]`` (``"1"`` for the identity).
    Order-two elements become self-involuting letters.
    """
    k = len(elements)
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ParseError(f"table of {name} must be {k}x{k}")
    names = list(elements)
    pos = {e: i for i, e in enumerate(names)}
    for r in rows:
        for e in r:
            if e != "1" and e not in pos:
                raise ParseError(f"unknown element {e!r} in table of {name}")

    def m(i, j):
        if i is None:
            return j
        if j is None:
            return i
        e = rows[i][j]
        return None if e == "1" else pos[e]

    full = [None] + list(range(k))
    for x in full:
        for y in full:
            for z in full:
                if m(m(x, y), z) != m(x, m(y, z)):
                    raise ParseError(f"table of {name} is not associative")
    inverse = {}
    for i in range(k):
        inv = [j for j in range(k) if m(i, j) is None]
        if len(inv) != 1 or m(inv[0], i) is not None:
            raise ParseError(f"element {names[i]!r} of {name} has no inverse")
        inverse[i] = inv[0]
    ids = {}
    for i in range(k):
        if i in ids:
            continue
        j = inverse[i]
        if j == i:
            ids[i] = alphabet.add_self(names[i])
        else:
            a, b = alphabet.add_pair(names[i], names[j])
            ids[i], ids[j] = a, b
    table = {}
    for i in range(k):
        for j in range(k):
            r = m(i, j)
            table[(ids[i], ids[j])] = None if r is None else ids[r]
    return Factor(FINITE_GROUP, [ids[i] for i in range(k)], name, table)


def enumerate_geodesics(spec, max_len, letters=None):
    """All geodesic words of length at most ``max_len`` in length-lex order."""
    letters = spec.letters if letters is None else tuple(sorted(letters))
    level = [()]
    out = [()]
    for _ in range(max_len):
        nxt = []
        for w in level:
            for a in letters:
                if not w or spec.compatible(w[-1], a):
                    nxt.append(w + (a,))
        out.extend(nxt)
        level = nxt
    return out


# ---------------------------------------------------------------------------
# constraint monoids of the free product


def build_product_constraint_monoid(spec):
    """``N_F × U`` together with ``psi``.

    The first component is zero exactly on non-geodesic words; the second
    is ``1`` exactly on words over unit letters (letters of group factors).
    """
    nf = PairMonoid(spec.letters, spec.compatible, spec.alphabet.partner)
    nf.name = "NF"
    units = UnitMonoid()
    monoid = ProductMonoid([nf, units])
    images = {}
    for a in spec.letters:
        images[a] = ((a, a), ONE if spec.is_unit(a) else UnitMonoid.NONUNIT)
    return monoid, ConstraintMorphism(monoid, images)


class IotaMonoid(FiniteMonoid):
    """Recognizes factors of images of the encoding ``iota``.

    Elements: ``1``, ``0`` or ``(s, e)`` where ``s`` is the letter whose
    hat dangles at the start and ``e`` the letter whose hat is still
    missing at the end (``None`` when nothing dangles).
    """

    zero = ZERO
    name = "R"

    def mul(self, x, y):
        if x == ONE:
            return y
        if y == ONE:
            return x
        if x == ZERO or y == ZERO:
            return ZERO
        if x[1] != y[0]:
            return ZERO
        return (x[0], y[1])

    def inv(self, x):
        raise MonoidError("the encoding monoid is used only inside a dual lift")


class IotaCodec:
    """The encoding ``iota`` and decoding ``eta`` for self-involuting letters.

    ``encoded`` is a copy of the alphabet in which every self-involuting
    constant ``a`` is paired with a new hat letter ``a^``. Letter ids of the
    original alphabet are preserved.
    """

    def __init__(self, alphabet):
        self.source = alphabet
        self.encoded = alphabet.copy()
        self.hat = {}
        self.base = {}
        for x in range(1, len(alphabet)):
            if alphabet.kinds[x] == CONSTANT and alphabet.partner[x] == x:
                h = self.encoded._new(alphabet.names[x] + "^", CONSTANT)
                self.encoded.partner[x] = h
                self.encoded.partner[h] = x
                self.hat[x] = h
                self.base[h] = x

    def encode(self, w):
        out = []
        for x in w:
            out.append(x)
            if x in self.hat:
                out.append(self.hat[x])
        return tuple(out)

    def decode(self, w):
        return tuple(x for x in w if x not in self.base)

    def letter_image(self, x):
        """The element of :class:`IotaMonoid` for a single encoded letter."""
        if x in self.hat:
            return (None, x)
        if x in self.base:
            return (self.base[x], None)
        return (None, None)

    def is_codeword(self, w):
        m = IotaMonoid()
        acc = m.prod(self.letter_image(x) for x in w)
        return acc == ONE or acc == (None, None)


def iota_encode(codec, w):
    return codec.encode(w)


def eta_decode(codec, w):
    return codec.decode(w)
