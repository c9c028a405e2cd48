"""Finite monoids with involution and the morphisms that encode constraints.

Elements are plain hashable Python values. Every monoid exposes ``one``,
``mul``, ``inv`` and ``is_zero``; ``zero`` is ``None`` when the monoid has
no zero. Products treat a component as *strict* when its zero means
"forbidden", and an element of the product is zero as soon as one strict
component is.
"""

from itertools import product as _cartesian

from .alphabet import MARKER
from .errors import MonoidError

ONE = "1"
ZERO = "0"


class FiniteMonoid:
    one = ONE
    zero = None
    strict = True
    name = "monoid"

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def is_zero(self, x):
        return self.zero is not None and x == self.zero

    def prod(self, elements):
        acc = self.one
        for e in elements:
            acc = self.mul(acc, e)
        return acc

    def elements(self):
        raise MonoidError(f"{self.name} does not enumerate its elements")

    def fmt(self, x):
        return str(x)


class PairMonoid(FiniteMonoid):
    """``{1,0} ∪ L×L`` with ``(a,b)(c,d) = (a,d)`` when ``b,c`` may touch.

    With ``compatible(b, c) = c != bar(b)`` this is the reduced-word monoid
    N; with the geodesic rule of a free product it is N_F.
    """

    zero = ZERO
    name = "N"

    def __init__(self, letters, compatible, partner=None):
        self.letters = tuple(sorted(letters))
        self.compatible = compatible
        self.partner = partner

    def mul(self, x, y):
        if x == ONE:
            return y
        if y == ONE:
            return x
        if x == ZERO or y == ZERO:
            return ZERO
        if not self.compatible(x[1], y[0]):
            return ZERO
        return (x[0], y[1])

    def inv(self, x):
        if x == ONE or x == ZERO:
            return x
        if self.partner is None:
            raise MonoidError("monoid has no involution")
        p = self.partner
        return (p[x[1]], p[x[0]])

    def letter(self, a):
        return (a, a)

    def elements(self):
        yield ONE
        yield ZERO
        for a in self.letters:
            for b in self.letters:
                yield (a, b)

    def fmt(self, x):
        if x in (ONE, ZERO):
            return x
        return f"{x[0]}.{x[1]}"


def build_reduced_word_monoid(alphabet, letters):
    """The monoid N over the letters ``letters`` (closed under involution).

    Returns ``(N, mu0)`` where ``mu0`` maps ``#`` to 0 and each letter
    ``a`` to ``(a, a)``.
    """
    partner = alphabet.partner
    for a in letters:
        if partner[a] == a:
            raise MonoidError(f"self-involuting letter {alphabet.name(a)!r} not allowed in N")
    monoid = PairMonoid(letters, lambda b, c: partner[b] != c, partner)
    images = {MARKER: ZERO}
    images.update({a: (a, a) for a in letters})
    return monoid, ConstraintMorphism(monoid, images)


class CyclicMonoid(FiniteMonoid):
    """Counts modulo ``m``; ``weight`` says how much each letter adds."""

    one = 0
    strict = False

    def __init__(self, m):
        if m < 1:
            raise MonoidError("modulus must be positive")
        self.m = m
        self.name = f"len{m}"

    def mul(self, x, y):
        return (x + y) % self.m

    def inv(self, x):
        return x

    def elements(self):
        return iter(range(self.m))


class UnitMonoid(FiniteMonoid):
    """Two elements: ``1`` (only unit letters so far) and absorbing ``'u'``.

    The absorbing element is not a zero in the constraint sense.
    """

    strict = False
    name = "U"
    NONUNIT = "u"

    def mul(self, x, y):
        return ONE if x == ONE and y == ONE else self.NONUNIT

    def inv(self, x):
        return x

    def elements(self):
        return iter((ONE, self.NONUNIT))


class TableMonoid(FiniteMonoid):
    """A monoid given by an explicit multiplication table over ``0..k-1``."""

    def __init__(self, table, identity=0, zero=None, involution=None, strict=True, name="T"):
        self.table = [tuple(r) for r in table]
        self.one = identity
        self.zero = zero
        self.involution = involution
        self.strict = strict
        self.name = name

    def mul(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        if self.involution is None:
            raise MonoidError("monoid has no involution")
        return self.involution[x]

    def elements(self):
        return iter(range(len(self.table)))


class ProductMonoid(FiniteMonoid):
    """Componentwise product of monoids."""

    def __init__(self, components):
        self.components = tuple(components)
        self.one = tuple(c.one for c in self.components)
        if all(c.zero is not None for c in self.components):
            self.zero = tuple(c.zero for c in self.components)
        else:
            self.zero = None
        self.strict = any(c.strict and c.zero is not None for c in self.components)
        self.name = "x".join(c.name for c in self.components)

    def mul(self, x, y):
        return tuple(c.mul(a, b) for c, a, b in zip(self.components, x, y))

    def inv(self, x):
        return tuple(c.inv(a) for c, a in zip(self.components, x))

    def is_zero(self, x):
        return any(c.strict and c.is_zero(a) for c, a in zip(self.components, x))

    def elements(self):
        return _cartesian(*(list(c.elements()) for c in self.components))

    def fmt(self, x):
        return "(" + ",".join(c.fmt(a) for c, a in zip(self.components, x)) + ")"


def product_monoid(n1, n2):
    return ProductMonoid([n1, n2])


class DualMonoid(FiniteMonoid):
    """``M × M^T`` with ``(x1,y1)(x2,y2) = (x1 x2, y2 y1)`` and ``(x,y)~ = (y,x)``.

    ``M`` itself needs no involution.
    """

    def __init__(self, base):
        self.base = base
        self.one = (base.one, base.one)
        self.zero = (base.zero, base.zero) if base.zero is not None else None
        self.strict = base.strict
        self.name = f"D({base.name})"

    def mul(self, x, y):
        b = self.base
        return (b.mul(x[0], y[0]), b.mul(y[1], x[1]))

    def inv(self, x):
        return (x[1], x[0])

    def is_zero(self, x):
        return self.base.is_zero(x[0]) or self.base.is_zero(x[1])

    def elements(self):
        items = list(self.base.elements())
        return _cartesian(items, items)

    def fmt(self, x):
        return f"<{self.base.fmt(x[0])}|{self.base.fmt(x[1])}>"


def dual_lift(rho, alphabet, symbols=None):
    """Lift a morphism ``rho`` (to any monoid) to an involutive one.

    ``mu(x) = (rho(x), rho(x~))``; the first projection recovers ``rho``.
    """
    monoid = DualMonoid(rho.monoid)
    if symbols is None:
        symbols = rho.images.keys()
    images = {x: (rho.images[x], rho.images[alphabet.bar(x)]) for x in symbols}
    return monoid, ConstraintMorphism(monoid, images)


class BoolMatrixMonoid(FiniteMonoid):
    """Boolean ``n×n`` matrices stored as tuples of row bitmasks."""

    strict = False

    def __init__(self, n):
        self.n = n
        self.one = tuple(1 << i for i in range(n))
        self.zero = tuple(0 for _ in range(n))
        self.name = f"B{n}"

    def mul(self, x, y):
        out = []
        for row in x:
            acc = 0
            i = 0
            while row:
                if row & 1:
                    acc |= y[i]
                row >>= 1
                i += 1
            out.append(acc)
        return tuple(out)

    def inv(self, x):
        n = self.n
        return tuple(sum(1 << i for i in range(n) if x[i] >> j & 1) for j in range(n))

    def entry(self, x, i, j):
        return bool(x[i] >> j & 1)


def boolean_matrix_monoid(nfa):
    """Transition monoid of an NFA.

    ``nfa`` is a mapping with keys ``states`` (int count), ``initial``,
    ``final`` (iterables of state indices) and ``delta`` (iterable of
    ``(p, letter, q)``). Returns ``(monoid, morphism, accept)`` where
    ``accept(m)`` decides whether a word with image ``m`` is accepted.
    """
    n = nfa["states"]
    monoid = BoolMatrixMonoid(n)
    rows = {}
    for p, a, q in nfa["delta"]:
        rows.setdefault(a, [0] * n)[p] |= 1 << q
    images = {a: tuple(r) for a, r in rows.items()}
    initial = tuple(nfa["initial"])
    final_mask = sum(1 << q for q in nfa["final"])

    def accept(m):
        return any(m[i] & final_mask for i in initial)

    mor = ConstraintMorphism(monoid, images, default=monoid.zero)
    return monoid, mor, accept


class ConstraintMorphism:
    """A morphism from words over symbol ids into ``monoid``."""

    def __init__(self, monoid, images, default=None):
        self.monoid = monoid
        self.images = dict(images)
        self.default = default

    def __getitem__(self, x):
        try:
            return self.images[x]
        except KeyError:
            if self.default is not None:
                return self.default
            raise MonoidError(f"symbol {x!r} is not mapped") from None

    def __contains__(self, x):
        return x in self.images

    def eval(self, w):
        m = self.monoid
        acc = m.one
        for x in w:
            acc = m.mul(acc, self[x])
        return acc

    def extended(self, updates):
        images = dict(self.images)
        images.update(updates)
        return ConstraintMorphism(self.monoid, images, self.default)

    def restricted(self, symbols):
        return ConstraintMorphism(self.monoid, {x: self.images[x] for x in symbols if x in self.images},
                                  self.default)


def eval_morphism(mu, w):
    """Product of the images of the letters of ``w`` from left to right."""
    return mu.eval(w)


def check_associativity(monoid, elements=None):
    els = list(monoid.elements()) if elements is None else list(elements)
    mul = monoid.mul
    for x in els:
        for y in els:
            xy = mul(x, y)
            for z in els:
                if mul(xy, z) != mul(x, mul(y, z)):
                    return False
    return True


def check_involution(monoid, elements=None):
    els = list(monoid.elements()) if elements is None else list(elements)
    inv, mul = monoid.inv, monoid.mul
    if inv(monoid.one) != monoid.one:
        return False
    if monoid.zero is not None and inv(monoid.zero) != monoid.zero:
        return False
    for x in els:
        if inv(inv(x)) != x:
            return False
        for y in els:
            if inv(mul(x, y)) != mul(inv(y), inv(x)):
                return False
    return True
