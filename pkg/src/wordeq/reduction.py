"""Front end: from an input problem to initial extended equations.

The free-group pipeline (no inequalities) triangulates every equation and
splits each triangle ``x = yz`` into the monoid equations
``x = PR, y = PQ, z = Q~R``. Every other problem goes through the
free-product pipeline: triangles become ``x = PaQ, y = PbR, z = R~cQ``,
inequalities are guessed apart, and self-involuting letters are encoded.

Values of all fresh variables are computed from a known solution of the
input problem, so every initial vertex comes with a witness.
"""

from dataclasses import dataclass, field

from .alphabet import MARKER, VARIABLE, DEFAULT_KAPPA, involute_word
from .errors import WordEqError
from .freeproduct import FREE_GROUP, FREE_MONOID, IotaCodec, IotaMonoid, pi_normal_form
from .monoids import (ONE, ZERO, ConstraintMorphism, CyclicMonoid, DualMonoid, PairMonoid,
                      ProductMonoid, UnitMonoid)
from .problem import And, Eq, Member, Neq, Not, Or, member_holds, monoid_elements


# ---------------------------------------------------------------------------
# formulas


def normalize_formula(problem, phi=None):
    """Disjunctive normal form: a list of branches, each a tuple of atoms.

    Negations are pushed to the atoms; a negated membership becomes a
    disjunction over the other elements of its monoid.
    """
    phi = problem.formula if phi is None else phi

    def pos(f):
        if isinstance(f, (Eq, Neq, Member)):
            return [(f,)]
        if isinstance(f, And):
            out = [()]
            for p in f.parts:
                out = [a + b for a in out for b in pos(p)]
            return out
        if isinstance(f, Or):
            return [b for p in f.parts for b in pos(p)]
        if isinstance(f, Not):
            return neg(f.part)
        raise WordEqError(f"unknown formula node {f!r}")

    def neg(f):
        if isinstance(f, Eq):
            return [(Neq(f.lhs, f.rhs),)]
        if isinstance(f, Neq):
            return [(Eq(f.lhs, f.rhs),)]
        if isinstance(f, Member):
            others = [m for m in monoid_elements(problem, f.monoid) if m != f.element]
            if not others:
                raise WordEqError(f"cannot negate a constraint over the one-element monoid {f.monoid}")
            return [(Member(f.var, f.monoid, m),) for m in others]
        if isinstance(f, And):
            return [b for p in f.parts for b in neg(p)]
        if isinstance(f, Or):
            return pos(And(tuple(Not(p) for p in f.parts)))
        if isinstance(f, Not):
            return pos(f.part)
        raise WordEqError(f"unknown formula node {f!r}")

    seen = []
    for b in pos(phi):
        if b not in seen:
            seen.append(b)
    return seen


# ---------------------------------------------------------------------------
# the shared symbol universe


class Universe:
    """Alphabet, constraint monoid and fresh-symbol registry of one problem.

    All initial vertices of a problem live in one universe, so vertices
    reached from different witnesses can be identified.
    """

    def __init__(self, problem, kappa=DEFAULT_KAPPA):
        self.problem = problem
        self.kappa = kappa
        self.spec = problem.spec
        self.branches = normalize_formula(problem)
        has_neq = any(isinstance(a, Neq) for b in self.branches for a in b)
        self.part2 = problem.mode != FREE_GROUP or has_neq
        if self.part2:
            self.codec = IotaCodec(problem.alphabet)
            self.alphabet = self.codec.encoded.copy()
        else:
            self.codec = None
            self.alphabet = problem.alphabet.copy()
        self.alphabet.capacity = None
        self.base_letters = tuple(problem.spec.letters)
        self.letters = tuple(x for x in range(1, len(self.alphabet))
                             if self.alphabet.kinds[x] != VARIABLE)
        self.A = frozenset((MARKER,) + self.letters)
        self.moduli = sorted({int(a.monoid[3:]) for b in self.branches for a in b
                              if isinstance(a, Member) and a.monoid.startswith("len")})
        self._slots = []
        self._build_monoid()

    # -- symbols -----------------------------------------------------------

    def var(self, name):
        """The variable called ``name``, created on first use."""
        if name in self.alphabet.index:
            return self.alphabet.index[name]
        return self.alphabet.add_pair(name, name + "~", VARIABLE)[0]

    def slot(self, i):
        """The ``i``-th fresh constant pair ``(c, c~)``."""
        while len(self._slots) <= i:
            self._slots.append(self.alphabet.fresh_letters(1)[0])
        return self._slots[i]

    def slot_letters(self):
        return [x for pair in self._slots for x in pair]

    def raw_involute(self, w):
        """Involution of the input alphabet (fresh variables included)."""
        raw = self.problem.alphabet.partner
        part = self.alphabet.partner
        return tuple(raw[x] if x < len(raw) else part[x] for x in reversed(w))

    def encode(self, w):
        return self.codec.encode(w) if self.codec else tuple(w)

    def decode(self, w):
        return self.codec.decode(w) if self.codec else tuple(w)

    def show(self, w):
        return " ".join(self.alphabet.name(x) for x in w) if w else "1"

    # -- monoid --------------------------------------------------------------

    def _build_monoid(self):
        a = self.alphabet
        cyc = [CyclicMonoid(m) for m in self.moduli]
        if not self.part2:
            core = PairMonoid(self.letters, lambda b, c: a.partner[b] != c, a.partner)
            self.monoid = ProductMonoid([core] + cyc)
            images = {x: ((x, x),) + (1,) * len(cyc) for x in self.letters}
            images[MARKER] = (ZERO,) + (0,) * len(cyc)
            self.mu0 = ConstraintMorphism(self.monoid, images)
            self.core_index = 0
            return
        spec = self.spec
        nf = PairMonoid(spec.letters, spec.compatible, a.partner)
        nf.name = "NF"
        base = ProductMonoid([nf, UnitMonoid(), IotaMonoid()] + cyc)
        codec = self.codec
        rho = {}
        for x in self.letters:
            if x in codec.base:
                rho[x] = (ONE, ONE, codec.letter_image(x)) + (0,) * len(cyc)
            else:
                unit = ONE if spec.is_unit(x) else UnitMonoid.NONUNIT
                rho[x] = ((x, x), unit, codec.letter_image(x)) + (1,) * len(cyc)
        self.monoid = DualMonoid(base)
        images = {x: (rho[x], rho[a.partner[x]]) for x in self.letters}
        z = (ZERO, ONE, ZERO) + (0,) * len(cyc)
        images[MARKER] = (z, z)
        self.mu0 = ConstraintMorphism(self.monoid, images)
        self.rho = rho

    def mu_of(self, w):
        """Image of a word over the input letters ``A``."""
        return self.mu0.eval(w)


# ---------------------------------------------------------------------------
# triangulation and the splits


@dataclass
class Triangle:
    x: int
    y: int
    z: int


@dataclass
class System:
    """Monoid equations of one branch together with a witness."""
    equations: list = field(default_factory=list)
    sigma: dict = field(default_factory=dict)
    targets: list = field(default_factory=list)


def triangulate(universe, lhs, rhs, tag):
    """``U = V`` as ``X = U Y Y``, ``X = V Y Y`` and ``Y = 1``, split into triangles.

    Returns ``(triangles, definitions, Y)``: each fresh variable is defined
    as a word over the old symbols (``Y`` by the empty word).
    """
    X = universe.var(f"T{tag}")
    Y = universe.var(f"Y{tag}")
    tris = []
    defs = {X: tuple(lhs), Y: ()}
    for side, word in (("u", lhs), ("v", rhs)):
        w = tuple(word) + (Y, Y)
        head = X
        for j in range(len(w) - 2):
            Z = universe.var(f"Z{tag}{side}{j + 1}")
            defs[Z] = w[j + 1:]
            tris.append(Triangle(head, w[j], Z))
            head = Z
        tris.append(Triangle(head, w[-2], w[-1]))
    return tris, defs, Y


def group_to_monoid(universe, tri, tag, vx, vy, vz):
    """Standard split of the free-group triangle ``x = yz``.

    ``vx, vy, vz`` are the reduced values. Returns the three monoid
    equations and the values of ``P, Q, R``.
    """
    P, Q, R = (universe.var(f"{s}{tag}") for s in "PQR")
    bar = universe.alphabet.bar
    k = 0
    while k < min(len(vy), len(vz)) and vz[k] == bar(vy[len(vy) - 1 - k]):
        k += 1
    vP, vQ, vR = vy[:len(vy) - k], vy[len(vy) - k:], vz[k:]
    if vP + vR != vx:
        raise WordEqError("triangle values do not satisfy x = yz")
    eqs = [((tri.x,), (P, R)), ((tri.y,), (P, Q)), ((tri.z,), (bar(Q), R))]
    return eqs, {P: vP, Q: vQ, R: vR}


def product_split(universe, tri, tag, vx, vy, vz):
    """The free-product split ``x = PaQ, y = PbR, z = R~cQ`` with ``a = bc``.

    Values are geodesic words over the input letters (not yet encoded).
    Returns ``(equations, values)`` where equations use unencoded letters.
    """
    spec = universe.spec
    raw = universe.problem.alphabet
    bar = universe.alphabet.bar
    P, Q, R = (universe.var(f"{s}{tag}") for s in "PQR")
    k = 0
    while k < min(len(vy), len(vz)):
        last = vy[len(vy) - 1 - k]
        if not (spec.is_unit(last) and vz[k] == raw.bar(last)):
            break
        k += 1
    y1, vR, z1 = vy[:len(vy) - k], vy[len(vy) - k:], vz[k:]
    a = b = c = ()
    if y1 and z1 and not spec.compatible(y1[-1], z1[0]):
        b, c = (y1[-1],), (z1[0],)
        a = spec.multiply(b[0], c[0])
        y1, z1 = y1[:-1], z1[1:]
    if y1 + a + z1 != vx:
        raise WordEqError("triangle values do not satisfy x = yz")
    eqs = [((tri.x,), (P,) + a + (Q,)), ((tri.y,), (P,) + b + (R,)),
           ((tri.z,), (bar(R),) + c + (Q,))]
    return eqs, {P: y1, Q: z1, R: vR}


def _separate(universe, x, y):
    """Letters for ``x a = P b Q`` and ``y a = P c R`` with ``b != c``, or ``None``."""
    spec = universe.spec
    for a in spec.letters:
        xa, ya = x + (a,), y + (a,)
        if not (_geodesic(spec, xa) and _geodesic(spec, ya)):
            continue
        k = 0
        while k < min(len(xa), len(ya)) and xa[k] == ya[k]:
            k += 1
        if k < len(xa) and k < len(ya):
            return a, xa[:k], xa[k], xa[k + 1:], ya[k], ya[k + 1:]
    return None


def _geodesic(spec, w):
    return all(spec.compatible(p, q) for p, q in zip(w, w[1:]))


class BranchBuilder:
    """Turns one DNF branch and one input solution into a :class:`System`."""

    def __init__(self, universe):
        self.u = universe
        self.problem = universe.problem

    def value(self, sigma, w, raw=True):
        """Image of ``w``; ``raw`` values use the involution of the input alphabet."""
        a = self.u.alphabet
        inv = self.u.raw_involute if raw else a.involute
        out = []
        for x in w:
            if a.is_variable(x):
                if x in sigma:
                    out.extend(sigma[x])
                else:
                    out.extend(inv(sigma[a.bar(x)]))
            else:
                out.append(x)
        return tuple(out)

    def reduce(self, w):
        if self.problem.mode == FREE_MONOID:
            return tuple(w)
        return pi_normal_form(w, self.u.spec)

    def build(self, index, branch, sigma0):
        """``System`` for ``branch`` (number ``index``) witnessed by ``sigma0``.

        ``sigma0`` maps the positive input variables to geodesic words.
        Returns ``None`` when the branch is not satisfied by ``sigma0``.
        """
        u = self.u
        sigma = dict(sigma0)
        monoid_eqs = []
        tris = []
        for i, atom in enumerate(branch):
            tag = f"{index}_{i}"
            if isinstance(atom, Member):
                if not member_holds(self.problem, atom, self.value(sigma, (atom.var,))):
                    return None
                continue
            if isinstance(atom, Eq):
                l, r = self.reduce(self.value(sigma, atom.lhs)), self.reduce(self.value(sigma, atom.rhs))
                if l != r:
                    return None
                self._equation(tag, atom.lhs, atom.rhs, sigma, monoid_eqs, tris)
            else:
                l, r = self.reduce(self.value(sigma, atom.lhs)), self.reduce(self.value(sigma, atom.rhs))
                if l == r:
                    return None
                x = self._side(f"{tag}l", atom.lhs, sigma, monoid_eqs, tris)
                y = self._side(f"{tag}r", atom.rhs, sigma, monoid_eqs, tris)
                self._inequality(tag, x, y, l, r, sigma, monoid_eqs)
        for j, tri in enumerate(tris):
            vx, vy, vz = (self.value(sigma, (s,)) for s in (tri.x, tri.y, tri.z))
            split = product_split if u.part2 else group_to_monoid
            eqs, vals = split(u, tri, f"{j + 1}", vx, vy, vz)
            monoid_eqs.extend(eqs)
            sigma.update(vals)
        system = System(targets=list(self.problem.target))
        for lhs, rhs in monoid_eqs:
            system.equations.append((self._enc(lhs), self._enc(rhs)))
        a = u.alphabet
        for x, w in sigma.items():
            system.sigma[min(x, a.bar(x))] = u.encode(w if x < a.bar(x) else u.raw_involute(w))
        for lhs, rhs in system.equations:
            if self.value(system.sigma, lhs, False) != self.value(system.sigma, rhs, False):
                raise WordEqError("witness does not solve the reduced system")
        return system

    def _enc(self, w):
        u = self.u
        out = []
        for x in w:
            out.extend((x,) if u.alphabet.is_variable(x) else u.encode((x,)))
        return tuple(out)

    def _equation(self, tag, lhs, rhs, sigma, monoid_eqs, tris):
        if self.problem.mode == FREE_MONOID:
            monoid_eqs.append((tuple(lhs), tuple(rhs)))
            return
        t, defs, _ = triangulate(self.u, lhs, rhs, tag)
        tris.extend(t)
        for x, w in defs.items():
            sigma[x] = self.reduce(self.value(sigma, w))

    def _side(self, tag, w, sigma, monoid_eqs, tris):
        a = self.u.alphabet
        if len(w) == 1 and a.is_variable(w[0]):
            return w[0]
        x = self.u.var(f"S{tag}")
        sigma[x] = self.reduce(self.value(sigma, w))
        self._equation(tag, (x,), w, sigma, monoid_eqs, tris)
        return x

    def _inequality(self, tag, x, y, vx, vy, sigma, monoid_eqs):
        u = self.u
        P, Q, R = (u.var(f"{s}{tag}") for s in ("NP", "NQ", "NR"))
        sep = _separate(u, vx, vy)
        if sep is not None:
            a, vP, b, vQ, c, vR = sep
            monoid_eqs.append(((x, a), (P, b, Q)))
            monoid_eqs.append(((y, a), (P, c, R)))
            sigma.update({P: vP, Q: vQ, R: vR})
            return
        k = 0
        while k < min(len(vx), len(vy)) and vx[k] == vy[k]:
            k += 1
        if k < len(vx) and k < len(vy):
            # no padding letter fits, but the values already differ
            monoid_eqs.append(((x,), (P, vx[k], Q)))
            monoid_eqs.append(((y,), (P, vy[k], R)))
            sigma.update({P: vx[:k], Q: vx[k + 1:], R: vy[k + 1:]})
            return
        # one side is a proper prefix of the other
        if len(vx) < len(vy):
            x, y, vx, vy = y, x, vy, vx
        b = vx[len(vy)]
        monoid_eqs.append(((x,), (y, b, Q)))
        sigma.update({Q: vx[len(vy) + 1:]})


# ---------------------------------------------------------------------------
# initial vertices


def positive_letters(universe):
    return universe.alphabet.positive(universe.letters)


def build_Winit(universe, system):
    """``#x1#...#xl#U'#V'#U'~#V'~#xl~#...#x1~#``.

    ``x1..xk`` are the target variables, followed by one letter of each
    constant pair.
    """
    if not system.equations and not system.targets:
        raise WordEqError("empty system")
    a = universe.alphabet
    xs = list(system.targets) + positive_letters(universe)
    U = _join([lhs for lhs, _ in system.equations])
    V = _join([rhs for _, rhs in system.equations])
    W = [MARKER]
    for x in xs:
        W += [x, MARKER]
    W += list(U) + [MARKER] + list(V) + [MARKER]
    W += list(involute_word(a, U)) + [MARKER] + list(involute_word(a, V)) + [MARKER]
    for x in reversed(xs):
        W += [a.bar(x), MARKER]
    return tuple(W)


def _join(words):
    out = []
    for i, w in enumerate(words):
        if i:
            out.append(MARKER)
        out.extend(w)
    return tuple(out)


def winit_variables(universe, W):
    a = universe.alphabet
    return frozenset(x for x in W if a.is_variable(x))


def mu_init(universe, W, sigma):
    """``mu`` on the constants of ``A`` and the variables of ``W``."""
    a = universe.alphabet
    images = dict(universe.mu0.images)
    for x in winit_variables(universe, W):
        v = sigma[x] if x in sigma else involute_word(a, sigma[a.bar(x)])
        images[x] = universe.mu_of(v)
    return images


def guess_mu_init(universe, equations, variables, constraints=()):
    """All consistent ``mu`` assignments for the variables (lazy generator).

    Every positive variable gets a nonzero element; an equation prunes as
    soon as all its variables are assigned. ``constraints`` are
    :class:`Member` atoms restricting single components.
    """
    a = universe.alphabet
    monoid = universe.monoid
    elements = [m for m in monoid.elements() if not monoid.is_zero(m)]
    order = []
    for lhs, rhs in equations:
        for x in lhs + rhs:
            if a.is_variable(x):
                p = min(x, a.bar(x))
                if p not in order:
                    order.append(p)
    for x in variables:
        p = min(x, a.bar(x))
        if p not in order:
            order.append(p)
    last = {}
    for lhs, rhs in equations:
        vs = [order.index(min(x, a.bar(x))) for x in lhs + rhs if a.is_variable(x)]
        last.setdefault(max(vs, default=-1), []).append((lhs, rhs))
    allowed = {}
    for c in constraints:
        allowed.setdefault(c.var, []).append(c)

    def ok_constraint(x, m):
        for c in allowed.get(x, ()):
            if c.monoid == "N":
                core = m[0] if not universe.part2 else m[0][0]
                if core != c.element:
                    return False
            else:
                k = universe.moduli.index(int(c.monoid[3:]))
                comp = m[1 + k] if not universe.part2 else m[0][3 + k]
                if comp != c.element:
                    return False
        return True

    images = dict(universe.mu0.images)
    for lhs, rhs in last.get(-1, ()):
        if universe.mu0.eval(lhs) != universe.mu0.eval(rhs):
            return

    def rec(i):
        if i == len(order):
            yield dict(images)
            return
        x = order[i]
        for m in elements:
            if not ok_constraint(x, m):
                continue
            images[x] = m
            images[a.bar(x)] = monoid.inv(m)
            mor = ConstraintMorphism(monoid, images)
            if all(mor.eval(l) == mor.eval(r) for l, r in last.get(i, ())):
                yield from rec(i + 1)
        images.pop(x, None)
        images.pop(a.bar(x), None)

    yield from rec(0)


def systems_for(universe, sigma0):
    """All branch systems witnessed by the input solution ``sigma0``."""
    builder = BranchBuilder(universe)
    out = []
    for i, branch in enumerate(universe.branches):
        s = builder.build(i, branch, sigma0)
        if s is not None:
            out.append(s)
    return out
