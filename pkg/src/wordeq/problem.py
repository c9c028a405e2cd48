"""Problem model and the line-oriented input format.

Example::

    mode free-monoid
    factor free-monoid a b
    vars X
    eq a X = X a
    constraint X in len2:0
    target X
"""

from dataclasses import dataclass, field

from .alphabet import Alphabet, VARIABLE
from .errors import ParseError, WordEqError
from .freeproduct import (FREE_GROUP, FREE_MONOID, FINITE_GROUP, Factor, FreeProductSpec,
                          finite_group_factor)
from .monoids import ONE

MODES = (FREE_GROUP, FREE_MONOID, "free-product")


@dataclass(frozen=True)
class Eq:
    lhs: tuple
    rhs: tuple


@dataclass(frozen=True)
class Neq:
    lhs: tuple
    rhs: tuple


@dataclass(frozen=True)
class Member:
    """``var`` maps to ``element`` under the constraint monoid ``monoid``.

    ``monoid`` is ``"N"`` (first and last letter, ``ONE`` for the empty
    word) or ``"len<m>"`` (length modulo ``m``).
    """
    var: int
    monoid: str
    element: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Not:
    part: object


def monoid_elements(problem, monoid):
    """All elements of a constraint monoid, in a fixed order."""
    if monoid == "N":
        letters = problem.spec.letters
        return [ONE] + [(a, b) for a in letters for b in letters]
    if monoid.startswith("len"):
        return list(range(int(monoid[3:])))
    raise WordEqError(f"unknown constraint monoid {monoid!r}")


def member_holds(problem, atom, word):
    if atom.monoid == "N":
        if not word:
            return atom.element == ONE
        return atom.element == (word[0], word[-1])
    return len(word) % int(atom.monoid[3:]) == atom.element


@dataclass
class Problem:
    mode: str
    alphabet: Alphabet
    spec: FreeProductSpec
    variables: list
    formula: object
    target: list = field(default_factory=list)
    source_factors: list = field(default_factory=list)

    def bar(self, x):
        return self.alphabet.bar(x)

    def atoms(self):
        out = []

        def walk(f):
            if isinstance(f, (And, Or)):
                for p in f.parts:
                    walk(p)
            elif isinstance(f, Not):
                walk(f.part)
            else:
                out.append(f)
        walk(self.formula)
        return out

    def show_word(self, w):
        return " ".join(self.alphabet.name(x) for x in w) if w else "1"

    def to_text(self):
        """Inverse of :func:`parse_problem` up to whitespace and comments."""
        lines = [f"mode {self.mode}"]
        lines.extend(self.source_factors)
        if self.variables:
            lines.append("vars " + " ".join(self.alphabet.name(v) for v in self.variables))
        for part in (self.formula.parts if isinstance(self.formula, And) else (self.formula,)):
            lines.append(self._atom_line(part))
        if self.target:
            lines.append("target " + " ".join(self.alphabet.name(v) for v in self.target))
        return "\n".join(lines) + "\n"

    def _atom_line(self, f):
        if isinstance(f, Eq):
            return f"eq {self.show_word(f.lhs)} = {self.show_word(f.rhs)}"
        if isinstance(f, Neq):
            return f"neq {self.show_word(f.lhs)} != {self.show_word(f.rhs)}"
        if isinstance(f, Member):
            return f"constraint {self.alphabet.name(f.var)} in {self._element_text(f)}"
        if isinstance(f, Not) and isinstance(f.part, Member):
            m = f.part
            return f"constraint {self.alphabet.name(m.var)} notin {self._element_text(m)}"
        if isinstance(f, Or) and all(isinstance(p, Eq) for p in f.parts):
            return "eq " + " or ".join(f"{self.show_word(p.lhs)} = {self.show_word(p.rhs)}"
                                       for p in f.parts)
        raise WordEqError(f"formula {f!r} has no textual form")

    def _element_text(self, m):
        if m.monoid == "N":
            if m.element == ONE:
                return "N:1"
            a, b = m.element
            return f"N:{self.alphabet.name(a)}.{self.alphabet.name(b)}"
        return f"{m.monoid}:{m.element}"


def _word(alphabet, tokens, lineno):
    if tokens == ["1"]:
        return ()
    out = []
    for t in tokens:
        if t not in alphabet.index:
            raise ParseError(f"unknown symbol {t!r}", lineno)
        out.append(alphabet.index[t])
    return tuple(out)


def _constraint(alphabet, text, lineno, letters):
    if ":" not in text:
        raise ParseError(f"constraint {text!r} needs <monoid>:<element>", lineno)
    mon, el = text.split(":", 1)
    if mon == "N":
        if el == "1":
            return mon, ONE
        parts = el.split(".")
        if len(parts) != 2 or any(p not in alphabet.index for p in parts):
            raise ParseError(f"bad N element {el!r}", lineno)
        a, b = (alphabet.index[p] for p in parts)
        if a not in letters or b not in letters:
            raise ParseError(f"bad N element {el!r}", lineno)
        return mon, (a, b)
    if mon.startswith("len") and mon[3:].isdigit() and int(mon[3:]) >= 1:
        m = int(mon[3:])
        if not el.isdigit() or int(el) >= m:
            raise ParseError(f"bad length residue {el!r}", lineno)
        return mon, int(el)
    raise ParseError(f"unknown constraint monoid {mon!r}", lineno)


def parse_problem(text):
    """Parse the input format; raises :class:`ParseError` with line numbers."""
    alphabet = Alphabet()
    factors = []
    factor_lines = []
    variables = []
    conj = []
    target = []
    mode = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "mode":
            if mode is not None:
                raise ParseError("duplicate mode line", lineno)
            if len(rest) != 1 or rest[0] not in MODES:
                raise ParseError(f"mode must be one of {', '.join(MODES)}", lineno)
            mode = rest[0]
        elif head == "factor":
            if variables:
                raise ParseError("factors must precede vars", lineno)
            factors.append(_factor(alphabet, rest, lineno))
            factor_lines.append(line)
        elif head == "vars":
            for name in rest:
                if name in alphabet.index or name.endswith("~"):
                    raise ParseError(f"duplicate or invalid variable {name!r}", lineno)
                if not name[0].isupper():
                    raise ParseError(f"variable {name!r} must start with an uppercase letter", lineno)
                variables.append(alphabet.add_pair(name, name + "~", VARIABLE)[0])
        elif head == "eq":
            alts = []
            for alt in " ".join(rest).split(" or "):
                sides = alt.split("=")
                if len(sides) != 2 or not sides[0].split() or not sides[1].split():
                    raise ParseError("equation must have the form U = V", lineno)
                alts.append(Eq(_word(alphabet, sides[0].split(), lineno),
                               _word(alphabet, sides[1].split(), lineno)))
            conj.append(alts[0] if len(alts) == 1 else Or(tuple(alts)))
        elif head == "neq":
            body = " ".join(rest)
            if "!=" in body:
                lhs, rhs = body.split("!=", 1)
                lhs, rhs = lhs.split(), rhs.split()
            elif len(rest) == 2:
                lhs, rhs = rest[:1], rest[1:]
            else:
                raise ParseError("inequality must have the form U != V", lineno)
            if not lhs or not rhs:
                raise ParseError("inequality must have the form U != V", lineno)
            conj.append(Neq(_word(alphabet, lhs, lineno), _word(alphabet, rhs, lineno)))
        elif head == "constraint":
            if len(rest) != 3 or rest[1] not in ("in", "notin"):
                raise ParseError("constraint must read: constraint X in <monoid>:<element>", lineno)
            var = alphabet.index.get(rest[0])
            if var is None or alphabet.kinds[var] != VARIABLE:
                raise ParseError(f"unknown variable {rest[0]!r}", lineno)
            letters = {a for f in factors for a in f.letters}
            mon, el = _constraint(alphabet, rest[2], lineno, letters)
            atom = Member(var, mon, el)
            conj.append(atom if rest[1] == "in" else Not(atom))
        elif head == "target":
            for name in rest:
                v = alphabet.index.get(name)
                if v is None or alphabet.kinds[v] != VARIABLE:
                    raise ParseError(f"unknown target variable {name!r}", lineno)
                target.append(v)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if mode is None:
        raise ParseError("missing mode line")
    if not factors:
        raise ParseError("at least one factor is required")
    kinds = {f.kind for f in factors}
    if mode == FREE_GROUP and kinds != {FREE_GROUP}:
        raise ParseError("free-group mode accepts only free-group factors")
    if mode == FREE_MONOID and kinds != {FREE_MONOID}:
        raise ParseError("free-monoid mode accepts only free-monoid factors")
    if mode in (FREE_GROUP, FREE_MONOID) and len(factors) > 1:
        letters = [a for f in factors for a in f.letters]
        factors = [Factor(mode, letters)]
    spec = FreeProductSpec(alphabet, factors)
    if mode == "free-product" and not spec.is_infinite():
        raise ParseError("the free product must be infinite")
    if not conj:
        raise ParseError("no equations or constraints")
    return Problem(mode, alphabet, spec, variables,
                   And(tuple(conj)), target or list(variables), factor_lines)


def _factor(alphabet, rest, lineno):
    if not rest:
        raise ParseError("factor needs a kind", lineno)
    kind, args = rest[0], rest[1:]
    for name in args:
        if name in alphabet.index and kind != FREE_MONOID:
            raise ParseError(f"duplicate letter {name!r}", lineno)
    if kind == FREE_GROUP:
        letters = []
        for name in args:
            if not name[0].islower() or name.endswith("~"):
                raise ParseError(f"invalid letter name {name!r}", lineno)
            letters.extend(alphabet.add_pair(name, name + "~"))
        return Factor(FREE_GROUP, letters)
    if kind == FREE_MONOID:
        if "inv" in args:
            i = args.index("inv")
            names, invs = args[:i], args[i + 1:]
        else:
            names, invs = args, []
        pairs = {}
        for item in invs:
            if item.count("=") != 1:
                raise ParseError(f"bad involution entry {item!r}", lineno)
            x, y = item.split("=")
            if x not in names or y not in names:
                raise ParseError(f"involution entry {item!r} uses undeclared letters", lineno)
            if x in pairs or y in pairs:
                raise ParseError(f"letter paired twice in {item!r}", lineno)
            pairs[x] = y
            pairs[y] = x
        letters = []
        for name in names:
            if name in alphabet.index:
                if name in pairs and alphabet.index[name] in letters:
                    continue
                raise ParseError(f"duplicate letter {name!r}", lineno)
            if not name[0].islower() or name.endswith("~"):
                raise ParseError(f"invalid letter name {name!r}", lineno)
            if name in pairs and pairs[name] == name:
                letters.append(alphabet.add_self(name))
            elif name in pairs:
                letters.extend(alphabet.add_pair(name, pairs[name]))
            else:
                letters.extend(alphabet.add_pair(name, name + "~"))
        return Factor(FREE_MONOID, letters)
    if kind == FINITE_GROUP:
        if "table" not in args or len(args) < 3:
            raise ParseError("finite-group factor needs: name elements table rows", lineno)
        i = args.index("table")
        name, elements = args[0], args[1:i]
        rows = [r.split() for r in " ".join(args[i + 1:]).split(";")]
        try:
            return finite_group_factor(alphabet, name, elements, rows)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    raise ParseError(f"unknown factor kind {kind!r}", lineno)
