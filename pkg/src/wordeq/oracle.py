"""Brute-force ground truth.

Solutions are enumerated over geodesic words of bounded length, so every
returned assignment is a solution in reduced words. The oracle shares no
code with the solver beyond the geodesic rules of the free product.
"""

from .alphabet import involute_word
from .errors import BudgetError
from .freeproduct import enumerate_geodesics, pi_normal_form
from .problem import And, Or, Not, Eq, Member, member_holds

DEFAULT_BUDGET = 20_000_000


def free_reduce(alphabet, w):
    """Cancel factors ``a a~`` until none is left."""
    partner = alphabet.partner
    out = []
    for x in w:
        if out and partner[out[-1]] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def enumerate_reduced(spec, max_len):
    """Geodesic (reduced) words of length at most ``max_len``, length-lex."""
    return enumerate_geodesics(spec, max_len)


def _vars_of(alphabet, f):
    if isinstance(f, (And, Or)):
        out = set()
        for p in f.parts:
            out |= _vars_of(alphabet, p)
        return out
    if isinstance(f, Not):
        return _vars_of(alphabet, f.part)
    if isinstance(f, Member):
        return {min(f.var, alphabet.bar(f.var))}
    return {min(x, alphabet.bar(x)) for x in f.lhs + f.rhs if alphabet.is_variable(x)}


class _Evaluator:
    def __init__(self, problem):
        self.problem = problem
        self.alphabet = problem.alphabet
        self.spec = problem.spec
        self.monoid_mode = all(f.kind == "free-monoid" for f in self.spec.factors)

    def value(self, sigma, x):
        if not self.alphabet.is_variable(x):
            return (x,)
        if x in sigma:
            return sigma[x]
        return involute_word(self.alphabet, sigma[self.alphabet.bar(x)])

    def image(self, sigma, w):
        out = []
        for x in w:
            out.extend(self.value(sigma, x))
        return tuple(out)

    def normal(self, w):
        return w if self.monoid_mode else pi_normal_form(w, self.spec)

    def holds(self, sigma, f):
        if isinstance(f, And):
            return all(self.holds(sigma, p) for p in f.parts)
        if isinstance(f, Or):
            return any(self.holds(sigma, p) for p in f.parts)
        if isinstance(f, Not):
            return not self.holds(sigma, f.part)
        if isinstance(f, Member):
            return member_holds(self.problem, f, self.value(sigma, f.var))
        same = self.normal(self.image(sigma, f.lhs)) == self.normal(self.image(sigma, f.rhs))
        return same if isinstance(f, Eq) else not same

    def _known(self, sigma, w):
        """Longest determined prefix of the image of ``w``."""
        out = []
        for x in w:
            if self.alphabet.is_variable(x) and min(x, self.alphabet.bar(x)) not in sigma:
                return tuple(out), False
            out.extend(self.value(sigma, x))
        return tuple(out), True

    def prefix_ok(self, sigma, eq):
        """Cheap necessary condition for a monoid equation under a partial assignment."""
        inv = self.alphabet
        l1, d1 = self._known(sigma, eq.lhs)
        r1, e1 = self._known(sigma, eq.rhs)
        k = min(len(l1), len(r1))
        if l1[:k] != r1[:k]:
            return False
        if d1 and e1:
            return l1 == r1
        l2, _ = self._known(sigma, involute_word(inv, eq.lhs))
        r2, _ = self._known(sigma, involute_word(inv, eq.rhs))
        k = min(len(l2), len(r2))
        return l2[:k] == r2[:k]


def solve_bruteforce(problem, max_len, formula=None, variables=None, target=None,
                     budget=DEFAULT_BUDGET):
    """All target tuples of solutions whose variable images have length <= ``max_len``.

    ``variables`` defaults to every positive variable of the problem; all of
    them are quantified over bounded geodesic words and the result is the
    projection onto ``target``.
    """
    ev = _Evaluator(problem)
    alphabet = problem.alphabet
    formula = problem.formula if formula is None else formula
    variables = list(problem.variables if variables is None else variables)
    target = list(problem.target if target is None else target)
    domain = enumerate_reduced(problem.spec, max_len)

    parts = formula.parts if isinstance(formula, And) else (formula,)
    order = []
    for p in parts:
        for v in sorted(_vars_of(alphabet, p)):
            if v not in order and v in variables:
                order.append(v)
    order += [v for v in variables if v not in order]
    checks = [[] for _ in order]
    partial = [[] for _ in order]
    for p in parts:
        need = _vars_of(alphabet, p)
        last = max((order.index(v) for v in need), default=-1)
        if last < 0:
            if not ev.holds({}, p):
                return set()
            continue
        checks[last].append(p)
        if ev.monoid_mode and isinstance(p, Eq):
            for i in range(last):
                partial[i].append(p)

    results = set()
    sigma = {}
    steps = 0

    def value(v):
        return sigma[v] if v in sigma else involute_word(alphabet, sigma[alphabet.bar(v)])

    def rec(i):
        nonlocal steps
        if i == len(order):
            results.add(tuple(value(v) for v in target))
            return
        v = order[i]
        for w in domain:
            steps += 1
            if steps > budget:
                raise BudgetError("oracle budget exceeded")
            sigma[v] = w
            if all(ev.prefix_ok(sigma, p) for p in partial[i]) and \
                    all(ev.holds(sigma, p) for p in checks[i]):
                rec(i + 1)
        del sigma[v]

    rec(0)
    return results


def oracle_solutions(problem, max_len, budget=DEFAULT_BUDGET):
    return solve_bruteforce(problem, max_len, budget=budget)
