"""Command-line front end.

Exit codes: 0 for success (and SAT), 1 for UNSAT, 2 for any error.
"""

import sys

import click

from .edt0l import is_empty, is_finite, serialize, to_dot
from .errors import BudgetError, WordEqError
from .oracle import DEFAULT_BUDGET, solve_bruteforce
from .problem import parse_problem
from .recompression import DEFAULT_STEPS, enumerate_solutions, nfa_of, solve_all


def format_solutions(problem, solutions):
    """One line per tuple: components joined by ``#``, ``1`` for the empty word."""
    lines = sorted("#".join(problem.show_word(w) for w in t) for t in solutions)
    return "".join(line + "\n" for line in lines)


class Config:
    def __init__(self, kappa, max_len, seed, budget_steps, budget_enum, fmt):
        self.kappa = kappa
        self.max_len = max_len
        self.seed = seed
        self.budget_steps = budget_steps
        self.budget_enum = budget_enum
        self.fmt = fmt

    def solve(self, problem):
        result = solve_all(problem, self.max_len, kappa=self.kappa, seed=self.seed,
                           steps=self.budget_steps, oracle_budget=self.budget_enum)
        if result.incomplete:
            raise BudgetError("; ".join(result.errors) or "witness enumeration budget exceeded")
        return result


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _positive(ctx, param, value):
    if value is not None and value < 1:
        raise click.BadParameter("must be positive")
    return value


@click.group()
@click.option("--kappa", default=100, show_default=True, callback=_positive,
              help="Alphabet bound factor: at most kappa*n letters.")
@click.option("--max-len", default=6, show_default=True, callback=_positive,
              help="Length bound L for witnesses and enumeration.")
@click.option("--seed", default=0, show_default=True, help="Seed for partition sampling.")
@click.option("--budget-steps", default=DEFAULT_STEPS, show_default=True, callback=_positive,
              help="Arc budget per witness run.")
@click.option("--budget-enum", default=DEFAULT_BUDGET, show_default=True, callback=_positive,
              help="Node budget for brute-force and language enumeration.")
@click.option("--format", "fmt", type=click.Choice(["text", "dot"]), default="text",
              show_default=True)
@click.pass_context
def main(ctx, kappa, max_len, seed, budget_steps, budget_enum, fmt):
    """Solve word equations with rational constraints."""
    ctx.obj = Config(kappa, max_len, seed, budget_steps, budget_enum, fmt)


def _guard(fn):
    """Map library errors to exit code 2."""
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (WordEqError, OSError, RecursionError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@main.command()
@click.argument("path")
@click.pass_obj
@_guard
def sat(cfg, path):
    """SAT if some solution with components of length <= L exists."""
    result = cfg.solve(_load(path))
    empty = is_empty(nfa_of(result))
    click.echo("UNSAT" if empty else "SAT")
    sys.exit(1 if empty else 0)


@main.command()
@click.argument("path")
@click.option("-o", "--output", default=None, help="Write to a file instead of stdout.")
@click.pass_obj
@_guard
def solve(cfg, path, output):
    """Write the solution NFA (text, or DOT with --format dot)."""
    system = nfa_of(cfg.solve(_load(path)))
    text = to_dot(system) if cfg.fmt == "dot" else serialize(system)
    _emit(text, output)


@main.command()
@click.argument("path")
@click.pass_obj
@_guard
def classify(cfg, path):
    """Print empty, finite or infinite."""
    click.echo(is_finite(nfa_of(cfg.solve(_load(path))))[1])


@main.command("enumerate")
@click.argument("path")
@click.pass_obj
@_guard
def enumerate_cmd(cfg, path):
    """Solutions of the NFA with every component of length <= L."""
    problem = _load(path)
    result = cfg.solve(problem)
    click.echo(format_solutions(problem, enumerate_solutions(result, cfg.max_len, cfg.budget_enum)),
               nl=False)


@main.command()
@click.argument("path")
@click.pass_obj
@_guard
def oracle(cfg, path):
    """Brute-force ground truth up to length L."""
    problem = _load(path)
    click.echo(format_solutions(problem, solve_bruteforce(problem, cfg.max_len,
                                                          budget=cfg.budget_enum)), nl=False)


@main.command()
@click.argument("path")
@click.pass_obj
@_guard
def trace(cfg, path):
    """Per-arc log of every witness run, with the forward check."""
    result = cfg.solve(_load(path))
    for i, run in enumerate(result.runs):
        click.echo(f"run {i}")
        for j, rec in enumerate(run.report.records):
            status = "ok" if rec.forward else "FAIL"
            click.echo(f"  {j} {rec.phase} {rec.kind} |W|={rec.length} "
                       f"measure={rec.measure} forward={status}")
        for name, length, bound in run.report.checkpoints:
            click.echo(f"  checkpoint {name} |W|={length} bound={bound}")
        for v in run.report.violations:
            click.echo(f"  violation {v}")


@main.command()
@click.argument("path")
@click.option("--dot", "dot", is_flag=True, help="Write DOT (the default for export).")
@click.option("-o", "--output", default=None, help="Write to a file instead of stdout.")
@click.pass_obj
@_guard
def export(cfg, path, dot, output):
    """Export the solution NFA as DOT."""
    _emit(to_dot(nfa_of(cfg.solve(_load(path)))), output)


def _emit(text, output):
    if not text.endswith("\n"):
        text += "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
