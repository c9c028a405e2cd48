import sys
from pathlib import Path

import pytest

from wordeq.problem import parse_problem

CORPUS = Path(__file__).parent / "corpus"

Z2Z3 = """mode free-product
factor finite-group Z2 s table 1
factor finite-group Z3 t u table u 1 ; 1 t
vars X
eq X = X
"""

FREE2 = """mode free-group
factor free-group a b
vars X
eq X = X
"""


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module and module.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(module.VERDICTS):
            terminalreporter.write_line(module.VERDICTS[n])


def load(name):
    return parse_problem((CORPUS / f"{name}.weq").read_text())


def corpus_names():
    return sorted(p.stem for p in CORPUS.glob("*.weq"))


@pytest.fixture
def z2z3():
    return parse_problem(Z2Z3)


@pytest.fixture
def free2():
    return parse_problem(FREE2)
