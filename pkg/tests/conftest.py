from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from coulomb_weyl import golden
from coulomb_weyl.request import build, parse_request

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F = Fraction


def _su2(rep):
    return golden._doc([("SU", 2)], rep)


def corpus_documents():
    """The acceptance corpus plus the obstruction cross-validation extras."""
    fam = golden.su2_family_documents()
    return {
        "su2_0": fam["0"],
        "su2_H": fam["H"],
        "su2_2H": fam["2H"],
        "su2_spin3half": fam["spin3/2"],
        "b4": golden.b4_documents()["main"],
        "b3": golden.b3_documents()["main"],
        "b1": golden.b1_documents()["main"],
        "so4_sp1": golden.kobst_documents()["main"],
    }


def extra_documents():
    std = golden.std
    return {
        "su2_so6": golden.whenodd_documents()["main"],
        "sp1_H": golden.whenodd_documents()["sp1_H"],
        "sp1_so3_H": golden._doc([("Sp", 1), ("SO", 3)], {"op": "tensor", "args": [std(0), std(1)]}),
        "sp1_so3_2H": golden._doc([("Sp", 1), ("SO", 3)],
                                  {"op": "tensor", "args": [{"op": "sum", "args": [std(0), std(0)]}, std(1)]}),
    }


def load(doc):
    return build(parse_request(doc))


@pytest.fixture(scope="session")
def corpus():
    return {k: load(v) for k, v in corpus_documents().items()}


@pytest.fixture(scope="session")
def extras():
    return {k: load(v) for k, v in extra_documents().items()}


# ---------------------------------------------------------------- acceptance lines

_LINES = pytest.StashKey()


class _Criterion:
    def __init__(self, lines, number, title):
        self.lines, self.number, self.title = lines, number, title

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        line = f"criterion {self.number:>2}: {status}  {self.title}"
        if exc_type is not None:
            line += f"  ({exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        self.lines.append(line)
        print(line)
        return False


@pytest.fixture
def criterion(request):
    lines = request.config.stash.setdefault(_LINES, [])
    return lambda number, title: _Criterion(lines, number, title)


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
