import numpy as np
import pytest

from hyperline.generators import toy_hypergraph

A, B, C, D = 0, 1, 2, 3

TOY_TSV = """\
# toy: hyperedges A=0 B=1 C=2 D=3, vertices 1..12 stored as 0..11
0\t0
0\t1
0\t2
0\t3
1\t2
1\t3
1\t4
1\t5
1\t6
1\t7
1\t8
1\t9
2\t7
2\t8
2\t9
2\t10
3\t9
3\t11
"""


@pytest.fixture
def toy():
    return toy_hypergraph()


@pytest.fixture
def toy_file(tmp_path):
    path = tmp_path / "toy.tsv"
    path.write_text(TOY_TSV)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def report(number, text, ok):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
