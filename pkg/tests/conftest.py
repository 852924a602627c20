from __future__ import annotations

import pytest
import sympy

from vanzone.algebra import numberfield as nf
from vanzone.algebra.multipoly import MultiPoly


def poly(text: str) -> MultiPoly:
    return MultiPoly.from_sympy(sympy.expand(sympy.sympify(text.replace("^", "**"))))


@pytest.fixture(autouse=True)
def fresh_tower():
    nf.reset_tower()
    yield


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
