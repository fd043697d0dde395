from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

EX1 = "z2^4+z3^3+t*z1^2*z2^4*z3^3"
EX2 = "z2^2+z3^2+z1*z2^2*z3^2+t*z1*z2^2"
EX3 = "z2^2+z3^2+t*z1^2*z2^2*z3^2"
NONCONSTANT = "z2^2+z3^4+t*z3^2"
BRIANCON_SPEDER = "z3^5+t*z2^6*z3+z2^7*z1+z1^15"

# admissible line-singularity families with the mode they are admissible in
LINE_CORPUS = {"ex1": (EX1, "strict"), "ex2": (EX2, "per_vertex"), "ex3": (EX3, "strict")}

SAMPLES = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-2))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
