"""Acceptance criteria 1-11.

Each ``test_criterion_NN`` prints one PASS/FAIL line (collected by conftest.py);
running this file directly does the same without pytest.
"""
import random
import time
from fractions import Fraction
from math import factorial

import pytest

from hilbgw import spectrum as S
from hilbgw.combinatorics import bernoulli, sigma
from hilbgw.genus1 import (d_series, d_series_qexp, degree0_identity_check, exxx_check,
                           hodge_family_series, nl_projection_check, ones_series, section5_check,
                           table_audit, xcce_series)
from hilbgw.hilb import commutativity_check, trace_identity_check
from hilbgw.kernel import parse_ratfunc
from hilbgw.qmodular import lemma_trace_check
from hilbgw.symfun import oracle_run

PREF = "-1/24*(t1+t2)^2/(t1*t2)"

# displayed closed forms of <D>_1, as rational functions of q times PREF
CLOSED = {
    2: "(q+1)/(q-1)",
    3: "(5*q^3-3*q^2-3*q+5)/((q-1)*(q^2-q+1))",
    4: "(35*q^5-28*q^4+23*q^3+23*q^2-28*q+35)/(2*(q-1)*(q^2+1)*(q^2-q+1))",
    5: "-(272*q^9-539*q^8+760*q^7-629*q^6+302*q^5+302*q^4-629*q^3+760*q^2-539*q+272)"
       "/(6*(q-1)*(q^2+1)*(q^2-q+1)*(q^4-q^3+q^2-q+1))",
}

QEXP = {
    3: [-5, -7, -1, 2, -1, -7, -10, -7],
    4: ["-35/2", -21, -1, -3, -17, -21, -19, -21],
    5: ["136/3", "277/6", "-41/6", "17/3", "151/6", "127/6", "101/3", "277/6"],
}


class Budget:
    """Wall-clock bound for one criterion."""

    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        print(f"elapsed {self.elapsed:.1f}s (budget {self.seconds}s)")
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s"


def test_criterion_01_closed_forms():
    with Budget(10):
        bad = [n for n, body in CLOSED.items() if d_series(n) != parse_ratfunc(f"{PREF}*{body}")]
    assert bad == [], f"closed form mismatch at n={bad}"


def test_criterion_02_qexp():
    with Budget(5):
        bad = []
        for n, coeffs in QEXP.items():
            s = d_series_qexp(n, 7)
            if [s[k] for k in range(8)] != [Fraction(c) for c in coeffs]:
                bad.append(n)
    assert bad == [], f"q-expansion mismatch at n={bad}"


def test_criterion_03_trace_identity():
    with Budget(120):
        rep = trace_identity_check(7, symbolic_max=5, specs=((1, 5), (2, 7)))
    assert rep.passed, rep.failure


def test_criterion_04_section5():
    with Budget(600):
        rep = section5_check(((1, 5), (2, 7)))
    assert rep.passed, rep.failure


def test_criterion_05_ones_values():
    with Budget(1):
        values = [ones_series(n)[0] for n in range(2, 6)]
    assert values == [Fraction(5, 2), Fraction(29, 6), Fraction(109, 12), Fraction(907, 60)]


def test_criterion_06_degree0():
    with Budget(30):
        rep = degree0_identity_check(12)
    assert rep.passed, rep.failure


def test_criterion_07_lemma():
    with Budget(60):
        rep = lemma_trace_check(7, 11)
    assert rep.passed, rep.failure


def test_criterion_08_hodge():
    with Budget(1):
        bad = []
        for g in range(2, 7):
            s = hodge_family_series(g, 12)
            b = abs(bernoulli(2 * g - 2))
            for n in range(1, 13):
                if s[n] != Fraction(1, 24) * b * sigma(2 * g - 1, n) / factorial(2 * g - 2):
                    bad.append((g, n))
        # g = 1 against -E_2/576 with E_2 = 1 - 24 sum sigma_1(n) Q^n
        s1 = hodge_family_series(1, 12)
        e2 = [Fraction(1)] + [Fraction(-24 * sigma(1, n)) for n in range(1, 13)]
        if [s1[n] for n in range(13)] != [c / -576 for c in e2]:
            bad.append((1, None))
    assert bad == []


@pytest.mark.slow
def test_criterion_09_wronskian():
    with Budget(1800):
        certs = {n: S.wronskian_certificate(n) for n in range(2, 8)}
    for n, cert in certs.items():
        print(f"n={n}: {cert.verdict} at ({cert.t1},{cert.t2}), index {cert.first_nonzero_index}")
    assert all(c.verdict == "pass" for c in certs.values())


@pytest.mark.slow
def test_criterion_10_symfun_oracle():
    with Budget(120):
        trials = list(oracle_run(200, 2024, n_max=4, m_max=2, max_order=3))
    mismatches = [(str(e), n, m) for e, n, m, direct, via in trials if direct != via]
    assert len(trials) == 200
    assert mismatches == []


def test_criterion_11_property_suites():
    with Budget(300):
        failures = []
        for n in range(2, 8):
            spec, _ = S.resolve_specialization(n)
            if not S.vieta_check(n, spec, 8).passed:
                failures.append(f"vieta n={n}")
        for rep in [commutativity_check(4), exxx_check(7), xcce_series(4, 8)[1], table_audit()]:
            if not rep.passed:
                failures.append(f"{rep.name}: {rep.failure}")
        for g in (2, 3, 4):
            rep = nl_projection_check(g, 8)
            if not rep.passed:
                failures.append(f"{rep.name}: {rep.failure}")
        # t1 <-> t2 symmetry of the emitted symbolic series
        for n in range(2, 8):
            d = d_series(n)
            if d.swap("t1", "t2") != d:
                failures.append(f"t-symmetry n={n}")
            if ones_series(n)[1].swap("t1", "t2") != ones_series(n)[1]:
                failures.append(f"t-symmetry of the (1^n) prefactor n={n}")
    assert failures == []


if __name__ == "__main__":
    import sys

    status = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
                print(f"{name}: PASS")
            except AssertionError as exc:
                status = 1
                print(f"{name}: FAIL {exc}")
    sys.exit(status)
