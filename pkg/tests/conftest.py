"""Shared fixtures and brute-force oracles.

The oracles work on Python objects with an explicit operation and never
touch the library's tables, so they stay independent of the code under test.
"""
from __future__ import annotations

import itertools

import pytest

from sgt.core import load_semigroup
from sgt.families import right_group, semilattice_chain, symmetric_inverse_monoid


class Oracle:
    """A semigroup given as a carrier list and a Python operation."""

    def __init__(self, elements, op):
        self.elements = list(elements)
        self.op = op

    def idx(self, x):
        return self.elements.index(x)

    def inverses(self, a):
        op = self.op
        return {b for b in self.elements if op(op(a, b), a) == a and op(op(b, a), b) == b}

    def idempotents(self):
        return {e for e in self.elements if self.op(e, e) == e}

    def leq(self, a, b):
        E = self.idempotents()
        return (any(self.op(e, b) == a for e in E)
                and any(self.op(b, f) == a for f in E))


def z2_r2_oracle():
    return Oracle([(h, x) for h in range(2) for x in range(2)],
                  lambda a, b: ((a[0] + b[0]) % 2, b[1]))


def pinj_oracle(n):
    maps = []
    for r in range(n + 1):
        for dom in itertools.combinations(range(n), r):
            for img in itertools.permutations(range(n), r):
                maps.append(frozenset(zip(dom, img)))

    def comp(f, g):  # f after g
        fd = dict(f)
        return frozenset((x, fd[y]) for x, y in g if y in fd)

    return Oracle(maps, comp)


@pytest.fixture
def rz2():
    return load_semigroup(2, [[0, 1], [0, 1]])


@pytest.fixture
def chain2():
    return semilattice_chain(2)


@pytest.fixture
def z2():
    return load_semigroup(2, [[0, 1], [1, 0]])


@pytest.fixture
def rgroup():
    """Z₂ × R₂ with the swap star; (h, x) has index 2h + x."""
    return right_group(2, 2, "swap")


@pytest.fixture
def i2():
    return symmetric_inverse_monoid(2)


@pytest.fixture
def monogenic():
    return load_semigroup(2, [[1, 1], [1, 1]])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
