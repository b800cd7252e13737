import itertools
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import assume
from hypothesis import strategies as st

from plumbd.corpus import corpus, e8, linear_chain, prufer_edges
from plumbd.plumbing import PlumbingGraph, build_matrix

DATA = Path(__file__).parent / "data"


def cofactor_det(a):
    """Laplace expansion along the first row; exponential, for oracle use only."""
    n = len(a)
    if n == 1:
        return a[0][0]
    total = 0
    for j in range(n):
        if a[0][j]:
            minor = [row[:j] + row[j + 1:] for row in a[1:]]
            total += (-1) ** j * a[0][j] * cofactor_det(minor)
    return total


def gauss_square(c, M):
    """c^T M^{-1} c by solving M a = c with Fractions (no adjugate, no cached inverse)."""
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(ci)] for row, ci in zip(M, c)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    a = [aug[i][n] / aug[i][i] for i in range(n)]
    return sum(ci * ai for ci, ai in zip(c, a))


def coset_max_bruteforce(c, M, radius):
    """Max of the square over c + 2 M x for x in [-radius, radius]^s, with the
    lexicographically smallest maximiser."""
    n = len(M)
    best = None
    for x in itertools.product(range(-radius, radius + 1), repeat=n):
        k = tuple(ci + 2 * sum(M[i][j] * x[j] for j in range(n)) for i, ci in enumerate(c))
        sq = gauss_square(k, M)
        if best is None or sq > best[0] or (sq == best[0] and k < best[1]):
            best = (sq, k)
    return best


@pytest.fixture(scope="session")
def acceptance_corpus():
    """Named fixtures plus 100 seeded random negative-definite trees."""
    return corpus(seed=0, random_count=100)


@pytest.fixture
def m_minus1():
    return build_matrix(PlumbingGraph.from_weights([-1]))


@pytest.fixture
def m_minus2():
    return build_matrix(PlumbingGraph.from_weights([-2]))


@pytest.fixture
def m_chain23():
    return build_matrix(linear_chain([-2, -3]))


@pytest.fixture(scope="session")
def m_e8():
    return build_matrix(e8())


@st.composite
def trees(draw, max_vertices=5, weights=(-5, -1)):
    s = draw(st.integers(1, max_vertices))
    seq = draw(st.lists(st.integers(1, s), min_size=max(s - 2, 0), max_size=max(s - 2, 0)))
    ws = draw(st.lists(st.integers(*weights), min_size=s, max_size=s))
    return PlumbingGraph.from_weights(ws, prufer_edges(seq, s) if s > 1 else [])


@st.composite
def nd_matrices(draw, max_vertices=4):
    g = draw(trees(max_vertices))
    try:
        m = build_matrix(g)
    except ValueError:
        m = None
    assume(m is not None and m.negative_definite)
    return m
