"""Characteristic vectors and spin^c classes.

A characteristic vector is stored by its coordinates ``c`` in the dual basis,
so ``c`` is characteristic iff ``c = weights (mod 2)``. Its square is
``c^T M^{-1} c``: the coordinates of the homology class ``a = M^{-1} c``
satisfy ``a^T M a = c^T M^{-1} c``.

Two characteristic vectors give the same spin^c structure iff their
difference lies in ``2 M Z^s``. The classes are indexed through the Smith
normal form ``U M V = D`` of the plumbing matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import List, Sequence, Tuple

from .exact import SingularMatrix, matvec, smith_normal_form
from .plumbing import PlumbingMatrix

Vector = Tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


class NotCharacteristic(ValueError):
    pass


@dataclass(frozen=True)
class SpincClass:
    """One spin^c structure.

    ``rep`` is the representative produced by the enumeration
    (``weights + 2u`` for the Smith-coordinate coset representative ``u``);
    :func:`canonical_rep` gives the square-maximising one. ``coords`` are the
    coordinates of the class in ``Z/d_1 + ... + Z/d_s``.
    """

    index: int
    rep: Vector
    coords: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"index": self.index, "rep": list(self.rep)}


def _check_dim(c: Sequence[int], m: PlumbingMatrix) -> None:
    if len(c) != m.s:
        raise DimensionMismatch(f"vector has length {len(c)}, expected {m.s}")


def is_characteristic(c: Sequence[int], m: PlumbingMatrix) -> bool:
    _check_dim(c, m)
    return all((ci - wi) % 2 == 0 for ci, wi in zip(c, m.weights))


def require_characteristic(c: Sequence[int], m: PlumbingMatrix) -> Vector:
    if not is_characteristic(c, m):
        raise NotCharacteristic(f"{tuple(c)} is not characteristic for weights {m.weights}")
    return tuple(int(x) for x in c)


def square(c: Sequence[int], m: PlumbingMatrix) -> Fraction:
    """``c^T M^{-1} c`` as an exact rational."""
    _check_dim(c, m)
    num = sum(ci * ai for ci, ai in zip(c, matvec(m.adjugate, c)))
    return Fraction(num, m.det)


def same_spinc(c1: Sequence[int], c2: Sequence[int], m: PlumbingMatrix) -> bool:
    """Whether ``2 M z = c1 - c2`` has an integer solution ``z``."""
    _check_dim(c1, m)
    _check_dim(c2, m)
    diff = [a - b for a, b in zip(c1, c2)]
    # z = adj(M) diff / (2 det)
    return all(x % (2 * m.det) == 0 for x in matvec(m.adjugate, diff))


@dataclass(frozen=True)
class _SmithData:
    diag: Tuple[int, ...]
    U: Tuple[Tuple[int, ...], ...]
    U_inv: Tuple[Tuple[int, ...], ...]


@lru_cache(maxsize=256)
def _smith(M: Tuple[Tuple[int, ...], ...]) -> _SmithData:
    D, U, U_inv, _ = smith_normal_form(M)
    diag = tuple(D[i][i] for i in range(len(M)))
    if any(d == 0 for d in diag):
        raise SingularMatrix("plumbing matrix is singular; spin^c structures are infinite")
    return _SmithData(diag, tuple(map(tuple, U)), tuple(map(tuple, U_inv)))


def spinc_count(m: PlumbingMatrix) -> int:
    return abs(m.det)


def enumerate_spinc(m: PlumbingMatrix) -> List[SpincClass]:
    """All ``|det M|`` spin^c classes, ordered lexicographically in Smith coordinates."""
    snf = _smith(m.M)
    w = m.weights
    classes = []
    for index, coords in enumerate(product(*(range(d) for d in snf.diag))):
        u = matvec(snf.U_inv, coords)
        rep = tuple(wi + 2 * ui for wi, ui in zip(w, u))
        classes.append(SpincClass(index, rep, tuple(coords)))
    return classes


def class_coords(c: Sequence[int], m: PlumbingMatrix) -> Tuple[int, ...]:
    """Smith coordinates of the class of a characteristic vector."""
    c = require_characteristic(c, m)
    snf = _smith(m.M)
    u = [(ci - wi) // 2 for ci, wi in zip(c, m.weights)]
    return tuple(x % d for x, d in zip(matvec(snf.U, u), snf.diag))


def class_index(c: Sequence[int], m: PlumbingMatrix) -> int:
    """Index (as in :func:`enumerate_spinc`) of the class containing ``c``."""
    snf = _smith(m.M)
    index = 0
    for x, d in zip(class_coords(c, m), snf.diag):
        index = index * d + x
    return index


def class_of(c: Sequence[int], m: PlumbingMatrix) -> SpincClass:
    c = require_characteristic(c, m)
    return SpincClass(class_index(c, m), c, class_coords(c, m))


def chi(c: Sequence[int], x: Sequence[int], m: PlumbingMatrix) -> int:
    """``-(c.x + x^T M x) / 2``; an integer whenever ``c`` is characteristic."""
    _check_dim(c, m)
    _check_dim(x, m)
    mx = matvec(m.M, x)
    total = sum(ci * xi for ci, xi in zip(c, x)) + sum(xi * yi for xi, yi in zip(x, mx))
    if total % 2:
        raise AssertionError(f"c.x + x^T M x is odd for c={tuple(c)}, x={tuple(x)}; c is not characteristic")
    return -total // 2


def translate(c: Sequence[int], x: Sequence[int], m: PlumbingMatrix) -> Vector:
    """``c + 2 M x``, another representative of the same class."""
    return tuple(ci + 2 * yi for ci, yi in zip(c, matvec(m.M, x)))


def canonical_rep(cls: SpincClass, m: PlumbingMatrix) -> Vector:
    """Square-maximising representative, lexicographically smallest among ties."""
    from .optimizer import max_square_in_class

    return max_square_in_class(cls.rep, m)[1]
