"""Certified maximisation of the square over a spin^c class.

For characteristic ``c`` and integer ``x`` the identity

    square(c + 2 M x) = square(c) - 8 chi(c, x)

turns the maximum of the square over the class of ``c`` into the minimum of
the integer quadratic ``chi(c, .)`` over ``Z^s``. Since ``M`` is negative
definite, ``chi`` is strictly convex with real minimiser ``x* = -M^{-1} c / 2``
and ``chi(x) = chi(x*) + (x - x*)^T (-M) (x - x*) / 2``. Any lower bound
``lam`` on the smallest eigenvalue of ``-M`` therefore confines every integer
point with ``chi <= V`` to the ball ``|x - x*|^2 <= 2 (V - chi(x*)) / lam``.

:func:`min_chi` finds a good ``V`` by coordinate descent and then scans that
ball exhaustively, so its answer is a proof, not a heuristic. All arithmetic
is on Python integers; points are scaled by the common denominator of ``x*``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, isqrt, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .charlattice import (SpincClass, Vector, enumerate_spinc, require_characteristic, square,
                          translate)
from .exact import matvec
from .plumbing import NotNegativeDefinite, PlumbingMatrix


class RadiusTooSmall(ValueError):
    """The brute-force box does not contain the certified search ball."""


@dataclass(frozen=True)
class MinChiResult:
    min_value: int
    argmin: Vector
    search_radius_sq: Fraction
    points_scanned: int
    minimizers: Tuple[Vector, ...] = ()
    certified_radius_sq: Fraction = Fraction(0)


@dataclass(frozen=True)
class DInvariantReport:
    class_index: int
    d: Fraction
    maximizer: Vector
    max_square: Fraction
    rep: Vector = ()

    def to_dict(self) -> dict:
        return {
            "index": self.class_index,
            "rep": list(self.rep),
            "maximizer": list(self.maximizer),
            "max_square": self.max_square,
            "d": self.d,
        }


def _require_nd(m: PlumbingMatrix) -> None:
    if not m.negative_definite:
        raise NotNegativeDefinite("optimizer requires a negative definite plumbing matrix")


def _scaled_center(c: Sequence[int], m: PlumbingMatrix) -> Tuple[List[int], int]:
    """Numerators ``p`` and positive denominator ``q`` with ``x* = p / q``."""
    sign = 1 if m.det > 0 else -1
    p = [-sign * v for v in matvec(m.adjugate, c)]
    return p, 2 * abs(m.det)


def continuous_minimizer(c: Sequence[int], m: PlumbingMatrix) -> Tuple[Fraction, ...]:
    """Stationary point ``x* = -M^{-1} c / 2`` of the real extension of chi."""
    _require_nd(m)
    p, q = _scaled_center(c, m)
    return tuple(Fraction(pi, q) for pi in p)


def chi_at_center(c: Sequence[int], m: PlumbingMatrix) -> Fraction:
    """Value of the real extension of chi at ``x*``, equal to ``square(c) / 8``."""
    return square(c, m) / 8


def lambda_lower_bound(m: PlumbingMatrix) -> Fraction:
    """``1 / ||(-M)^{-1}||_inf``, a certified lower bound on ``lambda_min(-M)``.

    Every eigenvalue of ``(-M)^{-1}`` is bounded by its induced infinity norm.
    """
    _require_nd(m)
    row_sums = [sum(abs(a) for a in row) for row in m.adjugate]
    return Fraction(abs(m.det), max(row_sums))


def _round_half_up(p: int, q: int) -> int:
    return (2 * p + q) // (2 * q)


def _chi_int(c: Sequence[int], x: Sequence[int], M) -> int:
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = M[i]
            total += xi * (c[i] + sum(row[j] * x[j] for j in range(len(x))))
    return -total // 2


def _descend(c: Vector, x: List[int], M) -> int:
    """Unit-step coordinate descent from ``x`` (modified in place); returns chi(x)."""
    n = len(x)
    mx = matvec(M, x)
    value = _chi_int(c, x, M)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            for step in (1, -1):
                # chi(x + step e_i) - chi(x)
                delta = -(step * c[i] + 2 * step * mx[i] + M[i][i]) // 2
                if delta < 0:
                    x[i] += step
                    for j in range(n):
                        mx[j] += step * M[j][i]
                    value += delta
                    improved = True
                    break
    return value


def _ball_budget(radius_sq: Fraction, q: int) -> int:
    """Integer budget ``B`` with ``|q x - p|^2 <= B`` iff ``|x - x*|^2 <= radius_sq``."""
    scaled = radius_sq * q * q
    return scaled.numerator // scaled.denominator


def _scan_ball(c: Vector, p: List[int], q: int, budget: int, M):
    """Enumerate integer points with ``sum (q x_i - p_i)^2 <= budget``.

    Depth-first over coordinates; each coordinate's range comes from what is
    left of the budget. Returns ``(best, minimizers, count)``.
    """
    n = len(p)
    best = None
    minimizers: List[Vector] = []
    count = 0
    x = [0] * n
    # plumbing matrices of trees are sparse: keep only nonzero couplings to earlier coordinates
    earlier = [[(j, M[i][j]) for j in range(i) if M[i][j]] for i in range(n)]

    def rec(i: int, left: int, partial: int) -> None:
        # partial = c.x + x^T M x restricted to coordinates < i
        nonlocal best, minimizers, count
        r = isqrt(left)
        pi = p[i]
        lo = -((r - pi) // q)  # ceil((p_i - r) / q)
        hi = (pi + r) // q
        # every t in [lo, hi] has |q t - p_i| <= r, hence (q t - p_i)^2 <= left
        lin = c[i] + 2 * sum(mij * x[j] for j, mij in earlier[i])
        quad = M[i][i]
        if i + 1 < n:
            for xi in range(lo, hi + 1):
                x[i] = xi
                diff = q * xi - pi
                rec(i + 1, left - diff * diff, partial + xi * (lin + quad * xi))
            x[i] = 0
            return
        for xi in range(lo, hi + 1):
            count += 1
            chi_val = -(partial + xi * (lin + quad * xi)) // 2
            if best is None or chi_val < best:
                best = chi_val
                x[i] = xi
                minimizers = [tuple(x)]
            elif chi_val == best:
                x[i] = xi
                minimizers.append(tuple(x))
        x[i] = 0

    rec(0, budget, 0)
    return best, minimizers, count


def sublevel_points(c: Sequence[int], m: PlumbingMatrix, level: int) -> List[Tuple[Vector, int]]:
    """Every ``(x, chi(c, x))`` with ``chi(c, x) <= level``, sorted by ``x``.

    Enumerates the ellipsoid ``(x - x*)^T (-M) (x - x*) <= 2 (level - chi(x*))``
    directly (Fincke-Pohst style) using the exact LDL^T factors of ``M``,
    last coordinate first. Unlike the Euclidean ball this visits only points
    of the sublevel set itself, which matters when ``-M`` is badly conditioned.

    Everything is rescaled to integers: with ``x* = p / q`` and ``z = q x - p``
    the condition is ``sum_k e_k Y_k^2 <= B`` where ``Y = den * L^T z`` and
    ``e_k`` are the negated pivots times their common denominator.
    """
    _require_nd(m)
    c = require_characteristic(c, m)
    n = m.s
    p, q = _scaled_center(c, m)
    bound = 2 * (level - chi_at_center(c, m)) * q * q
    if bound < 0:
        return []
    L = m.ldl_lower
    den = lcm(*(L[j][k].denominator for j in range(n) for k in range(j)))
    coupling = [[(j, int(L[j][k] * den)) for j in range(k + 1, n) if L[j][k]] for k in range(n)]
    piv_den = lcm(*(piv.denominator for piv in m.ldl_pivots))
    e = [int(-piv * piv_den) for piv in m.ldl_pivots]
    budget = bound * den * den * piv_den
    budget = budget.numerator // budget.denominator
    M = m.M
    out: List[Tuple[Vector, int]] = []
    x = [0] * n
    z = [0] * n
    step = den * q

    def rec(k: int, left: int) -> None:
        shift = sum(lj * z[j] for j, lj in coupling[k])
        r = isqrt(left // e[k])
        base = den * p[k] - shift
        # |den (q x_k - p_k) + shift| <= r
        lo = -((r - base) // step)
        hi = (base + r) // step
        for xk in range(lo, hi + 1):
            x[k] = xk
            z[k] = q * xk - p[k]
            y = den * z[k] + shift
            if k == 0:
                value = _chi_int(c, x, M)
                if value <= level:
                    out.append((tuple(x), value))
            else:
                rec(k - 1, left - e[k] * y * y)
        x[k] = 0
        z[k] = 0

    rec(n - 1, budget)
    out.sort()
    return out


def min_chi(c: Sequence[int], m: PlumbingMatrix) -> MinChiResult:
    """Certified global minimum of ``chi(c, .)`` over the integer lattice."""
    _require_nd(m)
    c = require_characteristic(c, m)
    p, q = _scaled_center(c, m)
    x = [_round_half_up(pi, q) for pi in p]
    upper = _descend(c, x, m.M)
    center_value = chi_at_center(c, m)
    lam = lambda_lower_bound(m)
    radius_sq = 2 * (upper - center_value) / lam
    best, minimizers, count = _scan_ball(c, p, q, _ball_budget(radius_sq, q), m.M)
    # the descent point lies in the ball, so the scan always finds something
    assert best is not None and best <= upper
    minimizers.sort()
    return MinChiResult(
        min_value=best,
        argmin=minimizers[0],
        search_radius_sq=radius_sq,
        points_scanned=count,
        minimizers=tuple(minimizers),
        certified_radius_sq=2 * (best - center_value) / lam,
    )


def max_square_in_class(c: Sequence[int], m: PlumbingMatrix) -> Tuple[Fraction, Vector]:
    """Maximum of the square over the class of ``c`` and its lexicographically
    smallest maximiser."""
    res = min_chi(c, m)
    c = tuple(c)
    best = min(translate(c, x, m) for x in res.minimizers)
    return square(c, m) - 8 * res.min_value, best


def d_invariant(cls: SpincClass, m: PlumbingMatrix) -> DInvariantReport:
    """d-invariant ``(max square + s) / 4`` of one spin^c class."""
    max_sq, maximizer = max_square_in_class(cls.rep, m)
    return DInvariantReport(
        class_index=cls.index,
        d=(max_sq + m.s) / 4,
        maximizer=maximizer,
        max_square=max_sq,
        rep=tuple(cls.rep),
    )


def d_invariant_of(c: Sequence[int], m: PlumbingMatrix) -> DInvariantReport:
    """d-invariant of the class containing an arbitrary characteristic vector."""
    from .charlattice import class_of

    return d_invariant(class_of(c, m), m)


def _d_invariant_job(args):
    cls, m = args
    return d_invariant(cls, m)


def d_invariants_all(m: PlumbingMatrix, parallel: bool = False,
                     max_workers: Optional[int] = None) -> List[DInvariantReport]:
    """One report per spin^c class, in class-index order."""
    _require_nd(m)
    classes = enumerate_spinc(m)
    if parallel and len(classes) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            # map preserves input order
            return list(pool.map(_d_invariant_job, [(cls, m) for cls in classes],
                                 chunksize=max(1, len(classes) // 64)))
    return [d_invariant(cls, m) for cls in classes]


def box_radius_for(radius_sq: Fraction) -> int:
    """Box radius around ``round(x*)`` that is guaranteed to hold the ball.

    ``|round(x*)_i - x*_i| <= 1/2``, so ``ceil(sqrt(radius_sq) + 1/2)`` suffices.
    """
    r = isqrt(radius_sq.numerator // radius_sq.denominator)
    while Fraction(r) ** 2 < radius_sq:
        r += 1
    return r + 1


def _box_points(center: Sequence[int], radius: int) -> np.ndarray:
    axes = [np.arange(ci - radius, ci + radius + 1, dtype=np.int64) for ci in center]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def brute_force_min_chi(c: Sequence[int], m: PlumbingMatrix, radius: int) -> MinChiResult:
    """Exhaustive minimum of chi over the box of the given radius around ``round(x*)``.

    Test oracle: evaluates chi on every box point with numpy, using the
    rational inverse directly and none of :func:`min_chi`'s machinery. The
    box minimum is certified by checking that every integer point that could
    reach it lies inside the box; otherwise :class:`RadiusTooSmall` is raised.
    """
    _require_nd(m)
    c = require_characteristic(c, m)
    n = m.s
    center = [-sum(m.inverse[i][j] * c[j] for j in range(n)) / 2 for i in range(n)]
    rounded = [floor(ci + Fraction(1, 2)) for ci in center]
    pts = _box_points(rounded, radius)
    M = np.array(m.M, dtype=np.int64)
    cv = np.array(c, dtype=np.int64)
    vals = -(pts @ cv + np.einsum("ij,ij->i", pts @ M, pts)) // 2
    best = int(vals.min())
    winners = sorted(tuple(int(v) for v in row) for row in pts[vals == best])

    center_value = -sum(ci * xi for ci, xi in zip(c, center)) / 4
    inv_norm = max(sum(abs(a) for a in row) for row in m.inverse)
    radius_sq = 2 * (best - center_value) * inv_norm
    for ci, ri in zip(center, rounded):
        # extreme integers t with (t - ci)^2 <= radius_sq along this axis
        lo, hi = _axis_extent(ci, radius_sq)
        if lo < ri - radius or hi > ri + radius:
            raise RadiusTooSmall(f"box radius {radius} does not contain the certified ball "
                                 f"(radius^2 = {radius_sq})")
    return MinChiResult(
        min_value=best,
        argmin=winners[0],
        search_radius_sq=radius_sq,
        points_scanned=len(pts),
        minimizers=tuple(winners),
        certified_radius_sq=radius_sq,
    )


def _axis_extent(center: Fraction, radius_sq: Fraction) -> Tuple[int, int]:
    hi = floor(center)
    while (hi + 1 - center) ** 2 <= radius_sq:
        hi += 1
    lo = ceil(center)
    while (lo - 1 - center) ** 2 <= radius_sq:
        lo -= 1
    return lo, hi


def brute_force_max_square(c: Sequence[int], m: PlumbingMatrix, radius: int) -> Tuple[Fraction, Vector]:
    """Exhaustive coset search: max of the square over ``c + 2 M x``, x in the box.

    Squares are evaluated directly as ``k^T adj(M) k / det`` on every
    translate, without going through chi. Lexicographically smallest
    maximiser on ties. Only meaningful when the box holds the certified
    ball (see :func:`brute_force_min_chi`).
    """
    _require_nd(m)
    c = require_characteristic(c, m)
    n = m.s
    center = [-sum(m.inverse[i][j] * c[j] for j in range(n)) / 2 for i in range(n)]
    rounded = [floor(ci + Fraction(1, 2)) for ci in center]
    pts = _box_points(rounded, radius)
    M = np.array(m.M, dtype=np.int64)
    adj = np.array(m.adjugate, dtype=np.int64)
    ks = np.array(c, dtype=np.int64) + 2 * pts @ M
    nums = np.einsum("ij,ij->i", ks @ adj, ks)
    # square = num / det; maximise with the sign of det in mind
    target = nums.max() if m.det > 0 else nums.min()
    winners = sorted(tuple(int(v) for v in row) for row in ks[nums == target])
    return Fraction(int(target), m.det), winners[0]
