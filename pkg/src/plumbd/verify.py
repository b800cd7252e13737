"""Cross-checks between independent routes to the same quantities.

Each check returns a list of human-readable failure strings; an empty list
means everything agreed. The CLI ``verify`` command and the test-suite both
drive these.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import List, Optional

from .charlattice import (chi, class_index, enumerate_spinc, is_characteristic, same_spinc, square,
                          translate)
from .grading import (LatticeGenerator, d_from_root, f_weight, graded_root, grading)
from .optimizer import (box_radius_for, brute_force_max_square, brute_force_min_chi, d_invariant,
                        d_invariant_of, d_invariants_all, min_chi)
from .plumbing import PlumbingMatrix

PAIRWISE_LIMIT = 64


def random_char(m: PlumbingMatrix, rng: random.Random, spread: int = 6) -> tuple:
    return tuple(w + 2 * rng.randint(-spread, spread) for w in m.weights)


def random_point(m: PlumbingMatrix, rng: random.Random, spread: int = 4) -> tuple:
    return tuple(rng.randint(-spread, spread) for _ in range(m.s))


def check_spinc(m: PlumbingMatrix) -> List[str]:
    """Class count is |det M| and the representatives are pairwise inequivalent."""
    fails = []
    classes = enumerate_spinc(m)
    if len(classes) != abs(m.det):
        fails.append(f"{len(classes)} classes, expected |det| = {abs(m.det)}")
    for cls in classes:
        if not is_characteristic(cls.rep, m):
            fails.append(f"class {cls.index}: rep {cls.rep} not characteristic")
        if class_index(cls.rep, m) != cls.index:
            fails.append(f"class {cls.index}: rep {cls.rep} indexes as {class_index(cls.rep, m)}")
    if len(classes) <= PAIRWISE_LIMIT:
        for a, b in combinations(classes, 2):
            if same_spinc(a.rep, b.rep, m):
                fails.append(f"classes {a.index} and {b.index} are equivalent")
    else:
        # same_spinc(a, b) iff adj(M) a = adj(M) b (mod 2 det): compare residues
        mod = 2 * abs(m.det)
        keys = {tuple(sum(r * x for r, x in zip(row, cls.rep)) % mod for row in m.adjugate)
                for cls in classes}
        if len(keys) != len(classes):
            fails.append("some enumerated classes are equivalent")
    return fails


def check_oracle(m: PlumbingMatrix, oracle_radius: Optional[int] = None) -> List[str]:
    """min_chi against brute force, and the coset maximum against coset search."""
    fails = []
    for cls in enumerate_spinc(m):
        res = min_chi(cls.rep, m)
        radius = oracle_radius if oracle_radius is not None else box_radius_for(res.certified_radius_sq)
        try:
            brute = brute_force_min_chi(cls.rep, m, radius)
        except ValueError as exc:
            fails.append(f"class {cls.index}: oracle failed: {exc}")
            continue
        if (brute.min_value, brute.argmin) != (res.min_value, res.argmin):
            fails.append(f"class {cls.index}: min_chi {res.min_value} at {res.argmin}, "
                         f"brute force {brute.min_value} at {brute.argmin}")
        if brute.certified_radius_sq != res.certified_radius_sq:
            fails.append(f"class {cls.index}: certified radii differ")
        report = d_invariant(cls, m)
        coset = brute_force_max_square(cls.rep, m, radius)
        if coset != (report.max_square, report.maximizer):
            fails.append(f"class {cls.index}: max square {report.max_square} at {report.maximizer}, "
                         f"coset search {coset[0]} at {coset[1]}")
    return fails


def check_identities(m: PlumbingMatrix, rng: random.Random, samples: int = 1000) -> List[str]:
    """square(c + 2Mx) = square(c) - 8 chi(c, x) and f(K, I) = -chi(K, E_I)."""
    fails = []
    ids = m.ids
    for _ in range(samples):
        c = random_char(m, rng)
        x = random_point(m, rng)
        if square(translate(c, x, m), m) != square(c, m) - 8 * chi(c, x, m):
            fails.append(f"square identity fails at c={c}, x={x}")
        subset = [v for v in ids if rng.random() < 0.5]
        indicator = [1 if v in subset else 0 for v in ids]
        if f_weight(c, subset, m) != -chi(c, indicator, m):
            fails.append(f"weight identity fails at K={c}, I={subset}")
    return fails


def check_coset_invariance(m: PlumbingMatrix, rng: random.Random, per_class: int = 10) -> List[str]:
    fails = []
    for cls in enumerate_spinc(m):
        base = d_invariant(cls, m).d
        for _ in range(per_class):
            other = translate(cls.rep, random_point(m, rng), m)
            d = d_invariant_of(other, m).d
            if d != base:
                fails.append(f"class {cls.index}: d from {other} is {d}, from rep {base}")
    return fails


def check_gradings(m: PlumbingMatrix, rng: random.Random, samples: int = 50) -> List[str]:
    fails = []
    shift = Fraction(m.s, 4)
    for _ in range(samples):
        K = random_char(m, rng)
        base = grading(LatticeGenerator(K), m)
        if base != (square(K, m) + m.s) / 4:
            fails.append(f"gr([K, {{}}]) != (K^2 + s)/4 at K={K}")
        E = frozenset(v for v in m.ids if rng.random() < 0.5)
        i = rng.randint(0, 5)
        if grading(LatticeGenerator(K, E, i + 1), m) != grading(LatticeGenerator(K, E, i), m) - 2:
            fails.append(f"U-action does not lower grading by 2 at K={K}, E={sorted(E)}")
        x = random_point(m, rng)
        moved = grading(LatticeGenerator(translate(K, x, m)), m)
        if moved != (square(K, m) + m.s) / 4 - 2 * chi(K, x, m):
            fails.append(f"translated grading mismatch at K={K}, x={x}")
        if base - square(K, m) / 4 != shift:
            fails.append("grading shift is not s/4")
    return fails


def check_roots(m: PlumbingMatrix, depth: int = 2) -> List[str]:
    """d read off the graded root equals d from the optimizer; nodes nest."""
    fails = []
    for report in d_invariants_all(m):
        root = graded_root(report.rep, m, min_chi(report.rep, m).min_value + depth, report.class_index)
        if d_from_root(root) != report.d:
            fails.append(f"class {report.class_index}: root gives {d_from_root(root)}, optimizer {report.d}")
        if not root.check_nesting():
            fails.append(f"class {report.class_index}: root nodes do not nest")
    return fails


def verify_manifold(m: PlumbingMatrix, seed: int = 0, oracle_radius: Optional[int] = None,
                    samples: int = 200) -> List[str]:
    rng = random.Random(seed)
    fails = []
    fails += check_spinc(m)
    fails += check_oracle(m, oracle_radius)
    fails += check_identities(m, rng, samples)
    fails += check_coset_invariance(m, rng, per_class=2)
    fails += check_gradings(m, rng, samples=20)
    fails += check_roots(m)
    return fails
