"""Plumbing graphs, their plumbing matrices, and the hypotheses we need on them.

A plumbing graph is a weighted tree. Its matrix has the vertex weights on the
diagonal and a 1 for every edge. Everything downstream assumes the matrix is
nonsingular and negative definite, which :func:`accept` certifies exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

from .exact import SingularMatrix, det_bareiss, inverse, ldl, matmul, transpose

__all__ = [
    "PlumbingGraph",
    "PlumbingMatrix",
    "ValidationIssue",
    "ValidationReport",
    "GraphValidationError",
    "NotNegativeDefinite",
    "SingularMatrix",
    "DefinitenessCertificate",
    "TopologyInvariants",
    "validate_graph",
    "build_matrix",
    "check_negative_definite",
    "topology_invariants",
    "accept",
    "graph_from_dict",
    "graph_to_dict",
]

# Issue kinds reported by validate_graph.
SELF_LOOP = "SelfLoop"
DUPLICATE_EDGE = "DuplicateEdge"
CYCLE_FOUND = "CycleFound"
DISCONNECTED = "Disconnected"
DUPLICATE_VERTEX = "DuplicateVertex"
UNKNOWN_VERTEX = "UnknownVertex"
BAD_ID = "BadVertexId"
EMPTY = "EmptyGraph"


class NotNegativeDefinite(ValueError):
    """The plumbing matrix is nonsingular but not negative definite."""


@dataclass(frozen=True)
class ValidationIssue:
    kind: str
    ids: Tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: Tuple[ValidationIssue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues

    def kinds(self) -> List[str]:
        return [issue.kind for issue in self.issues]

    def __bool__(self) -> bool:
        return self.ok


class GraphValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(str(i) for i in report.issues))


@dataclass(frozen=True)
class PlumbingGraph:
    """Vertices as ``(id, weight)`` pairs in input order, edges as id pairs."""

    vertices: Tuple[Tuple[int, int], ...]
    edges: Tuple[Tuple[int, int], ...] = ()

    def __init__(self, vertices: Iterable[Sequence[int]], edges: Iterable[Sequence[int]] = ()):
        object.__setattr__(self, "vertices", tuple((int(i), int(w)) for i, w in vertices))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in edges))

    @classmethod
    def from_weights(cls, weights: Sequence[int], edges: Iterable[Sequence[int]] = ()) -> "PlumbingGraph":
        """Vertices numbered 1..s in the order of ``weights``."""
        return cls([(i + 1, w) for i, w in enumerate(weights)], edges)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.vertices)

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(w for _, w in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


def graph_from_dict(data: dict) -> PlumbingGraph:
    """Parse the JSON document ``{"vertices": [{"id", "weight"}], "edges": [[a, b]]}``."""
    if not isinstance(data, dict) or "vertices" not in data:
        raise ValueError("expected an object with a 'vertices' list")
    verts = []
    for v in data["vertices"]:
        if not isinstance(v, dict) or "id" not in v or "weight" not in v:
            raise ValueError(f"malformed vertex entry: {v!r}")
        if not all(isinstance(v[k], int) and not isinstance(v[k], bool) for k in ("id", "weight")):
            raise ValueError(f"vertex id and weight must be integers: {v!r}")
        verts.append((v["id"], v["weight"]))
    edges = []
    for e in data.get("edges", []):
        if not isinstance(e, (list, tuple)) or len(e) != 2 or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in e):
            raise ValueError(f"malformed edge entry: {e!r}")
        edges.append(tuple(e))
    return PlumbingGraph(verts, edges)


def graph_to_dict(g: PlumbingGraph) -> dict:
    return {
        "vertices": [{"id": i, "weight": w} for i, w in g.vertices],
        "edges": [list(e) for e in g.edges],
    }


def load_graph_file(path: Union[str, Path]) -> PlumbingGraph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


def validate_graph(g: PlumbingGraph) -> ValidationReport:
    """Collect every way in which ``g`` fails to be a connected weighted tree."""
    issues: List[ValidationIssue] = []
    if not g.vertices:
        return ValidationReport((ValidationIssue(EMPTY, (), "graph has no vertices"),))

    seen = set()
    for vid in g.ids:
        if vid <= 0:
            issues.append(ValidationIssue(BAD_ID, (vid,), f"vertex id {vid} is not positive"))
        if vid in seen:
            issues.append(ValidationIssue(DUPLICATE_VERTEX, (vid,), f"vertex id {vid} repeated"))
        seen.add(vid)

    parent = {vid: vid for vid in seen}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edge_set = set()
    for a, b in g.edges:
        missing = tuple(x for x in (a, b) if x not in seen)
        if missing:
            issues.append(ValidationIssue(UNKNOWN_VERTEX, missing,
                                          f"edge ({a}, {b}) uses unknown vertex {missing[0]}"))
            continue
        if a == b:
            issues.append(ValidationIssue(SELF_LOOP, (a,), f"self-loop at vertex {a}"))
            continue
        key = (min(a, b), max(a, b))
        if key in edge_set:
            issues.append(ValidationIssue(DUPLICATE_EDGE, key, f"edge {key} repeated"))
            continue
        edge_set.add(key)
        ra, rb = find(a), find(b)
        if ra == rb:
            issues.append(ValidationIssue(CYCLE_FOUND, key, f"edge {key} closes a cycle"))
            continue
        parent[ra] = rb

    components = {}
    for vid in g.ids:
        components.setdefault(find(vid), []).append(vid)
    if len(components) > 1:
        # name one vertex per component
        reps = tuple(sorted(min(c) for c in components.values()))
        issues.append(ValidationIssue(DISCONNECTED, reps,
                                      f"graph has {len(components)} components (containing {list(reps)})"))
    return ValidationReport(tuple(issues))


@dataclass(frozen=True)
class DefinitenessCertificate:
    """Exact LDL^T data; ``negative_definite`` iff the pivots are all negative."""

    lower: Tuple[Tuple[Fraction, ...], ...]
    pivots: Tuple[Fraction, ...]
    negative_definite: bool

    def reconstruct(self) -> List[List[Fraction]]:
        n = len(self.lower)
        if len(self.pivots) != n:
            raise ValueError("incomplete factorisation cannot be reconstructed")
        ld = [[self.lower[i][j] * self.pivots[j] for j in range(n)] for i in range(n)]
        return matmul(ld, transpose(self.lower))

    def verify(self, matrix: Sequence[Sequence[int]]) -> bool:
        """Re-check the certificate by multiplying the factors back together."""
        if len(self.pivots) != len(matrix):
            return False
        rebuilt = self.reconstruct()
        return all(rebuilt[i][j] == matrix[i][j] for i in range(len(matrix)) for j in range(len(matrix)))


@dataclass(frozen=True)
class PlumbingMatrix:
    """Plumbing matrix with its exact determinant, inverse and LDL pivots.

    ``adjugate`` is the integer matrix ``det * inverse``; the hot paths use it
    so that quadratic forms in the inverse stay in integer arithmetic.
    """

    M: Tuple[Tuple[int, ...], ...]
    det: int
    inverse: Tuple[Tuple[Fraction, ...], ...]
    adjugate: Tuple[Tuple[int, ...], ...]
    ldl_pivots: Tuple[Fraction, ...]
    ldl_lower: Tuple[Tuple[Fraction, ...], ...]
    negative_definite: bool
    ids: Tuple[int, ...] = field(default=())

    @property
    def s(self) -> int:
        return len(self.M)

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(self.M[i][i] for i in range(self.s))

    def index_of(self, vertex_id: int) -> int:
        try:
            return self.ids.index(vertex_id)
        except ValueError:
            raise KeyError(vertex_id) from None

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], ids: Sequence[int] = ()) -> "PlumbingMatrix":
        """Build from an explicit symmetric integer matrix.

        Raises :class:`SingularMatrix` if the determinant vanishes.
        """
        M = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(M)
        if any(len(row) != n for row in M):
            raise ValueError("matrix must be square")
        if any(M[i][j] != M[j][i] for i in range(n) for j in range(n)):
            raise ValueError("matrix must be symmetric")
        det = det_bareiss(M)
        if det == 0:
            raise SingularMatrix("plumbing matrix is singular (det = 0): not a rational homology sphere")
        inv = inverse(M)
        adj = tuple(tuple(int(x * det) for x in row) for row in inv)
        lower, pivots = ldl(M)
        nd = len(pivots) == n and all(p < 0 for p in pivots)
        return cls(
            M=M,
            det=det,
            inverse=tuple(tuple(row) for row in inv),
            adjugate=adj,
            ldl_pivots=tuple(pivots),
            ldl_lower=tuple(tuple(row) for row in lower),
            negative_definite=nd,
            ids=tuple(ids) if ids else tuple(range(1, n + 1)),
        )


def plumbing_rows(g: PlumbingGraph) -> List[List[int]]:
    """Weights on the diagonal, 1 for each edge, 0 elsewhere; no checks."""
    pos = {vid: k for k, vid in enumerate(g.ids)}
    rows = [[0] * len(g) for _ in range(len(g))]
    for k, w in enumerate(g.weights):
        rows[k][k] = w
    for a, b in g.edges:
        rows[pos[a]][pos[b]] = rows[pos[b]][pos[a]] = 1
    return rows


def build_matrix(g: PlumbingGraph) -> PlumbingMatrix:
    """Plumbing matrix of a valid graph, in the graph's vertex order."""
    report = validate_graph(g)
    if not report.ok:
        raise GraphValidationError(report)
    return PlumbingMatrix.from_matrix(plumbing_rows(g), g.ids)


def check_negative_definite(m: Union[PlumbingMatrix, Sequence[Sequence[int]]]) -> DefinitenessCertificate:
    """Exact LDL^T certificate for (non-)negative-definiteness.

    A zero pivot means some leading principal minor vanishes; if the whole
    matrix is singular this raises :class:`SingularMatrix`, otherwise the
    certificate is returned truncated with a negative verdict.
    """
    rows = m.M if isinstance(m, PlumbingMatrix) else [list(r) for r in m]
    n = len(rows)
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix must be symmetric")
    lower, pivots = ldl(rows)
    if len(pivots) < n or pivots[-1] == 0:
        if det_bareiss(rows) == 0:
            raise SingularMatrix("matrix is singular; zero pivot at row %d" % len(pivots))
        return DefinitenessCertificate(tuple(map(tuple, lower)), tuple(pivots), False)
    return DefinitenessCertificate(tuple(map(tuple, lower)), tuple(pivots), all(p < 0 for p in pivots))


@dataclass(frozen=True)
class TopologyInvariants:
    s: int
    det: int
    h1_order: int
    chi_w: int
    sigma_w: int

    @property
    def grading_shift(self) -> Fraction:
        """``(-2 chi(W) - 3 sigma(W)) / 4``, which is ``s / 4`` here."""
        return Fraction(-2 * self.chi_w - 3 * self.sigma_w, 4)


def topology_invariants(m: PlumbingMatrix) -> TopologyInvariants:
    if not m.negative_definite:
        raise NotNegativeDefinite("topology invariants require a negative definite plumbing")
    # X = B^4 plus s two-handles, W = X minus a ball: chi(W) = (1 + s) - 1; sigma = -s by definiteness.
    return TopologyInvariants(s=m.s, det=m.det, h1_order=abs(m.det), chi_w=m.s, sigma_w=-m.s)


def accept(g: PlumbingGraph) -> PlumbingMatrix:
    """Validate, build and certify; the entry point for every computation."""
    m = build_matrix(g)
    if not m.negative_definite:
        raise NotNegativeDefinite("plumbing matrix is not negative definite (LDL pivots %s)"
                                  % ", ".join(str(p) for p in m.ldl_pivots))
    return m
