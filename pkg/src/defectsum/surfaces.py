"""Oriented closed triangulated surfaces with a marked defect curve.

A complex stores its triangles as ordered vertex triples whose cyclic order
is the orientation induced by the surface; the validator checks that the two
triangles over every edge traverse it oppositely.  A marked curve is a set of
edges forming disjoint simple closed loops, and flag-likeness means every
triangle meets the curve in at most one closed face.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence


class ComplexError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class InvalidComplexData(ComplexError):
    pass


class NotClosed(ComplexError):
    pass


class IncoherentOrientation(ComplexError):
    pass


class CurveNotCurve(ComplexError):
    pass


class NotFlagLike(ComplexError):
    pass


class CurveNotSubcomplex(ComplexError):
    pass


class TooSmall(ComplexError):
    pass


class TriangleClass(Enum):
    BULK = 0
    VERTEX_ON_CURVE = 1
    EDGE_ON_CURVE = 2


def edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class SurfaceCurveComplex:
    vertex_count: int
    on_curve: tuple[bool, ...]
    triangles: tuple[tuple[int, int, int], ...]
    curve_edges: frozenset[tuple[int, int]]

    @classmethod
    def build(
        cls,
        vertex_count: int,
        on_curve: Sequence[bool],
        triangles: Iterable[Sequence[int]],
        curve_edges: Iterable[Sequence[int]] = (),
    ) -> "SurfaceCurveComplex":
        return cls(
            vertex_count,
            tuple(bool(b) for b in on_curve),
            tuple(tuple(t) for t in triangles),
            frozenset(edge_key(*e) for e in curve_edges),
        )

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        seen = set()
        for a, b, c in self.triangles:
            seen.add(edge_key(a, b))
            seen.add(edge_key(b, c))
            seen.add(edge_key(c, a))
        return tuple(sorted(seen))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_triangles(self) -> dict[tuple[int, int], tuple[int, ...]]:
        incident: dict[tuple[int, int], list[int]] = {}
        for t, (a, b, c) in enumerate(self.triangles):
            for e in (edge_key(a, b), edge_key(b, c), edge_key(c, a)):
                incident.setdefault(e, []).append(t)
        return {e: tuple(ts) for e, ts in incident.items()}

    @cached_property
    def curve_degree(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for a, b in self.curve_edges:
            deg[a] += 1
            deg[b] += 1
        return tuple(deg)

    def curve_vertex_count(self) -> int:
        return sum(self.on_curve)

    def off_curve_vertex_count(self) -> int:
        return self.vertex_count - self.curve_vertex_count()

    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges) + len(self.triangles)

    def classify(self, tri_index: int) -> TriangleClass:
        k = sum(self.on_curve[v] for v in self.triangles[tri_index])
        return TriangleClass(k)

    def is_curve_edge(self, a: int, b: int) -> bool:
        return edge_key(a, b) in self.curve_edges

    def curve_component_count(self) -> int:
        if not self.curve_edges:
            return 0
        adj: dict[int, list[int]] = {}
        for a, b in self.curve_edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen: set[int] = set()
        components = 0
        for start in adj:
            if start in seen:
                continue
            components += 1
            stack = [start]
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                stack.extend(w for w in adj[v] if w not in seen)
        return components

    def triangle_index(self, tri: Sequence[int]) -> int:
        want = frozenset(tri)
        for i, t in enumerate(self.triangles):
            if frozenset(t) == want:
                return i
        raise KeyError(f"no triangle with vertices {tuple(tri)}")

    def __repr__(self) -> str:
        return (
            f"SurfaceCurveComplex(V={self.vertex_count}, E={len(self.edges)}, "
            f"F={len(self.triangles)}, curve={len(self.curve_edges)})"
        )


def validate(complex_: SurfaceCurveComplex, flag_like: bool = True) -> SurfaceCurveComplex:
    """Check all structural invariants, returning the complex unchanged.

    With ``flag_like=False`` only closedness, orientation coherence and the
    curve-subcomplex conditions are checked (the input contract of
    barycentric subdivision).
    """
    c = complex_
    n = c.vertex_count
    if n < 1 or len(c.on_curve) != n:
        raise InvalidComplexData(f"on_curve length {len(c.on_curve)} != {n}")
    if not c.triangles:
        raise InvalidComplexData("no triangles")
    seen_tris = set()
    for t, tri in enumerate(c.triangles):
        if len(tri) != 3 or len(set(tri)) != 3:
            raise InvalidComplexData(f"triangle {t} is degenerate: {tri}", (t,))
        if any(not 0 <= v < n for v in tri):
            raise InvalidComplexData(f"triangle {t} has out-of-range vertex", (t,))
        key = frozenset(tri)
        if key in seen_tris:
            raise InvalidComplexData(f"duplicate triangle {tuple(sorted(tri))}", (t,))
        seen_tris.add(key)
    for e in c.curve_edges:
        if len(set(e)) != 2 or any(not 0 <= v < n for v in e):
            raise InvalidComplexData(f"bad curve edge {e}", e)

    # closedness + orientation coherence via directed edge traversals
    directed: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a, b, cc in c.triangles:
        for u, v in ((a, b), (b, cc), (cc, a)):
            directed.setdefault(edge_key(u, v), []).append((u, v))
    for e, traversals in directed.items():
        if len(traversals) != 2:
            raise NotClosed(f"edge {e} lies in {len(traversals)} triangles", e)
        if traversals[0] == traversals[1]:
            raise IncoherentOrientation(f"edge {e} traversed twice the same way", e)

    edge_set = set(directed)
    for e in c.curve_edges:
        if e not in edge_set:
            raise CurveNotSubcomplex(f"curve edge {e} is not an edge of the surface", e)
        for v in e:
            if not c.on_curve[v]:
                raise CurveNotCurve(f"curve edge {e} has off-curve endpoint {v}", (v,))
    for v in range(n):
        if c.on_curve[v] and c.curve_degree[v] != 2:
            raise CurveNotCurve(
                f"on-curve vertex {v} has {c.curve_degree[v]} curve edges, wants 2",
                (v,),
            )

    if flag_like:
        for t, tri in enumerate(c.triangles):
            marked = [v for v in tri if c.on_curve[v]]
            if len(marked) == 3:
                raise NotFlagLike(f"triangle {tri} has all vertices on the curve", (t,))
            if len(marked) == 2 and edge_key(*marked) not in c.curve_edges:
                raise NotFlagLike(
                    f"triangle {tri} joins curve vertices {marked} off the curve",
                    (t,),
                )
    return c


# ---------------------------------------------------------------------------
# vertex orderings and orientation signs


@dataclass(frozen=True)
class VertexOrdering:
    """Ranks of the vertices; all curve vertices rank before all others."""

    rank: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rank)

    def sort_triangle(self, tri: Sequence[int]) -> tuple[int, int, int]:
        v0, v1, v2 = sorted(tri, key=lambda v: self.rank[v])
        return (v0, v1, v2)


def validate_ordering(c: SurfaceCurveComplex, ordering: VertexOrdering) -> VertexOrdering:
    rank = ordering.rank
    if sorted(rank) != list(range(c.vertex_count)):
        raise InvalidComplexData("rank is not a permutation of the vertices")
    k = c.curve_vertex_count()
    for v in range(c.vertex_count):
        if c.on_curve[v] != (rank[v] < k):
            raise InvalidComplexData(
                f"vertex {v} breaks the curve-first ordering", (v,)
            )
    return ordering


def default_ordering(c: SurfaceCurveComplex) -> VertexOrdering:
    """Curve vertices in index order, then the remaining vertices."""
    curve = [v for v in range(c.vertex_count) if c.on_curve[v]]
    bulk = [v for v in range(c.vertex_count) if not c.on_curve[v]]
    rank = [0] * c.vertex_count
    for pos, v in enumerate(curve + bulk):
        rank[v] = pos
    return VertexOrdering(tuple(rank))


def random_ordering(c: SurfaceCurveComplex, rng: random.Random) -> VertexOrdering:
    """A uniformly random curve-first ordering."""
    curve = [v for v in range(c.vertex_count) if c.on_curve[v]]
    bulk = [v for v in range(c.vertex_count) if not c.on_curve[v]]
    rng.shuffle(curve)
    rng.shuffle(bulk)
    rank = [0] * c.vertex_count
    for pos, v in enumerate(curve + bulk):
        rank[v] = pos
    return VertexOrdering(tuple(rank))


def local_vertex_order(tri: Sequence[int], ordering: VertexOrdering) -> tuple[int, int, int]:
    """The triangle's vertices in ascending rank; fixes the edges 01, 12, 02."""
    return ordering.sort_triangle(tri)


def edge_direction(edge: Sequence[int], ordering: VertexOrdering) -> tuple[int, int]:
    """Directed from the lower-ranked endpoint to the higher-ranked one."""
    a, b = edge
    return (a, b) if ordering.rank[a] < ordering.rank[b] else (b, a)


def epsilon(tri: Sequence[int], ordering: VertexOrdering) -> int:
    """+1 if ascending rank order matches the stored cyclic orientation."""
    p, q, r = tri
    v = ordering.sort_triangle(tri)
    return 1 if v in ((p, q, r), (q, r, p), (r, p, q)) else -1


def reverse_orientation(c: SurfaceCurveComplex) -> SurfaceCurveComplex:
    """The same complex with every triangle's cyclic order flipped."""
    return SurfaceCurveComplex(
        c.vertex_count,
        c.on_curve,
        tuple((a, cc, b) for a, b, cc in c.triangles),
        c.curve_edges,
    )


# ---------------------------------------------------------------------------
# barycentric subdivision


def barycentric_subdivide(c: SurfaceCurveComplex) -> SurfaceCurveComplex:
    """Full barycentric subdivision; flag-like even if the input was not.

    The input must be a closed oriented surface whose curve is a subcomplex
    (disjoint simple loops), but need not be flag-like.
    """
    try:
        validate(c, flag_like=False)
    except ComplexError as err:
        raise CurveNotSubcomplex(f"cannot subdivide: {err}", err.witness) from err

    nv = c.vertex_count
    edge_vertex = {e: nv + i for i, e in enumerate(c.edges)}
    tri_vertex = {t: nv + len(c.edges) + t for t in range(len(c.triangles))}

    on_curve = list(c.on_curve)
    on_curve += [e in c.curve_edges for e in c.edges]
    on_curve += [False] * len(c.triangles)

    triangles: list[tuple[int, int, int]] = []
    for t, (a, b, cc) in enumerate(c.triangles):
        m = tri_vertex[t]
        for u, v in ((a, b), (b, cc), (cc, a)):
            muv = edge_vertex[edge_key(u, v)]
            triangles.append((u, muv, m))
            triangles.append((muv, v, m))

    curve_edges = []
    for e in c.curve_edges:
        a, b = e
        m = edge_vertex[e]
        curve_edges.append((a, m))
        curve_edges.append((m, b))

    out = SurfaceCurveComplex.build(
        nv + len(c.edges) + len(c.triangles), on_curve, triangles, curve_edges
    )
    return validate(out)


# ---------------------------------------------------------------------------
# builders


def tetrahedron_sphere() -> SurfaceCurveComplex:
    """Boundary of the 3-simplex: the minimal sphere, no curve."""
    tris = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)]
    return validate(SurfaceCurveComplex.build(4, [False] * 4, tris))


def sphere_octahedron_equator() -> SurfaceCurveComplex:
    """Octahedron sphere with its square equator marked as the curve."""
    top = [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)]
    bottom = [(1, 0, 5), (2, 1, 5), (3, 2, 5), (0, 3, 5)]
    curve = [(0, 1), (1, 2), (2, 3), (3, 0)]
    on_curve = [True, True, True, True, False, False]
    return validate(SurfaceCurveComplex.build(6, on_curve, top + bottom, curve))


def torus_grid(n: int, m: int, marked_row: int | None = 0) -> SurfaceCurveComplex:
    """An n-by-m grid torus with row ``marked_row`` marked as a meridian.

    Each grid cell is split along the down-right diagonal; n, m >= 3 keeps
    the quotient free of doubled edges.  ``marked_row=None`` leaves the
    curve empty.
    """
    if n < 3 or m < 3:
        raise TooSmall(f"grid must be at least 3x3, got {n}x{m}", (n, m))

    def v(i: int, j: int) -> int:
        return (i % n) * m + (j % m)

    triangles = []
    for i in range(n):
        for j in range(m):
            triangles.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            triangles.append((v(i, j), v(i + 1, j + 1), v(i, j + 1)))
    on_curve = [False] * (n * m)
    curve = []
    if marked_row is not None:
        r = marked_row % n
        for j in range(m):
            on_curve[v(r, j)] = True
            curve.append((v(r, j), v(r, j + 1)))
    return validate(SurfaceCurveComplex.build(n * m, on_curve, triangles, curve))


def torus_7vertex() -> SurfaceCurveComplex:
    """The minimal 7-vertex torus (complete graph K7), no curve."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 3) % 7, (i + 2) % 7))
    return validate(SurfaceCurveComplex.build(7, [False] * 7, tris))
