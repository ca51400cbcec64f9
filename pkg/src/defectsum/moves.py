"""Flag-like extended Pachner moves and random move walks.

Moves are persistent: each returns a fresh validated complex and ordering,
leaving the input untouched, so fuzzing can keep before/after pairs.  A
``MoveRecord`` replays deterministically against the pre-move complex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from defectsum.surfaces import (
    ComplexError,
    NotFlagLike,
    SurfaceCurveComplex,
    VertexOrdering,
    edge_key,
    validate,
)


class MoveError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class BadRankPosition(MoveError):
    pass


class NotDegreeThree(MoveError):
    pass


class CurveEdgeFlip(MoveError):
    pass


class DegenerateQuad(MoveError):
    pass


class NotCurveEdge(MoveError):
    pass


class WrongLink(MoveError):
    pass


class DegenerateWeld(MoveError):
    pass


class WouldBreakFlagLike(MoveError):
    pass


KINDS = ("subdivide13", "weld31", "flip22", "curve_subdivide12", "curve_weld21")


@dataclass(frozen=True)
class MoveRecord:
    """One applied move: kind, target simplex, and rank insertion point."""

    kind: str
    target: tuple
    rank_pos: int | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "target": list(self.target), "rank_pos": self.rank_pos}

    @classmethod
    def from_json(cls, data: dict) -> "MoveRecord":
        return cls(data["kind"], tuple(data["target"]), data.get("rank_pos"))


def _rotate_first(tri: Sequence[int], v: int) -> tuple[int, int, int]:
    i = tri.index(v)
    return (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3])


def _insert_rank(ordering: VertexOrdering, rank_pos: int) -> VertexOrdering:
    # new vertex takes the highest index and rank rank_pos
    shifted = tuple(r + 1 if r >= rank_pos else r for r in ordering.rank)
    return VertexOrdering(shifted + (rank_pos,))


def _drop_vertex(c: SurfaceCurveComplex, ordering: VertexOrdering, v: int,
                 triangles: Sequence[tuple[int, int, int]],
                 curve_edges, on_curve) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    # vertices above v slide down one index; ranks compress past v's rank
    def m(w: int) -> int:
        return w - 1 if w > v else w

    new_tris = tuple((m(a), m(b), m(cc)) for a, b, cc in triangles)
    new_curve = frozenset(edge_key(m(a), m(b)) for a, b in curve_edges)
    new_on = tuple(b for w, b in enumerate(on_curve) if w != v)
    rv = ordering.rank[v]
    new_rank = tuple(
        r - 1 if r > rv else r for w, r in enumerate(ordering.rank) if w != v
    )
    out = SurfaceCurveComplex(c.vertex_count - 1, new_on, new_tris, new_curve)
    return out, VertexOrdering(new_rank)


def _validate_post(c: SurfaceCurveComplex) -> SurfaceCurveComplex:
    try:
        return validate(c)
    except NotFlagLike as err:
        raise WouldBreakFlagLike(str(err), err.witness) from err


# ---------------------------------------------------------------------------
# the seven move types (five entry points; subdivides carry their inverses)


def subdivide_13(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    tri_index: int,
    rank_pos: int,
) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    """Star a new off-curve vertex into the given triangle.

    ``rank_pos`` places the new vertex in the ordering; any position after
    the curve vertices is legal.
    """
    k = c.curve_vertex_count()
    if not k <= rank_pos <= c.vertex_count:
        raise BadRankPosition(
            f"rank {rank_pos} not in [{k}, {c.vertex_count}]", (rank_pos,)
        )
    p, q, r = c.triangles[tri_index]
    w = c.vertex_count
    tris = tuple(t for i, t in enumerate(c.triangles) if i != tri_index)
    tris += ((p, q, w), (q, r, w), (r, p, w))
    out = SurfaceCurveComplex(
        c.vertex_count + 1, c.on_curve + (False,), tris, c.curve_edges
    )
    return validate(out), _insert_rank(ordering, rank_pos)


def weld_31(
    c: SurfaceCurveComplex, ordering: VertexOrdering, v: int
) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    """Remove an off-curve vertex of triangle-degree 3, merging its star."""
    if c.on_curve[v]:
        raise WrongLink(f"vertex {v} lies on the curve", (v,))
    star = [i for i, t in enumerate(c.triangles) if v in t]
    if len(star) != 3:
        raise NotDegreeThree(f"vertex {v} has {len(star)} incident triangles", (v,))
    succ = {}
    for i in star:
        _, x, y = _rotate_first(c.triangles[i], v)
        succ[x] = y
    a = next(iter(succ))
    b = succ[a]
    cc = succ[b]
    if len(succ) != 3 or succ[cc] != a:
        raise WrongLink(f"link of {v} is not a single 3-cycle", (v,))
    new_tri = (a, b, cc)
    if any(frozenset(t) == frozenset(new_tri) for t in c.triangles):
        raise DegenerateWeld(f"triangle {new_tri} already present", new_tri)
    tris = [t for i, t in enumerate(c.triangles) if i not in star]
    tris.append(new_tri)
    out, new_ord = _drop_vertex(c, ordering, v, tris, c.curve_edges, c.on_curve)
    return _validate_post(out), new_ord


def flip_22(
    c: SurfaceCurveComplex, ordering: VertexOrdering, edge: Sequence[int]
) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    """Replace the diagonal edge of the surrounding quadrilateral."""
    e = edge_key(*edge)
    if e in c.curve_edges:
        raise CurveEdgeFlip(f"{e} lies on the curve", e)
    if e not in c.edge_triangles:
        raise MoveError(f"{e} is not an edge", e)
    i1, i2 = c.edge_triangles[e]
    t1, t2 = c.triangles[i1], c.triangles[i2]
    # rotate t1 so it traverses e as (a, b); t2 then traverses (b, a)
    for a, b in ((t1[0], t1[1]), (t1[1], t1[2]), (t1[2], t1[0])):
        if edge_key(a, b) == e:
            break
    c1 = next(x for x in t1 if x not in (a, b))
    c2 = next(x for x in t2 if x not in (a, b))
    if edge_key(c1, c2) in c.edge_triangles:
        raise DegenerateQuad(f"opposite diagonal {edge_key(c1, c2)} already an edge", e)
    new1 = (a, c2, c1)
    new2 = (c2, b, c1)
    tris = tuple(t for i, t in enumerate(c.triangles) if i not in (i1, i2))
    out = SurfaceCurveComplex(c.vertex_count, c.on_curve, tris + (new1, new2), c.curve_edges)
    return _validate_post(out), ordering


def curve_subdivide_12(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    edge: Sequence[int],
    rank_pos: int,
) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    """Split a curve edge, putting the new vertex on the curve.

    ``rank_pos`` may be any position among the curve vertices.
    """
    e = edge_key(*edge)
    if e not in c.curve_edges:
        raise NotCurveEdge(f"{e} is not a curve edge", e)
    k = c.curve_vertex_count()
    if not 0 <= rank_pos <= k:
        raise BadRankPosition(f"rank {rank_pos} not in [0, {k}]", (rank_pos,))
    w = c.vertex_count
    flanks = c.edge_triangles[e]
    new_tris = []
    for i in flanks:
        t = c.triangles[i]
        for u, vv in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            if edge_key(u, vv) == e:
                break
        apex = next(x for x in t if x not in (u, vv))
        new_tris.append((u, w, apex))
        new_tris.append((w, vv, apex))
    tris = tuple(t for i, t in enumerate(c.triangles) if i not in flanks)
    curve = (c.curve_edges - {e}) | {edge_key(e[0], w), edge_key(e[1], w)}
    out = SurfaceCurveComplex(
        c.vertex_count + 1, c.on_curve + (True,), tris + tuple(new_tris), frozenset(curve)
    )
    return validate(out), _insert_rank(ordering, rank_pos)


def curve_weld_21(
    c: SurfaceCurveComplex, ordering: VertexOrdering, v: int
) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    """Remove a curve vertex in subdivided position, rejoining its two
    curve edges into one."""
    if not c.on_curve[v]:
        raise WrongLink(f"vertex {v} is off the curve", (v,))
    ends = [e for e in c.curve_edges if v in e]
    star = [i for i, t in enumerate(c.triangles) if v in t]
    if len(star) != 4:
        raise WrongLink(f"vertex {v} has {len(star)} incident triangles, wants 4", (v,))
    b, cc = (next(x for x in e if x != v) for e in ends)
    succ = {}
    for i in star:
        _, x, y = _rotate_first(c.triangles[i], v)
        succ[x] = y
    if len(succ) != 4:
        raise WrongLink(f"link of {v} is not a single 4-cycle", (v,))
    if succ.get(succ.get(b)) != cc:
        # curve neighbours must sit opposite each other in the link square
        raise WrongLink(f"curve edges at {v} are adjacent in its link", (v,))
    if edge_key(b, cc) in c.edge_triangles:
        raise DegenerateWeld(f"edge {edge_key(b, cc)} already present", (b, cc))
    u1, u2 = succ[b], succ[cc]
    new_tris = ((b, u1, cc), (cc, u2, b))
    tris = [t for i, t in enumerate(c.triangles) if i not in star]
    curve = (c.curve_edges - set(ends)) | {edge_key(b, cc)}
    out, new_ord = _drop_vertex(
        c, ordering, v, tuple(tris) + new_tris, frozenset(curve), c.on_curve
    )
    return _validate_post(out), new_ord


def apply_move(
    record: MoveRecord, c: SurfaceCurveComplex, ordering: VertexOrdering
) -> tuple[SurfaceCurveComplex, VertexOrdering]:
    """Replay a recorded move against its pre-move complex."""
    if record.kind == "subdivide13":
        return subdivide_13(c, ordering, c.triangle_index(record.target), record.rank_pos)
    if record.kind == "weld31":
        return weld_31(c, ordering, record.target[0])
    if record.kind == "flip22":
        return flip_22(c, ordering, record.target)
    if record.kind == "curve_subdivide12":
        return curve_subdivide_12(c, ordering, record.target, record.rank_pos)
    if record.kind == "curve_weld21":
        return curve_weld_21(c, ordering, record.target[0])
    raise MoveError(f"unknown move kind {record.kind!r}")


# ---------------------------------------------------------------------------
# random walks


@dataclass(frozen=True)
class WalkStep:
    record: MoveRecord
    complex: SurfaceCurveComplex
    ordering: VertexOrdering


def random_flag_like_walk(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    steps: int,
    seed: int,
    max_extra_vertices: int | None = None,
) -> list[WalkStep]:
    """A deterministic random sequence of applicable flag-like moves.

    Candidates whose preconditions fail are rejection-sampled away.  When
    ``max_extra_vertices`` is set, subdividing moves are suppressed whenever
    the complex has grown that many vertices beyond its starting size, which
    keeps downstream state-sum recomputation affordable.
    """
    rng = random.Random(seed)
    base = c.vertex_count
    out: list[WalkStep] = []
    for _ in range(steps):
        for _attempt in range(10_000):
            grown = (
                max_extra_vertices is not None
                and c.vertex_count - base >= max_extra_vertices
            )
            kind = rng.choice(KINDS)
            if grown and kind in ("subdivide13", "curve_subdivide12"):
                continue
            try:
                record, state = _attempt_move(c, ordering, kind, rng)
            except (MoveError, ComplexError):
                continue
            if record is None:
                continue
            c, ordering = state
            out.append(WalkStep(record, c, ordering))
            break
        else:
            raise RuntimeError("no applicable move found after 10000 attempts")
    return out


def _attempt_move(c, ordering, kind, rng):
    k = c.curve_vertex_count()
    if kind == "subdivide13":
        i = rng.randrange(len(c.triangles))
        pos = rng.randint(k, c.vertex_count)
        target = c.triangles[i]
        return MoveRecord(kind, target, pos), subdivide_13(c, ordering, i, pos)
    if kind == "weld31":
        cands = [
            v
            for v in range(c.vertex_count)
            if not c.on_curve[v]
            and sum(v in t for t in c.triangles) == 3
        ]
        if not cands:
            return None, None
        v = rng.choice(cands)
        return MoveRecord(kind, (v,)), weld_31(c, ordering, v)
    if kind == "flip22":
        cands = [e for e in c.edges if e not in c.curve_edges]
        if not cands:
            return None, None
        e = rng.choice(cands)
        return MoveRecord(kind, e), flip_22(c, ordering, e)
    if kind == "curve_subdivide12":
        if not c.curve_edges:
            return None, None
        e = rng.choice(sorted(c.curve_edges))
        pos = rng.randint(0, k)
        return MoveRecord(kind, e, pos), curve_subdivide_12(c, ordering, e, pos)
    if kind == "curve_weld21":
        cands = [v for v in range(c.vertex_count) if c.on_curve[v]]
        if not cands:
            return None, None
        v = rng.choice(cands)
        return MoveRecord(kind, (v,)), curve_weld_21(c, ordering, v)
    raise MoveError(f"unknown move kind {kind!r}")
