"""Admissible colorings and the untwisted/twisted state-sum invariants.

A coloring assigns a bulk-group element to every edge missing the curve, a
bi-set element to every edge meeting it once, and a curve-group element to
every curve edge; a triangle is admissible when its two low edges compose to
the third.  Enumeration propagates forced labels through triangles so only a
residue of free edges is branched over, and the invariant accumulates weight
exponents exactly, summing into the cyclotomic field at the end.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from defectsum.algebra import BiSet, CyclotomicNumber, FiniteGroup, UnitScalar
from defectsum.surfaces import (
    SurfaceCurveComplex,
    VertexOrdering,
    edge_key,
    epsilon,
    validate_ordering,
)
from defectsum.twisting import TwistingTriple, violations


class InvalidGaugeData(ValueError):
    pass


class InvalidTwisting(ValueError):
    pass


class EdgeClass(Enum):
    BULK = 0
    MEETS_CURVE = 1
    ON_CURVE = 2


@dataclass(frozen=True)
class GaugeData:
    """Bulk group, curve group and connecting bi-set, plus optional twisting."""

    group: FiniteGroup
    curve_group: FiniteGroup
    biset: BiSet
    twisting: TwistingTriple | None = None

    def __post_init__(self):
        if self.biset.group_right != self.group:
            raise InvalidGaugeData("bi-set right action is not by the bulk group")
        if self.biset.group_left != self.curve_group:
            raise InvalidGaugeData("bi-set left action is not by the curve group")
        t = self.twisting
        if t is not None and (
            t.group != self.group
            or t.curve_group != self.curve_group
            or t.biset != self.biset
        ):
            raise InvalidGaugeData("twisting tables built for different gauge data")


def edge_class(c: SurfaceCurveComplex, edge: Sequence[int]) -> EdgeClass:
    a, b = edge
    marked = c.on_curve[a] + c.on_curve[b]
    return EdgeClass(marked)


def _domain_size(data: GaugeData, cls: EdgeClass) -> int:
    if cls is EdgeClass.BULK:
        return data.group.order
    if cls is EdgeClass.MEETS_CURVE:
        return data.biset.size
    return data.curve_group.order


def _check_degenerate_curve(c: SurfaceCurveComplex, data: GaugeData) -> None:
    # the empty-curve case degenerates to plain bulk gauge theory; demanding
    # trivial curve data keeps the reported invariant canonical
    if not c.curve_edges and (data.curve_group.order != 1 or data.biset.size != 1):
        raise InvalidGaugeData(
            "empty curve requires a trivial curve group and one-point bi-set"
        )


# ---------------------------------------------------------------------------
# per-triangle composition data


def _triangle_tables(data: GaugeData):
    g, x = data.group, data.biset
    mul = g.mul
    # solving a from (b, c) in a*b=c needs column inverses; b from (a, c)
    # needs row inverses.  Group columns/rows and the per-group-element
    # action maps are bijections; the action map per bi-set point is not.
    mul_col_inv = tuple(
        tuple(mul[cc][g.inv[b]] for cc in g.elements()) for b in g.elements()
    )
    mul_row_inv = tuple(
        tuple(mul[g.inv[a]][cc] for cc in g.elements()) for a in g.elements()
    )
    right_col_inv = tuple(
        tuple(x.right[y][g.inv[a]] for y in range(x.size)) for a in g.elements()
    )
    left_row_inv = tuple(
        tuple(x.left[data.curve_group.inv[h]][y] for y in range(x.size))
        for h in data.curve_group.elements()
    )
    # indexed by the triangle's on-curve vertex count
    return (
        (mul, mul_col_inv, mul_row_inv),
        (x.right, right_col_inv, None),
        (x.left, None, left_row_inv),
    )


@dataclass
class _Triangle:
    table: tuple
    col_inv: tuple | None
    row_inv: tuple | None
    e01: int
    e12: int
    e02: int
    eps: int
    weights: tuple | None  # exponent table, or None


@dataclass
class _Plan:
    steps: list[tuple]
    checks: list[list[tuple]]
    weight_ops: list[list[tuple]]
    modulus: int


def _build_plan(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    data: GaugeData,
    weighted: bool,
) -> _Plan:
    idx = c.edge_index
    classes = [edge_class(c, e) for e in c.edges]
    domains = [_domain_size(data, cls) for cls in classes]
    tables = _triangle_tables(data)
    tw = data.twisting

    tris: list[_Triangle] = []
    for t, tri in enumerate(c.triangles):
        v0, v1, v2 = ordering.sort_triangle(tri)
        e01 = idx[edge_key(v0, v1)]
        e12 = idx[edge_key(v1, v2)]
        e02 = idx[edge_key(v0, v2)]
        cls = c.classify(t)
        table, col_inv, row_inv = tables[cls.value]
        wtab = None
        if weighted:
            wtab = (tw.alpha, tw.beta, tw.gamma)[cls.value]
        tris.append(
            _Triangle(table, col_inv, row_inv, e01, e12, e02, epsilon(tri, ordering), wtab)
        )

    tri_of_edge: list[list[int]] = [[] for _ in c.edges]
    for t, info in enumerate(tris):
        for e in (info.e01, info.e12, info.e02):
            tri_of_edge[e].append(t)

    def dual_bfs(seed: int) -> list[int]:
        # breadth first over shared edges keeps the swept region connected
        order: list[int] = []
        seen = [False] * len(tris)
        for start in [seed] + list(range(len(tris))):
            if seen[start]:
                continue
            seen[start] = True
            queue = [start]
            while queue:
                t = queue.pop(0)
                order.append(t)
                for e in (tris[t].e01, tris[t].e12, tris[t].e02):
                    for t2 in tri_of_edge[e]:
                        if not seen[t2]:
                            seen[t2] = True
                            queue.append(t2)
        return order

    def forcible(t: int, assigned) -> tuple | None:
        info = tris[t]
        free = [e for e in (info.e01, info.e12, info.e02) if not assigned[e]]
        if len(free) != 1:
            return None
        e = free[0]
        if e == info.e02:
            return ("forced", e, info.table, info.e01, info.e12)
        if e == info.e01 and info.col_inv is not None:
            return ("forced", e, info.col_inv, info.e12, info.e02)
        if e == info.e12 and info.row_inv is not None:
            return ("forced", e, info.row_inv, info.e01, info.e02)
        return None

    tris_at_vertex = [0] * c.vertex_count
    for tri in c.triangles:
        for v in tri:
            tris_at_vertex[v] += 1

    def emit(order: list[int]):
        assigned = [False] * len(c.edges)
        missing = [3] * len(tris)
        done = [False] * len(tris)
        star_left = list(tris_at_vertex)
        steps: list[tuple] = []
        checks: list[list[tuple]] = []
        weight_ops: list[list[tuple]] = []
        logrows = 0.0
        cost = 0.0

        while not all(assigned):
            step = None
            forcer = None
            for t in order:
                if not done[t]:
                    step = forcible(t, assigned)
                    if step is not None:
                        forcer = t
                        break
            if step is None:
                # open a free edge on the earliest unfinished triangle of
                # the sweep order; one that completes a triangle gets its
                # branch checked immediately
                pick = None
                for t in order:
                    if not done[t] and missing[t] == 1:
                        pick = next(
                            e
                            for e in (tris[t].e01, tris[t].e12, tris[t].e02)
                            if not assigned[e]
                        )
                        break
                if pick is None:
                    for t in order:
                        if not done[t]:
                            pick = min(
                                e
                                for e in (tris[t].e01, tris[t].e12, tris[t].e02)
                                if not assigned[e]
                            )
                            break
                if pick is None:
                    pick = assigned.index(False)
                step = ("free", pick, domains[pick])
            edge = step[1]
            assigned[edge] = True
            steps.append(step)
            if step[0] == "free":
                logrows += math.log(domains[edge])

            fired_checks = []
            fired_weights = []
            for t in tri_of_edge[edge]:
                missing[t] -= 1
                if missing[t] == 0 and not done[t]:
                    done[t] = True
                    info = tris[t]
                    # a check that closes the last face around a vertex is
                    # implied by the star's other relations: no pruning
                    closes_star = any(star_left[v] == 1 for v in c.triangles[t])
                    for v in c.triangles[t]:
                        star_left[v] -= 1
                    if t != forcer:
                        fired_checks.append((info.table, info.e01, info.e12, info.e02))
                        if not closes_star:
                            logrows -= math.log(domains[info.e02])
                    if weighted:
                        fired_weights.append((info.weights, info.eps, info.e01, info.e12))
            checks.append(fired_checks)
            weight_ops.append(fired_weights)
            cost += math.exp(logrows)
        return steps, checks, weight_ops, cost

    # a few sweep candidates scored by estimated row traffic; the estimate
    # treats each non-redundant check as keeping 1/|domain| of rows alive
    n = len(tris)
    best = None
    for seed in sorted({0, n // 4, n // 2, (3 * n) // 4, n - 1}):
        candidate = emit(dual_bfs(seed))
        if best is None or candidate[3] < best[3]:
            best = candidate
    steps, checks, weight_ops, _ = best

    modulus = tw.modulus if weighted else 1
    return _Plan(steps, checks, weight_ops, modulus)


# ---------------------------------------------------------------------------
# per-triangle predicates


def _triangle_rule(c, ordering, data, tri_index):
    tri = c.triangles[tri_index]
    v0, v1, v2 = ordering.sort_triangle(tri)
    idx = c.edge_index
    cls = c.classify(tri_index)
    table = (data.group.mul, data.biset.right, data.biset.left)[cls.value]
    return table, idx[edge_key(v0, v1)], idx[edge_key(v1, v2)], idx[edge_key(v0, v2)]


def is_admissible(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    data: GaugeData,
    tri_index: int,
    labels: Sequence[int],
) -> bool:
    """Whether the two low edges of the triangle compose to its long edge."""
    table, e01, e12, e02 = _triangle_rule(c, ordering, data, tri_index)
    return table[labels[e01]][labels[e12]] == labels[e02]


def chi(c, ordering, data, tri_index, labels) -> int:
    return 1 if is_admissible(c, ordering, data, tri_index, labels) else 0


def lambda_tilde(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    tri_index: int,
    labels: Sequence[int],
) -> tuple[int, int]:
    """Labels of the 01 and 12 edges in the rank order of the triangle."""
    tri = c.triangles[tri_index]
    v0, v1, v2 = ordering.sort_triangle(tri)
    idx = c.edge_index
    return labels[idx[edge_key(v0, v1)]], labels[idx[edge_key(v1, v2)]]


def weight(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    data: GaugeData,
    tri_index: int,
    labels: Sequence[int],
) -> UnitScalar:
    """The triangle's local weight, inverted when its ordering-induced
    orientation opposes the surface."""
    tw = data.twisting
    if tw is None:
        raise InvalidTwisting("gauge data carries no twisting")
    cls = c.classify(tri_index)
    table = (tw.alpha, tw.beta, tw.gamma)[cls.value]
    a, b = lambda_tilde(c, ordering, tri_index, labels)
    eps = epsilon(c.triangles[tri_index], ordering)
    return UnitScalar(tw.modulus, eps * table[a][b])


# ---------------------------------------------------------------------------
# enumeration


def enumerate_admissible(
    c: SurfaceCurveComplex, ordering: VertexOrdering, data: GaugeData
) -> Iterator[tuple[int, ...]]:
    """All admissible colorings, as label tuples aligned with ``c.edges``.

    Deterministic: free edges take values in ascending order along a fixed
    triangle-saturating elimination order.
    """
    validate_ordering(c, ordering)
    _check_degenerate_curve(c, data)
    plan = _build_plan(c, ordering, data, weighted=False)
    labels = [0] * len(c.edges)
    steps, checks = plan.steps, plan.checks

    def ok(si: int) -> bool:
        for table, a, b, cc in checks[si]:
            if table[labels[a]][labels[b]] != labels[cc]:
                return False
        return True

    def rec(si: int):
        if si == len(steps):
            yield tuple(labels)
            return
        step = steps[si]
        if step[0] == "free":
            _, e, dom = step
            for v in range(dom):
                labels[e] = v
                if ok(si):
                    yield from rec(si + 1)
        else:
            _, e, table, i, j = step
            labels[e] = table[labels[i]][labels[j]]
            if ok(si):
                yield from rec(si + 1)

    yield from rec(0)


# ---------------------------------------------------------------------------
# vectorized counting sweep
#
# The frontier of partial colorings is one int8 matrix: a column per live
# edge, with slots recycled once an edge is last read.  Free edges multiply
# the rows, forced edges fill a column, each completed triangle's mask
# prunes the rows, and weight exponents accumulate in a parallel int16
# vector.  Labels fit int8 because table sides stay far below 128.

_ROW_LIMIT = 1 << 20


@dataclass
class _CompiledPlan:
    ops: list[tuple]
    width: int
    weighted: bool
    first_free: tuple | None  # (slot, domain)
    modulus: int
    tail_multiplier: int = 1


def _flat(table) -> tuple[np.ndarray, int]:
    arr = np.asarray(table, dtype=np.int8)
    return arr.reshape(-1), arr.shape[1]


def _compile_plan(plan: _Plan) -> _CompiledPlan:
    # per-edge slot assignment with reuse after the edge's final read
    last_use: dict[int, int] = {}
    for si in range(len(plan.steps)):
        step = plan.steps[si]
        edges = [step[1]]
        if step[0] == "forced":
            edges += [step[3], step[4]]
        for _, a, b, cc in plan.checks[si]:
            edges += [a, b, cc]
        for _, _, a, b in plan.weight_ops[si]:
            edges += [a, b]
        for e in edges:
            last_use[e] = si

    slot_of: dict[int, int] = {}
    free_slots: list[int] = []
    width = 0
    ops: list[tuple] = []
    weighted = any(plan.weight_ops)
    for si, step in enumerate(plan.steps):
        edge = step[1]
        if free_slots:
            slot = free_slots.pop()
        else:
            slot = width
            width += 1
        slot_of[edge] = slot
        if step[0] == "free":
            ops.append(("free", slot, step[2]))
        else:
            flat, w = _flat(step[2])
            ops.append(("forced", slot, flat, w, slot_of[step[3]], slot_of[step[4]]))
        for table, a, b, cc in plan.checks[si]:
            flat, w = _flat(table)
            ops.append(("check", flat, w, slot_of[a], slot_of[b], slot_of[cc]))
        for table, eps, a, b in plan.weight_ops[si]:
            wflat = np.asarray(table, dtype=np.int16).reshape(-1)
            ops.append(("weight", wflat, len(table[0]), eps, slot_of[a], slot_of[b]))
        for e, last in list(last_use.items()):
            if last == si:
                free_slots.append(slot_of[e])
                del last_use[e]

    # ops past the final check or weight cannot change the histogram shape:
    # free edges there only scale every count by their domain size
    cut = 0
    for i, op in enumerate(ops):
        if op[0] in ("check", "weight"):
            cut = i + 1
    multiplier = 1
    for op in ops[cut:]:
        if op[0] == "free":
            multiplier *= op[2]
    ops = ops[:cut]
    first_free = None
    if ops and ops[0][0] == "free":
        first_free = (ops[0][1], ops[0][2])
    return _CompiledPlan(ops, width, weighted, first_free, plan.modulus, multiplier)


def _index(rows: np.ndarray, i: int, j: int, w: int) -> np.ndarray:
    idx = rows[:, i].astype(np.int16)
    idx *= np.int16(w)
    idx += rows[:, j]
    return idx


def _sweep(cp: _CompiledPlan, oi: int, rows: np.ndarray, acc: np.ndarray) -> np.ndarray:
    ops = cp.ops
    while oi < len(ops):
        op = ops[oi]
        kind = op[0]
        if kind == "free":
            _, slot, dom = op
            n = rows.shape[0]
            if n * dom > _ROW_LIMIT and n > 1:
                # row-disjoint views are safe: every in-place write below
                # lands on freshly repeated arrays
                mid = n // 2
                return _sweep(cp, oi, rows[:mid], acc[:mid]) + _sweep(
                    cp, oi, rows[mid:], acc[mid:]
                )
            rows = np.repeat(rows, dom, axis=0)
            acc = np.repeat(acc, dom)
            rows[:, slot] = np.tile(np.arange(dom, dtype=np.int8), n)
        elif kind == "forced":
            _, slot, flat, w, i, j = op
            rows[:, slot] = flat[_index(rows, i, j, w)]
        elif kind == "check":
            _, flat, w, i, j, k = op
            mask = flat[_index(rows, i, j, w)] == rows[:, k]
            if not mask.all():
                rows = rows[mask]
                acc = acc[mask]
        else:  # weight
            _, wflat, w, eps, i, j = op
            term = wflat[_index(rows, i, j, w)]
            if eps > 0:
                acc += term
            else:
                acc -= term
        oi += 1
    if cp.weighted:
        return np.bincount(acc % np.int16(cp.modulus), minlength=cp.modulus)
    return np.array([rows.shape[0]], dtype=np.int64)


def _exponent_histogram(
    c: SurfaceCurveComplex,
    ordering: VertexOrdering,
    data: GaugeData,
    weighted: bool,
    jobs: int = 1,
    first_value: int | None = None,
) -> np.ndarray:
    plan = _build_plan(c, ordering, data, weighted)
    cp = _compile_plan(plan)
    rows = np.zeros((1, cp.width), dtype=np.int8)
    acc = np.zeros(1, dtype=np.int16)
    if first_value is not None:
        slot, _ = cp.first_free
        rows[0, slot] = first_value
        return _sweep(cp, 1, rows, acc) * cp.tail_multiplier
    if jobs > 1 and cp.first_free is not None:
        _, dom = cp.first_free
        args = [(c, ordering, data, weighted, v) for v in range(dom)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_histogram_task, args))
        return np.sum(parts, axis=0)
    return _sweep(cp, 0, rows, acc) * cp.tail_multiplier


def _histogram_task(args):
    c, ordering, data, weighted, v = args
    return _exponent_histogram(c, ordering, data, weighted, first_value=v)


# ---------------------------------------------------------------------------
# the invariants


def count_admissible(
    c: SurfaceCurveComplex, ordering: VertexOrdering, data: GaugeData, jobs: int = 1
) -> int:
    """Number of admissible colorings."""
    validate_ordering(c, ordering)
    _check_degenerate_curve(c, data)
    hist = _exponent_histogram(c, ordering, data, weighted=False, jobs=jobs)
    return int(hist.sum())


def normalization(c: SurfaceCurveComplex, data: GaugeData) -> Fraction:
    """1 / (|G|^(off-curve vertices) * |H|^(on-curve vertices))."""
    return Fraction(
        1,
        data.group.order ** c.off_curve_vertex_count()
        * data.curve_group.order ** c.curve_vertex_count(),
    )


def invariant_untwisted(
    c: SurfaceCurveComplex, ordering: VertexOrdering, data: GaugeData, jobs: int = 1
) -> Fraction:
    """The normalized count of admissible colorings, an exact rational."""
    kappa = count_admissible(c, ordering, data, jobs=jobs)
    return kappa * normalization(c, data)


def invariant_twisted(
    c: SurfaceCurveComplex, ordering: VertexOrdering, data: GaugeData, jobs: int = 1
) -> CyclotomicNumber:
    """The weighted state sum, an exact element of Q(zeta_N).

    The twisting is re-validated first; a sum over colorings of products of
    local weights reduces to a histogram of total exponents, which is then
    assembled in the cyclotomic field and normalized.
    """
    validate_ordering(c, ordering)
    _check_degenerate_curve(c, data)
    tw = data.twisting
    if tw is None:
        raise InvalidTwisting("gauge data carries no twisting")
    bad = violations(
        tw.alpha, tw.beta, tw.gamma, tw.group, tw.curve_group, tw.biset, tw.modulus
    )
    if bad:
        raise InvalidTwisting(f"twisting fails conditions: {bad[:3]}...")
    hist = _exponent_histogram(c, ordering, data, weighted=True, jobs=jobs)
    total = CyclotomicNumber.from_exponent_counts(tw.modulus, hist.tolist())
    return total.scale(normalization(c, data))
