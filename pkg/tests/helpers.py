"""Shared comparison and oracle helpers for the test suite."""

from itertools import product

from defectsum.surfaces import SurfaceCurveComplex, edge_key


def oriented_triangle_set(c: SurfaceCurveComplex) -> set[tuple[int, int, int]]:
    """Triangles canonicalized by rotating the smallest vertex first."""
    out = set()
    for tri in c.triangles:
        i = tri.index(min(tri))
        out.add((tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]))
    return out


def same_complex(a: SurfaceCurveComplex, b: SurfaceCurveComplex) -> bool:
    """Equality up to triangle list order and cyclic rotation."""
    return (
        a.vertex_count == b.vertex_count
        and a.on_curve == b.on_curve
        and a.curve_edges == b.curve_edges
        and oriented_triangle_set(a) == oriented_triangle_set(b)
    )


def conservation_snapshot(c: SurfaceCurveComplex) -> tuple:
    """The quantities every move must preserve."""
    return (c.euler_characteristic(), c.curve_component_count())


def brute_force_colorings(c, ordering, data):
    """All admissible colorings by filtering the full label product space.

    Completely independent of the production enumerator: walks the entire
    well-typed assignment space and keeps the assignments whose triangles
    all satisfy their composition rule.
    """
    from defectsum.statesum import edge_class, EdgeClass

    domains = []
    for e in c.edges:
        cls = edge_class(c, e)
        if cls is EdgeClass.BULK:
            domains.append(range(data.group.order))
        elif cls is EdgeClass.MEETS_CURVE:
            domains.append(range(data.biset.size))
        else:
            domains.append(range(data.curve_group.order))

    idx = c.edge_index
    checks = []
    for tri in c.triangles:
        v0, v1, v2 = ordering.sort_triangle(tri)
        e01 = idx[edge_key(v0, v1)]
        e12 = idx[edge_key(v1, v2)]
        e02 = idx[edge_key(v0, v2)]
        marked = sum(c.on_curve[v] for v in tri)
        if marked == 0:
            table = data.group.mul
        elif marked == 1:
            table = data.biset.right
        else:
            table = data.biset.left
        checks.append((table, e01, e12, e02))

    out = []
    for labels in product(*domains):
        if all(t[labels[i]][labels[j]] == labels[k] for t, i, j, k in checks):
            out.append(labels)
    return out
