"""Scalar twisting triples: the defect generalization of a group 2-cocycle.

A twisting assigns roots of unity to ordered pairs over the bulk group, the
bi-set and the curve group.  The four compatibility conditions checked here
are exactly what makes the weighted state sum move-invariant; they are
verified by exhaustive loops, reporting every witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from defectsum.algebra import (
    BiSet,
    Character,
    FiniteGroup,
    canonical_subset,
    cyclic_group,
    direct_product,
    regular_biset,
    subgroup,
)


class TwistingError(ValueError):
    pass


class ConditionViolated(TwistingError):
    """One or more of conditions (1)-(4) fail; all witnesses are attached."""

    def __init__(self, witnesses: list[tuple[int, tuple]]):
        self.witnesses = witnesses
        preview = ", ".join(
            f"({c}) at {w}" for c, w in witnesses[:3]
        )
        more = "" if len(witnesses) <= 3 else f" and {len(witnesses) - 3} more"
        super().__init__(f"{len(witnesses)} condition violations: {preview}{more}")


class ModulusIncompatible(TwistingError):
    pass


class InternalConditionFailure(TwistingError):
    """A construction that is provably valid failed validation: a bug."""


class SearchSpaceTooLarge(TwistingError):
    pass


@dataclass(frozen=True)
class TwistingTriple:
    """Exponent tables for the three local weights, all mod ``modulus``.

    ``alpha[f][g]``, ``beta[x][g]`` and ``gamma[h][x]`` are exponents of the
    fixed primitive root of unity.  Instances from :func:`validate` or the
    constructors below satisfy conditions (1)-(4).
    """

    group: FiniteGroup
    curve_group: FiniteGroup
    biset: BiSet
    modulus: int
    alpha: tuple[tuple[int, ...], ...]
    beta: tuple[tuple[int, ...], ...]
    gamma: tuple[tuple[int, ...], ...]


def violations(
    alpha: Sequence[Sequence[int]],
    beta: Sequence[Sequence[int]],
    gamma: Sequence[Sequence[int]],
    group: FiniteGroup,
    curve_group: FiniteGroup,
    biset: BiSet,
    modulus: int,
) -> list[tuple[int, tuple]]:
    """All (condition number, witness tuple) pairs, in deterministic order."""
    g_, h_, x_ = group, curve_group, biset
    n = modulus
    out: list[tuple[int, tuple]] = []

    for f in g_.elements():
        for g in g_.elements():
            for h in g_.elements():
                lhs = alpha[f][g] - alpha[f][g_.mul[g][h]] + alpha[g_.mul[f][g]][h] - alpha[g][h]
                if lhs % n:
                    out.append((1, (f, g, h)))

    for x in range(x_.size):
        for g in g_.elements():
            for h in g_.elements():
                lhs = beta[x][g] - beta[x][g_.mul[g][h]] + beta[x_.right[x][g]][h] - alpha[g][h]
                if lhs % n:
                    out.append((2, (x, g, h)))

    for eta in h_.elements():
        for x in range(x_.size):
            for g in g_.elements():
                lhs = (
                    gamma[eta][x]
                    - gamma[eta][x_.right[x][g]]
                    + beta[x_.left[eta][x]][g]
                    - beta[x][g]
                )
                if lhs % n:
                    out.append((3, (eta, x, g)))

    for x in range(x_.size):
        for y in range(x_.size):
            for eta in h_.elements():
                for theta in h_.elements():
                    te = h_.mul[theta][eta]
                    lhs = (
                        gamma[theta][x_.left[eta][y]]
                        - gamma[te][y]
                        + gamma[eta][y]
                        - gamma[theta][x_.left[eta][x]]
                        + gamma[te][x]
                        - gamma[eta][x]
                    )
                    if lhs % n:
                        out.append((4, (x, y, eta, theta)))
    return out


def validate(
    alpha: Sequence[Sequence[int]],
    beta: Sequence[Sequence[int]],
    gamma: Sequence[Sequence[int]],
    group: FiniteGroup,
    curve_group: FiniteGroup,
    biset: BiSet,
    modulus: int,
) -> TwistingTriple:
    """Validate candidate tables; raises with every witness on failure."""
    if modulus < 1:
        raise ModulusIncompatible(f"modulus must be positive, got {modulus}")
    a = tuple(tuple(v % modulus for v in row) for row in alpha)
    b = tuple(tuple(v % modulus for v in row) for row in beta)
    c = tuple(tuple(v % modulus for v in row) for row in gamma)
    if len(a) != group.order or any(len(r) != group.order for r in a):
        raise TwistingError("alpha must be |G| x |G|")
    if len(b) != biset.size or any(len(r) != group.order for r in b):
        raise TwistingError("beta must be |X| x |G|")
    if len(c) != curve_group.order or any(len(r) != biset.size for r in c):
        raise TwistingError("gamma must be |H| x |X|")
    found = violations(a, b, c, group, curve_group, biset, modulus)
    if found:
        raise ConditionViolated(found)
    return TwistingTriple(group, curve_group, biset, modulus, a, b, c)


def trivial_triple(
    group: FiniteGroup, curve_group: FiniteGroup, biset: BiSet, modulus: int
) -> TwistingTriple:
    """The all-ones twisting; valid for any gauge data."""
    a = tuple((0,) * group.order for _ in range(group.order))
    b = tuple((0,) * group.order for _ in range(biset.size))
    c = tuple((0,) * biset.size for _ in range(curve_group.order))
    return TwistingTriple(group, curve_group, biset, modulus, a, b, c)


# ---------------------------------------------------------------------------
# example family 1: restriction of a group 2-cocycle


def cocycle_violations(
    table: Sequence[Sequence[int]], host: FiniteGroup, modulus: int
) -> list[tuple]:
    """Witnesses against the plain 2-cocycle condition on a single group."""
    out = []
    for f in host.elements():
        for g in host.elements():
            for h in host.elements():
                lhs = (
                    table[f][g]
                    - table[f][host.mul[g][h]]
                    + table[host.mul[f][g]][h]
                    - table[g][h]
                )
                if lhs % modulus:
                    out.append((f, g, h))
    return out


def group_2cocycle_zn_zn(n: int, k: int, modulus: int) -> tuple[tuple[int, ...], ...]:
    """A 2-cocycle on Z/n x Z/n: ((a1,a2),(b1,b2)) -> zeta^((N/n) k a1 b2).

    Indices follow :func:`defectsum.algebra.direct_product` of two copies of
    Z/n.  Requires n to divide the modulus.
    """
    if modulus % n:
        raise ModulusIncompatible(f"{n} does not divide modulus {modulus}")
    scale = modulus // n
    size = n * n
    return tuple(
        tuple((scale * k * (p // n) * (q % n)) % modulus for q in range(size))
        for p in range(size)
    )


def restrict_from_group_cocycle(
    host: FiniteGroup,
    cocycle: Sequence[Sequence[int]],
    g_elements,
    h_elements,
    x_elements,
    modulus: int,
) -> TwistingTriple:
    """Restrict a 2-cocycle on a host group to a twisting for the bi-set of
    subgroups acting by multiplication.

    The cocycle condition on the host makes all four conditions hold on the
    restriction; validation failure here signals an implementation bug.
    """
    bad = cocycle_violations(cocycle, host, modulus)
    if bad:
        raise ConditionViolated([(1, w) for w in bad])
    _, g_carrier = subgroup(host, g_elements)
    _, h_carrier = subgroup(host, h_elements)
    xs = canonical_subset(host, x_elements)
    biset = regular_biset(host, g_elements, h_elements, x_elements)

    alpha = tuple(tuple(cocycle[a][b] % modulus for b in g_carrier) for a in g_carrier)
    beta = tuple(tuple(cocycle[x][b] % modulus for b in g_carrier) for x in xs)
    gamma = tuple(tuple(cocycle[a][x] % modulus for x in xs) for a in h_carrier)
    try:
        return validate(alpha, beta, gamma, biset.group_right, biset.group_left, biset, modulus)
    except ConditionViolated as err:
        raise InternalConditionFailure(
            f"restricted cocycle failed validation: {err}"
        ) from err


# ---------------------------------------------------------------------------
# example family 2: twistings from characters on double orbits


@dataclass(frozen=True)
class DoubleOrbitPartition:
    """Partition of a bi-set under x ~ h.x.g, with dense orbit indices."""

    biset: BiSet
    orbit_of: tuple[int, ...]
    orbit_count: int


def double_orbits(biset: BiSet) -> DoubleOrbitPartition:
    """Orbits of the equivalence generated by both one-sided actions."""
    m = biset.size
    orbit = [-1] * m
    count = 0
    for start in range(m):
        if orbit[start] != -1:
            continue
        stack = [start]
        orbit[start] = count
        while stack:
            x = stack.pop()
            neighbours = itertools.chain(
                (biset.right[x][g] for g in biset.group_right.elements()),
                (biset.left[h][x] for h in biset.group_left.elements()),
            )
            for y in neighbours:
                if orbit[y] == -1:
                    orbit[y] = count
                    stack.append(y)
        count += 1
    return DoubleOrbitPartition(biset, tuple(orbit), count)


def from_characters(
    biset: BiSet,
    phi: Sequence[Character],
    psi: Sequence[Character],
    modulus: int,
) -> TwistingTriple:
    """Twisting with trivial alpha built from one character pair per orbit.

    ``phi[k]`` is a character of the right-acting group and ``psi[k]`` one of
    the left-acting group, both used on orbit k.  Characters are constant on
    orbits by construction, which is what makes conditions (2)-(4) hold.
    """
    orbits = double_orbits(biset)
    if len(phi) != orbits.orbit_count or len(psi) != orbits.orbit_count:
        raise TwistingError(
            f"need one character pair per orbit ({orbits.orbit_count}), "
            f"got {len(phi)} and {len(psi)}"
        )
    for ch in phi:
        if ch.modulus != modulus or ch.group != biset.group_right:
            raise TwistingError("phi characters must live on G with the run modulus")
    for ch in psi:
        if ch.modulus != modulus or ch.group != biset.group_left:
            raise TwistingError("psi characters must live on H with the run modulus")

    g, h = biset.group_right, biset.group_left
    alpha = tuple((0,) * g.order for _ in range(g.order))
    beta = tuple(
        tuple(phi[orbits.orbit_of[x]].exponents[a] for a in g.elements())
        for x in range(biset.size)
    )
    gamma = tuple(
        tuple(psi[orbits.orbit_of[x]].exponents[a] for x in range(biset.size))
        for a in h.elements()
    )
    try:
        return validate(alpha, beta, gamma, g, h, biset, modulus)
    except ConditionViolated as err:
        raise InternalConditionFailure(
            f"character twisting failed validation: {err}"
        ) from err


# ---------------------------------------------------------------------------
# brute-force search for all valid triples (desk scale only)


def search_valid_triples(
    group: FiniteGroup,
    curve_group: FiniteGroup,
    biset: BiSet,
    modulus: int,
    cell_limit: int = 64,
) -> list[TwistingTriple]:
    """Every valid twisting, by backtracking over the table entries.

    Guarded by |G|*|X|*|H| <= ``cell_limit``; the search prunes on each
    condition instance as soon as all of its entries are assigned.
    """
    cells = group.order * biset.size * curve_group.order
    if cells > cell_limit:
        raise SearchSpaceTooLarge(f"{cells} cells exceeds limit {cell_limit}")

    ng, nx, nh = group.order, biset.size, curve_group.order
    # flat entry ids: alpha | beta | gamma
    def aid(f, g):
        return f * ng + g

    def bid(x, g):
        return ng * ng + x * ng + g

    def cid(h, x):
        return ng * ng + nx * ng + h * nx + x

    total = ng * ng + nx * ng + nh * nx

    instances: list[tuple[tuple[int, int], ...]] = []
    for f in range(ng):
        for g in range(ng):
            for h in range(ng):
                instances.append(
                    (
                        (aid(f, g), 1),
                        (aid(f, group.mul[g][h]), -1),
                        (aid(group.mul[f][g], h), 1),
                        (aid(g, h), -1),
                    )
                )
    for x in range(nx):
        for g in range(ng):
            for h in range(ng):
                instances.append(
                    (
                        (bid(x, g), 1),
                        (bid(x, group.mul[g][h]), -1),
                        (bid(biset.right[x][g], h), 1),
                        (aid(g, h), -1),
                    )
                )
    for eta in range(nh):
        for x in range(nx):
            for g in range(ng):
                instances.append(
                    (
                        (cid(eta, x), 1),
                        (cid(eta, biset.right[x][g]), -1),
                        (bid(biset.left[eta][x], g), 1),
                        (bid(x, g), -1),
                    )
                )
    for x in range(nx):
        for y in range(nx):
            for eta in range(nh):
                for theta in range(nh):
                    te = curve_group.mul[theta][eta]
                    instances.append(
                        (
                            (cid(theta, biset.left[eta][y]), 1),
                            (cid(te, y), -1),
                            (cid(eta, y), 1),
                            (cid(theta, biset.left[eta][x]), -1),
                            (cid(te, x), 1),
                            (cid(eta, x), -1),
                        )
                    )

    by_last: list[list[int]] = [[] for _ in range(total)]
    for idx, inst in enumerate(instances):
        by_last[max(e for e, _ in inst)].append(idx)

    values = [0] * total
    found: list[TwistingTriple] = []

    def assemble() -> TwistingTriple:
        alpha = tuple(tuple(values[aid(f, g)] for g in range(ng)) for f in range(ng))
        beta = tuple(tuple(values[bid(x, g)] for g in range(ng)) for x in range(nx))
        gamma = tuple(tuple(values[cid(h, x)] for x in range(nx)) for h in range(nh))
        return TwistingTriple(group, curve_group, biset, modulus, alpha, beta, gamma)

    def rec(pos: int):
        if pos == total:
            found.append(assemble())
            return
        for v in range(modulus):
            values[pos] = v
            ok = True
            for idx in by_last[pos]:
                acc = 0
                for e, sign in instances[idx]:
                    acc += sign * values[e]
                if acc % modulus:
                    ok = False
                    break
            if ok:
                rec(pos + 1)

    rec(0)
    return found


def klein_four_group() -> FiniteGroup:
    """Z/2 x Z/2 with the product indexing used by the cocycle builder."""
    return direct_product(cyclic_group(2), cyclic_group(2))
