"""Exact algebraic substrate: finite groups, two-sided actions, roots of unity.

Groups are given by explicit Cayley tables on dense indices 0..n-1, so every
axiom is checkable by exhaustive loops at the sizes this package targets.
Scalars live in the group of N-th roots of unity and sums of scalars live in
the cyclotomic field Q(zeta_N), represented exactly over the rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class AlgebraError(ValueError):
    """Base class for algebraic validation failures; carries a witness tuple."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotAssociative(AlgebraError):
    pass


class BadIdentity(AlgebraError):
    pass


class BadInverse(AlgebraError):
    pass


class NotRightAction(AlgebraError):
    pass


class NotLeftAction(AlgebraError):
    pass


class NotCommuting(AlgebraError):
    pass


class NotClosed(AlgebraError):
    pass


class NotSubgroup(AlgebraError):
    pass


class ModulusMismatch(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# finite groups


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on elements 0..order-1 with an explicit Cayley table.

    ``mul[a][b]`` is the product, ``inv[a]`` the inverse and ``identity`` the
    two-sided unit.  Instances are produced by :func:`verify_group` or the
    builders below and are immutable; sharing across workers is safe.
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    name: str = field(default="", compare=False)

    def elements(self) -> range:
        return range(self.order)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or f"group{self.order}"
        return f"FiniteGroup({label}, order={self.order})"


def verify_group(mul: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Validate a raw multiplication table and return the group it defines.

    Raises ``BadIdentity`` if no two-sided unit exists, ``BadInverse(a)`` if
    some element has no two-sided inverse, and ``NotAssociative(a, b, c)``
    with the first offending triple otherwise.
    """
    n = len(mul)
    if n == 0:
        raise BadIdentity("empty table")
    rows = tuple(tuple(row) for row in mul)
    for a, row in enumerate(rows):
        if len(row) != n:
            raise AlgebraError(f"row {a} has length {len(row)}, expected {n}", (a,))
        for b, v in enumerate(row):
            if not 0 <= v < n:
                raise AlgebraError(f"entry mul[{a}][{b}]={v} out of range", (a, b))

    identity = None
    for e in range(n):
        if all(rows[e][a] == a and rows[a][e] == a for a in range(n)):
            identity = e
            break
    if identity is None:
        raise BadIdentity("no two-sided identity element")

    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if rows[a][b] == identity and rows[b][a] == identity:
                inv[a] = b
                break
        if inv[a] is None:
            raise BadInverse(f"element {a} has no two-sided inverse", (a,))

    for a in range(n):
        for b in range(n):
            ab = rows[a][b]
            row_a = rows[a]
            for c in range(n):
                if rows[ab][c] != row_a[rows[b][c]]:
                    raise NotAssociative(
                        f"(({a}*{b})*{c}) != ({a}*({b}*{c}))", (a, b, c)
                    )

    return FiniteGroup(n, rows, identity, tuple(inv), name)


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with addition mod n; identity is 0."""
    if n < 1:
        raise AlgebraError(f"order must be positive, got {n}")
    mul = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inv = tuple((-a) % n for a in range(n))
    return FiniteGroup(n, mul, 0, inv, f"Z{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Componentwise product group; element (x, y) has index x*|B| + y."""
    nb = b.order
    n = a.order * nb

    def idx(x: int, y: int) -> int:
        return x * nb + y

    mul = tuple(
        tuple(
            idx(a.mul[p // nb][q // nb], b.mul[p % nb][q % nb]) for q in range(n)
        )
        for p in range(n)
    )
    inv = tuple(idx(a.inv[p // nb], b.inv[p % nb]) for p in range(n))
    identity = idx(a.identity, b.identity)
    name = f"{a.name or '?'}x{b.name or '?'}"
    return FiniteGroup(n, mul, identity, inv, name)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on permutations in lexicographic order; identity is index 0."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # compose(p, q)(i) = p(q(i))
    mul = tuple(
        tuple(index[tuple(p[q[i]] for i in range(n))] for q in perms) for p in perms
    )
    order = len(perms)
    inv = []
    for i, p in enumerate(perms):
        q = [0] * n
        for j, pj in enumerate(p):
            q[pj] = j
        inv.append(index[tuple(q)])
    return FiniteGroup(order, mul, 0, tuple(inv), f"S{n}")


def subgroup(gamma: FiniteGroup, elements: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Subgroup of ``gamma`` on the given elements, as a group of its own.

    Elements are reindexed canonically (identity first, then ascending); the
    second return value maps new indices back to elements of ``gamma``.
    Raises ``NotSubgroup`` if the set is not closed or misses the identity.
    """
    elems = sorted(set(elements))
    if gamma.identity not in elems:
        raise NotSubgroup("identity not in subgroup candidate", (gamma.identity,))
    carrier = tuple([gamma.identity] + [x for x in elems if x != gamma.identity])
    pos = {x: i for i, x in enumerate(carrier)}
    for x in carrier:
        if gamma.inv[x] not in pos:
            raise NotSubgroup(f"inverse of {x} missing", (x,))
        for y in carrier:
            if gamma.mul[x][y] not in pos:
                raise NotSubgroup(f"product {x}*{y} escapes the subset", (x, y))
    m = len(carrier)
    mul = tuple(tuple(pos[gamma.mul[carrier[i]][carrier[j]]] for j in range(m)) for i in range(m))
    inv = tuple(pos[gamma.inv[carrier[i]]] for i in range(m))
    sub = FiniteGroup(m, mul, 0, inv, f"{gamma.name}-sub{m}" if gamma.name else f"sub{m}")
    return sub, carrier


def all_subgroups(gamma: FiniteGroup) -> list[tuple[int, ...]]:
    """Element lists of all subgroups, found by closing every subset.

    Exhaustive over subsets containing the identity; intended for small
    groups only (the search is 2^(order-1) subsets).
    """
    n = gamma.order
    rest = [x for x in range(n) if x != gamma.identity]
    found = set()
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            cand = frozenset((gamma.identity,) + combo)
            if cand in found:
                continue
            closed = all(
                gamma.mul[x][y] in cand for x in cand for y in cand
            )
            if closed:
                found.add(cand)
    return sorted(tuple(sorted(s)) for s in found)


# ---------------------------------------------------------------------------
# bi-sets


@dataclass(frozen=True)
class BiSet:
    """A finite set with a right G-action and a commuting left H-action.

    ``right[x][g]`` is x.g and ``left[h][x]`` is h.x; both tables are
    validated by :func:`verify_biset`.
    """

    size: int
    right: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]
    group_right: FiniteGroup
    group_left: FiniteGroup

    def __len__(self) -> int:
        return self.size


def verify_biset(
    right: Sequence[Sequence[int]],
    left: Sequence[Sequence[int]],
    group_right: FiniteGroup,
    group_left: FiniteGroup,
) -> BiSet:
    """Validate raw action tables against the two group axioms + commutation."""
    m = len(right)
    if m == 0:
        raise AlgebraError("empty carrier set")
    g, h = group_right, group_left
    rt = tuple(tuple(row) for row in right)
    lt = tuple(tuple(row) for row in left)
    if any(len(row) != g.order for row in rt):
        raise AlgebraError("right table must be |X| x |G|")
    if len(lt) != h.order or any(len(row) != m for row in lt):
        raise AlgebraError("left table must be |H| x |X|")
    for table, label in ((rt, "right"), (lt, "left")):
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                if not 0 <= v < m:
                    raise AlgebraError(f"{label}[{i}][{j}]={v} out of range", (i, j))

    for x in range(m):
        if rt[x][g.identity] != x:
            raise NotRightAction(f"{x}.e != {x}", (x, g.identity, g.identity))
    for x in range(m):
        for a in range(g.order):
            xa = rt[x][a]
            for b in range(g.order):
                if rt[xa][b] != rt[x][g.mul[a][b]]:
                    raise NotRightAction(f"({x}.{a}).{b} != {x}.({a}{b})", (x, a, b))

    for x in range(m):
        if lt[h.identity][x] != x:
            raise NotLeftAction(f"e.{x} != {x}", (h.identity, h.identity, x))
    for a in range(h.order):
        for b in range(h.order):
            ab = h.mul[a][b]
            for x in range(m):
                if lt[a][lt[b][x]] != lt[ab][x]:
                    raise NotLeftAction(f"{a}.({b}.{x}) != ({a}{b}).{x}", (a, b, x))

    for eta in range(h.order):
        for x in range(m):
            for a in range(g.order):
                if lt[eta][rt[x][a]] != rt[lt[eta][x]][a]:
                    raise NotCommuting(f"{eta}.({x}.{a}) != ({eta}.{x}).{a}", (eta, x, a))

    return BiSet(m, rt, lt, g, h)


def canonical_subset(gamma: FiniteGroup, elements: Iterable[int]) -> tuple[int, ...]:
    """Deterministic ordering for a subset of a group: ascending indices."""
    elems = sorted(set(elements))
    for x in elems:
        if not 0 <= x < gamma.order:
            raise AlgebraError(f"element {x} not in group of order {gamma.order}", (x,))
    return tuple(elems)


def regular_biset(
    gamma: FiniteGroup,
    g_elements: Iterable[int],
    h_elements: Iterable[int],
    x_elements: Iterable[int],
) -> BiSet:
    """Bi-set given by multiplication inside a common host group.

    ``g_elements`` and ``h_elements`` must be subgroups of ``gamma`` and
    ``x_elements`` a subset closed under right multiplication by the former
    and left multiplication by the latter.  Subgroups are reindexed with the
    identity first; the carrier keeps ascending order.
    """
    g_sub, g_carrier = subgroup(gamma, g_elements)
    h_sub, h_carrier = subgroup(gamma, h_elements)
    xs = canonical_subset(gamma, x_elements)
    pos = {x: i for i, x in enumerate(xs)}
    for x in xs:
        for a in g_carrier:
            if gamma.mul[x][a] not in pos:
                raise NotClosed(f"{x}*{a} leaves the carrier", (x, a))
        for b in h_carrier:
            if gamma.mul[b][x] not in pos:
                raise NotClosed(f"{b}*{x} leaves the carrier", (b, x))
    m = len(xs)
    right = tuple(
        tuple(pos[gamma.mul[xs[i]][a]] for a in g_carrier) for i in range(m)
    )
    left = tuple(
        tuple(pos[gamma.mul[b][xs[i]]] for i in range(m)) for b in h_carrier
    )
    return verify_biset(right, left, g_sub, h_sub)


def trivial_biset(group_right: FiniteGroup | None = None,
                  group_left: FiniteGroup | None = None) -> BiSet:
    """One-point bi-set; defaults to trivial groups on both sides."""
    g = group_right if group_right is not None else cyclic_group(1)
    h = group_left if group_left is not None else cyclic_group(1)
    right = ((0,) * g.order,)
    left = tuple((0,) for _ in range(h.order))
    return verify_biset(right, left, g, h)


# ---------------------------------------------------------------------------
# roots of unity and cyclotomic arithmetic


@dataclass(frozen=True)
class UnitScalar:
    """The root of unity zeta_N^exponent, with exponent kept reduced mod N."""

    modulus: int
    exponent: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ModulusMismatch(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    def __mul__(self, other: "UnitScalar") -> "UnitScalar":
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
        return UnitScalar(self.modulus, self.exponent + other.exponent)

    def inverse(self) -> "UnitScalar":
        return UnitScalar(self.modulus, -self.exponent)

    def __pow__(self, k: int) -> "UnitScalar":
        return UnitScalar(self.modulus, self.exponent * k)

    @classmethod
    def one(cls, modulus: int) -> "UnitScalar":
        return cls(modulus, 0)


def _poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_divmod_monic(p: Sequence, d: Sequence) -> tuple[list, list]:
    # d must be monic; works over any exact coefficient ring
    p = list(p)
    dd = len(d) - 1
    q = [0] * max(len(p) - dd, 1)
    for i in range(len(p) - 1, dd - 1, -1):
        c = p[i]
        if c:
            q[i - dd] = c
            for j, b in enumerate(d):
                p[i - dd + j] -= c * b
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return q, p


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first, computed by exact division.

    Phi_n = (x^n - 1) / prod of Phi_d over proper divisors d of n.  The zero
    remainder of every division is asserted as a self-check.
    """
    if n < 1:
        raise AlgebraError(f"n must be positive, got {n}")
    poly: list[int] = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d == n:
            continue
        poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
        assert rem == [0], f"nonzero remainder dividing x^{n}-1 by Phi_{d}"
    return tuple(poly)


@lru_cache(maxsize=None)
def _phi_degree(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@dataclass(frozen=True)
class CyclotomicNumber:
    """An element of Q(zeta_N) in the power basis reduced mod Phi_N.

    ``coeffs`` always has length deg Phi_N, so equality of values is exactly
    equality of coefficient tuples.
    """

    modulus: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def zero(cls, modulus: int) -> "CyclotomicNumber":
        return cls(modulus, (Fraction(0),) * _phi_degree(modulus))

    @classmethod
    def from_rational(cls, value, modulus: int) -> "CyclotomicNumber":
        deg = _phi_degree(modulus)
        coeffs = [Fraction(0)] * deg
        coeffs[0] = Fraction(value)
        return cls(modulus, tuple(coeffs))

    @classmethod
    def one(cls, modulus: int) -> "CyclotomicNumber":
        return cls.from_rational(1, modulus)

    @classmethod
    def from_root(cls, root: UnitScalar) -> "CyclotomicNumber":
        return cls.from_power(root.modulus, root.exponent)

    @classmethod
    def from_power(cls, modulus: int, exponent: int) -> "CyclotomicNumber":
        """The value zeta_N^exponent."""
        exponent %= modulus
        raw = [Fraction(0)] * (exponent + 1)
        raw[exponent] = Fraction(1)
        return cls(modulus, _reduce(raw, modulus))

    @classmethod
    def from_exponent_counts(cls, modulus: int, counts: Sequence) -> "CyclotomicNumber":
        """The sum over k of counts[k] * zeta_N^k."""
        raw = [Fraction(v) for v in counts]
        return cls(modulus, _reduce(raw, modulus))

    def _check(self, other: "CyclotomicNumber") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} != {other.modulus}")

    def __add__(self, other: "CyclotomicNumber") -> "CyclotomicNumber":
        self._check(other)
        return CyclotomicNumber(
            self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "CyclotomicNumber") -> "CyclotomicNumber":
        self._check(other)
        return CyclotomicNumber(
            self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __mul__(self, other: "CyclotomicNumber") -> "CyclotomicNumber":
        self._check(other)
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        return CyclotomicNumber(self.modulus, _reduce(prod, self.modulus))

    def scale(self, value) -> "CyclotomicNumber":
        q = Fraction(value)
        return CyclotomicNumber(self.modulus, tuple(c * q for c in self.coeffs))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.modulus)
        total = 0j
        for k, c in enumerate(self.coeffs):
            total += float(c) * z**k
        return total

    def __repr__(self) -> str:
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        body = " + ".join(terms) if terms else "0"
        return f"Cyclo(N={self.modulus}: {body})"


def _reduce(coeffs: list[Fraction], modulus: int) -> tuple[Fraction, ...]:
    phi = [Fraction(c) for c in cyclotomic_polynomial(modulus)]
    deg = len(phi) - 1
    _, rem = _poly_divmod_monic([Fraction(c) for c in coeffs], phi)
    rem = rem + [Fraction(0)] * (deg - len(rem))
    return tuple(rem[:deg])


# ---------------------------------------------------------------------------
# multiplicative characters


@dataclass(frozen=True)
class Character:
    """A homomorphism from a finite group into the N-th roots of unity.

    ``exponents[a]`` is the exponent of the value at element a, so
    exponents[ab] = exponents[a] + exponents[b] mod N.
    """

    group: FiniteGroup
    modulus: int
    exponents: tuple[int, ...]

    def value(self, a: int) -> UnitScalar:
        return UnitScalar(self.modulus, self.exponents[a])

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def __mul__(self, other: "Character") -> "Character":
        if self.group is not other.group and self.group != other.group:
            raise AlgebraError("characters of different groups")
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} != {other.modulus}")
        exps = tuple((a + b) % self.modulus for a, b in zip(self.exponents, other.exponents))
        return Character(self.group, self.modulus, exps)


def _generating_sequence(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    reached = {g.identity}
    for a in g.elements():
        if a in reached:
            continue
        gens.append(a)
        frontier = list(reached)
        while frontier:
            x = frontier.pop()
            for y in gens:
                for z in (g.mul[x][y], g.mul[y][x]):
                    if z not in reached:
                        reached.add(z)
                        frontier.append(z)
        if len(reached) == g.order:
            break
    return gens


def characters_of(group: FiniteGroup, modulus: int) -> list[Character]:
    """All multiplicative characters of ``group`` valued in mu_N.

    Exhaustive over exponent assignments to a generating sequence; each
    candidate is extended by closure and then verified on every pair.
    """
    gens = _generating_sequence(group)
    out = []
    for assignment in itertools.product(range(modulus), repeat=len(gens)):
        exps: dict[int, int] = {group.identity: 0}
        for a, e in zip(gens, assignment):
            if a in exps and exps[a] != e:
                break
            exps[a] = e
        else:
            ok = True
            frontier = list(exps)
            while frontier and ok:
                x = frontier.pop()
                for a, e in zip(gens, assignment):
                    y = group.mul[x][a]
                    v = (exps[x] + e) % modulus
                    if y in exps:
                        if exps[y] != v:
                            ok = False
                            break
                    else:
                        exps[y] = v
                        frontier.append(y)
            if not ok or len(exps) != group.order:
                continue
            table = tuple(exps[a] for a in group.elements())
            if all(
                table[group.mul[a][b]] == (table[a] + table[b]) % modulus
                for a in group.elements()
                for b in group.elements()
            ):
                out.append(Character(group, modulus, table))
    out.sort(key=lambda ch: ch.exponents)
    return out


def trivial_character(group: FiniteGroup, modulus: int) -> Character:
    return Character(group, modulus, (0,) * group.order)
