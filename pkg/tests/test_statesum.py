"""Coloring enumeration, admissibility and invariant tests."""

from fractions import Fraction

import pytest

from defectsum import algebra as alg
from defectsum import statesum as ss
from defectsum import surfaces as sf
from defectsum import twisting as tw
from defectsum.algebra import CyclotomicNumber, cyclic_group, symmetric_group
from defectsum.statesum import (
    EdgeClass,
    GaugeData,
    InvalidGaugeData,
    InvalidTwisting,
    count_admissible,
    edge_class,
    enumerate_admissible,
    invariant_twisted,
    invariant_untwisted,
    is_admissible,
    lambda_tilde,
    weight,
)
from defectsum.surfaces import (
    default_ordering,
    sphere_octahedron_equator,
    tetrahedron_sphere,
    torus_7vertex,
    torus_grid,
)
from helpers import brute_force_colorings


def bulk_data(group):
    return GaugeData(group, cyclic_group(1), alg.trivial_biset(group))


def z2_regular():
    z2 = cyclic_group(2)
    x = alg.regular_biset(z2, [0, 1], [0, 1], [0, 1])
    return GaugeData(z2, z2, x)


def z3_regular():
    z3 = cyclic_group(3)
    x = alg.regular_biset(z3, [0, 1, 2], [0, 1, 2], [0, 1, 2])
    return GaugeData(z3, z3, x)


class TestEdgeClass:
    def test_classes_on_grid(self):
        c = torus_grid(3, 3, 0)
        for e in c.edges:
            marked = sum(c.on_curve[v] for v in e)
            assert edge_class(c, e) is EdgeClass(marked)

    def test_curve_edge_is_on_curve(self):
        c = sphere_octahedron_equator()
        assert edge_class(c, (0, 1)) is EdgeClass.ON_CURVE
        assert edge_class(c, (0, 4)) is EdgeClass.MEETS_CURVE
        assert edge_class(c, (4, 5)) is EdgeClass.BULK


class TestAdmissibility:
    def test_bulk_rule_z3(self):
        # triangle with labels 1, 2 on its low edges wants 1+2=0 opposite
        z3 = cyclic_group(3)
        c = tetrahedron_sphere()
        o = default_ordering(c)
        data = bulk_data(z3)
        tri = 0  # (0,2,1) -> ordered (0,1,2): edges 01,12,02
        idx = c.edge_index
        labels = [0] * len(c.edges)
        labels[idx[(0, 1)]] = 1
        labels[idx[(1, 2)]] = 2
        labels[idx[(0, 2)]] = 0
        assert is_admissible(c, o, data, tri, labels)
        labels[idx[(0, 2)]] = 1
        assert not is_admissible(c, o, data, tri, labels)

    def test_edge_on_curve_rule(self):
        data = z2_regular()
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        idx = c.edge_index
        tri = c.triangle_index((0, 1, 4))
        labels = [0] * len(c.edges)
        labels[idx[(0, 1)]] = 1  # eta
        labels[idx[(1, 4)]] = 0  # x
        labels[idx[(0, 4)]] = 1  # y = eta.x
        assert is_admissible(c, o, data, tri, labels)
        labels[idx[(0, 4)]] = 0
        assert not is_admissible(c, o, data, tri, labels)

    def test_lambda_tilde_positions(self):
        data = z2_regular()
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        idx = c.edge_index
        tri = c.triangle_index((0, 1, 4))
        labels = [0] * len(c.edges)
        labels[idx[(0, 1)]] = 1
        labels[idx[(1, 4)]] = 1
        assert lambda_tilde(c, o, tri, labels) == (1, 1)


class TestEnumerate:
    def test_tetrahedron_z2_count(self):
        c = tetrahedron_sphere()
        o = default_ordering(c)
        data = bulk_data(cyclic_group(2))
        got = list(enumerate_admissible(c, o, data))
        assert len(got) == 8
        assert count_admissible(c, o, data) == 8

    def test_deterministic_order(self):
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        data = z2_regular()
        a = list(enumerate_admissible(c, o, data))
        b = list(enumerate_admissible(c, o, data))
        assert a == b

    def test_octahedron_matches_brute_force(self):
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        data = z2_regular()
        mine = set(enumerate_admissible(c, o, data))
        oracle = set(brute_force_colorings(c, o, data))
        assert mine == oracle

    def test_trivial_data_single_coloring(self):
        z1 = cyclic_group(1)
        data = GaugeData(z1, z1, alg.trivial_biset())
        for c in (tetrahedron_sphere(), torus_grid(3, 3, 0)):
            o = default_ordering(c)
            assert count_admissible(c, o, data) == 1

    def test_torus7_z2_count(self):
        c = torus_7vertex()
        o = default_ordering(c)
        assert count_admissible(c, o, bulk_data(cyclic_group(2))) == 256

    def test_vectorized_count_agrees_with_enumeration(self):
        c = torus_grid(3, 3, 0)
        o = default_ordering(c)
        for data in (z2_regular(), z3_regular()):
            slow = sum(1 for _ in enumerate_admissible(c, o, data))
            assert count_admissible(c, o, data) == slow


class TestUntwisted:
    @pytest.mark.parametrize(
        "group,expected",
        [(cyclic_group(2), Fraction(1, 2)), (cyclic_group(3), Fraction(1, 3)),
         (symmetric_group(3), Fraction(1, 6))],
    )
    def test_sphere_values(self, group, expected):
        c = tetrahedron_sphere()
        o = default_ordering(c)
        assert invariant_untwisted(c, o, bulk_data(group)) == expected

    def test_empty_curve_requires_trivial_defect_data(self):
        c = tetrahedron_sphere()
        o = default_ordering(c)
        with pytest.raises(InvalidGaugeData):
            invariant_untwisted(c, o, z2_regular())

    def test_octahedron_z2_regular(self):
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        assert invariant_untwisted(c, o, z2_regular()) == Fraction(1, 2)

    def test_jobs_partition_matches(self):
        c = torus_grid(3, 3, 0)
        o = default_ordering(c)
        data = z2_regular()
        assert invariant_untwisted(c, o, data, jobs=2) == invariant_untwisted(
            c, o, data
        )


class TestWeightsAndTwisted:
    def octa_char_data(self):
        data = z2_regular()
        sign = [ch for ch in alg.characters_of(data.group, 2) if not ch.is_trivial()][0]
        triple = tw.from_characters(data.biset, [sign], [sign], 2)
        return GaugeData(data.group, data.curve_group, data.biset, triple)

    def test_trivial_twisting_weight_is_one(self):
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        base = z2_regular()
        data = GaugeData(
            base.group, base.curve_group, base.biset,
            tw.trivial_triple(base.group, base.curve_group, base.biset, 2),
        )
        labels = next(enumerate_admissible(c, o, data))
        for t in range(len(c.triangles)):
            assert weight(c, o, data, t, labels).exponent == 0

    def test_weight_negates_exponent_on_reversed_triangle(self):
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        data = self.octa_char_data()
        labels = [1] * len(c.edges)
        for t in range(len(c.triangles)):
            eps = sf.epsilon(c.triangles[t], o)
            w = weight(c, o, data, t, labels)
            raw = data.twisting.gamma[lambda_tilde(c, o, t, labels)[0]][
                lambda_tilde(c, o, t, labels)[1]
            ]
            assert w.exponent == (eps * raw) % 2

    def test_trivial_twisting_matches_untwisted(self):
        for c in (sphere_octahedron_equator(), torus_grid(3, 3, 0)):
            o = default_ordering(c)
            base = z2_regular()
            data = GaugeData(
                base.group, base.curve_group, base.biset,
                tw.trivial_triple(base.group, base.curve_group, base.biset, 2),
            )
            zt = invariant_twisted(c, o, data)
            zu = invariant_untwisted(c, o, base)
            assert zt == CyclotomicNumber.from_rational(zu, 2)

    def test_octahedron_character_twisting_pinned(self):
        # value pinned by the full-enumeration oracle in
        # test_twisted_matches_brute_force_oracle below
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        z = invariant_twisted(c, o, self.octa_char_data())
        assert z == CyclotomicNumber.from_rational(Fraction(1, 2), 2)

    def test_twisted_matches_brute_force_oracle(self):
        # independent path: filter every well-typed labeling by chi, then
        # multiply the three weight tables with epsilon exponents directly
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        data = self.octa_char_data()
        n = data.twisting.modulus
        total = CyclotomicNumber.zero(n)
        for labels in brute_force_colorings(c, o, data):
            expo = 0
            for t in range(len(c.triangles)):
                expo += weight(c, o, data, t, labels).exponent
            total = total + CyclotomicNumber.from_power(n, expo)
        expected = total.scale(ss.normalization(c, data))
        assert invariant_twisted(c, o, data) == expected

    def test_missing_twisting_raises(self):
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        with pytest.raises(InvalidTwisting):
            invariant_twisted(c, o, z2_regular())

    def test_invalid_twisting_rejected_before_compute(self):
        base = z2_regular()
        triple = tw.trivial_triple(base.group, base.curve_group, base.biset, 2)
        beta = list(list(r) for r in triple.beta)
        beta[0][1] = 1  # flipped entry breaks condition (2) or (3)
        broken = tw.TwistingTriple(
            triple.group, triple.curve_group, triple.biset, 2,
            triple.alpha, tuple(tuple(r) for r in beta), triple.gamma,
        )
        data = GaugeData(base.group, base.curve_group, base.biset, broken)
        c = sphere_octahedron_equator()
        o = default_ordering(c)
        with pytest.raises(InvalidTwisting):
            invariant_twisted(c, o, data)


class TestTransparentDefectRegression:
    """Empirical observation, not a paper claim: the regular bi-set with
    both groups equal acts as an invisible defect on these fixtures."""

    def test_sphere_with_and_without_circle(self):
        plain = invariant_untwisted(
            tetrahedron_sphere(),
            default_ordering(tetrahedron_sphere()),
            bulk_data(cyclic_group(2)),
        )
        defect = invariant_untwisted(
            sphere_octahedron_equator(),
            default_ordering(sphere_octahedron_equator()),
            z2_regular(),
        )
        assert plain == defect == Fraction(1, 2)

    def test_torus_with_and_without_meridian(self):
        for group in (cyclic_group(2), cyclic_group(3)):
            plain = invariant_untwisted(
                torus_7vertex(), default_ordering(torus_7vertex()), bulk_data(group)
            )
            n = group.order
            x = alg.regular_biset(group, range(n), range(n), range(n))
            data = GaugeData(group, group, x)
            defect = invariant_untwisted(
                torus_grid(3, 3, 0), default_ordering(torus_grid(3, 3, 0)), data
            )
            assert plain == defect
