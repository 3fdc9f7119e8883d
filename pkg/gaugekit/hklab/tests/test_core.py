import random
from fractions import Fraction
from typing import List

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab.conf import lab_overrides, lab_setting
from hklab.core import (Gauge, Iv, TaggedPartition, ValueWithError, cousin_partition, format_rat, hk_estimate,
                        is_subordinate, merge_partitions, parse_rat, riemann_sum, validate_partition)
from hklab.exceptions import ConfigError, CousinDepthError, DomainError, InvalidGaugeError, PartitionError
from hklab.funcs import IDENTITY, constant, lookup
from hklab.sets import REFLECTED_CANTOR
from hklab.variation import gauge_dist_complement


def point_gauge(special: Fraction, radius: Fraction) -> Gauge:
    #δ(special) = radius, δ(x) = |x - special| elsewhere
    return Gauge(
        f"point({special})",
        lambda x: radius if x == special else abs(x - special),
        lambda interval: [special] if interval.contains(special) else [],
    )


class ScalarTestCase(SimpleTestCase):

    def test_parse_rat(self):

        """
            This method test the parsing of rationals
        """

        self.assertEqual(parse_rat('3/6'), Fraction(1, 2))
        self.assertEqual(parse_rat('-2'), Fraction(-2))
        self.assertEqual(parse_rat('1e-3'), Fraction(1, 1000))
        self.assertEqual(format_rat(Fraction(4)), '4/1')

        with self.assertRaises(DomainError):
            parse_rat('one half')
        with self.assertRaises(DomainError):
            parse_rat('1/0')

    def test_interval(self):
        interval: Iv = Iv('-1', '1/2')
        self.assertEqual(interval.length, Fraction(3, 2))
        self.assertEqual(interval.split(), (Iv(-1, Fraction(-1, 4)), Iv(Fraction(-1, 4), Fraction(1, 2))))
        self.assertEqual(interval.reflected(), Iv(Fraction(-1, 2), 1))
        self.assertIsNone(interval.intersection(Iv(1, 2)))
        self.assertTrue(interval.contains(Fraction(1, 2)))
        self.assertFalse(interval.contains_open(Fraction(1, 2)))

        with self.assertRaises(DomainError):
            Iv(1, 0)

    def test_value_with_error(self):

        """
            This method test the propagation of error bounds
        """

        a: ValueWithError = ValueWithError(Fraction(1, 2), Fraction(1, 100))
        b: ValueWithError = ValueWithError(Fraction(2), Fraction(1, 10))

        self.assertEqual((a + b).error, Fraction(11, 100))
        self.assertEqual((a - b).value, Fraction(-3, 2))
        self.assertEqual((a * b).error, Fraction(1, 2) * Fraction(1, 10) + 2 * Fraction(1, 100) + Fraction(1, 1000))
        self.assertEqual(abs(-a), a)
        self.assertTrue(ValueWithError(1).exact)
        self.assertTrue(a.certainly_below(Fraction(52, 100)))
        self.assertFalse(a.certainly_below(Fraction(51, 100)))

        with self.assertRaises(DomainError):
            ValueWithError(0, -1)

    def test_convention_flag_survives_products(self):
        zero: ValueWithError = ValueWithError(0, convention=True)
        self.assertTrue((zero * ValueWithError(3)).convention)
        self.assertTrue((-zero).convention)


class ValidatePartitionTestCase(SimpleTestCase):
    def setUp(self):
        self.domain: Iv = Iv(0, 1)

    def test_valid_partition(self):
        partition: TaggedPartition = TaggedPartition.from_pairs(
            [(0, (0, '1/2')), ('3/4', ('1/2', 1))], self.domain
        )
        self.assertTrue(validate_partition(partition).ok)

    def test_tag_outside_cell(self):
        partition: TaggedPartition = TaggedPartition.from_pairs(
            [('3/4', (0, '1/2')), ('3/4', ('1/2', 1))], self.domain
        )
        rules: List[str] = [v.rule for v in validate_partition(partition).violations]
        self.assertEqual(rules, ['tag'])
        self.assertEqual(validate_partition(partition).violations[0].index, 0)

    def test_overlap_and_gap(self):

        """
            This method test that overlapping and separated cells are reported
        """

        overlapping: TaggedPartition = TaggedPartition.from_pairs(
            [(0, (0, '2/3')), (1, ('1/2', 1))], self.domain
        )
        separated: TaggedPartition = TaggedPartition.from_pairs(
            [(0, (0, '1/3')), (1, ('1/2', 1))], self.domain
        )

        self.assertIn('overlap', [v.rule for v in validate_partition(overlapping).violations])
        self.assertIn('gap', [v.rule for v in validate_partition(separated).violations])

    def test_coverage(self):
        short: TaggedPartition = TaggedPartition.from_pairs([(0, (0, '1/2'))], self.domain)
        self.assertEqual([v.rule for v in validate_partition(short).violations], ['coverage'])

    def test_empty(self):
        self.assertEqual(validate_partition(TaggedPartition((), self.domain)).violations[0].rule, 'empty')


class GaugeTestCase(SimpleTestCase):

    def test_accepts_is_strict(self):
        gauge: Gauge = Gauge.constant(Fraction(1, 2))
        self.assertTrue(gauge.accepts(Fraction(1, 2), Iv(Fraction(1, 4), Fraction(3, 4))))
        self.assertFalse(gauge.accepts(Fraction(1, 2), Iv(0, 1)))

    def test_non_positive_gauge(self):

        """
            This method test that a vanishing radius is rejected
        """

        gauge: Gauge = Gauge('zero-at-0', lambda x: x)
        with self.assertRaises(InvalidGaugeError):
            gauge.at(Fraction(0))

    def test_minimum_merges_oracles(self):
        gauge: Gauge = point_gauge(Fraction(1, 3), Fraction(1, 8)).minimum(Gauge.constant(Fraction(1, 16)))
        self.assertEqual(gauge.at(Fraction(1, 3)), Fraction(1, 16))
        self.assertIn(Fraction(1, 3), gauge.candidates(Iv(0, 1)))


class CousinPartitionTestCase(SimpleTestCase):

    def test_constant_one_gauge_gives_single_cell(self):

        """
            This method test that δ ≡ 1 on [0, 1] is covered by the midpoint
        """

        partition: TaggedPartition = cousin_partition(Iv(0, 1), Gauge.constant(1))
        self.assertEqual(partition.tags, (Fraction(1, 2),))
        self.assertEqual(partition.items[0].cell, Iv(0, 1))

    def test_gauge_shrinking_towards_zero(self):

        """
            This method test δ(0) = 1/4, δ(x) = x: the cell holding 0 is tagged 0
        """

        gauge: Gauge = point_gauge(Fraction(0), Fraction(1, 4))
        partition: TaggedPartition = cousin_partition(Iv(0, 1), gauge)

        self.assertTrue(validate_partition(partition).ok)
        self.assertTrue(is_subordinate(partition, gauge))
        first = partition.items[0]
        self.assertEqual(first.tag, 0)
        self.assertLessEqual(first.cell.length, Fraction(1, 4))

    def test_degenerate_domain(self):
        partition: TaggedPartition = cousin_partition(Iv(1, 1), Gauge.constant(1))
        self.assertEqual(len(partition), 1)
        self.assertTrue(validate_partition(partition).ok)

    def test_depth_exhausted(self):

        """
            This method test that a gauge without a usable tag oracle exhausts
            the depth budget and reports the interval it could not cover
        """

        gauge: Gauge = Gauge('dist-to-1/3', lambda x: abs(x - Fraction(1, 3)) or Fraction(1, 10 ** 9))
        with self.assertRaises(CousinDepthError) as context:
            cousin_partition(Iv(0, 1), gauge, max_depth=6)

        self.assertEqual(context.exception.depth, 6)
        self.assertTrue(context.exception.interval.contains(Fraction(1, 3)))
        self.assertEqual(context.exception.gauge, 'dist-to-1/3')

    def test_depth_cap_override(self):
        with lab_overrides(DEPTH_CAP=3):
            self.assertEqual(lab_setting('DEPTH_CAP'), 3)
            with self.assertRaises(CousinDepthError):
                cousin_partition(Iv(0, 1), Gauge.constant(Fraction(1, 100)))
        self.assertNotEqual(lab_setting('DEPTH_CAP'), 3)

    def test_randomized_partitions_are_reproducible(self):
        gauge: Gauge = point_gauge(Fraction(1, 3), Fraction(1, 20))
        first: TaggedPartition = cousin_partition(Iv(0, 1), gauge, rng=random.Random(7))
        second: TaggedPartition = cousin_partition(Iv(0, 1), gauge, rng=random.Random(7))
        self.assertEqual(first, second)

    @settings(max_examples=200, deadline=None)
    @given(
        lo=st.fractions(min_value=-4, max_value=4, max_denominator=64),
        width=st.fractions(min_value=Fraction(1, 64), max_value=4, max_denominator=64),
        special=st.fractions(min_value=-4, max_value=4, max_denominator=64),
        floor=st.fractions(min_value=Fraction(1, 32), max_value=1, max_denominator=64),
        seed=st.integers(min_value=0, max_value=2 ** 16),
    )
    def test_partitions_are_valid_and_subordinate(self, lo, width, special, floor, seed):

        """
            This method test that every built partition passes both checks
        """

        domain: Iv = Iv(lo, lo + width)
        gauge: Gauge = Gauge('tent', lambda x: floor + abs(x - special) / 2)
        partition: TaggedPartition = cousin_partition(domain, gauge, rng=random.Random(seed))

        self.assertTrue(validate_partition(partition).ok)
        self.assertTrue(is_subordinate(partition, gauge))

    def test_soundness_fuzz(self):

        """
            This method test ten thousand seeded (gauge, domain) pairs
        """

        rng: random.Random = random.Random(20240611)
        failures: int = 0
        for _ in range(10 ** 4):
            lo: Fraction = Fraction(rng.randint(-64, 64), 16)
            domain: Iv = Iv(lo, lo + Fraction(rng.randint(1, 32), 16))
            special: Fraction = Fraction(rng.randint(-64, 64), 16)
            radius: Fraction = Fraction(1, rng.choice([2, 4, 8, 16]))
            gauge: Gauge = point_gauge(special, radius) if rng.random() < 0.5 else Gauge.constant(radius)
            partition: TaggedPartition = cousin_partition(domain, gauge, rng=random.Random(rng.random()))
            if not (validate_partition(partition).ok and is_subordinate(partition, gauge)):
                failures += 1
        self.assertEqual(failures, 0)


class MergeTestCase(SimpleTestCase):

    def test_merge(self):
        left: TaggedPartition = cousin_partition(Iv(-1, 0), Gauge.constant(1))
        right: TaggedPartition = cousin_partition(Iv(0, 1), Gauge.constant(1))
        merged: TaggedPartition = merge_partitions([left, right])

        self.assertEqual(merged.domain, Iv(-1, 1))
        self.assertTrue(validate_partition(merged).ok)

    def test_merge_gap(self):
        left: TaggedPartition = cousin_partition(Iv(-1, 0), Gauge.constant(1))
        right: TaggedPartition = cousin_partition(Iv(Fraction(1, 2), 1), Gauge.constant(1))
        with self.assertRaises(PartitionError):
            merge_partitions([left, right])


class EstimateTestCase(SimpleTestCase):

    def test_riemann_sum_of_constant(self):
        partition: TaggedPartition = cousin_partition(Iv(0, 2), Gauge.constant(Fraction(1, 4)))
        self.assertEqual(riemann_sum(constant(1), partition), ValueWithError(2))

    def test_linear_within_eps(self):

        """
            This method test that sums of x under the constant gauge ε stay
            within ε of 1/2
        """

        report = hk_estimate(IDENTITY, 0, 1, lambda eps: Gauge.constant(eps),
                             [Fraction(1, 10), Fraction(1, 100)], samples=5, seed=3)
        for row in report.rows:
            for value in row.sums:
                self.assertLess(abs(value.value - Fraction(1, 2)), row.eps)

    def test_reversed_limits(self):
        report = hk_estimate(constant(1), 2, 0, lambda eps: Gauge.constant(eps), [Fraction(1, 4)], seed=1)
        self.assertEqual(report.orientation, -1)
        self.assertTrue(all(value.value == -2 for value in report.rows[0].sums))

    def test_cantor_derivative_sums_vanish(self):
        deriv = lookup('cantor_deriv')
        report = hk_estimate(deriv, 0, 1, lambda eps: Gauge.constant(eps, name='c'), [Fraction(1, 10)], seed=0)
        self.assertTrue(all(value.value == 0 and value.exact for value in report.rows[0].sums))
        self.assertTrue(report.converged)

    def test_at_least_one_sample(self):
        with self.assertRaises(ConfigError):
            hk_estimate(constant(1), 0, 1, lambda eps: Gauge.constant(eps), [Fraction(1, 4)], samples=0)


seeds = st.integers(min_value=0, max_value=10 ** 6)


class RiemannSumTestCase(SimpleTestCase):

    def test_left_endpoint_sum_of_square(self):

        """
            This method test the left-endpoint sum of x² over four equal
            cells of [0, 1]
        """

        partition: TaggedPartition = TaggedPartition.from_pairs(
            [(0, (0, '1/4')), ('1/4', ('1/4', '1/2')), ('1/2', ('1/2', '3/4')), ('3/4', ('3/4', 1))], Iv(0, 1)
        )
        self.assertEqual(riemann_sum(lookup('square'), partition), ValueWithError(Fraction(7, 32)))

    @given(seeds)
    @settings(deadline=None, max_examples=50)
    def test_sum_over_merge_is_sum_over_parts(self, seed: int):
        rng: random.Random = random.Random(seed)
        left: TaggedPartition = cousin_partition(Iv(-1, 0), Gauge.constant(Fraction(1, 5)), rng=rng)
        right: TaggedPartition = cousin_partition(Iv(0, 1), Gauge.constant(Fraction(1, 7)), rng=rng)
        square = lookup('square')

        self.assertEqual(
            riemann_sum(square, merge_partitions([left, right])),
            riemann_sum(square, left) + riemann_sum(square, right),
        )

    @given(seeds, st.fractions(min_value=-3, max_value=3, max_denominator=20),
           st.fractions(min_value=-3, max_value=3, max_denominator=20))
    @settings(deadline=None, max_examples=50)
    def test_linear_in_the_integrand(self, seed: int, alpha: Fraction, beta: Fraction):

        """
            This method test Σ(αf + βg) = αΣf + βΣg on a fixed partition
        """

        partition: TaggedPartition = cousin_partition(
            Iv(0, 2), Gauge.constant(Fraction(1, 6)), rng=random.Random(seed)
        )
        square = lookup('square')

        def combined(x: Fraction) -> ValueWithError:
            return square(x).scaled(alpha) + IDENTITY(x).scaled(beta)

        self.assertEqual(
            riemann_sum(combined, partition).value,
            riemann_sum(square, partition).value * alpha + riemann_sum(IDENTITY, partition).value * beta,
        )


class SubordinationTestCase(SimpleTestCase):

    @given(seeds, st.fractions(min_value=Fraction(1, 100), max_value=1, max_denominator=100))
    @settings(deadline=None, max_examples=50)
    def test_larger_gauge_keeps_subordination(self, seed: int, extra: Fraction):
        narrow: Gauge = point_gauge(Fraction(0), Fraction(1, 8))
        wide: Gauge = Gauge('wide', lambda x: narrow.at(x) + extra)
        partition: TaggedPartition = cousin_partition(Iv(-1, 1), narrow, rng=random.Random(seed))

        self.assertTrue(is_subordinate(partition, narrow))
        self.assertTrue(is_subordinate(partition, wide))

    def test_reflected_cantor_distance_gauge(self):

        """
            This method test that a cell tagged off D may not reach across
            a point of D under the distance gauge of D
        """

        gauge: Gauge = gauge_dist_complement(REFLECTED_CANTOR)
        crossing: TaggedPartition = TaggedPartition.from_pairs([('1/2', (0, 1))], Iv(0, 1))
        inside_gap: TaggedPartition = TaggedPartition.from_pairs([('1/2', ('2/5', '3/5'))], Iv('2/5', '3/5'))

        self.assertFalse(is_subordinate(crossing, gauge))
        self.assertTrue(is_subordinate(inside_gap, gauge))
