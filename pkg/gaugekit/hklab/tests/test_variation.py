import random
from fractions import Fraction
from typing import List

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab import variation
from hklab.core import Gauge, Iv, TaggedPartition, ValueWithError, cousin_partition, is_subordinate
from hklab.cov import svc_composition_check
from hklab.exceptions import ConfigError, PartitionError, UnknownNameError, UnsupportedInstanceError
from hklab.funcs import ABS, CANTOR_ABS, CANTOR_FN, IDENTITY, lookup
from hklab.sets import CANTOR, EMPTY, REFLECTED_CANTOR, SVC, FiniteSet
from hklab.variation import (Criterion, GreedySign, Repartition, SplitAt, Verdict, VariationReport, VariationSums,
                             adversarial_variation, dini_covers, dini_upper_estimate, gauge_dist_complement,
                             gauge_from_dini, gauge_from_zero_derivative, image_measure_bound, parse_strategy,
                             subinterval_ncv_scan, variation_sums)

SCHEDULE: List[Fraction] = [Fraction(1, 10), Fraction(1, 100)]


class VariationSumsTestCase(SimpleTestCase):

    def test_empty_set(self):
        partition: TaggedPartition = cousin_partition(Iv(0, 1), Gauge.constant(Fraction(1, 4)))
        sums: VariationSums = variation_sums(IDENTITY, partition, EMPTY)
        self.assertEqual(sums, VariationSums(ValueWithError(0), ValueWithError(0)))

    def test_reflected_cantor_signed_sum_vanishes(self):

        """
            This method test that with the distance gauge of D every seeded
            partition of [-1, 1] has signed sum 0 over tags in D, and every
            cell meeting D carries a tag in D
        """

        gauge: Gauge = gauge_dist_complement(REFLECTED_CANTOR)
        for seed in range(20):
            partition: TaggedPartition = cousin_partition(Iv(-1, 1), gauge, rng=random.Random(seed))
            sums: VariationSums = variation_sums(CANTOR_ABS, partition, REFLECTED_CANTOR)

            self.assertTrue(is_subordinate(partition, gauge))
            self.assertEqual(sums.signed_abs, ValueWithError(0))
            for tag, cell in partition.items:
                if not REFLECTED_CANTOR.contains(tag):
                    self.assertEqual(REFLECTED_CANTOR.points_in(cell), [])

    @given(st.integers(0, 10 ** 6))
    @settings(deadline=None, max_examples=30)
    def test_smaller_set_smaller_sum(self, seed: int):

        """
            This method test that dropping tags from E never raises Σ|Δf|,
            and that |ΣΔf| never exceeds Σ|Δf|
        """

        gauge: Gauge = gauge_dist_complement(REFLECTED_CANTOR)
        partition: TaggedPartition = cousin_partition(Iv(-1, 1), gauge, rng=random.Random(seed))
        right_tags: FiniteSet = FiniteSet.of(
            *(tag for tag, _ in partition.items if tag >= 0 and tag in REFLECTED_CANTOR)
        )

        whole: VariationSums = variation_sums(CANTOR_ABS, partition, REFLECTED_CANTOR)
        part: VariationSums = variation_sums(CANTOR_ABS, partition, right_tags)

        self.assertLessEqual(part.abs_sum.value, whole.abs_sum.value)
        self.assertLessEqual(variation_sums(CANTOR_ABS, partition, EMPTY).abs_sum.value, part.abs_sum.value)
        for sums in (whole, part):
            self.assertLessEqual(sums.signed_abs.value, sums.abs_sum.value)


class AdversarialTestCase(SimpleTestCase):

    def test_split_at_zero_refutes_nv(self):

        """
            This method test that splitting [-1, 1] at 0 gives Σ|Δ| = 2
            under the distance gauge of D combined with any caller gauge
        """

        callers: List[Gauge] = [
            Gauge.constant(Fraction(1, 2)),
            Gauge.constant(Fraction(1, 10)),
            Gauge.constant(Fraction(1, 50)),
            Gauge.constant(Fraction(1, 200)),
            Gauge('tent', lambda x: Fraction(1, 100) + abs(x) / 10),
        ]
        for caller in callers:
            gauge: Gauge = gauge_dist_complement(REFLECTED_CANTOR).minimum(caller)
            result = adversarial_variation(CANTOR_ABS, REFLECTED_CANTOR, gauge, SplitAt((Fraction(0),)), Iv(-1, 1))

            self.assertEqual(result.abs_sum, ValueWithError(2))
            self.assertEqual(result.sums.signed_abs, ValueWithError(0))
            self.assertIn(Fraction(0), [item.cell.hi for item in result.partition.items])

    def test_strategies_keep_the_total(self):
        gauge: Gauge = gauge_dist_complement(CANTOR).minimum(Gauge.constant(Fraction(1, 10)))
        for strategy in (Repartition(), GreedySign()):
            result = adversarial_variation(CANTOR_FN, CANTOR, gauge, strategy, Iv(0, 1))
            self.assertEqual(result.abs_sum, ValueWithError(1))
            self.assertEqual(result.sums.signed_abs, ValueWithError(1))

    def test_parse_strategy(self):
        self.assertEqual(parse_strategy('split:-1/3,1/3'), SplitAt((Fraction(-1, 3), Fraction(1, 3))))
        self.assertIsInstance(parse_strategy('repartition'), Repartition)
        self.assertIsInstance(parse_strategy('greedy-sign'), GreedySign)
        with self.assertRaises(UnknownNameError):
            parse_strategy('random-walk')

    def test_split_point_outside_domain(self):
        with self.assertRaises(PartitionError):
            adversarial_variation(ABS, EMPTY, Gauge.constant(1), SplitAt((Fraction(3),)), Iv(-1, 1))


class NegligibleVariationTestCase(SimpleTestCase):

    def test_square_on_zero(self):

        """
            This method test that the zero-derivative gauge of x² on {0}
            keeps every sampled Σ|Δ| below ε
        """

        square = lookup('square')
        zero = FiniteSet.of(0)
        report: VariationReport = variation.test_negligible_variation(
            square, zero, lambda eps: gauge_from_zero_derivative(square, zero, eps, 2),
            [Fraction(1, 10 ** k) for k in range(1, 5)], 5, seed=7, domain=Iv(-1, 1),
        )

        self.assertEqual(report.verdict, Verdict.NV_EVIDENCE)
        self.assertTrue(all(row.nv_pass for row in report.rows))
        self.assertTrue(all(row.max_abs < row.eps for row in report.rows))
        self.assertIsNone(report.witness)

    def test_reflected_cantor_signed_criterion(self):
        report: VariationReport = variation.test_negligible_variation(
            CANTOR_ABS, REFLECTED_CANTOR, lambda eps: gauge_dist_complement(REFLECTED_CANTOR),
            SCHEDULE, 3, seed=1, domain=Iv(-1, 1), criterion=Criterion.SIGNED,
        )

        self.assertEqual(report.verdict, Verdict.NCV_ONLY_EVIDENCE)
        self.assertTrue(all(row.max_signed == 0 for row in report.rows))
        self.assertTrue(all(row.max_abs == 2 for row in report.rows))

    def test_absolute_criterion_refuted_with_witness(self):
        report: VariationReport = variation.test_negligible_variation(
            CANTOR_ABS, REFLECTED_CANTOR, lambda eps: gauge_dist_complement(REFLECTED_CANTOR),
            SCHEDULE, 2, seed=1, domain=Iv(-1, 1),
        )

        self.assertTrue(report.refuted)
        self.assertEqual(report.witness.eps, Fraction(1, 10))
        self.assertEqual(report.witness.sums.abs_sum, ValueWithError(2))

    def test_same_seed_same_report(self):
        def builder(eps: Fraction) -> Gauge:
            return gauge_dist_complement(REFLECTED_CANTOR)

        first = variation.test_negligible_variation(CANTOR_ABS, REFLECTED_CANTOR, builder, SCHEDULE, 2, seed=3)
        second = variation.test_negligible_variation(CANTOR_ABS, REFLECTED_CANTOR, builder, SCHEDULE, 2, seed=3)
        self.assertEqual(first, second)


class DiniGaugeTestCase(SimpleTestCase):

    def test_finite_set(self):
        square = lookup('square')
        points = FiniteSet.of(0, Fraction(1, 2))
        report: VariationReport = variation.test_negligible_variation(
            square, points, lambda eps: gauge_from_dini(square, points, dini_covers(points, eps), eps),
            SCHEDULE, 3, seed=2, domain=Iv(-1, 1),
        )
        self.assertEqual(report.verdict, Verdict.NV_EVIDENCE)

    def test_identity_on_cantor(self):

        """
            This method test that the band-1 covers of C at tight budgets are
            answered from the construction and the gauge keeps Σ|Δ| below ε
        """

        report: VariationReport = variation.test_negligible_variation(
            IDENTITY, CANTOR, lambda eps: gauge_from_dini(IDENTITY, CANTOR, dini_covers(CANTOR, eps), eps),
            SCHEDULE, 2, seed=5, domain=Iv(0, 1),
        )
        self.assertEqual(report.verdict, Verdict.NV_EVIDENCE)

        tight: Fraction = Fraction(1, 10 ** 4)
        gauge: Gauge = gauge_from_dini(IDENTITY, CANTOR, dini_covers(CANTOR, tight), tight)
        self.assertGreater(gauge.at(Fraction(1, 4)), 0)
        self.assertLess(gauge.at(Fraction(1, 4)), tight)
        self.assertEqual(gauge.at(Fraction(1, 2)), 1)

    def test_at_least_one_sample(self):
        with self.assertRaises(ConfigError):
            variation.test_negligible_variation(
                IDENTITY, EMPTY, lambda eps: Gauge.constant(1), SCHEDULE, 0, seed=0, domain=Iv(0, 1),
            )

    def test_positive_measure_set_has_no_cover(self):
        with self.assertRaises(UnsupportedInstanceError):
            dini_covers(SVC, Fraction(1, 10))(0)


class SubintervalScanTestCase(SimpleTestCase):

    def test_half_intervals_refute(self):

        """
            This method test that the signed criterion fails on [0, 1] and
            [-1, 0] while it holds on [-1, 1]
        """

        halves: List[Iv] = [Iv(-1, 0), Iv(0, 1), Iv(-1, 1)]
        scan = subinterval_ncv_scan(
            CANTOR_ABS, REFLECTED_CANTOR, lambda eps: gauge_dist_complement(REFLECTED_CANTOR), halves, SCHEDULE, seed=4,
        )

        self.assertTrue(scan.nv_refuted)
        self.assertEqual(scan.verdict_for(Iv(0, 1)), Verdict.REFUTED)
        self.assertEqual(scan.verdict_for(Iv(-1, 0)), Verdict.REFUTED)
        self.assertNotEqual(scan.verdict_for(Iv(-1, 1)), Verdict.REFUTED)


class DiniEstimateTestCase(SimpleTestCase):

    def test_abs_at_kink(self):
        estimate = dini_upper_estimate(ABS, 0, [Fraction(1, 2), Fraction(1, 4)])
        self.assertEqual(estimate.estimate, ValueWithError(1))
        self.assertEqual(estimate.best_h, Fraction(1, 2))
        self.assertEqual(estimate.skipped, ())

    def test_points_outside_domain_are_skipped(self):
        estimate = dini_upper_estimate(ABS, 4, [Fraction(1, 2)])
        self.assertEqual(estimate.skipped, (Fraction(9, 2),))
        self.assertEqual(estimate.estimate, ValueWithError(1))

    def test_lower_is_the_certified_bound(self):
        estimate = dini_upper_estimate(ABS, 0, [Fraction(1, 2), Fraction(1, 4)])
        self.assertEqual(estimate.lower, 1)
        self.assertEqual(dini_upper_estimate(lookup('zero'), Fraction(1, 3), [Fraction(1, 8)]).lower, 0)

    def test_square_at_one(self):

        """
            This method test that the quotients of x² at 1 tend to 2 as the
            largest step in the grid shrinks
        """

        square = lookup('square')
        for k in range(1, 8):
            estimate = dini_upper_estimate(square, 1, [Fraction(1, 2 ** j) for j in range(k, k + 6)])
            self.assertEqual(estimate.estimate, ValueWithError(2 + Fraction(1, 2 ** k)))
            self.assertEqual(estimate.best_h, Fraction(1, 2 ** k))

    def test_quartic_root_of_fat_cantor_distance(self):

        """
            This method test that stepping from a point of S to the centre of
            a depth-n gap gives a quotient above 2^((2n-3)/4)
        """

        fg = lookup('FG')
        for x in (0, Fraction(3, 8), Fraction(5, 32)):
            for n in range(2, 7):
                h: Fraction = svc_composition_check(n, x).y - Fraction(x)
                estimate = dini_upper_estimate(fg, x, [abs(h)])
                self.assertGreater(estimate.lower ** 4, 2 ** (2 * n - 3))

    def test_step_must_be_positive(self):
        with self.assertRaises(ValueError):
            dini_upper_estimate(ABS, 0, [0])


class ImageMeasureTestCase(SimpleTestCase):

    def test_cantor_function_maps_c_onto_unit_interval(self):
        for depth in (1, 4):
            self.assertEqual(image_measure_bound(CANTOR_FN, CANTOR, depth), 1)

    def test_identity_image_is_the_cover(self):
        self.assertEqual(image_measure_bound(IDENTITY, CANTOR, 3), Fraction(8, 27))

    def test_square_image_of_its_critical_point(self):
        bounds: List[Fraction] = [image_measure_bound(lookup('square'), FiniteSet.of(0), depth) for depth in range(8)]
        self.assertEqual(bounds, [Fraction(1, 4 ** depth) for depth in range(8)])

    def test_square_image_of_cantor_shrinks(self):
        bounds: List[Fraction] = [image_measure_bound(lookup('square'), CANTOR, depth) for depth in range(1, 9)]
        self.assertTrue(all(later < earlier for earlier, later in zip(bounds, bounds[1:])))
        self.assertLess(bounds[-1], 2 * Fraction(2, 3) ** 8)
