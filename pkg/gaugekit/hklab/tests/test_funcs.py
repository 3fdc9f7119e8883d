from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from hklab.core import Iv, ValueWithError
from hklab.exceptions import DomainError, UndecidedMembershipError, UnknownNameError, UnsupportedInstanceError
from hklab.funcs import (ABS, CANTOR_FN, IDENTITY, QUARTIC_ROOT, SVC_DIST, FailureKind, FnSpec, Preimage, cantor_abs,
                         cantor_fn, catalog, certificates, compose, constant, lookup, product, quartic_root,
                         svc_dist_fn)
from hklab.sets import CANTOR, REFLECTED_CANTOR, SVC, FiniteSet, member, realize

unit_points = st.fractions(min_value=0, max_value=1, max_denominator=200)


class CantorFunctionTestCase(SimpleTestCase):

    def test_known_values(self):

        """
            This method test exact values of the Cantor function
        """

        self.assertEqual(cantor_fn(Fraction(1, 4)), Fraction(1, 3))
        self.assertEqual(cantor_fn(Fraction(3, 4)), Fraction(2, 3))
        self.assertEqual(cantor_fn(Fraction(1, 3)), Fraction(1, 2))
        self.assertEqual(cantor_fn(Fraction(2, 3)), Fraction(1, 2))
        self.assertEqual(cantor_fn(Fraction(1, 9)), Fraction(1, 4))
        self.assertEqual(cantor_fn(0), 0)
        self.assertEqual(cantor_fn(1), 1)

    def test_reflected_variant(self):
        self.assertEqual(cantor_abs(Fraction(-1, 4)), Fraction(1, 3))
        self.assertEqual(cantor_abs(0), 0)
        with self.assertRaises(DomainError):
            cantor_abs(2)

    def test_outside_domain(self):
        with self.assertRaises(DomainError):
            cantor_fn(Fraction(-1, 2))

    def test_reflected_variant_flat_on_gaps(self):

        """
            This method test that cantor_abs takes one value on each of the
            first 20 removed gaps of D, endpoints included
        """

        cells = realize(REFLECTED_CANTOR, 5)
        gaps = [Iv(left.hi, right.lo) for left, right in zip(cells, cells[1:]) if left.hi < right.lo][:20]

        self.assertEqual(len(gaps), 20)
        for gap in gaps:
            level: Fraction = cantor_abs(gap.lo)
            for x in (gap.midpoint, gap.hi, gap.lo + gap.length / 7):
                self.assertEqual(cantor_abs(x), level)

    @given(unit_points)
    @settings(deadline=None, max_examples=1000)
    def test_self_similarity(self, x: Fraction):
        self.assertEqual(cantor_fn(1 - x), 1 - cantor_fn(x))
        self.assertEqual(cantor_fn(x / 3), cantor_fn(x) / 2)
        self.assertEqual(cantor_fn(x / 3 + Fraction(2, 3)), Fraction(1, 2) + cantor_fn(x) / 2)

    @given(unit_points, unit_points)
    @settings(deadline=None)
    def test_monotone_and_holder(self, x: Fraction, y: Fraction):
        low, high = min(x, y), max(x, y)
        self.assertLessEqual(cantor_fn(low), cantor_fn(high))
        self.assertLessEqual(cantor_fn(high) - cantor_fn(low), CANTOR_FN.continuity(low, high - low))


class QuarticRootTestCase(SimpleTestCase):

    def test_exact_roots(self):
        self.assertEqual(quartic_root(16), ValueWithError(2))
        self.assertEqual(quartic_root(Fraction(1, 81)), ValueWithError(Fraction(1, 3)))
        self.assertEqual(quartic_root(0), ValueWithError(0))

    def test_certified_bound(self):

        """
            This method test that the error bound brackets the true root
        """

        for precision in (20, 64, 96):
            result: ValueWithError = quartic_root(2, precision)
            self.assertFalse(result.exact)
            self.assertLessEqual(result.error, Fraction(1, 2 ** (precision - 2)))
            self.assertLessEqual(result.lower ** 4, 2)
            self.assertGreaterEqual(result.upper ** 4, 2)

    @given(st.fractions(min_value=0, max_value=10, max_denominator=10 ** 6))
    @settings(deadline=None, max_examples=100)
    def test_random_points_are_bracketed(self, x: Fraction):
        result: ValueWithError = quartic_root(x)
        self.assertLessEqual(max(result.lower, 0) ** 4, x)
        self.assertGreaterEqual(result.upper ** 4, x)

    def test_negative_argument(self):
        with self.assertRaises(DomainError):
            quartic_root(-1)

    def test_catalog_entry(self):
        self.assertFalse(QUARTIC_ROOT.exact)
        with self.assertRaises(UnsupportedInstanceError):
            QUARTIC_ROOT.value(2)
        with self.assertRaises(DomainError):
            QUARTIC_ROOT(5)
        self.assertEqual(certificates(QUARTIC_ROOT), ['deriv', 'modulus', 'dini', 'oscillation', 'continuity'])


class LookupTestCase(SimpleTestCase):

    def test_aliases(self):
        self.assertEqual(lookup('x^2').name, 'square')
        self.assertIs(lookup('linear'), IDENTITY)
        self.assertEqual(lookup('FG').name, 'quartic_root∘svc_dist_fn')

    def test_constants_and_derivatives(self):
        self.assertEqual(lookup('const:3/2').value(1), Fraction(3, 2))
        self.assertEqual(lookup('square_deriv').value(3), 6)
        self.assertEqual(lookup('abs_deriv').value(-1), -1)

    def test_unknown_function(self):
        with self.assertRaises(UnknownNameError):
            lookup('gamma')

    def test_catalog_names(self):
        self.assertIn('cantor_abs', catalog())
        self.assertEqual(
            certificates(catalog()['square']),
            ['deriv', 'modulus', 'dini', 'oscillation', 'continuity', 'antiderivative'],
        )


class DerivativeConventionTestCase(SimpleTestCase):

    def test_zero_on_failure_set(self):

        """
            This method test that the derivative is 0 and flagged on the
            failure set, and computed elsewhere
        """

        deriv: FnSpec = CANTOR_FN.derivative()
        on_set: ValueWithError = deriv(Fraction(1, 4))
        off_set: ValueWithError = deriv(Fraction(1, 2))

        self.assertEqual(on_set.value, 0)
        self.assertTrue(on_set.convention)
        self.assertEqual(off_set.value, 0)
        self.assertFalse(off_set.convention)

    def test_abs_derivative_at_kink(self):
        self.assertTrue(ABS.derivative()(0).convention)
        self.assertEqual(ABS.derivative().value(Fraction(1, 2)), 1)

    def test_svc_distance_derivative(self):
        deriv: FnSpec = SVC_DIST.derivative()
        self.assertEqual(deriv.value(Fraction(7, 16)), 1)
        self.assertEqual(deriv.value(Fraction(9, 16)), -1)
        self.assertTrue(deriv(Fraction(1, 2)).convention)
        self.assertTrue(deriv(Fraction(3, 8)).convention)

    @given(unit_points)
    @settings(deadline=None)
    def test_svc_distance_vanishes_on_the_set(self, x: Fraction):
        try:
            inside: bool = member(SVC, x)
        except UndecidedMembershipError:
            return

        value: ValueWithError = svc_dist_fn(x)
        self.assertTrue(value.exact)
        self.assertEqual(value.value == 0, inside)

    def test_missing_certificate(self):
        with self.assertRaises(UnsupportedInstanceError):
            constant(1).antiderivative.derivative()


class CompositionTestCase(SimpleTestCase):

    def test_chain_rule(self):
        composite: FnSpec = compose(lookup('square'), ABS)
        self.assertEqual(composite.value(Fraction(-3, 2)), Fraction(9, 4))
        self.assertEqual(composite.derivative().value(-1), -2)
        self.assertEqual(composite.failure_set.kind, FailureKind.FINITE)

    def test_identity_outer(self):
        composite: FnSpec = compose(IDENTITY, ABS)
        self.assertEqual(composite.name, 'identity∘abs')
        self.assertEqual(composite.value(-2), 2)

    def test_quartic_of_distance(self):

        """
            This method test F∘G: exact on S, inexact inside the gaps, and
            failing at the gap centres
        """

        composite: FnSpec = lookup('FG')
        self.assertEqual(composite(Fraction(3, 8)), ValueWithError(0))
        self.assertFalse(composite(Fraction(1, 2)).exact)
        self.assertTrue(composite.failure_set.contains(Fraction(1, 2)))
        self.assertTrue(composite.failure_set.contains(Fraction(3, 8)))

    def test_inner_value_outside_outer_domain(self):
        with self.assertRaises(DomainError):
            compose(QUARTIC_ROOT, lookup('double'))(Fraction(-1, 2))

    def test_product_and_zero_on(self):
        self.assertEqual(product(IDENTITY, constant(2)).value(3), 6)
        masked: ValueWithError = lookup('square').zero_on(FiniteSet.of(1))(1)
        self.assertEqual(masked.value, 0)
        self.assertTrue(masked.convention)

    def test_product_modulus(self):

        """
            This method test that |fg(x+h) - fg(x) - (fg)'(x)h| <= ε|h| for
            every |h| up to the product modulus
        """

        cube: FnSpec = product(lookup('square'), IDENTITY)
        self.assertIsNotNone(cube.modulus)
        self.assertIsNone(product(IDENTITY, constant(1).antiderivative).modulus)

        for x in (Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(1, 2), Fraction(3, 2)):
            for eps in (Fraction(1, 10), Fraction(1, 1000)):
                eta: Fraction = cube.modulus(x, eps)
                self.assertGreater(eta, 0)
                for h in (eta, -eta, eta / 3):
                    remainder: Fraction = cube.value(x + h) - cube.value(x) - cube.deriv(x).value * h
                    self.assertLessEqual(abs(remainder), eps * abs(h))

    def test_preimage(self):
        self.assertTrue(Preimage(IDENTITY, CANTOR).contains(Fraction(1, 4)))
        self.assertFalse(Preimage(IDENTITY, CANTOR).contains(Fraction(1, 2)))

    def test_restricted_domain(self):
        self.assertEqual(lookup('square').restricted_to(Iv(0, 1)).domain, Iv(0, 1))
        with self.assertRaises(DomainError):
            lookup('square').restricted_to(Iv(0, 5))
