import random
from unittest import TestCase

from hypothesis import given, settings, strategies
from sympy.polys.domains import QQ_I

from hitchinfibres.exc import (
    CompatibilityFailure,
    DivisionByNonUnit,
    TruncationTooShort,
    ValidationError,
)
from hitchinfibres.higgschart import (
    INVARIANTS,
    LaurentJet,
    build_pair,
    chart2_q,
    eigen_divisor,
    example_pairs,
    fuzz_roundtrip,
    q_extract,
    resplit,
    scalar_action,
    semistability_check,
    solve_gluing,
)
from hitchinfibres.util import Stability


SQRT_MINUS_ONE = QQ_I(0, 1)


class TestLaurentJets(TestCase):
    def test_inverse(self):
        z = LaurentJet.from_coefficients([0, 1], 6)
        inverse = z.inverse()
        self.assertEqual(inverse.valuation, -1)
        self.assertEqual(inverse.pole_order(), 1)
        self.assertTrue((z * inverse).equal_mod(LaurentJet.constant(1, 4), 4))

    def test_inverse_of_unit(self):
        u = LaurentJet.from_coefficients([1, 1], 5)
        product = u * u.inverse()
        self.assertTrue(product.equal_mod(LaurentJet.constant(1, 5), 5))
        self.assertEqual(u.inverse()[3], QQ_I(-1, 0))

    def test_inverse_of_zero(self):
        with self.assertRaises(DivisionByNonUnit):
            LaurentJet.zero(4).inverse()

    def test_precision(self):
        jet = LaurentJet.from_coefficients([1, 2], 3)
        with self.assertRaises(TruncationTooShort):
            jet[3]
        with self.assertRaises(TruncationTooShort):
            jet.equal_mod(jet, 4)
        with self.assertRaises(TruncationTooShort):
            jet.truncate(5)
        self.assertEqual(jet.truncate(2), LaurentJet.from_coefficients([1, 2], 2))


class TestGluing(TestCase):
    def test_worked_charts(self):
        for q, s_prime in (([1], [0, 1]), ([0, 1], [0, 0, 1])):
            data = solve_gluing(q, s_prime)
            with self.subTest(q=q):
                self.assertTrue(data.gluing_holds())
                self.assertEqual(data.x_12.order(), -1)
                self.assertEqual(data.x_12[-1], SQRT_MINUS_ONE)
                for k in range(0, data.precision):
                    self.assertFalse(data.x_12[k])

    def test_split_case(self):
        data = solve_gluing([0], [0, 1])
        self.assertTrue(data.x_12.is_zero())
        self.assertTrue(data.y_1.is_zero())
        pair = build_pair(data, m=0, d=2)
        phi = pair["p"].phi_1
        self.assertTrue(phi[0][1].is_zero())
        self.assertEqual(phi[0][0][1], SQRT_MINUS_ONE)

    def test_pole_order_bounded_by_dprime(self):
        rng = random.Random(5)
        for dprime in range(1, 6):
            q = [QQ_I(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(dprime)]
            data = solve_gluing(q, [0] * dprime + [2, 1], dprime=dprime)
            with self.subTest(dprime=dprime):
                self.assertLessEqual(data.x_12.pole_order(), dprime)
                self.assertTrue(data.gluing_holds())

    def test_s_prime_of_wrong_order(self):
        with self.assertRaises(DivisionByNonUnit):
            solve_gluing([1, 0], [0, 1], dprime=2)

    def test_bad_inputs(self):
        with self.assertRaises(ValidationError):
            solve_gluing([1], [1, 0])
        with self.assertRaises(ValidationError):
            solve_gluing([1, 2], [0, 1])


class TestHiggsPairs(TestCase):
    def test_examples_are_compatible(self):
        for label, pair in example_pairs():
            local = pair.points[0]
            square = local.data.s_prime * local.data.s_prime
            with self.subTest(label=label):
                self.assertTrue(local.compatible())
                for a in (1, 2):
                    self.assertTrue(local.trace(a).is_zero())
                    self.assertTrue(local.det(a).equal_mod(square, local.precision))

    def test_round_trip(self):
        for q, s_prime in (([1], [0, 1]), ([0, 1], [0, 0, 1]), ([0, 0], [0, 0, 3])):
            pair = build_pair(solve_gluing(q, s_prime), m=0, d=2)
            with self.subTest(q=q):
                self.assertEqual(q_extract(pair)["p"], tuple(QQ_I.convert(c) for c in q))
                self.assertEqual(chart2_q(pair), q_extract(pair))

    def test_resplit_keeps_q(self):
        pair = build_pair(solve_gluing([0, 1], [0, 0, 1]), m=0, d=2)
        moved = resplit(pair, {"p": [1, 2, 3]})
        self.assertEqual(q_extract(moved), q_extract(pair))
        self.assertFalse(moved["p"].phi_1[0][1].equal_mod(pair["p"].phi_1[0][1], 5))

    def test_scalar_action(self):
        pair = build_pair(solve_gluing([0, 1], [0, 0, 1]), m=0, d=2)
        for beta, root in ((1, 1), (4, 2), (-1, SQRT_MINUS_ONE)):
            with self.subTest(beta=beta):
                scaled = scalar_action(pair, beta, root)
                self.assertEqual(q_extract(scaled)["p"], (QQ_I.zero, QQ_I.convert(beta)))

    def test_scalar_action_needs_a_square_root(self):
        pair = build_pair(solve_gluing([1], [0, 1]), m=0, d=2)
        with self.assertRaises(CompatibilityFailure):
            scalar_action(pair, 4, 3)
        with self.assertRaises(ValidationError):
            scalar_action(pair, 0, 0)

    def test_to_json(self):
        payload = example_pairs()[0][1].to_json()
        x_12 = payload["points"][0]["x_12"]
        self.assertEqual(x_12["valuation"], -1)
        self.assertEqual(x_12["coefficients"][0], ["0/1", "1/1"])


class TestStabilityAndEigenDivisor(TestCase):
    def test_semistability(self):
        self.assertIs(semistability_check(1, 2, 2), Stability.strictly_semistable)
        self.assertIs(semistability_check(0, 2, 2), Stability.stable)
        self.assertIs(semistability_check(2, 0, 2), Stability.unstable)

    def test_eigen_divisor(self):
        self.assertEqual(eigen_divisor([0, 0, 1], [0, 1]), (2, 1, 1))
        self.assertEqual(eigen_divisor([0, 1], [1]), (1, 0, 1))
        self.assertEqual(eigen_divisor([0, 0, 1], [0, 0]), (2, None, 0))
        for s_prime, q in (([0, 0, 1], [0, 1]), ([1], [2]), ([0, 3], [0, 0])):
            k1, k2, found = eigen_divisor(s_prime, q)
            self.assertIsInstance(k1, int)
            self.assertIsInstance(found, int)
            self.assertTrue(k2 is None or isinstance(k2, int))

    def test_eigen_divisor_needs_s_prime(self):
        with self.assertRaises(ValidationError):
            eigen_divisor([0, 0], [1])


class TestFuzz(TestCase):
    @settings(max_examples=10, deadline=None)
    @given(strategies.integers(min_value=0, max_value=2**32))
    def test_every_invariant_holds(self, seed):
        summary = fuzz_roundtrip(random.Random(seed), trials=5, max_order=4, seed=seed)
        self.assertTrue(summary.passed, summary.first_failure)
        self.assertEqual(set(summary.passes), set(INVARIANTS))
        self.assertIsNone(summary.first_failure)

    def test_same_seed_same_summary(self):
        first = fuzz_roundtrip(random.Random(11), trials=3, max_order=3, seed=11)
        second = fuzz_roundtrip(random.Random(11), trials=3, max_order=3, seed=11)
        self.assertEqual(first.to_json(), second.to_json())

    def test_invalid_arguments(self):
        with self.assertRaises(ValidationError):
            fuzz_roundtrip(random.Random(0), trials=-1)
        with self.assertRaises(ValidationError):
            fuzz_roundtrip(random.Random(0), trials=1, max_order=0)
