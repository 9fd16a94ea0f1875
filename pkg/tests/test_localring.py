import random
from unittest import TestCase

from hypothesis import given, settings, strategies
from sympy.polys.domains import QQ

from hitchinfibres.exc import TruncationTooShort, ValidationError
from hitchinfibres.localring import (
    JetElement,
    LocalAlgebra,
    Polynomial,
    Subspace,
    is_module,
    member,
    min_generators,
    module_span,
    multiply,
    phi,
    phi_even,
    phi_odd,
)


def jet(*branches, order=None):
    return JetElement.from_lists(branches, order)


@strategies.composite
def jet_triples(draw):
    count = draw(strategies.integers(min_value=1, max_value=2))
    order = draw(strategies.integers(min_value=1, max_value=6))
    coefficients = strategies.lists(
        strategies.integers(min_value=-4, max_value=4), min_size=order, max_size=order
    )
    branches = strategies.lists(coefficients, min_size=count, max_size=count)
    return tuple(JetElement.from_lists(draw(branches), order) for _ in range(3))


class TestJets(TestCase):
    def test_padding_and_truncation(self):
        e = jet([1, 2], order=4)
        self.assertEqual(e.branches, ((1, 2, 0, 0),))
        self.assertEqual(e.truncate(1).branches, ((1,),))

    def test_multiply(self):
        product = multiply(jet([1], [1], order=3), jet([0, 1], [0, 1]))
        self.assertEqual(product, jet([0, 1], [0, 1], order=2))
        product = jet([1, 1], order=3) * jet([1, -1], order=3)
        self.assertEqual(product, jet([1, 0, -1]))

    def test_shift(self):
        self.assertEqual(jet([1, 2, 3]).shift(1), jet([0, 1, 2]))

    def test_unit(self):
        self.assertTrue(jet([1, 5], [2, 0]).is_unit())
        self.assertFalse(jet([0, 5], [2, 0]).is_unit())

    def test_branch_mismatch(self):
        with self.assertRaises(ValidationError):
            jet([1]) + jet([1], [1])

    @given(jet_triples())
    def test_multiply_is_commutative_associative_unital(self, triple):
        a, b, c = triple
        one = JetElement.from_lists([[1]] * a.branch_count, a.order)
        self.assertEqual(multiply(a, b), multiply(b, a))
        self.assertEqual(multiply(multiply(a, b), c), multiply(a, multiply(b, c)))
        self.assertEqual(multiply(one, a), a)
        self.assertEqual(multiply(a, one), a)


class TestPhi(TestCase):
    def test_node(self):
        x, z = Polynomial.x(), Polynomial.z()
        self.assertEqual(phi_even(x, 4, 4), jet([0, 0, 1, 0], [0, 0, -1, 0]))
        self.assertEqual(phi_even(z, 2, 3), jet([0, 1, 0], [0, 1, 0]))
        self.assertEqual(phi_even(Polynomial.constant(1), 6, 2), jet([1, 0], [1, 0]))

    def test_cusp(self):
        self.assertEqual(phi_odd(Polynomial.z(), 3, 4), jet([0, 0, 1, 0]))
        self.assertEqual(phi_odd(Polynomial.x(), 5, 6), jet([0, 0, 0, 0, 0, 1]))
        self.assertEqual(phi_odd(Polynomial.constant(1), 3, 3), jet([1, 0, 0]))

    def test_wrong_parity(self):
        with self.assertRaises(ValidationError):
            phi_even(Polynomial.x(), 3, 4)
        with self.assertRaises(ValidationError):
            phi_odd(Polynomial.x(), 4, 4)

    @settings(max_examples=50, deadline=None)
    @given(
        strategies.integers(min_value=2, max_value=9),
        strategies.integers(min_value=0, max_value=2**32),
    )
    def test_homomorphism(self, m, seed):
        rng = random.Random(seed)
        g = Polynomial.random(rng, degree=6)
        h = Polynomial.random(rng, degree=6)
        self.assertTrue(all(i + j <= 12 for (i, j), _ in (g * h).terms))
        order = 2 * m + 2
        self.assertEqual(phi(g * h, m, order), multiply(phi(g, m, order), phi(h, m, order)))
        self.assertEqual(phi(g + h, m, order), phi(g, m, order) + phi(h, m, order))
        self.assertTrue(member(phi(g, m, order), LocalAlgebra(m, order)))

    def test_x_squared_is_z_to_the_m(self):
        x = Polynomial.x()
        z_m = Polynomial.from_dict({(0, 5): 1})
        self.assertEqual(phi(x * x, 5, 12), phi(z_m, 5, 12))


class TestMembership(TestCase):
    def test_node(self):
        self.assertTrue(member(jet([1, 1], [1, -1]), LocalAlgebra(2, 2)))
        self.assertFalse(member(jet([0, 1, 0, 0], [0, -1, 0, 0]), LocalAlgebra(4, 4)))

    def test_cusp(self):
        self.assertFalse(member(jet([0, 1, 0]), LocalAlgebra(3, 3)))
        self.assertTrue(member(jet([0, 0, 0, 1]), LocalAlgebra(3, 4)))

    def test_truncation_too_short(self):
        with self.assertRaises(TruncationTooShort):
            member(jet([1, 0], [1, 0]), LocalAlgebra(4, 4))

    def test_constraint_space_matches_membership(self):
        for m in range(2, 8):
            with self.subTest(m=m):
                alg = LocalAlgebra(m, m + 1)
                space = alg.constraint_space()
                self.assertTrue(all(member(e, alg) for e in space.elements()))
                for g in alg.generators():
                    self.assertIn(g, space)
                self.assertTrue(is_module(space, alg))
                self.assertEqual(min_generators(space, alg), 1)

    @given(
        strategies.integers(min_value=1, max_value=6),
        strategies.integers(min_value=0, max_value=4),
    )
    def test_constraint_codimension(self, half_m, extra):
        node = LocalAlgebra(2 * half_m, 2 * half_m + extra)
        self.assertEqual(node.constraint_space().codim, (2 * half_m - 2) // 2 + 1)
        cusp = LocalAlgebra(2 * half_m + 1, 2 * half_m + extra)
        self.assertEqual(cusp.constraint_space().codim, half_m)


class TestSubspaces(TestCase):
    def test_span_is_canonical(self):
        a = Subspace.span([[1, 1, 0], [0, 1, 1]], (1, 3))
        b = Subspace.span([[1, 2, 1], [1, 0, -1], [0, 0, 0]], (1, 3))
        self.assertEqual(a, b)
        self.assertEqual(a.dim, 2)
        self.assertEqual(a.codim, 1)

    def test_contains(self):
        space = Subspace.span([[1, 1, 0]], (1, 3))
        self.assertIn([2, 2, 0], space)
        self.assertNotIn([1, 0, 0], space)

    def test_sum_and_intersection(self):
        a = Subspace.span([[1, 0, 0], [0, 1, 0]], (1, 3))
        b = Subspace.span([[0, 1, 0], [0, 0, 1]], (1, 3))
        self.assertEqual(a + b, Subspace.full((1, 3)))
        self.assertEqual(a.intersection(b), Subspace.span([[0, 1, 0]], (1, 3)))
        self.assertEqual(a.intersection(Subspace.span([], (1, 3))).dim, 0)

    def test_intersection_dimension_formula(self):
        rng = random.Random(3)
        for trial in range(10):
            vectors = [[QQ(rng.randint(-2, 2)) for _ in range(5)] for _ in range(6)]
            a = Subspace.span(vectors[:3], (1, 5))
            b = Subspace.span(vectors[3:], (1, 5))
            with self.subTest(trial=trial):
                self.assertEqual((a + b).dim + a.intersection(b).dim, a.dim + b.dim)
                self.assertTrue(a.contains_space(a.intersection(b)))
                self.assertTrue(b.contains_space(a.intersection(b)))


class TestModules(TestCase):
    def test_module_span(self):
        alg = LocalAlgebra(2, 1)
        span = module_span([jet([1], [0])], alg)
        self.assertEqual(span, Subspace.span([[1, 0]], (2, 1)))

    def test_module_check(self):
        alg = LocalAlgebra(4, 2)
        vectors = [jet([1, 0], [1, 0]), jet([0, 1], [0, 1]), jet([0, 1], [0, -1])]
        self.assertTrue(is_module(Subspace.span(vectors, (2, 2)), alg))
        alg = LocalAlgebra(4, 3)
        space = Subspace.span([jet([1, 0, 0], [1, 0, 0]), jet([0, 1, 0], [0, -1, 0])], (2, 3))
        self.assertFalse(is_module(space, alg))

    def test_shape_mismatch(self):
        with self.assertRaises(ValidationError):
            is_module(Subspace.span([], (1, 3)), LocalAlgebra(4, 3))
