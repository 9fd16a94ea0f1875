import random
from unittest import TestCase

from hypothesis import given, settings, strategies

from hitchinfibres.divisor import Divisor, effective_of_degree
from hitchinfibres.exc import DegreeMismatch, ValidationError
from hitchinfibres.spectral import (
    BaseData,
    SectionData,
    SingularityProfile,
    branch_of,
    classify,
    fibre_report,
    jacobian_kernel_shape,
    main_theorem_check,
    normalization_genus,
    prym_data,
    random_section,
    spectral_genus,
    twisted_degree,
)
from hitchinfibres.util import Branch, Kind


P = Divisor.parse


def section(text, reducible=False):
    return SectionData(P(text), reducible)


class TestInputs(TestCase):
    def test_base_validation(self):
        for args, path in (
            ((1, 2), "$.base.g"),
            ((2, 0), "$.base.d_L"),
            ((2, True), "$.base.d_L"),
            ((2, 2, 1.5), "$.base.d"),
        ):
            with self.subTest(args=args):
                with self.assertRaises(ValidationError) as context:
                    BaseData(*args)
                self.assertEqual(context.exception.path, path)

    def test_section_validation(self):
        with self.assertRaises(ValidationError) as context:
            section("2p-q")
        self.assertEqual(context.exception.path, "$.section.D_s")
        with self.assertRaises(ValidationError) as context:
            section("3p+q", reducible=True)
        self.assertEqual(context.exception.path, "$.section.reducible")


class TestClassification(TestCase):
    def test_node(self):
        profile = classify(BaseData(2, 2), section("4p"))
        self.assertEqual(profile.entries, (("p", 4, Kind.node),))
        self.assertEqual((profile.r1, profile.r2), (1, 0))

    def test_smooth(self):
        profile = classify(BaseData(2, 2), section("p+q+r+t"))
        self.assertEqual(profile.entries, ())
        self.assertEqual(profile.r2, 4)

    def test_cusps(self):
        profile = classify(BaseData(2, 3), section("3p+3q"))
        self.assertEqual(profile.cusps, [3, 3])
        self.assertEqual(profile.r2, 2)

    def test_degree_mismatch(self):
        with self.assertRaises(DegreeMismatch):
            classify(BaseData(2, 3), section("4p"))

    def test_branch(self):
        self.assertIs(branch_of(section("2p+2q", True)), Branch.reducible)
        self.assertIs(branch_of(section("2p+2q")), Branch.irreducible_singular)
        self.assertIs(branch_of(section("p+q+r+t")), Branch.smooth)


class TestCounts(TestCase):
    def test_spectral_genus(self):
        for g, d_L, expected in ((2, 3, 6), (2, 1, 4), (3, 2, 7)):
            with self.subTest(g=g, d_L=d_L):
                self.assertEqual(spectral_genus(BaseData(g, d_L)), expected)

    def test_normalization_genus(self):
        for g, r2, expected in ((2, 2, 4), (2, 0, 3), (4, 4, 9)):
            with self.subTest(g=g, r2=r2):
                self.assertEqual(
                    normalization_genus(BaseData(g, 1), SingularityProfile((), r2)), expected
                )

    def test_jacobian_kernel(self):
        def profile(*multiplicities):
            return SingularityProfile(
                tuple((f"p{i}", m, Kind.for_multiplicity(m)) for i, m in enumerate(multiplicities))
            )

        self.assertEqual(jacobian_kernel_shape(profile(4)), (1, 1))
        self.assertEqual(jacobian_kernel_shape(profile(2)), (1, 0))
        self.assertEqual(jacobian_kernel_shape(profile(3, 5)), (0, 3))

    def test_prym(self):
        for g, r2, expected in ((2, 2, (2, 1)), (2, 0, (1, 2)), (3, 4, (4, 1))):
            with self.subTest(g=g, r2=r2):
                self.assertEqual(prym_data(BaseData(g, 1), SingularityProfile((), r2)), expected)

    def test_twisted_degree(self):
        self.assertEqual(twisted_degree(BaseData(2, 2), P("4p")), 0)
        self.assertEqual(twisted_degree(BaseData(2, 3), P("3p+3q")), 1)
        self.assertEqual(twisted_degree(BaseData(2, 2), P("p+q+r+t")), 2)


class TestFibreReport(TestCase):
    def test_node(self):
        report = fibre_report(BaseData(2, 2), section("4p"))
        self.assertEqual(report.fibre_dim, 3)
        self.assertEqual((report.prym_dim, report.torus_rank, report.affine_dim), (1, 1, 1))
        self.assertEqual(report.prym_components, 2)

    def test_smooth(self):
        report = fibre_report(BaseData(2, 2), section("p+q+r+t"))
        self.assertEqual(report.fibre_dim, 3)
        self.assertIs(report.branch, Branch.smooth)
        self.assertEqual(report.prym_components, 1)

    def test_reducible(self):
        report = fibre_report(BaseData(2, 2, 2), section("2p+2q", True), strata=True, graph=True)
        self.assertEqual(report.fibre_dim, 3)
        self.assertIs(report.branch, Branch.reducible)
        self.assertTrue(report.connected)
        self.assertEqual(report.strata["max_dim"], 3)
        self.assertIn("graph", report.strata)

    def test_to_json(self):
        payload = fibre_report(BaseData(2, 2), section("4p")).to_json()
        self.assertEqual(payload["input"]["section"], {"D_s": "4p", "reducible": False})
        self.assertEqual(payload["branch"], "IrreducibleSingular")
        self.assertEqual(payload["expected_dim"], 3)
        self.assertEqual(payload["profile"]["entries"], [{"point": "p", "m": 4, "kind": "Node"}])
        self.assertNotIn("strata", payload)

    def test_main_theorem_on_even_divisor(self):
        reports = main_theorem_check(BaseData(3, 2, 1), section("2p+2q"))
        branches = [report.branch for report in reports]
        self.assertEqual(branches, [Branch.irreducible_singular, Branch.reducible])
        self.assertTrue(all(r.fibre_dim == 4 for r in reports))

    @settings(max_examples=40, deadline=None)
    @given(
        strategies.integers(min_value=2, max_value=5),
        strategies.integers(min_value=1, max_value=6),
        strategies.integers(min_value=0, max_value=2**32),
    )
    def test_dimension_identity(self, g, d_L, seed):
        rng = random.Random(seed)
        D_s = random_section(rng, d_L)
        base = BaseData(g, d_L, rng.randint(-3, 3))
        for report in main_theorem_check(base, SectionData(D_s)):
            self.assertEqual(report.fibre_dim, g + d_L - 1)
            total = report.prym_dim + report.torus_rank + report.affine_dim
            self.assertEqual(total, g + d_L - 1)

    def test_genus_bookkeeping(self):
        for d_L in range(1, 5):
            for D_s in effective_of_degree(2 * d_L):
                base = BaseData(2, d_L)
                profile = classify(base, SectionData(D_s))
                with self.subTest(D_s=str(D_s)):
                    difference = spectral_genus(base) - normalization_genus(base, profile)
                    self.assertEqual(difference, d_L - twisted_degree(base, D_s))

    @settings(max_examples=60, deadline=None)
    @given(
        strategies.integers(min_value=1, max_value=6),
        strategies.integers(min_value=0, max_value=2**32),
    )
    def test_prym_components_follow_odd_points(self, d_L, seed):
        base = BaseData(2, d_L)
        D_s = random_section(random.Random(seed), d_L)
        profile = classify(base, SectionData(D_s))
        has_odd = any(m % 2 for _, m in D_s.items())
        self.assertEqual(prym_data(base, profile)[1], 1 if has_odd else 2)
        self.assertEqual(profile.r2 == 0, not has_odd)

    @given(strategies.integers(min_value=1, max_value=6))
    def test_smooth_profile_is_empty(self, d_L):
        D_s = Divisor({f"p{i}": 1 for i in range(2 * d_L)})
        sec = SectionData(D_s)
        profile = classify(BaseData(2, d_L), sec)
        self.assertIs(branch_of(sec), Branch.smooth)
        self.assertEqual(profile.entries, ())
        self.assertEqual(jacobian_kernel_shape(profile), (0, 0))


class TestRandomSection(TestCase):
    def test_degree_and_parity(self):
        rng = random.Random(1)
        for d_L in range(1, 6):
            with self.subTest(d_L=d_L):
                self.assertEqual(random_section(rng, d_L).degree, 2 * d_L)
                even = random_section(rng, d_L, even=True)
                self.assertTrue(all(m % 2 == 0 for _, m in even.items()))
                self.assertLessEqual(len(random_section(rng, d_L, max_points=2)), 2)
