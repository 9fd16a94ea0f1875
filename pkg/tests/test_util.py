import json
from contextlib import redirect_stderr, redirect_stdout
from doctest import DocTestSuite
from io import StringIO
from unittest import TestCase

import runcommands.util

import hitchinfibres.util.misc
from hitchinfibres.util import Verbosity, merge_dicts, printer, verbosity_from_environ
from hitchinfibres.util.data import Data
from hitchinfibres.util.printer import Printer


def load_tests(loader, tests, ignore):
    tests.addTests(DocTestSuite(hitchinfibres.util.misc))
    return tests


class TestPrinter(TestCase):
    def setUp(self):
        self.printer = Printer(verbosity=Verbosity.debug)

    def test_prints_to_stdout(self):
        for attr in ("print", "info"):
            stdout = StringIO()
            stderr = StringIO()
            with self.subTest(printer=attr):
                with redirect_stdout(stdout):
                    with redirect_stderr(stderr):
                        getattr(self.printer, attr)("stdout")
                self.assertEqual(stdout.getvalue(), "stdout\n")
                self.assertEqual(stderr.getvalue(), "")

    def test_prints_to_stderr(self):
        for attr in ("warning", "error", "debug"):
            stdout = StringIO()
            stderr = StringIO()
            with self.subTest(printer=attr):
                with redirect_stdout(stdout):
                    with redirect_stderr(stderr):
                        getattr(self.printer, attr)("stderr")
                self.assertEqual(stdout.getvalue(), "")
                self.assertEqual(stderr.getvalue(), "stderr\n")

    def test_print_no_args(self):
        stdout = StringIO()
        with redirect_stdout(stdout):
            self.printer.print()
        self.assertEqual(stdout.getvalue(), "\n")

    def test_brackets_are_not_markup(self):
        stdout = StringIO()
        with redirect_stdout(stdout):
            self.printer.print("[bold]x[/bold]", [1, 2])
        self.assertEqual(stdout.getvalue(), "[bold]x[/bold] [1, 2]\n")

    def test_pass_fail(self):
        stdout = StringIO()
        with redirect_stdout(stdout):
            self.printer.pass_fail("check", True, "(3 checks)")
            self.printer.pass_fail("broken", False)
        self.assertEqual(stdout.getvalue(), "PASS check (3 checks)\nFAIL broken\n")

    def test_quiet_suppresses_info_and_debug(self):
        quiet = Printer(verbosity=Verbosity.quiet)
        stdout = StringIO()
        stderr = StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            quiet.info("info")
            quiet.debug("debug")
            quiet.pass_fail("check", True)
            quiet.pass_fail("broken", False)
            quiet.error("error")
        self.assertEqual(stdout.getvalue().strip(), "FAIL broken")
        self.assertIn("error", stderr.getvalue())
        self.assertNotIn("debug", stderr.getvalue())

    def test_debug_needs_debug_level(self):
        normal = Printer(verbosity=Verbosity.normal)
        stderr = StringIO()
        with redirect_stderr(stderr):
            normal.debug("hidden")
        self.assertEqual(stderr.getvalue(), "")

    def test_custom_styles(self):
        custom = Printer(styles={"passed": "underline"}, verbosity="normal")
        stdout = StringIO()
        with redirect_stdout(stdout):
            custom.pass_fail("styled", True)
        self.assertEqual(stdout.getvalue(), "PASS styled\n")

    def test_print_json(self):
        stdout = StringIO()
        payload = {"b": 1, "a": ["x", "√−1"], "wide": "w" * 200}
        with redirect_stdout(stdout):
            self.printer.print_json(payload)
        self.assertEqual(json.loads(stdout.getvalue()), payload)
        self.assertLess(stdout.getvalue().index('"b"'), stdout.getvalue().index('"a"'))

    def test_module_printer(self):
        self.assertIsInstance(printer, Printer)


class TestVerbosity(TestCase):
    def test_parse(self):
        cases = (
            ("quiet", Verbosity.quiet),
            ("DEBUG", Verbosity.debug),
            ("info", Verbosity.normal),
            ("2", Verbosity.debug),
            (0, Verbosity.quiet),
            (Verbosity.normal, Verbosity.normal),
        )
        for value, expected in cases:
            with self.subTest(value=value):
                self.assertIs(Verbosity.parse(value), expected)

    def test_parse_unknown(self):
        with self.assertRaises(ValueError):
            Verbosity.parse("loud")

    def test_from_environ(self):
        self.assertIs(verbosity_from_environ({}), Verbosity.normal)
        self.assertIs(verbosity_from_environ({"HF_LOG": ""}), Verbosity.normal)
        self.assertIs(verbosity_from_environ({"HF_LOG": "debug"}), Verbosity.debug)
        with self.assertRaises(ValueError):
            verbosity_from_environ({"HF_LOG": "chatty"})


class TestData(TestCase):
    def test_attribute_and_item_access(self):
        data = Data(a=1, nested={"b": [1, 2]})
        self.assertEqual(data.a, 1)
        self.assertEqual(data["a"], 1)
        self.assertIsInstance(data.nested, Data)
        self.assertEqual(data.nested.b, [1, 2])
        self.assertIn("nested", data)
        self.assertEqual(list(data), ["a", "nested"])

    def test_missing_attribute(self):
        data = Data(a=1)
        with self.assertRaises(AttributeError):
            data.b
        with self.assertRaises(KeyError):
            data["b"]

    def test_to_dict_and_equality(self):
        data = Data(a=1, nested={"b": 2})
        data.c = 3
        self.assertEqual(data.to_dict(), {"a": 1, "nested": {"b": 2}, "c": 3})
        self.assertEqual(data, Data(**data.to_dict()))

    def test_builds_on_runcommands_data(self):
        self.assertTrue(issubclass(Data, runcommands.util.Data))
        data = Data(nested={"b": {"c": 1}})
        self.assertIsInstance(data.nested.b, Data)
        self.assertEqual(data.nested.b.c, 1)

    def test_not_hashable(self):
        with self.assertRaises(TypeError):
            hash(Data(a=1))


class TestMergeDicts(TestCase):
    def test_nested_tables_merge(self):
        defaults = {"sweep": {"genera": [2, 5], "d_L": [1, 6]}, "jets": {"padding": 2}}
        merged = merge_dicts(defaults, {"sweep": {"d_L": [1, 2]}}, {"jets": {"padding": 4}})
        self.assertEqual(
            merged, {"sweep": {"genera": [2, 5], "d_L": [1, 2]}, "jets": {"padding": 4}}
        )
        self.assertEqual(defaults["sweep"]["d_L"], [1, 6])
        self.assertIs(merge_dicts, runcommands.util.merge_dicts)
