"""Command line interface.

``hitchinfibres`` is a base command; its options are passed down to the
subcommands ``analyze``, ``strata``, ``verify-example``, ``roundtrip``
and ``sweep``. Reports are JSON on stdout. Exit codes: 0 on success,
1 when an invariant fails, 2 for invalid input or configuration (with
the error as JSON on stderr).

"""
import functools
import json
import os
import random
import sys

import jsonschema
from runcommands import abort, arg, command

from . import __version__
from .config import load_config
from .divisor import Divisor
from .exc import ConfigError, DegreeMismatch, HitchinFibreError, ValidationError
from .higgschart import example_pairs, fuzz_roundtrip
from .parmod import build_U0, build_U_case2, build_Uinf, describe
from .parmod import verify_case2, verify_nonfibration
from .redfibre import StrataContext, strata_table
from .spectral import BaseData, SectionData, fibre_report
from .sweep import CRITERIA, require_all_passed, run_sweep
from .util import Verbosity, printer, verbosity_from_environ


__all__ = ["ANALYSIS_REQUEST_SCHEMA", "hitchinfibres"]


DIVISOR_SCHEMA = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "properties": {
                "points": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "label": {"type": "string"},
                            "mult": {"type": "integer"},
                        },
                        "required": ["label", "mult"],
                        "additionalProperties": False,
                    },
                }
            },
            "required": ["points"],
            "additionalProperties": False,
        },
    ]
}

ANALYSIS_REQUEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "base": {
            "type": "object",
            "properties": {
                "g": {"type": "integer", "minimum": 2},
                "d_L": {"type": "integer", "minimum": 1},
                "d": {"type": "integer"},
            },
            "required": ["g", "d_L"],
            "additionalProperties": False,
        },
        "section": {
            "type": "object",
            "properties": {
                "D_s": DIVISOR_SCHEMA,
                "reducible": {"type": "boolean"},
            },
            "required": ["D_s"],
            "additionalProperties": False,
        },
        "options": {
            "type": "object",
            "properties": {
                "strata": {"type": "boolean"},
                "graph": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    },
    "required": ["base", "section"],
    "additionalProperties": False,
}


def json_path(parts) -> str:
    path = "$"
    for part in parts:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def validate_request(document) -> dict:
    """Check an AnalysisRequest document against the schema.

    Raises:
        ValidationError: with the path of the offending field.

    """
    validator = jsonschema.Draft202012Validator(ANALYSIS_REQUEST_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(document))
    if error is not None:
        raise ValidationError(error.message, json_path(error.absolute_path))
    return document


def request_from_document(document):
    document = validate_request(document)
    base_doc = document["base"]
    section_doc = document["section"]
    options = document.get("options", {})
    base = BaseData(base_doc["g"], base_doc["d_L"], base_doc.get("d", 0))
    D_s = Divisor.from_json(section_doc["D_s"], "$.section.D_s")
    section = SectionData(D_s, section_doc.get("reducible", False))
    return base, section, options


def handle_errors(fn):
    """Map library errors onto exit codes via :func:`abort`."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValidationError, ConfigError) as exc:
            if isinstance(exc, ValidationError):
                payload = exc.as_dict()
            else:
                payload = {"error": exc.__class__.__name__, "message": str(exc), "path": "$"}
            printer.print_json(payload, stderr=True)
            abort(2, "")
        except HitchinFibreError as exc:
            abort(1, f"{exc.__class__.__name__}: {exc}")

    return wrapper


@command
def hitchinfibres(
    subcommand: arg(default=None, help="analyze, strata, verify-example, roundtrip or sweep"),
    config_file: arg(
        short_option="-f",
        help="TOML file with [sweep], [roundtrip] and [jets] settings",
    ) = None,
    verbosity: arg(
        short_option="-v",
        help="quiet, normal or debug (default from $HF_LOG)",
    ) = None,
    version: arg(
        no_inverse=True,
        help="Show version and exit",
    ) = False,
):
    """Dimension, strata and chart checks for rank 2 Hitchin fibres."""
    path = "$.HF_LOG" if verbosity is None else "$.verbosity"
    try:
        if verbosity is None:
            level = verbosity_from_environ(os.environ)
        else:
            level = Verbosity.parse(verbosity)
    except ValueError as exc:
        printer.print_json(ValidationError(str(exc), path).as_dict(), stderr=True)
        abort(2, "")
    printer.verbosity = level
    if version:
        printer.print(__version__)
        abort(0, "")


@hitchinfibres.subcommand
@handle_errors
def analyze(
    json_file: arg(
        long_option="--json",
        short_option="-j",
        help="AnalysisRequest document (\"-\" reads stdin)",
    ) = None,
    g: arg(type=int, help="Genus of X") = None,
    dl: arg(type=int, help="Degree of L") = None,
    d: arg(type=int, help="Degree of Λ") = 0,
    ds: arg(help="Divisor of s, e.g. 2p+2q") = None,
    reducible: arg(help="L ≅ O(D_s/2), so the spectral curve is reducible") = False,
    strata: arg(help="Include the strata table for a reducible curve") = True,
    graph: arg(help="Include the connectivity graph") = True,
):
    """Report genera, Prym data and fibre dimension for a section."""
    if json_file:
        base, section, options = request_from_document(load_json(json_file))
        strata = options.get("strata", strata)
        graph = options.get("graph", graph)
        ds_path = "$.section.D_s"
    else:
        require_options(g=g, dl=dl, ds=ds)
        ds_path = "$.ds"
        base = BaseData(g, dl, d)
        section = SectionData(Divisor.from_json(ds, "$.ds"), reducible)
    try:
        report = fibre_report(base, section, strata=strata, graph=graph)
    except DegreeMismatch as exc:
        raise ValidationError(str(exc), ds_path) from None
    printer.print_json(report.to_json())


def require_options(**options):
    missing = [name for name, value in options.items() if value is None]
    if missing:
        raise ValidationError(f"Missing options: {', '.join(missing)}", f"$.{missing[0]}")


def load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fp:
            return json.load(fp)
    except OSError as exc:
        raise ValidationError(f"Could not read {path}: {exc.strerror}", "$") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"Malformed JSON: {exc.msg} at line {exc.lineno}", "$") from None


def parse_divisor_option(text: str, path: str) -> Divisor:
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"Malformed JSON: {exc.msg}", path) from None
        return Divisor.from_json(obj, path)
    return Divisor.from_json(text, path)


@hitchinfibres.subcommand
@handle_errors
def strata(
    g: arg(type=int, help="Genus of X") = None,
    d: arg(type=int, help="Degree of Λ") = None,
    dprime: arg(help="The divisor D′ with L ≅ O(D′), as text or JSON") = None,
    full_range: arg(help="Use d/2 − deg D ≤ m instead of one stratum per partner pair") = False,
    graph: arg(help="Include the connectivity graph") = True,
):
    """Enumerate the strata of a reducible fibre."""
    require_options(g=g, d=d, dprime=dprime)
    ctx = StrataContext.from_dprime(g, d, parse_divisor_option(dprime, "$.dprime"))
    printer.print_json(strata_table(ctx, full_range=full_range, graph=graph))


@hitchinfibres.subcommand
@handle_errors
def verify_example(
    m: arg(type=int, help="Even multiplicity of the node") = None,
    case2: arg(help="Check the m ≡ 0 mod 4 construction instead") = False,
    config_file=None,
):
    """Show that τ(O, U₀) = τ(O(E), U) for different twists E."""
    require_options(m=m)
    config = load_config(config_file)
    padding = config.jets.padding
    if case2:
        result = verify_case2(m, padding)
        subspaces = [build_U0(m), build_U_case2(m)]
    else:
        result = verify_nonfibration(m, padding)
        subspaces = [build_U0(m), build_Uinf(m)]
    label = f"{'case 2' if case2 else 'non-fibration'} m={m}"
    printer.pass_fail(label, result.passed, f"(twist {result.twist})")
    printer.print_json(
        {
            **result.to_json(),
            "parabolic_subspaces": [describe(U) for U in subspaces],
        }
    )
    return 0 if result.passed else 1


@hitchinfibres.subcommand
@handle_errors
def roundtrip(
    seed: arg(type=int, help="Random seed (default from config)") = None,
    trials: arg(type=int, help="Number of random charts (default from config)") = None,
    max_order: arg(type=int, help="Largest D′(p) to sample") = None,
    examples: arg(help="Also print the worked example charts") = False,
    config_file=None,
):
    """Fuzz the Higgs chart construction and its round trip."""
    settings = load_config(config_file).roundtrip
    seed = settings.seed if seed is None else seed
    trials = settings.trials if trials is None else trials
    max_order = settings.max_order if max_order is None else max_order
    summary = fuzz_roundtrip(random.Random(seed), trials, max_order, seed=seed)
    for name, count in summary.passes.items():
        printer.pass_fail(name, count == trials, f"{count}/{trials}")
    payload = summary.to_json()
    if examples:
        payload["examples"] = {label: pair.to_json() for label, pair in example_pairs()}
    printer.print_json(payload)
    return 0 if summary.passed else 1


@hitchinfibres.subcommand
@handle_errors
def sweep(
    only: arg(
        container=tuple,
        choices=tuple(CRITERIA),
        help="Run only these criteria",
    ) = (),
    json_out: arg(help="Also write the matrix to this file") = None,
    config_file=None,
):
    """Run the acceptance grid and print a PASS/FAIL matrix."""
    config = load_config(config_file)
    results = run_sweep(config, only)
    matrix = {
        "config": config.source,
        "criteria": [cell.to_json() for cell in results],
        "passed": all(cell.passed for cell in results),
    }
    printer.print_json(matrix)
    if json_out:
        with open(json_out, "w") as fp:
            json.dump(matrix, fp, indent=2, ensure_ascii=False)
    require_all_passed(results)
