"""The acceptance grid run by ``hitchinfibres sweep``.

Each criterion is a function of the resolved :class:`Config` that
returns a :class:`CellResult`. Criteria are registered by name with
:func:`criterion` and run in registration order.

"""
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

from .config import Config
from .divisor import ZERO, Divisor, d_prime_s, effective_below, effective_of_degree
from .exc import HitchinFibreError, InvariantFailure, ValidationError
from .higgschart import fuzz_roundtrip
from .localring import LocalAlgebra, Polynomial, member, multiply, phi
from .parmod import INFINITY, build_U_lambda, is_free, min_generators
from .parmod import verify_case2, verify_nonfibration
from .redfibre import (
    StrataContext,
    connectivity_graph,
    disjoint_union_check,
    embed_into_larger,
    enumerate_strata,
    filtration_check,
    is_valid,
    lattice_check,
    partner_involution_check,
)
from .spectral import (
    BaseData,
    SectionData,
    classify,
    fibre_report,
    normalization_genus,
    spectral_genus,
)
from .util import printer


__all__ = ["CRITERIA", "CellResult", "criterion", "run_sweep"]


@dataclass
class CellResult:

    name: str
    description: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def check(self, ok: bool, label: str):
        self.checked += 1
        if not ok:
            self.failures.append(label)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures[:10],
            "failure_count": len(self.failures),
        }


Criterion = Callable[[Config], CellResult]

CRITERIA: Dict[str, Criterion] = {}


def criterion(name: str, description: str):
    """Register a sweep criterion under ``name``."""

    def decorator(fn):
        def wrapper(config: Config) -> CellResult:
            cell = CellResult(name, description)
            try:
                fn(config, cell)
            except HitchinFibreError as exc:
                cell.failures.append(f"{exc.__class__.__name__}: {exc}")
            return cell

        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        CRITERIA[name] = wrapper
        return wrapper

    return decorator


def inclusive(bounds) -> range:
    low, high = bounds
    return range(low, high + 1)


def irreducible_grid(config: Config) -> Iterator[Tuple[BaseData, SectionData]]:
    for g in inclusive(config.sweep.genera):
        for d_L in inclusive(config.sweep.d_L):
            for D_s in effective_of_degree(2 * d_L):
                yield BaseData(g, d_L), SectionData(D_s)


def strata_contexts(config: Config) -> Iterator[StrataContext]:
    for g in inclusive(config.sweep.strata_genera):
        for d in inclusive(config.sweep.degrees):
            for D_prime in dprime_divisors(config):
                yield StrataContext.from_dprime(g, d, D_prime)


def dprime_divisors(config: Config) -> List[Divisor]:
    return [
        D
        for d_L in range(1, config.sweep.max_dprime_degree + 1)
        for D in effective_of_degree(d_L, config.sweep.max_points)
    ]


@criterion("dimension-identity", "prym + torus + affine = d_L + g − 1")
def dimension_identity(config: Config, cell: CellResult):
    for base, sec in irreducible_grid(config):
        report = fibre_report(base, sec)
        total = report.prym_dim + report.torus_rank + report.affine_dim
        cell.check(total == base.expected_dim, f"g={base.g} D_s={sec.D_s}: {total}")


@criterion("genus-bookkeeping", "g(X_s) − g(normalization) = deg D′_s")
def genus_bookkeeping(config: Config, cell: CellResult):
    for base, sec in irreducible_grid(config):
        profile = classify(base, sec)
        difference = spectral_genus(base) - normalization_genus(base, profile)
        cell.check(
            difference == d_prime_s(sec.D_s).degree, f"g={base.g} D_s={sec.D_s}: {difference}"
        )


@criterion("reducible-strata", "strata dimensions, D = 0 stratum, partners, connectivity")
def reducible_strata(config: Config, cell: CellResult):
    for ctx in strata_contexts(config):
        label = f"g={ctx.g} d={ctx.d} D′={ctx.D_prime}"
        strata = enumerate_strata(ctx)
        max_dim = max(info.dim for _, info in strata)
        cell.check(max_dim == ctx.d_L + ctx.g - 1, f"{label}: max dim {max_dim}")
        zero = [info for s, info in strata if s.D == ZERO]
        if ctx.d % 2 == 0:
            cell.check(len(zero) == 1 and zero[0].dim == ctx.g, f"{label}: D = 0 stratum")
        else:
            cell.check(not zero, f"{label}: D = 0 stratum for odd d")
        cell.check(partner_involution_check(ctx), f"{label}: partner map")
        cell.check(connectivity_graph(ctx).connected, f"{label}: connectivity")


@criterion("lattice-laws", "E(min) = ∩, E(max) = ∪, filtration and disjoint union")
def lattice_laws(config: Config, cell: CellResult):
    rng = random.Random(config.roundtrip.seed)
    g = config.sweep.strata_genera[0]
    for D_prime in dprime_divisors(config):
        ctx = StrataContext.from_dprime(g, 0, D_prime)
        below = effective_below(D_prime)
        for _ in range(config.sweep.lattice_pairs):
            D1, D2 = rng.choice(below), rng.choice(below)
            label = f"D′={D_prime} D1={D1} D2={D2}"
            cell.check(lattice_check(D1, D2, ctx), f"{label}: lattice")
            cell.check(filtration_check(D1, D2, ctx), f"{label}: filtration")
        for D in below:
            cell.check(disjoint_union_check(D, ctx, rng, samples=5), f"D′={D_prime} D={D}")


@criterion("non-fibration", "τ(O, U₀) = τ(O(E), U) with distinct twists")
def non_fibration(config: Config, cell: CellResult):
    padding = config.jets.padding
    for m in config.sweep.nonfibration_m:
        result = verify_nonfibration(m, padding)
        cell.check(result.passed, f"m={m}")
        cell.check(result.components_differ == (m % 4 == 2), f"m={m}: component parity")
    for m in config.sweep.case2_m:
        result = verify_case2(m, padding)
        cell.check(result.passed and result.components_differ, f"case 2, m={m}")


@criterion("homomorphism", "φ(g·h) = φ(g)·φ(h) and φ(g) lies in the local ring")
def homomorphism(config: Config, cell: CellResult):
    rng = random.Random(config.roundtrip.seed)
    for m in range(2, 10):
        order = 2 * m + config.jets.padding
        alg = LocalAlgebra(m, order)
        for trial in range(config.sweep.homomorphism_trials):
            g = Polynomial.random(rng, degree=6)
            h = Polynomial.random(rng, degree=6)
            product = phi(g * h, m, order)
            ok = product == multiply(phi(g, m, order), phi(h, m, order))
            cell.check(ok and member(phi(g, m, order), alg), f"m={m} trial={trial}")


@criterion("invertibility", "τ(U_λ) free for λ = 1, 2, −3; two generators for λ = 0, ∞")
def invertibility(config: Config, cell: CellResult):
    for lam in (1, 2, -3):
        cell.check(is_free(build_U_lambda(lam)), f"λ={lam}")
    for lam in (0, INFINITY):
        U = build_U_lambda(lam)
        cell.check(min_generators(U) == 2 and not is_free(U), f"λ={lam}")


@criterion("higgs-roundtrip", "chart gluing, compatibility, det, eigen-divisor, round trip")
def higgs_roundtrip(config: Config, cell: CellResult):
    settings = config.roundtrip
    summary = fuzz_roundtrip(
        random.Random(settings.seed), settings.trials, settings.max_order, seed=settings.seed
    )
    for name, count in summary.passes.items():
        cell.check(count == summary.trials, f"{name}: {count}/{summary.trials}")


@criterion("embedding", "E(D, m) ↪ E(D̃ − D′ + D, m) for larger D̃")
def embedding(config: Config, cell: CellResult):
    rng = random.Random(config.roundtrip.seed)
    divisors = dprime_divisors(config)
    for trial in range(config.sweep.embedding_trials):
        D_prime = rng.choice(divisors)
        label = rng.choice(sorted(D_prime) + ["extra"])
        D_tilde = D_prime + Divisor({label: rng.randint(1, 2)})
        d = rng.randint(*config.sweep.degrees)
        ctx = StrataContext.from_dprime(config.sweep.strata_genera[0], d, D_prime)
        shift = (D_tilde - D_prime).degree
        for stratum, _ in enumerate_strata(ctx, full_range=True):
            image, larger = embed_into_larger(stratum, ctx, D_tilde)
            ok = (
                image.m == stratum.m
                and is_valid(image, larger)
                and image.D.degree - stratum.D.degree == shift
            )
            cell.check(ok, f"trial={trial} {stratum} → {image} in D̃={D_tilde}")


def run_sweep(config: Config, only: Optional[Iterable[str]] = None) -> List[CellResult]:
    """Run the selected criteria (all by default) and print PASS/FAIL."""
    names = list(only) if only else list(CRITERIA)
    unknown = [name for name in names if name not in CRITERIA]
    if unknown:
        raise ValidationError(
            f"Unknown criteria: {', '.join(unknown)}; choose from {', '.join(CRITERIA)}",
            "$.only",
        )
    results = []
    for name in names:
        printer.debug("Running", name)
        cell = CRITERIA[name](config)
        printer.pass_fail(name, cell.passed, f"({cell.checked} checks)")
        for failure in cell.failures[:3]:
            printer.debug("  ", failure)
        results.append(cell)
    return results


def require_all_passed(results: Iterable[CellResult]):
    failed = [cell.name for cell in results if not cell.passed]
    if failed:
        raise InvariantFailure(f"Failed criteria: {', '.join(failed)}")
