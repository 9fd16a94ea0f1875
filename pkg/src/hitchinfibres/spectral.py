"""Spectral curve classification and the dimension counts of the fibre.

The section s of L² has divisor D_s of degree 2·d_L. Points of even
multiplicity m ≥ 2 are nodes of type A_{m−1} on the spectral curve X_s,
points of odd multiplicity m ≥ 3 are cusps, and simple zeros are smooth
branch points. The normalized double cover is ramified exactly at the
points of odd multiplicity, whose count is ``r2``.

"""
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .divisor import Divisor, d_prime_s, half
from .exc import (
    DegreeMismatch,
    HitchinFibreError,
    InvariantFailure,
    OddCuspCount,
    OddMultiplicity,
    ValidationError,
)
from .redfibre import StrataContext, connectivity_graph, enumerate_strata, strata_table
from .util import Branch, Kind, printer


__all__ = [
    "BaseData",
    "FibreReport",
    "SectionData",
    "SingularityProfile",
    "branch_of",
    "classify",
    "fibre_report",
    "jacobian_kernel_shape",
    "main_theorem_check",
    "normalization_genus",
    "prym_data",
    "random_section",
    "spectral_genus",
    "twisted_degree",
]


@dataclass(frozen=True)
class BaseData:

    """Genus of X, degree of L and degree of Λ."""

    g: int
    d_L: int
    d: int = 0

    def __post_init__(self):
        for name in ("g", "d_L", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"Expected an integer; got {value!r}", f"$.base.{name}")
        if self.g < 2:
            raise ValidationError(f"Genus must be at least 2; got {self.g}", "$.base.g")
        if self.d_L < 1:
            raise ValidationError(f"deg L must be positive; got {self.d_L}", "$.base.d_L")

    @property
    def expected_dim(self) -> int:
        return self.d_L + self.g - 1

    def to_json(self) -> dict:
        return {"g": self.g, "d_L": self.d_L, "d": self.d}


@dataclass(frozen=True)
class SectionData:

    """The divisor of s and whether L ≅ O(D̃) for D_s = 2·D̃.

    The flag stands in for the 2-torsion condition that makes the
    spectral curve reducible; it is only meaningful when every
    multiplicity is even.

    """

    D_s: Divisor
    reducible: bool = False

    def __post_init__(self):
        if not self.D_s.is_effective:
            raise ValidationError(f"D_s must be effective; got {self.D_s}", "$.section.D_s")
        if self.reducible:
            try:
                half(self.D_s)
            except OddMultiplicity as exc:
                raise ValidationError(
                    f"Reducible requires D_s = 2·D̃; {exc}", "$.section.reducible"
                ) from None

    def to_json(self) -> dict:
        return {"D_s": str(self.D_s), "reducible": self.reducible}


@dataclass(frozen=True)
class SingularityProfile:

    """Singular points of X_s, and the ramification count of its normalization."""

    entries: Tuple[Tuple[str, int, Kind], ...] = ()
    r2: int = 0

    @property
    def r1(self) -> int:
        return sum(1 for _, _, kind in self.entries if kind is Kind.node)

    @property
    def cusp_count(self) -> int:
        return sum(1 for _, _, kind in self.entries if kind is Kind.cusp)

    @property
    def nodes(self) -> List[int]:
        return [m for _, m, kind in self.entries if kind is Kind.node]

    @property
    def cusps(self) -> List[int]:
        return [m for _, m, kind in self.entries if kind is Kind.cusp]

    def to_json(self) -> dict:
        return {
            "entries": [
                {"point": point, "m": m, "kind": str(kind)} for point, m, kind in self.entries
            ],
            "r1": self.r1,
            "r2": self.r2,
            "cusps": self.cusp_count,
        }


@dataclass
class FibreReport:

    base: BaseData
    section: SectionData
    branch: Branch
    profile: SingularityProfile
    spectral_genus: int
    normalization_genus: int
    twisted_degree: int
    torus_rank: int
    affine_dim: int
    prym_dim: int
    prym_components: int
    fibre_dim: int
    connected: bool
    strata: Optional[dict] = field(default=None)

    def to_json(self) -> dict:
        payload = {
            "input": {"base": self.base.to_json(), "section": self.section.to_json()},
            "branch": str(self.branch),
            "profile": self.profile.to_json(),
            "spectral_genus": self.spectral_genus,
            "normalization_genus": self.normalization_genus,
            "twisted_degree": self.twisted_degree,
            "torus_rank": self.torus_rank,
            "affine_dim": self.affine_dim,
            "prym_dim": self.prym_dim,
            "prym_components": self.prym_components,
            "fibre_dim": self.fibre_dim,
            "expected_dim": self.base.expected_dim,
            "connected": self.connected,
        }
        if self.strata is not None:
            payload["strata"] = self.strata
        return payload


def classify(base: BaseData, sec: SectionData) -> SingularityProfile:
    """One entry per point of multiplicity ≥ 2.

    Raises:
        DegreeMismatch: deg D_s ≠ 2·d_L.
        OddCuspCount: the number of odd-multiplicity points is odd.

    """
    if sec.D_s.degree != 2 * base.d_L:
        raise DegreeMismatch(
            f"deg D_s = {sec.D_s.degree} but 2·d_L = {2 * base.d_L}"
        )
    entries = tuple(
        (point, m, Kind.for_multiplicity(m)) for point, m in sec.D_s.items() if m >= 2
    )
    r2 = sum(1 for _, m in sec.D_s.items() if m % 2)
    if r2 % 2:
        raise OddCuspCount(f"{r2} points of odd multiplicity in {sec.D_s}")
    return SingularityProfile(entries, r2)


def branch_of(sec: SectionData) -> Branch:
    if all(m == 1 for _, m in sec.D_s.items()):
        return Branch.smooth
    if sec.reducible:
        return Branch.reducible
    return Branch.irreducible_singular


def spectral_genus(base: BaseData) -> int:
    """Arithmetic genus 2g − 1 + d_L of X_s."""
    return 2 * base.g - 1 + base.d_L


def normalization_genus(base: BaseData, profile: SingularityProfile) -> int:
    return 2 * base.g - 1 + profile.r2 // 2


def jacobian_kernel_shape(profile: SingularityProfile) -> Tuple[int, int]:
    """(C*)^{r1} × C^a, the kernel of pulling back to the normalization."""
    affine = sum((m - 2) // 2 for m in profile.nodes) + sum(
        (m - 1) // 2 for m in profile.cusps
    )
    return profile.r1, affine


def prym_data(base: BaseData, profile: SingularityProfile) -> Tuple[int, int]:
    """Dimension and number of components of the Prym of the normalization."""
    components = 1 if profile.r2 > 0 else 2
    return base.g - 1 + profile.r2 // 2, components


def twisted_degree(base: BaseData, D_s: Divisor) -> int:
    """deg L(−D′_s), the line bundle of the normalized double cover."""
    return base.d_L - d_prime_s(D_s).degree


def fibre_report(base: BaseData, sec: SectionData, strata=False, graph=False) -> FibreReport:
    """Assemble every count for (base, sec).

    The irreducible fibre dimension is prym + torus + affine; the
    reducible one is the largest stratum dimension.

    Raises:
        InvariantFailure: the fibre dimension is not d_L + g − 1.

    """
    profile = classify(base, sec)
    branch = branch_of(sec)
    torus_rank, affine_dim = jacobian_kernel_shape(profile)
    prym_dim, components = prym_data(base, profile)
    table = None
    connected = True
    if branch is Branch.reducible:
        ctx = StrataContext(base.g, base.d_L, base.d, half(sec.D_s))
        fibre_dim = max(info.dim for _, info in enumerate_strata(ctx))
        connected = connectivity_graph(ctx).connected
        if strata:
            table = strata_table(ctx, graph=graph)
    else:
        fibre_dim = prym_dim + torus_rank + affine_dim
    report = FibreReport(
        base=base,
        section=sec,
        branch=branch,
        profile=profile,
        spectral_genus=spectral_genus(base),
        normalization_genus=normalization_genus(base, profile),
        twisted_degree=twisted_degree(base, sec.D_s),
        torus_rank=torus_rank,
        affine_dim=affine_dim,
        prym_dim=prym_dim,
        prym_components=components,
        fibre_dim=fibre_dim,
        connected=connected,
        strata=table,
    )
    if fibre_dim != base.expected_dim:
        raise InvariantFailure(
            f"Fibre dimension {fibre_dim} ≠ d_L + g − 1 = {base.expected_dim}"
            f" for {sec.D_s} ({branch})"
        )
    return report


def main_theorem_check(base: BaseData, sec: SectionData) -> List[FibreReport]:
    """Dimension d_L + g − 1 and connectedness on every applicable branch.

    When D_s is twice a divisor both the irreducible and the reducible
    readings are checked.

    Raises:
        InvariantFailure: some branch disagrees.

    """
    sections = [SectionData(sec.D_s, False)]
    try:
        half(sec.D_s)
    except OddMultiplicity:
        pass
    else:
        sections.append(SectionData(sec.D_s, True))
    reports = []
    for candidate in sections:
        try:
            report = fibre_report(base, candidate)
        except InvariantFailure:
            raise
        except HitchinFibreError as exc:
            raise InvariantFailure(f"{candidate.D_s}: {exc}") from exc
        if not report.connected:
            raise InvariantFailure(f"Fibre over {candidate.D_s} is not connected")
        printer.debug(f"{candidate.D_s} ({report.branch}): dim {report.fibre_dim}")
        reports.append(report)
    return reports


def random_section(rng: random.Random, d_L: int, max_points: int = None, even=False) -> Divisor:
    """A random effective divisor of degree 2·d_L on points p1, p2, ...

    With ``even`` every multiplicity is even.

    """
    unit = 2 if even else 1
    remaining = 2 * d_L // unit
    multiplicities = []
    while remaining:
        if max_points is not None and len(multiplicities) == max_points - 1:
            part = remaining
        else:
            part = rng.randint(1, remaining)
        multiplicities.append(part * unit)
        remaining -= part
    return Divisor({f"p{i}": m for i, m in enumerate(multiplicities, 1)})
