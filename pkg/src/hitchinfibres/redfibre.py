"""Strata of the Hitchin fibre over a section with reducible spectral curve.

When D_s = 2·D′ and L ≅ O(D′), the fibre is covered by the images of
the bundles E(D, m) → Jac^m(X) indexed by effective D ≤ D′ and integers
m with d/2 − deg D ≤ m ≤ d/2. Everything here is combinatorial: the
Jacobian factor contributes its dimension g and E(D, M) is modelled by
its coefficient slots (see :func:`index_set`).

"""
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Tuple

import networkx as nx

from .divisor import ZERO, Divisor, Point, effective_below
from .exc import InvariantFailure, NotLarger, ValidationError
from .util import Injectivity, ceil_half, floor_half, half_leq, printer


__all__ = [
    "ConnectivityGraph",
    "StrataContext",
    "Stratum",
    "StratumInfo",
    "connectivity_graph",
    "disjoint_union_check",
    "em_covers",
    "embed_into_larger",
    "enumerate_strata",
    "filtration_check",
    "index_set",
    "injectivity_kind",
    "is_compact",
    "is_valid",
    "lattice_check",
    "partner_involution_check",
    "quotient_dim",
    "strata_table",
    "stratum_dim",
    "stratum_info",
    "vanishing_type",
]


IndexSet = Dict[Point, FrozenSet[int]]


@dataclass(frozen=True)
class StrataContext:

    """Fixed data of a reducible fibre: genus, degrees and the divisor D′."""

    g: int
    d_L: int
    d: int
    D_prime: Divisor

    def __post_init__(self):
        if self.g < 2:
            raise ValidationError(f"Genus must be at least 2; got {self.g}", "$.g")
        if not self.D_prime.is_effective:
            raise ValidationError(f"D′ must be effective; got {self.D_prime}", "$.dprime")
        if self.D_prime.degree != self.d_L or self.d_L < 1:
            raise ValidationError(
                f"D′ must have degree d_L ≥ 1; got deg {self.D_prime.degree}"
                f" with d_L = {self.d_L}",
                "$.dprime",
            )

    @classmethod
    def from_dprime(cls, g: int, d: int, D_prime: Divisor) -> "StrataContext":
        return cls(g=g, d_L=D_prime.degree, d=d, D_prime=D_prime)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "d_L": self.d_L,
            "d": self.d,
            "D_prime": self.D_prime.to_json(),
        }


@dataclass(frozen=True)
class Stratum:

    D: Divisor
    m: int

    def sort_key(self):
        return (self.D.sort_key(), -self.m)

    def __str__(self):
        return f"({self.D}, {self.m})"


@dataclass(frozen=True)
class StratumInfo:

    dim: int
    partner_m: int
    injectivity: Injectivity
    ramification_condition: str
    compact: bool


@dataclass
class ConnectivityGraph:

    graph: nx.Graph
    connected: bool
    top: int
    degrees: Dict[int, int] = field(default_factory=dict)

    @property
    def nodes(self) -> List[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted(edge)) for edge in self.graph.edges)

    def to_json(self) -> dict:
        return {
            "nodes": [
                {
                    "m": m,
                    "d_m": self.graph.nodes[m]["d_m"],
                    "divisor": str(self.graph.nodes[m]["divisor"]),
                }
                for m in self.nodes
            ],
            "edges": [list(edge) for edge in self.edges],
            "connected": self.connected,
        }


# Coefficient slots ---------------------------------------------------


def index_set(D: Divisor, ctx: StrataContext) -> IndexSet:
    """Exponent slots {D′(p) − D(p), …, D′(p) − 1} at each p in Supp D′.

    E(D, M) consists of the sections Σ a_k z^k with k in these slots.

    """
    _check_below(D, ctx)
    return {
        p: frozenset(range(n - D[p], n)) for p, n in ctx.D_prime.items()
    }


def _check_below(D: Divisor, ctx: StrataContext, path="$.D"):
    if not (ZERO <= D <= ctx.D_prime):
        raise ValidationError(f"Expected 0 ≤ D ≤ D′ = {ctx.D_prime}; got {D}", path)


def _size(slots: IndexSet) -> int:
    return sum(len(s) for s in slots.values())


def lattice_check(D1: Divisor, D2: Divisor, ctx: StrataContext) -> bool:
    """E(min) is the intersection and E(max) the union of E(D1), E(D2)."""
    slots_1 = index_set(D1, ctx)
    slots_2 = index_set(D2, ctx)
    meet = index_set(D1.min(D2), ctx)
    join = index_set(D1.max(D2), ctx)
    return all(
        meet[p] == slots_1[p] & slots_2[p] and join[p] == slots_1[p] | slots_2[p]
        for p in ctx.D_prime
    )


def filtration_check(D1: Divisor, D2: Divisor, ctx: StrataContext) -> bool:
    """Check monotonicity of D ↦ E(D) and its two extreme cases."""
    slots_1 = index_set(D1, ctx)
    slots_2 = index_set(D2, ctx)
    full = index_set(ctx.D_prime, ctx)
    ok = True
    if D1 <= D2:
        ok &= all(slots_1[p] <= slots_2[p] for p in ctx.D_prime)
    for D, slots in ((D1, slots_1), (D2, slots_2)):
        ok &= (_size(slots) == 0) == (D == ZERO)
        ok &= (slots == full) == (D >= ctx.D_prime)
        ok &= _size(slots) == D.degree
    return ok


def vanishing_type(coefficients: Mapping[Point, Mapping[int, object]], ctx) -> Divisor:
    """The divisor D̄ such that the given section lies in F(D̄, M).

    ``coefficients`` maps each point to its nonzero slot coefficients.
    At p the lowest nonzero exponent k gives D̄(p) = D′(p) − k.

    """
    type_ = {}
    for p, n in ctx.D_prime.items():
        exponents = [k for k, a in coefficients.get(p, {}).items() if a]
        if exponents:
            low = min(exponents)
            if not 0 <= low < n:
                raise ValidationError(f"Exponent {low} outside 0..{n - 1}", f"$.{p}")
            type_[p] = n - low
    return Divisor(type_)


def disjoint_union_check(
    D: Divisor, ctx: StrataContext, rng: random.Random, samples: int = 20
) -> bool:
    """E(D) is the disjoint union of the F(D̄) for D̄ ≤ D.

    Samples random sections of E(D) and checks that each has a type
    D̄ ≤ D and lies in exactly one F(D̄): its lowest coefficient sits in
    the slot D′(p) − D̄(p) and is nonzero.

    """
    slots = index_set(D, ctx)
    below = effective_below(D)
    for _ in range(samples):
        section = {
            p: {k: rng.choice((0, 0, 1, -2, 3)) for k in sorted(slots[p])}
            for p in ctx.D_prime
        }
        type_ = vanishing_type(section, ctx)
        if not type_ <= D:
            return False
        owners = [
            D_bar
            for D_bar in below
            if all(
                _lowest_slot_matches(section.get(p, {}), ctx.D_prime[p] - D_bar[p], D_bar[p])
                for p in ctx.D_prime
            )
        ]
        if owners != [type_]:
            return False
    return True


def _lowest_slot_matches(section_at_p, low, multiplicity):
    nonzero = [k for k, a in section_at_p.items() if a]
    if multiplicity == 0:
        return not nonzero
    return bool(nonzero) and min(nonzero) == low


def quotient_dim(D: Divisor) -> int:
    """dim F(D, M)/C* for D ≠ 0."""
    if D == ZERO:
        raise ValidationError("F(0, M) carries no scalar action", "$.D")
    return D.degree - 1


# Strata --------------------------------------------------------------


def is_valid(stratum: Stratum, ctx: StrataContext, full_range=True) -> bool:
    """Does (D, m) index a stratum?

    The full range is d/2 − deg D ≤ m ≤ d/2; the reduced range keeps
    only the larger member of each partner pair, (d − deg D)/2 ≤ m ≤ d/2.

    """
    D, m, d = stratum.D, stratum.m, ctx.d
    if not (ZERO <= D <= ctx.D_prime):
        return False
    if full_range:
        return half_leq(d - 2 * D.degree, m, d)
    return half_leq(d - D.degree, m, d)


def stratum_dim(stratum: Stratum, ctx: StrataContext) -> int:
    if stratum.D == ZERO:
        return ctx.g
    return stratum.D.degree + ctx.g - 1


def partner(stratum: Stratum, ctx: StrataContext) -> Stratum:
    return Stratum(stratum.D, ctx.d - stratum.D.degree - stratum.m)


def injectivity_kind(stratum: Stratum, ctx: StrataContext) -> Injectivity:
    if 2 * stratum.m == ctx.d - stratum.D.degree:
        return Injectivity.two_to_one
    return Injectivity.iso


def is_compact(stratum: Stratum, ctx: StrataContext) -> bool:
    """E(0, d/2) for even d; E(D, (d−1)/2) with deg D = 1 for odd d."""
    return (
        stratum.D.degree == ctx.d % 2
        and 2 * stratum.m == ctx.d - stratum.D.degree
    )


def stratum_info(stratum: Stratum, ctx: StrataContext) -> StratumInfo:
    injectivity = injectivity_kind(stratum, ctx)
    if injectivity is Injectivity.two_to_one:
        if stratum.D == ZERO:
            condition = "M^2 ≅ Λ"
        else:
            condition = f"M^2 ≅ Λ(-({stratum.D}))"
    else:
        condition = "none"
    return StratumInfo(
        dim=stratum_dim(stratum, ctx),
        partner_m=partner(stratum, ctx).m,
        injectivity=injectivity,
        ramification_condition=condition,
        compact=is_compact(stratum, ctx),
    )


def enumerate_strata(
    ctx: StrataContext, full_range=False
) -> List[Tuple[Stratum, StratumInfo]]:
    """All strata (D, m) with their info, sorted by D then descending m."""
    strata = []
    d = ctx.d
    for D in effective_below(ctx.D_prime):
        lower = d - D.degree if not full_range else d - 2 * D.degree
        for m in range(ceil_half(lower), floor_half(d) + 1):
            stratum = Stratum(D, m)
            strata.append((stratum, stratum_info(stratum, ctx)))
    strata.sort(key=lambda item: item[0].sort_key())
    return strata


def partner_involution_check(ctx: StrataContext) -> bool:
    """The partner map is an involution on the full range, and the
    reduced range holds one representative of each orbit."""
    full = {s for s, _ in enumerate_strata(ctx, full_range=True)}
    reduced = {s for s, _ in enumerate_strata(ctx)}
    for s in full:
        twin = partner(s, ctx)
        if twin not in full or partner(twin, ctx) != s:
            return False
        if len({s, twin} & reduced) != 1:
            return False
    return reduced <= full


# Connectivity ----------------------------------------------------------


def em_covers(m: int, ctx: StrataContext) -> bool:
    """E(D) over deg D ≥ d_m exhausts the whole coefficient space."""
    d_m = ceil_half(ctx.d - 2 * m)
    full = index_set(ctx.D_prime, ctx)
    union = {p: frozenset() for p in ctx.D_prime}
    for D in effective_below(ctx.D_prime):
        if D.degree >= d_m:
            slots = index_set(D, ctx)
            union = {p: union[p] | slots[p] for p in ctx.D_prime}
    return union == full


def connectivity_graph(ctx: StrataContext) -> ConnectivityGraph:
    """Graph on the pieces p(E(m)), with the edges forced by partners.

    For each m in [⌈d/2 − d_L⌉, ⌊d/2⌋], a divisor D of degree
    d_m = ⌈d/2 − m⌉ has partner d − d_m − m = ⌊d/2⌋, so p(E(m)) meets
    p(E(⌊d/2⌋)).

    Raises:
        InvariantFailure: the graph is not connected, or some stratum
            falls outside every piece.

    """
    top = floor_half(ctx.d)
    graph = nx.Graph()
    degrees = {}
    below = effective_below(ctx.D_prime)
    for m in range(ceil_half(ctx.d - 2 * ctx.d_L), top + 1):
        d_m = ceil_half(ctx.d - 2 * m)
        D = next((E for E in below if E.degree == d_m), None)
        if D is None:
            raise InvariantFailure(f"No divisor of degree {d_m} below {ctx.D_prime}")
        if ctx.d - d_m - m != top:
            raise InvariantFailure(f"Partner of m = {m} is not {top}")
        if not em_covers(m, ctx):
            raise InvariantFailure(f"E({m}) does not cover the coefficient space")
        degrees[m] = d_m
        graph.add_node(m, d_m=d_m, divisor=D)
        if m != top:
            graph.add_edge(m, top, divisor=D)

    for stratum, _ in enumerate_strata(ctx, full_range=True):
        d_m = degrees.get(stratum.m)
        if d_m is None or stratum.D.degree < d_m:
            raise InvariantFailure(f"Stratum {stratum} lies in no piece E(m)")

    connected = nx.is_connected(graph)
    printer.debug("Connectivity graph:", graph.number_of_nodes(), "nodes", connected)
    if not connected:
        raise InvariantFailure(f"Connectivity graph is not connected for {ctx}")
    return ConnectivityGraph(graph=graph, connected=connected, top=top, degrees=degrees)


# Larger twists ---------------------------------------------------------


def embed_into_larger(
    stratum: Stratum, ctx: StrataContext, D_tilde: Divisor
) -> Tuple[Stratum, StrataContext]:
    """Map (D, m) to (D̃ − D′ + D, m) for a larger divisor D̃ > D′.

    Raises:
        NotLarger: D̃ is not strictly larger than D′.

    """
    if not D_tilde > ctx.D_prime:
        raise NotLarger(f"{D_tilde} is not strictly larger than {ctx.D_prime}")
    larger = StrataContext.from_dprime(ctx.g, ctx.d, D_tilde)
    image = Stratum(D_tilde - ctx.D_prime + stratum.D, stratum.m)

    old = index_set(stratum.D, ctx)
    new = index_set(image.D, larger)
    shift = (D_tilde - ctx.D_prime).degree
    if not all(old.get(p, frozenset()) <= new[p] for p in D_tilde):
        raise InvariantFailure(f"Slots of {stratum} do not embed into {image}")
    if _size(new) - _size(old) != shift:
        raise InvariantFailure(f"Embedding {stratum} → {image} adds the wrong slots")
    return image, larger


# Reports -----------------------------------------------------------------


def strata_table(ctx: StrataContext, full_range=False, graph=True) -> dict:
    strata = enumerate_strata(ctx, full_range=full_range)
    rows = [
        {
            "D": str(s.D),
            "m": s.m,
            "dim": info.dim,
            "partner_m": info.partner_m,
            "injectivity": str(info.injectivity),
            "ramification_condition": info.ramification_condition,
            "compact": info.compact,
        }
        for s, info in strata
    ]
    max_dim = max(info.dim for _, info in strata)
    table = {
        "context": ctx.to_json(),
        "full_range": full_range,
        "strata": rows,
        "max_dim": max_dim,
        "expected_dim": ctx.d_L + ctx.g - 1,
    }
    if graph:
        table["graph"] = connectivity_graph(ctx).to_json()
    return table
