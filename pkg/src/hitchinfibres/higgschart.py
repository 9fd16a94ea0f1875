"""Higgs pairs from (q, M) in formal charts around the points of D′.

Near a point p with D′(p) = n the determinant section is s′², with s′
of order exactly n, and the extension class q is a polynomial of degree
below n. Choosing y₁ = q and y₂ = 0 the gluing identity

    √−1·s′·x₁₂ = y₂ − y₁

determines the Laurent jet x₁₂ (pole order ≤ n), which in turn gives
the transition matrix f₁₂ = [[1, x₁₂/2], [0, 1]] and the local Higgs
fields φ_a = [[√−1·s′, y_a], [0, −√−1·s′]].

Everything is computed exactly over the Gaussian rationals, with series
truncated at N = 2n + 1 and intermediate results carried to 2N.

"""
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, QQ_I

from .exc import (
    CompatibilityFailure,
    DivisionByNonUnit,
    TruncationTooShort,
    ValidationError,
)
from .util import Stability, printer
from .util.serialize import scalar_to_json, vector_to_json


__all__ = [
    "ChartHiggsPair",
    "LaurentJet",
    "LocalChartData",
    "LocalPair",
    "RoundtripSummary",
    "build_pair",
    "chart2_q",
    "eigen_divisor",
    "fuzz_roundtrip",
    "q_extract",
    "resplit",
    "scalar_action",
    "semistability_check",
    "solve_gluing",
]


#: √−1 in the Gaussian rationals.
SQRT_MINUS_ONE = QQ_I(0, 1)


@dataclass(frozen=True)
class LaurentJet:

    """Σ c_k z^k for valuation ≤ k < precision, known modulo z^precision."""

    valuation: int
    coefficients: Tuple[object, ...]
    domain: object = QQ_I

    @classmethod
    def from_coefficients(cls, coefficients: Sequence, precision: int, valuation=0, domain=QQ_I):
        size = precision - valuation
        if size < 0:
            raise ValidationError(f"Precision {precision} is below valuation {valuation}")
        values = [domain.convert(c) for c in list(coefficients)[:size]]
        values.extend([domain.zero] * (size - len(values)))
        return cls(valuation, tuple(values), domain)

    @classmethod
    def zero(cls, precision: int, domain=QQ_I):
        return cls.from_coefficients((), precision, 0, domain)

    @classmethod
    def constant(cls, c, precision: int, domain=QQ_I):
        return cls.from_coefficients((c,), precision, 0, domain)

    @property
    def precision(self) -> int:
        return self.valuation + len(self.coefficients)

    def __getitem__(self, k: int):
        if k >= self.precision:
            raise TruncationTooShort(f"z^{k} is beyond precision {self.precision}")
        if k < self.valuation:
            return self.domain.zero
        return self.coefficients[k - self.valuation]

    def order(self) -> Optional[int]:
        """Exponent of the first nonzero term; None if zero to precision."""
        for k, c in enumerate(self.coefficients):
            if c:
                return self.valuation + k
        return None

    def pole_order(self) -> int:
        order = self.order()
        return 0 if order is None or order >= 0 else -order

    def is_zero(self) -> bool:
        return self.order() is None

    def truncate(self, precision: int) -> "LaurentJet":
        if precision > self.precision:
            raise TruncationTooShort(f"Cannot extend precision {self.precision} to {precision}")
        valuation = min(self.valuation, precision)
        return LaurentJet.from_coefficients(
            [self[k] for k in range(valuation, precision)], precision, valuation, self.domain
        )

    def __add__(self, other: "LaurentJet") -> "LaurentJet":
        valuation = min(self.valuation, other.valuation)
        precision = min(self.precision, other.precision)
        valuation = min(valuation, precision)
        return LaurentJet.from_coefficients(
            [self[k] + other[k] for k in range(valuation, precision)],
            precision,
            valuation,
            self.domain,
        )

    def __neg__(self) -> "LaurentJet":
        return self.scale(-self.domain.one)

    def __sub__(self, other: "LaurentJet") -> "LaurentJet":
        return self + (-other)

    def __mul__(self, other: "LaurentJet") -> "LaurentJet":
        valuation = self.valuation + other.valuation
        precision = min(
            self.precision + other.valuation, other.precision + self.valuation
        )
        products = []
        for k in range(valuation, precision):
            total = self.domain.zero
            for i in range(self.valuation, k - other.valuation + 1):
                a = self[i]
                if a:
                    total += a * other[k - i]
            products.append(total)
        return LaurentJet.from_coefficients(products, precision, valuation, self.domain)

    def scale(self, c) -> "LaurentJet":
        c = self.domain.convert(c)
        return LaurentJet(self.valuation, tuple(c * a for a in self.coefficients), self.domain)

    def inverse(self) -> "LaurentJet":
        """1/u for u = z^v·(unit).

        Raises:
            DivisionByNonUnit: The jet vanishes to its precision.

        """
        v = self.order()
        if v is None:
            raise DivisionByNonUnit("Cannot invert a jet that is zero to its precision")
        unit = [self[k] for k in range(v, self.precision)]
        leading = unit[0]
        inverse = [self.domain.one / leading]
        for n in range(1, len(unit)):
            total = sum(
                (unit[j] * inverse[n - j] for j in range(1, n + 1)), self.domain.zero
            )
            inverse.append(-total / leading)
        return LaurentJet.from_coefficients(
            inverse, -v + len(unit), -v, self.domain
        )

    def equal_mod(self, other: "LaurentJet", precision: int) -> bool:
        """Agreement of all coefficients below z^precision."""
        if self.precision < precision or other.precision < precision:
            raise TruncationTooShort(
                f"Comparison at {precision} needs precisions"
                f" {self.precision} and {other.precision}"
            )
        start = min(self.valuation, other.valuation, precision)
        return all(self[k] == other[k] for k in range(start, precision))

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation,
            "precision": self.precision,
            "coefficients": vector_to_json(self.coefficients, self.domain),
        }


Matrix = Tuple[Tuple[LaurentJet, LaurentJet], Tuple[LaurentJet, LaurentJet]]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2)
    )


def _matrix_equal(a: Matrix, b: Matrix, precision: int) -> bool:
    return all(
        a[i][j].equal_mod(b[i][j], precision) for i in range(2) for j in range(2)
    )


def _matrix_json(a: Matrix) -> list:
    return [[entry.to_json() for entry in row] for row in a]


def _zero_like(jet: LaurentJet) -> LaurentJet:
    return LaurentJet.zero(jet.precision, jet.domain)


def _one_like(jet: LaurentJet) -> LaurentJet:
    return LaurentJet.constant(1, jet.precision, jet.domain)


@dataclass(frozen=True)
class LocalChartData:

    """Transition data at one point of Supp D′."""

    point: str
    dprime: int
    s_prime: LaurentJet
    q: Tuple[object, ...]
    x_12: LaurentJet
    y_1: LaurentJet
    y_2: LaurentJet

    @property
    def precision(self) -> int:
        """N = 2·D′(p) + 1."""
        return 2 * self.dprime + 1

    def gluing_holds(self) -> bool:
        lhs = (self.s_prime * self.x_12).scale(SQRT_MINUS_ONE)
        return lhs.equal_mod(self.y_2 - self.y_1, self.precision)

    def to_json(self) -> dict:
        return {
            "point": self.point,
            "dprime": self.dprime,
            "s_prime": self.s_prime.to_json(),
            "q": vector_to_json(self.q, QQ_I),
            "x_12": self.x_12.to_json(),
            "y_1": self.y_1.to_json(),
            "y_2": self.y_2.to_json(),
        }


def _working_jet(coefficients: Sequence, dprime: int) -> LaurentJet:
    """A polynomial carried to twice the checked precision."""
    return LaurentJet.from_coefficients(coefficients, 2 * (2 * dprime + 1))


def solve_gluing(
    q_local: Sequence, s_prime_local: Sequence, point="p", dprime=None
) -> LocalChartData:
    """Set y₁ = q, y₂ = 0 and solve for x₁₂.

    Raises:
        DivisionByNonUnit: s′ does not have order exactly D′(p).

    """
    s_prime = [QQ_I.convert(c) for c in s_prime_local]
    order = next((k for k, c in enumerate(s_prime) if c), None)
    if dprime is None:
        dprime = order
    if dprime is None or dprime < 1:
        raise ValidationError("s′ must vanish at p to a positive order", "$.s_prime")
    if order != dprime:
        raise DivisionByNonUnit(
            f"s′ must have order {dprime} at {point}; its coefficient of z^{dprime} is zero"
        )
    q = tuple(QQ_I.convert(c) for c in q_local)
    if len(q) > dprime:
        raise ValidationError(
            f"q has {len(q)} coefficients; at most D′({point}) = {dprime} allowed", "$.q"
        )
    q = q + (QQ_I.zero,) * (dprime - len(q))
    s_jet = _working_jet(s_prime, dprime)
    y_1 = _working_jet(q, dprime)
    y_2 = _zero_like(y_1)
    x_12 = -(y_1 * s_jet.inverse()).scale(QQ_I.one / SQRT_MINUS_ONE)
    data = LocalChartData(point, dprime, s_jet, q, x_12, y_1, y_2)
    if not data.gluing_holds():
        raise CompatibilityFailure(f"Gluing identity fails at {point}")
    return data


@dataclass(frozen=True)
class LocalPair:

    data: LocalChartData
    f_12: Matrix
    phi_1: Matrix
    phi_2: Matrix

    @property
    def precision(self) -> int:
        return self.data.precision

    def trace(self, a=1) -> LaurentJet:
        phi = self.phi_1 if a == 1 else self.phi_2
        return phi[0][0] + phi[1][1]

    def det(self, a=1) -> LaurentJet:
        phi = self.phi_1 if a == 1 else self.phi_2
        return phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0]

    def compatible(self) -> bool:
        return _matrix_equal(
            _matmul(self.f_12, self.phi_2), _matmul(self.phi_1, self.f_12), self.precision
        )

    def to_json(self) -> dict:
        return {
            **self.data.to_json(),
            "f_12": _matrix_json(self.f_12),
            "phi_1": _matrix_json(self.phi_1),
            "phi_2": _matrix_json(self.phi_2),
        }


@dataclass(frozen=True)
class ChartHiggsPair:

    """A Higgs pair described in formal charts at the points of D′.

    ``m`` is the degree of M and ``d`` the degree of Λ; both are
    bookkeeping only.

    """

    m: int
    d: int
    points: Tuple[LocalPair, ...] = field(default=())

    def __getitem__(self, point: str) -> LocalPair:
        for local in self.points:
            if local.data.point == point:
                return local
        raise KeyError(point)

    def to_json(self) -> dict:
        return {"m": self.m, "d": self.d, "points": [p.to_json() for p in self.points]}


def _local_pair(data: LocalChartData, x_12=None) -> LocalPair:
    x_12 = data.x_12 if x_12 is None else x_12
    one = _one_like(data.y_1)
    zero = _zero_like(data.y_1)
    diagonal = data.s_prime.scale(SQRT_MINUS_ONE)
    f_12 = ((one, x_12.scale(QQ(1, 2))), (zero, one))
    phi_1 = ((diagonal, data.y_1), (zero, -diagonal))
    phi_2 = ((diagonal, data.y_2), (zero, -diagonal))
    return LocalPair(data, f_12, phi_1, phi_2)


def build_pair(data: Sequence[LocalChartData], m: int, d: int) -> ChartHiggsPair:
    """Assemble f₁₂ and φ_a at each point and check f₁₂·φ₂ = φ₁·f₁₂.

    Raises:
        CompatibilityFailure: The gluing identity or compatibility fails.

    """
    if isinstance(data, LocalChartData):
        data = [data]
    points = []
    for local_data in data:
        if not local_data.gluing_holds():
            raise CompatibilityFailure(f"Gluing identity fails at {local_data.point}")
        local = _local_pair(local_data)
        if not local.compatible():
            raise CompatibilityFailure(f"f₁₂·φ₂ ≠ φ₁·f₁₂ at {local_data.point}")
        points.append(local)
    return ChartHiggsPair(m, d, tuple(points))


def semistability_check(m: int, degD: int, d: int) -> Stability:
    """Compare the degrees of the two φ-invariant line subbundles with d/2."""
    degrees = (2 * m, 2 * (d - degD - m))
    if any(twice > d for twice in degrees):
        return Stability.unstable
    if any(twice == d for twice in degrees):
        return Stability.strictly_semistable
    return Stability.stable


def _order(coefficients: Sequence) -> Optional[int]:
    return next((k for k, c in enumerate(coefficients) if c), None)


def eigen_divisor(s_prime: Sequence, q: Sequence) -> Tuple[int, Optional[int], int]:
    """(k₁, k₂, D(p)) with k₁ = ord s′, k₂ = ord q (None for q = 0)."""
    k1 = _order(s_prime)
    if k1 is None:
        raise ValidationError("s′ vanishes identically", "$.s_prime")
    k2 = _order(q)
    if k2 is None:
        return (k1, None, 0)
    D = k1 - k2 if k1 > k2 else 0
    if k2 != k1 - D:
        raise CompatibilityFailure(f"ord q = {k2} but D′(p) − D(p) = {k1 - D}")
    return (k1, k2, D)


def q_extract(pair: ChartHiggsPair) -> Dict[str, Tuple[object, ...]]:
    """Off-diagonal of φ₁ restricted to D′, per point."""
    return {
        local.data.point: tuple(local.phi_1[0][1][k] for k in range(local.data.dprime))
        for local in pair.points
    }


def chart2_q(pair: ChartHiggsPair) -> Dict[str, Tuple[object, ...]]:
    """Off-diagonal of f₁₂·φ₂·f₁₂⁻¹ restricted to D′, per point."""
    extracted = {}
    for local in pair.points:
        one, half_x = local.f_12[0]
        zero = local.f_12[1][0]
        f_inverse = ((one, -half_x), (zero, one))
        conjugated = _matmul(_matmul(local.f_12, local.phi_2), f_inverse)
        extracted[local.data.point] = tuple(
            conjugated[0][1][k] for k in range(local.data.dprime)
        )
    return extracted


def resplit(pair: ChartHiggsPair, c: Dict[str, Sequence]) -> ChartHiggsPair:
    """Change the splitting of chart 1 by h = [[1, c], [0, 1]].

    φ₁ becomes h⁻¹φ₁h with off-diagonal y₁ + 2√−1·s′·c and f₁₂ becomes
    h⁻¹f₁₂. The off-diagonal is unchanged modulo z^{D′(p)}.

    """
    points = []
    for local in pair.points:
        data = local.data
        shift = _working_jet(c.get(data.point, ()), data.dprime)
        y_1 = data.y_1 + (data.s_prime * shift).scale(2 * SQRT_MINUS_ONE)
        x_12 = data.x_12 - shift.scale(2)
        moved = LocalChartData(data.point, data.dprime, data.s_prime, data.q, x_12, y_1, data.y_2)
        resplit_local = _local_pair(moved)
        if not resplit_local.compatible():
            raise CompatibilityFailure(f"Resplit pair is not compatible at {data.point}")
        points.append(resplit_local)
    return ChartHiggsPair(pair.m, pair.d, tuple(points))


def scalar_action(pair: ChartHiggsPair, beta, sqrt_beta) -> ChartHiggsPair:
    """The pair built from β·q, checked isomorphic to ``pair``.

    With g = diag(1/√β, √β) on both charts: f₁₂(q)·g = g·f₁₂(βq) and
    g⁻¹·φ_a(q)·g = φ_a(βq).

    Raises:
        CompatibilityFailure: ``sqrt_beta`` is not a square root of β, or
            an identity fails.

    """
    beta = QQ_I.convert(beta)
    root = QQ_I.convert(sqrt_beta)
    if not beta:
        raise ValidationError("β must be nonzero", "$.beta")
    if root * root != beta:
        raise CompatibilityFailure(f"{scalar_to_json(root, QQ_I)} squared is not β")
    scaled = []
    for local in pair.points:
        data = local.data
        precision = data.y_1.precision
        scaled_data = solve_gluing(
            [beta * c for c in data.q], data.s_prime.coefficients, data.point, data.dprime
        )
        scaled_local = _local_pair(scaled_data)
        g = (
            (LaurentJet.constant(QQ_I.one / root, precision), LaurentJet.zero(precision)),
            (LaurentJet.zero(precision), LaurentJet.constant(root, precision)),
        )
        g_inverse = (
            (LaurentJet.constant(root, precision), LaurentJet.zero(precision)),
            (LaurentJet.zero(precision), LaurentJet.constant(QQ_I.one / root, precision)),
        )
        N = data.precision
        checks = [
            _matrix_equal(_matmul(local.f_12, g), _matmul(g, scaled_local.f_12), N),
            _matrix_equal(_matmul(_matmul(g_inverse, local.phi_1), g), scaled_local.phi_1, N),
            _matrix_equal(_matmul(_matmul(g_inverse, local.phi_2), g), scaled_local.phi_2, N),
        ]
        if not all(checks):
            raise CompatibilityFailure(f"Scalar action identities fail at {data.point}")
        scaled.append(scaled_local)
    return ChartHiggsPair(pair.m, pair.d, tuple(scaled))


# Fuzzing ---------------------------------------------------------------------


INVARIANTS = (
    "gluing",
    "compatibility",
    "trace",
    "determinant",
    "eigen_divisor",
    "roundtrip",
    "chart2",
    "resplit",
    "scalar_action",
)


@dataclass
class RoundtripSummary:

    seed: int
    trials: int
    max_order: int
    passes: Dict[str, int] = field(default_factory=lambda: {name: 0 for name in INVARIANTS})
    first_failure: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return all(count == self.trials for count in self.passes.values())

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "max_order": self.max_order,
            "passes": dict(self.passes),
            "passed": self.passed,
            "first_failure": self.first_failure,
        }


def _random_rational(rng: random.Random, nonzero=False):
    while True:
        value = QQ(rng.randint(-6, 6), rng.randint(1, 4))
        if value or not nonzero:
            return value


def _random_gaussian(rng: random.Random, nonzero=False):
    while True:
        value = QQ_I(_random_rational(rng), _random_rational(rng))
        if value or not nonzero:
            return value


def random_local_data(rng: random.Random, dprime: int, point="p") -> Tuple[LocalChartData, int]:
    """Random s′ of order D′(p) and q filling the slots of a random D(p)."""
    precision = 2 * dprime + 1
    s_prime = [QQ_I.zero] * dprime + [_random_gaussian(rng, nonzero=True)]
    s_prime += [_random_gaussian(rng) for _ in range(precision - dprime - 1)]
    D = rng.randint(0, dprime)
    q = [QQ_I.zero] * dprime
    if D:
        q[dprime - D] = _random_gaussian(rng, nonzero=True)
        for k in range(dprime - D + 1, dprime):
            q[k] = _random_gaussian(rng)
    return solve_gluing(q, s_prime, point, dprime), D


def _check_trial(rng: random.Random, max_order: int) -> Tuple[Dict[str, bool], dict]:
    dprime = rng.randint(1, max_order)
    data, D = random_local_data(rng, dprime)
    results = {name: False for name in INVARIANTS}
    results["gluing"] = data.gluing_holds()
    local = _local_pair(data)
    pair = ChartHiggsPair(m=0, d=0, points=(local,))
    N = data.precision
    square = data.s_prime * data.s_prime
    results["compatibility"] = local.compatible()
    results["trace"] = all(local.trace(a).equal_mod(_zero_like(square), N) for a in (1, 2))
    results["determinant"] = all(local.det(a).equal_mod(square, N) for a in (1, 2))
    s_coefficients = [data.s_prime[k] for k in range(N)]
    k1, k2, found = eigen_divisor(s_coefficients, data.q)
    results["eigen_divisor"] = (
        found == D
        and 0 <= found <= dprime
        and (found == 0) == (not any(data.q))
        and (k2 is None or k2 == dprime - found)
    )
    results["roundtrip"] = q_extract(pair)["p"] == data.q
    results["chart2"] = chart2_q(pair)["p"] == data.q
    shift = {"p": [_random_gaussian(rng) for _ in range(dprime + 1)]}
    results["resplit"] = q_extract(resplit(pair, shift))["p"] == data.q
    root = _random_gaussian(rng, nonzero=True)
    beta = root * root
    scaled = scalar_action(pair, beta, root)
    results["scalar_action"] = q_extract(scaled)["p"] == tuple(beta * c for c in data.q)
    return results, local.to_json()


def fuzz_roundtrip(
    rng: random.Random, trials: int, max_order: int = 5, seed=None
) -> RoundtripSummary:
    """Check every chart invariant on ``trials`` random local data."""
    if trials < 0:
        raise ValidationError(f"Trials must be non-negative; got {trials}", "$.trials")
    if max_order < 1:
        raise ValidationError(f"Max order must be positive; got {max_order}", "$.max_order")
    summary = RoundtripSummary(seed=seed, trials=trials, max_order=max_order)
    for trial in range(trials):
        try:
            results, case = _check_trial(rng, max_order)
        except (CompatibilityFailure, DivisionByNonUnit, TruncationTooShort) as exc:
            results = {name: False for name in INVARIANTS}
            case = {"error": exc.__class__.__name__, "message": str(exc)}
        for name, ok in results.items():
            if ok:
                summary.passes[name] += 1
        failed = [name for name, ok in results.items() if not ok]
        if failed and summary.first_failure is None:
            summary.first_failure = {"trial": trial, "failed": failed, "case": case}
            printer.debug(f"Trial {trial} failed: {', '.join(failed)}")
    return summary


def example_pairs() -> List[Tuple[str, ChartHiggsPair]]:
    """The worked charts: (D′=1, s′=z, q=1) and (D′=2, s′=z², q=z)."""
    return [
        ("dprime=1,s=z,q=1", build_pair(solve_gluing([1], [0, 1]), m=0, d=2)),
        ("dprime=2,s=z^2,q=z", build_pair(solve_gluing([0, 1], [0, 0, 1]), m=0, d=2)),
    ]
