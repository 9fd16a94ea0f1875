"""Truncated jet algebras modelling the local rings of A_{m−1} singularities.

At a singular point with local equation x² = z^m, pulling back to the
normalization identifies the local ring with

* for m even (node): pairs (f₁, f₂) of power series with equal
  coefficients in degrees 0..(m−2)/2, via g ↦ (g(t^{m/2}, t), g(−t^{m/2}, t));
* for m odd (cusp): series f with vanishing odd coefficients in degrees
  below m − 1, via g ↦ g(t^m, t²).

Everything is truncated at a fixed order N and computed exactly over a
sympy domain (``QQ`` by default, ``QQ_I`` where √−1 is needed). Since
coefficient k of f is f^(k)(0)/k!, derivative conditions are checked
directly on coefficients.

"""
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .exc import TruncationTooShort, ValidationError
from .util import Kind
from .util.serialize import vector_to_json


__all__ = [
    "JetElement",
    "LocalAlgebra",
    "Polynomial",
    "Subspace",
    "is_module",
    "member",
    "min_generators",
    "module_span",
    "multiply",
    "phi",
    "phi_even",
    "phi_odd",
]


# Jets ------------------------------------------------------------------


@dataclass(frozen=True)
class JetElement:

    """One jet per branch, each truncated at the same order N."""

    branches: Tuple[Tuple[object, ...], ...]
    domain: object = QQ

    @classmethod
    def from_lists(cls, branches: Sequence[Sequence], order=None, domain=QQ):
        """Build a jet, padding with zeros or truncating to ``order``."""
        if order is None:
            order = max(len(b) for b in branches)
        converted = []
        for branch in branches:
            coefficients = [domain.convert(c) for c in list(branch)[:order]]
            coefficients.extend([domain.zero] * (order - len(coefficients)))
            converted.append(tuple(coefficients))
        return cls(tuple(converted), domain)

    @classmethod
    def monomial(cls, k, order, branch=0, branch_count=1, domain=QQ):
        """t^k on one branch, zero on the others."""
        branches = [[domain.zero] * order for _ in range(branch_count)]
        if k < order:
            branches[branch][k] = domain.one
        return cls.from_lists(branches, order, domain)

    @classmethod
    def from_vector(cls, vector: Sequence, shape: Tuple[int, int], domain=QQ):
        count, order = shape
        return cls.from_lists(
            [vector[i * order : (i + 1) * order] for i in range(count)], order, domain
        )

    @property
    def order(self) -> int:
        return len(self.branches[0])

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.branch_count, self.order)

    @property
    def vector(self) -> Tuple[object, ...]:
        return tuple(c for branch in self.branches for c in branch)

    def is_zero(self) -> bool:
        return not any(self.vector)

    def is_unit(self) -> bool:
        return all(branch[0] for branch in self.branches)

    def truncate(self, order: int) -> "JetElement":
        return JetElement.from_lists(self.branches, order, self.domain)

    def _check_compatible(self, other):
        if self.branch_count != other.branch_count:
            raise ValidationError(
                f"Branch counts differ: {self.branch_count} != {other.branch_count}"
            )

    def __add__(self, other: "JetElement") -> "JetElement":
        self._check_compatible(other)
        order = min(self.order, other.order)
        return JetElement.from_lists(
            [
                [a + b for a, b in zip(x[:order], y[:order])]
                for x, y in zip(self.branches, other.branches)
            ],
            order,
            self.domain,
        )

    def __neg__(self) -> "JetElement":
        return self.scale(-self.domain.one)

    def __sub__(self, other: "JetElement") -> "JetElement":
        return self + (-other)

    def __mul__(self, other: "JetElement") -> "JetElement":
        return multiply(self, other)

    def scale(self, c) -> "JetElement":
        c = self.domain.convert(c)
        return JetElement.from_lists(
            [[c * a for a in branch] for branch in self.branches],
            self.order,
            self.domain,
        )

    def shift(self, k: int) -> "JetElement":
        """Multiply every branch by t^k (k ≥ 0), keeping the order."""
        zero = self.domain.zero
        return JetElement.from_lists(
            [[zero] * k + list(branch) for branch in self.branches],
            self.order,
            self.domain,
        )

    def to_json(self) -> list:
        return [vector_to_json(branch, self.domain) for branch in self.branches]


def _convolve(a: Sequence, b: Sequence, order: int, zero) -> List:
    product = [zero] * order
    for i, x in enumerate(a[:order]):
        if not x:
            continue
        for j, y in enumerate(b[: order - i]):
            if y:
                product[i + j] += x * y
    return product


def multiply(a: JetElement, b: JetElement) -> JetElement:
    """Branchwise product, truncated at the smaller order."""
    a._check_compatible(b)
    order = min(a.order, b.order)
    zero = a.domain.zero
    return JetElement.from_lists(
        [_convolve(x, y, order, zero) for x, y in zip(a.branches, b.branches)],
        order,
        a.domain,
    )


# Polynomials in x, z ------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:

    """A polynomial Σ a_ij x^i z^j, stored as sorted ((i, j), a) terms."""

    terms: Tuple[Tuple[Tuple[int, int], object], ...]
    domain: object = QQ

    @classmethod
    def from_dict(cls, coefficients: Mapping[Tuple[int, int], object], domain=QQ):
        terms = {}
        for (i, j), a in coefficients.items():
            if i < 0 or j < 0:
                raise ValidationError(f"Negative exponent in x^{i} z^{j}")
            a = domain.convert(a)
            terms[(i, j)] = terms.get((i, j), domain.zero) + a
        return cls(tuple(sorted((k, a) for k, a in terms.items() if a)), domain)

    @classmethod
    def x(cls, domain=QQ):
        return cls.from_dict({(1, 0): 1}, domain)

    @classmethod
    def z(cls, domain=QQ):
        return cls.from_dict({(0, 1): 1}, domain)

    @classmethod
    def constant(cls, c, domain=QQ):
        return cls.from_dict({(0, 0): c}, domain)

    @classmethod
    def random(cls, rng: random.Random, degree=6, domain=QQ, density=0.5):
        """Random polynomial of total degree ≤ ``degree``."""
        coefficients = {}
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                if rng.random() < density:
                    coefficients[(i, j)] = QQ(rng.randint(-5, 5), rng.randint(1, 3))
        return cls.from_dict(coefficients, domain)

    def as_dict(self) -> Dict[Tuple[int, int], object]:
        return dict(self.terms)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        merged = self.as_dict()
        for k, a in other.terms:
            merged[k] = merged.get(k, self.domain.zero) + a
        return Polynomial.from_dict(merged, self.domain)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        product = {}
        for (i1, j1), a in self.terms:
            for (i2, j2), b in other.terms:
                key = (i1 + i2, j1 + j2)
                product[key] = product.get(key, self.domain.zero) + a * b
        return Polynomial.from_dict(product, self.domain)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({a})*x^{i}*z^{j}" for (i, j), a in self.terms)


def phi_even(g: Polynomial, m: int, order: int) -> JetElement:
    """(g(t^{m/2}, t), g(−t^{m/2}, t)) truncated at ``order``."""
    if m < 2 or m % 2:
        raise ValidationError(f"Expected an even m ≥ 2; got {m}", "$.m")
    domain = g.domain
    first = [domain.zero] * order
    second = [domain.zero] * order
    for (i, j), a in g.terms:
        e = (m // 2) * i + j
        if e < order:
            first[e] += a
            second[e] += -a if i % 2 else a
    return JetElement.from_lists([first, second], order, domain)


def phi_odd(g: Polynomial, m: int, order: int) -> JetElement:
    """g(t^m, t²) truncated at ``order``."""
    if m < 3 or m % 2 == 0:
        raise ValidationError(f"Expected an odd m ≥ 3; got {m}", "$.m")
    domain = g.domain
    coefficients = [domain.zero] * order
    for (i, j), a in g.terms:
        e = m * i + 2 * j
        if e < order:
            coefficients[e] += a
    return JetElement.from_lists([coefficients], order, domain)


def phi(g: Polynomial, m: int, order: int) -> JetElement:
    return phi_even(g, m, order) if m % 2 == 0 else phi_odd(g, m, order)


# Subspaces -----------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:

    """A subspace of jets of a fixed shape, kept as its RREF basis.

    ``shape`` is (branch count, order); vectors are the concatenated
    branch coefficients. The reduced basis is canonical, so equality of
    subspaces is equality of instances.

    """

    basis: Tuple[Tuple[object, ...], ...]
    shape: Tuple[int, int]
    domain: object = QQ
    pivots: Tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def span(cls, vectors: Iterable, shape: Tuple[int, int], domain=QQ) -> "Subspace":
        size = shape[0] * shape[1]
        rows = []
        for v in vectors:
            v = v.vector if isinstance(v, JetElement) else v
            if len(v) != size:
                raise ValidationError(f"Vector of length {len(v)} in a space of dim {size}")
            row = [domain.convert(c) for c in v]
            if any(row):
                rows.append(row)
        if not rows:
            return cls((), shape, domain, ())
        reduced, pivots = DomainMatrix(rows, (len(rows), size), domain).rref()
        basis = tuple(tuple(row) for row in reduced.to_list()[: len(pivots)])
        return cls(basis, shape, domain, tuple(pivots))

    @classmethod
    def full(cls, shape: Tuple[int, int], domain=QQ) -> "Subspace":
        size = shape[0] * shape[1]
        return cls.span(DomainMatrix.eye(size, domain).to_list(), shape, domain)

    @property
    def ambient_dim(self) -> int:
        return self.shape[0] * self.shape[1]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def elements(self) -> List[JetElement]:
        return [JetElement.from_vector(row, self.shape, self.domain) for row in self.basis]

    def reduce(self, vector: Sequence) -> List:
        """The remainder of ``vector`` after eliminating pivot columns."""
        vector = vector.vector if isinstance(vector, JetElement) else vector
        remainder = [self.domain.convert(c) for c in vector]
        for row, pivot in zip(self.basis, self.pivots):
            c = remainder[pivot]
            if c:
                remainder = [r - c * b for r, b in zip(remainder, row)]
        return remainder

    def contains(self, vector) -> bool:
        return not any(self.reduce(vector))

    __contains__ = contains

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.shape, self.domain)

    def intersection(self, other: "Subspace") -> "Subspace":
        if not self.basis or not other.basis:
            return Subspace((), self.shape, self.domain, ())
        # c ranges over combinations of self.basis lying in other.
        remainders = [other.reduce(row) for row in self.basis]
        transposed = DomainMatrix(
            [list(column) for column in zip(*remainders)],
            (self.ambient_dim, self.dim),
            self.domain,
        )
        kernel = transposed.nullspace().to_list()
        vectors = [
            [
                sum((c * row[k] for c, row in zip(coefficients, self.basis)), self.domain.zero)
                for k in range(self.ambient_dim)
            ]
            for coefficients in kernel
        ]
        return Subspace.span(vectors, self.shape, self.domain)

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape),
            "dim": self.dim,
            "basis": [vector_to_json(row, self.domain) for row in self.basis],
        }


# The local algebra -----------------------------------------------------------


@dataclass(frozen=True)
class LocalAlgebra:

    """The truncated local ring of an A_{m−1} singularity."""

    m: int
    order: int
    domain: object = QQ

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError(f"Expected m ≥ 2; got {self.m}", "$.m")
        if self.order < 1:
            raise ValidationError(f"Expected a positive order; got {self.order}", "$.order")

    @property
    def kind(self) -> Kind:
        return Kind.for_multiplicity(self.m)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.kind.branch_count, self.order)

    def embed(self, g: Polynomial) -> JetElement:
        return phi(g, self.m, self.order)

    def generators(self) -> Tuple[JetElement, JetElement]:
        """Images of z and x; with 1 they generate the algebra."""
        return (
            self.embed(Polynomial.z(self.domain)),
            self.embed(Polynomial.x(self.domain)),
        )

    def constraint_space(self) -> Subspace:
        """The algebra itself as a subspace of the jet space."""
        vectors = []
        if self.kind is Kind.node:
            tied = (self.m - 2) // 2
            for k in range(self.order):
                first = JetElement.monomial(k, self.order, 0, 2, self.domain)
                second = JetElement.monomial(k, self.order, 1, 2, self.domain)
                if k <= tied:
                    vectors.append(first + second)
                else:
                    vectors.extend((first, second))
        else:
            for k in range(self.order):
                if k % 2 == 0 or k > self.m - 2:
                    vectors.append(JetElement.monomial(k, self.order, 0, 1, self.domain))
        return Subspace.span(vectors, self.shape, self.domain)

    def member(self, e: JetElement) -> bool:
        return member(e, self)


def member(e: JetElement, alg: LocalAlgebra) -> bool:
    """Check the derivative constraints defining the algebra.

    Raises:
        TruncationTooShort: ``e`` is truncated below order m.

    """
    if e.branch_count != alg.kind.branch_count:
        raise ValidationError(
            f"A {alg.kind} jet needs {alg.kind.branch_count} branch(es);"
            f" got {e.branch_count}"
        )
    if e.order < alg.m:
        raise TruncationTooShort(f"Order {e.order} is below m = {alg.m}")
    if alg.kind is Kind.node:
        first, second = e.branches
        return all(first[k] == second[k] for k in range((alg.m - 2) // 2 + 1))
    (f,) = e.branches
    return all(not f[k] for k in range(1, alg.m - 1, 2))


def module_span(generators: Iterable[JetElement], alg: LocalAlgebra) -> Subspace:
    """The smallest alg-submodule containing ``generators``."""
    space = Subspace.span(generators, alg.shape, alg.domain)
    actions = alg.generators()
    while True:
        products = [multiply(g, v) for g in actions for v in space.elements()]
        vectors = space.basis + tuple(p.vector for p in products)
        grown = Subspace.span(vectors, alg.shape, alg.domain)
        if grown.dim == space.dim:
            return space
        space = grown


def is_module(space: Subspace, alg: LocalAlgebra) -> bool:
    if space.shape != alg.shape:
        raise ValidationError(f"Shape {space.shape} does not match algebra shape {alg.shape}")
    actions = alg.generators()
    return all(space.contains(multiply(g, v)) for g in actions for v in space.elements())


def maximal_ideal_image(space: Subspace, alg: LocalAlgebra) -> Subspace:
    """𝔪·S, spanned by the images of S under z and x."""
    actions = alg.generators()
    products = [multiply(g, v) for g in actions for v in space.elements()]
    return Subspace.span(products, alg.shape, alg.domain)


def min_generators(space: Subspace, alg: LocalAlgebra) -> int:
    """Minimal number of generators of a module S: dim S/𝔪S."""
    return space.dim - maximal_ideal_image(space, alg).dim


def is_free_rank_one(space: Subspace, alg: LocalAlgebra) -> bool:
    """Cyclic with the dimension of the algebra itself."""
    return (
        min_generators(space, alg) == 1
        and space.dim == alg.constraint_space().dim
    )
