"""Parabolic modules at a single A_{m−1} singularity, at the jet level.

A parabolic structure at a node is a subspace U of the space W of pairs
of (m/2)-jets, one per branch; at a cusp it is a subspace of the
(m−1)-jets of the single branch. U must be a module over the local ring,
acting by truncated jet multiplication, and have half the dimension of W.

The sheaf attached to U is the space of local sections whose jets lie in
U (:func:`tau_local`). Tensoring by O(k·p₁ − k·p₂) shifts branch 1 by
t^{−k} and branch 2 by t^k (:func:`twist_by_E`).

"""
from dataclasses import dataclass
from typing import Optional, Union

from sympy.polys.domains import QQ

from .exc import ShiftOutOfWindow, ValidationError
from .localring import (
    JetElement,
    LocalAlgebra,
    Subspace,
    is_free_rank_one,
    is_module,
    min_generators as _min_generators,
)
from .util import Kind, printer


__all__ = [
    "INFINITY",
    "NonfibrationResult",
    "ParabolicSubspace",
    "build_U0",
    "build_U_case2",
    "build_U_cusp_ideal",
    "build_U_cusp_standard",
    "build_U_diagonal",
    "build_U_lambda",
    "build_Uinf",
    "is_free",
    "min_generators",
    "prym_parity",
    "tau_local",
    "twist_by_E",
    "verify_case2",
    "verify_nonfibration",
]


#: The point λ = ∞ of the family U_λ.
INFINITY = "inf"

Slope = Union[int, object, str, None]


@dataclass(frozen=True)
class ParabolicSubspace:

    m: int
    space: Subspace
    label: str = "U"

    @property
    def kind(self) -> Kind:
        return Kind.for_multiplicity(self.m)

    @property
    def window(self) -> int:
        """Jet order of W: m/2 at a node, m − 1 at a cusp."""
        return self.m // 2 if self.kind is Kind.node else self.m - 1

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def expected_dim(self) -> int:
        return self.m // 2 if self.kind is Kind.node else (self.m - 1) // 2

    def algebra(self) -> LocalAlgebra:
        return LocalAlgebra(self.m, self.window, self.space.domain)

    def is_module(self) -> bool:
        return is_module(self.space, self.algebra())

    def check(self) -> bool:
        """Right dimension and closed under the local ring."""
        return self.dim == self.expected_dim and self.is_module()

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "m": self.m,
            "kind": str(self.kind),
            **self.space.to_json(),
        }


def _require_node(m: int):
    if m < 2 or m % 2:
        raise ValidationError(f"Expected an even m ≥ 2; got {m}", "$.m")


def _require_cusp(m: int):
    if m < 3 or m % 2 == 0:
        raise ValidationError(f"Expected an odd m ≥ 3; got {m}", "$.m")


def _pair(k: int, window: int, first=1, second=0, domain=QQ) -> JetElement:
    """(first·t^k, second·t^k) as a pair of jets."""
    a = JetElement.monomial(k, window, 0, 2, domain).scale(first)
    b = JetElement.monomial(k, window, 1, 2, domain).scale(second)
    return a + b


def _node_subspace(m, vectors, label, domain=QQ) -> ParabolicSubspace:
    space = Subspace.span(vectors, (2, m // 2), domain)
    return ParabolicSubspace(m, space, label)


def build_U_lambda(lam: Slope) -> ParabolicSubspace:
    """The line through (1, λ) in W for m = 2; (0, 1) when λ = ∞."""
    if lam is None or lam == INFINITY:
        return _node_subspace(2, [_pair(0, 1, 0, 1)], "U_inf")
    lam = QQ.convert(lam)
    return _node_subspace(2, [_pair(0, 1, 1, lam)], f"U_{lam}")


def build_U0(m: int) -> ParabolicSubspace:
    """Branch-2 components zero; W/U₀ is the fibre of branch 2."""
    _require_node(m)
    window = m // 2
    return _node_subspace(m, [_pair(k, window, 1, 0) for k in range(window)], "U_0")


def build_Uinf(m: int) -> ParabolicSubspace:
    _require_node(m)
    window = m // 2
    return _node_subspace(m, [_pair(k, window, 0, 1) for k in range(window)], "U_inf")


def build_U_diagonal(m: int, lam=1) -> ParabolicSubspace:
    """{(a, λ·a)}: the U of an invertible module (λ = 1 gives O)."""
    _require_node(m)
    lam = QQ.convert(lam)
    if not lam:
        raise ValidationError("λ must be nonzero; use build_U0 for λ = 0", "$.lambda")
    window = m // 2
    return _node_subspace(
        m, [_pair(k, window, 1, lam) for k in range(window)], f"U_diag({lam})"
    )


def build_U_case2(m: int) -> ParabolicSubspace:
    """a₀ = 0 on branch 1 and b₀ = … = b_{m/2−2} = 0 on branch 2."""
    if m < 4 or m % 4:
        raise ValidationError(f"Expected m ≡ 0 mod 4; got {m}", "$.m")
    window = m // 2
    vectors = [_pair(k, window, 1, 0) for k in range(1, window)]
    vectors.append(_pair(window - 1, window, 0, 1))
    return _node_subspace(m, vectors, "U_case2")


def build_U_cusp_standard(m: int) -> ParabolicSubspace:
    """Even powers below order m − 1: the U of the structure sheaf."""
    _require_cusp(m)
    window = m - 1
    vectors = [JetElement.monomial(k, window) for k in range(0, window, 2)]
    return ParabolicSubspace(m, Subspace.span(vectors, (1, window)), "U_std")


def build_U_cusp_ideal(m: int) -> ParabolicSubspace:
    """The tail t^{(m−1)/2}·W."""
    _require_cusp(m)
    window = m - 1
    vectors = [JetElement.monomial(k, window) for k in range(window // 2, window)]
    return ParabolicSubspace(m, Subspace.span(vectors, (1, window)), "U_ideal")


def twist_by_E(space: Subspace, k: int) -> Subspace:
    """Tensor by O(k·p₁ − k·p₂): branch 1 times t^{−k}, branch 2 times t^k.

    The result is known to order N − |k|.

    Raises:
        ShiftOutOfWindow: The window is too short, or the shifted branch
            is not divisible by t^{|k|} so the result would have a pole.

    """
    count, order = space.shape
    if k == 0:
        return space
    if count != 2:
        raise ValidationError("Twisting needs a pair of branches")
    shift = abs(k)
    window = order - shift
    if window < 1:
        raise ShiftOutOfWindow(f"Cannot shift by {k} inside a window of {order}")
    lowered = 0 if k > 0 else 1
    vectors = []
    for element in space.elements():
        branches = list(element.branches)
        if any(branches[lowered][:shift]):
            raise ShiftOutOfWindow(
                f"Branch {lowered + 1} is not divisible by t^{shift}"
            )
        raised = 1 - lowered
        branches[lowered] = branches[lowered][shift:]
        branches[raised] = ((space.domain.zero,) * shift + branches[raised])[:window]
        vectors.append(JetElement.from_lists(branches, window, space.domain))
    return Subspace.span(vectors, (2, window), space.domain)


def tau_local(k: int, U: ParabolicSubspace, order: int) -> Subspace:
    """Local sections of O(k·p₁ − k·p₂) whose jets lie in U, to ``order``."""
    if order < U.m:
        raise ValidationError(f"Order {order} is below m = {U.m}", "$.order")
    if k and U.kind is Kind.cusp:
        raise ValidationError("Only a node has two branches to twist")
    full_order = order + abs(k)
    count = U.kind.branch_count
    domain = U.space.domain
    vectors = [e.truncate(full_order) for e in U.space.elements()]
    for branch in range(count):
        vectors.extend(
            JetElement.monomial(j, full_order, branch, count, domain)
            for j in range(U.window, full_order)
        )
    untwisted = Subspace.span(vectors, (count, full_order), domain)
    return twist_by_E(untwisted, k)


def algebra_for(U: ParabolicSubspace, order: int) -> LocalAlgebra:
    return LocalAlgebra(U.m, order, U.space.domain)


def min_generators(U: ParabolicSubspace, order: Optional[int] = None) -> int:
    """Minimal number of generators of the module tau_local(0, U)."""
    order = order or U.m + 2
    return _min_generators(tau_local(0, U, order), algebra_for(U, order))


def is_free(U: ParabolicSubspace, order: Optional[int] = None) -> bool:
    order = order or U.m + 2
    return is_free_rank_one(tau_local(0, U, order), algebra_for(U, order))


def prym_parity(k: int) -> int:
    """Parity class of O(k·p₁ − k·p₂): odd twists change component."""
    return k % 2


@dataclass(frozen=True)
class NonfibrationResult:

    """Two parabolic modules with the same image but different twists."""

    m: int
    twist: int
    left: Subspace
    right: Subspace
    equal: bool
    components_differ: bool
    dimension_ok: bool = True
    module_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.equal and self.twist != 0 and self.dimension_ok and self.module_ok

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "twist": self.twist,
            "equal": self.equal,
            "components_differ": self.components_differ,
            "dimension_ok": self.dimension_ok,
            "module_ok": self.module_ok,
            "passed": self.passed,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }


def _compare(m, U_left, U_right, twist, padding) -> NonfibrationResult:
    order = 2 * m + padding
    left = tau_local(0, U_left, order)
    right = tau_local(twist, U_right, order)
    printer.debug(f"m={m}: τ(O, {U_left.label}) has dim {left.dim}, codim {left.codim}")
    return NonfibrationResult(
        m=m,
        twist=twist,
        left=left,
        right=right,
        equal=left == right,
        components_differ=prym_parity(twist) == 1,
        dimension_ok=U_left.dim == U_left.expected_dim and U_right.dim == U_right.expected_dim,
        module_ok=U_left.is_module() and U_right.is_module(),
    )


def verify_nonfibration(m: int, padding: int = 0) -> NonfibrationResult:
    """τ(O, U₀) = τ(O(E), U_∞) with E = (m/2)·p₁ − (m/2)·p₂."""
    _require_node(m)
    return _compare(m, build_U0(m), build_Uinf(m), m // 2, padding)


def verify_case2(m: int, padding: int = 0) -> NonfibrationResult:
    """τ(O, U₀) = τ(O(p₁ − p₂), U) with the Case 2 subspace U."""
    return _compare(m, build_U0(m), build_U_case2(m), 1, padding)


def describe(U: ParabolicSubspace, order: int = None) -> dict:
    """Summary used by the CLI: dimension, module check and generators."""
    order = order or U.m + 2
    tau = tau_local(0, U, order)
    return {
        **U.to_json(),
        "is_module": U.is_module(),
        "tau_codim": tau.codim,
        "min_generators": min_generators(U, order),
    }

