"""Divisors on an abstract curve.

A divisor is a finite formal sum of points with integer multiplicities.
Points are opaque string labels; only multiplicities matter for the
computations in this package.

Examples::

    >>> D = Divisor.parse("2p") + Divisor.parse("p+q")
    >>> D
    Divisor('3p+q')
    >>> D.degree
    4
    >>> Divisor.parse("4p+3q") + Divisor.parse("-4p")
    Divisor('3q')
    >>> even_odd_split(Divisor.parse("4p+3q"))
    (Divisor('4p'), Divisor('3q'))
    >>> d_prime_s(Divisor.parse("4p+3q"))
    Divisor('2p+q')

"""
import itertools
import re
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from sympy.utilities.iterables import partitions

from .exc import OddMultiplicity, ValidationError
from .util import is_mapping


__all__ = [
    "Divisor",
    "Point",
    "ZERO",
    "d_prime_s",
    "effective_below",
    "effective_of_degree",
    "even_odd_split",
    "from_partition",
    "half",
]


#: Points are identified by their labels.
Point = str

LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
TERM_RE = re.compile(r"([+-]?)(\d*)\*?([A-Za-z_][A-Za-z0-9_]*)")


class Divisor:

    """An immutable divisor in canonical form.

    Zero multiplicities are never stored and entries are kept sorted by
    label, so equality and hashing are structural.

    """

    __slots__ = ("_items",)

    def __init__(self, coefficients: Mapping[Point, int] = None, **kwargs):
        merged: Dict[Point, int] = {}
        for source in (coefficients or {}, kwargs):
            for label, mult in source.items():
                if not isinstance(label, str) or not LABEL_RE.fullmatch(label):
                    raise ValueError(f"Invalid point label: {label!r}")
                if isinstance(mult, bool) or not isinstance(mult, int):
                    raise TypeError(f"Multiplicity must be an int; got {mult!r}")
                merged[label] = merged.get(label, 0) + mult
        items = tuple(sorted((k, v) for k, v in merged.items() if v))
        object.__setattr__(self, "_items", items)

    def __setattr__(self, name, value):
        raise AttributeError("Divisor is immutable")

    # Construction ------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Divisor":
        """Parse the compact text form, e.g. ``"2p+3q-r"`` or ``"0"``.

        Raises:
            ValidationError: The text is not a divisor.

        """
        if not isinstance(text, str):
            raise ValidationError(f"Expected divisor text; got {text!r}")
        compact = "".join(text.split())
        if compact in ("", "0"):
            return cls()
        coefficients: Dict[Point, int] = {}
        position = 0
        for index, match in enumerate(TERM_RE.finditer(compact)):
            sign, digits, label = match.groups()
            if match.start() != position or (index and not sign):
                break
            mult = int(digits) if digits else 1
            if sign == "-":
                mult = -mult
            coefficients[label] = coefficients.get(label, 0) + mult
            position = match.end()
        if position != len(compact):
            raise ValidationError(f"Malformed divisor: {text!r}")
        return cls(coefficients)

    @classmethod
    def from_json(cls, obj, path="$") -> "Divisor":
        """Load a divisor from its JSON form or from compact text."""
        if isinstance(obj, str):
            try:
                return cls.parse(obj)
            except ValidationError as exc:
                raise exc.nested(path) from None
        if not is_mapping(obj) or not isinstance(obj.get("points"), list):
            raise ValidationError('Expected {"points": [...]}', path)
        coefficients: Dict[Point, int] = {}
        for i, entry in enumerate(obj["points"]):
            entry_path = f"{path}.points[{i}]"
            if not is_mapping(entry):
                raise ValidationError("Expected an object", entry_path)
            label = entry.get("label")
            mult = entry.get("mult")
            if not isinstance(label, str) or not LABEL_RE.fullmatch(label):
                raise ValidationError(f"Invalid label: {label!r}", f"{entry_path}.label")
            if isinstance(mult, bool) or not isinstance(mult, int):
                raise ValidationError(
                    f"Multiplicity must be an integer; got {mult!r}",
                    f"{entry_path}.mult",
                )
            if label in coefficients:
                raise ValidationError(f"Duplicate label: {label}", f"{entry_path}.label")
            coefficients[label] = mult
        return cls(coefficients)

    def to_json(self) -> dict:
        return {"points": [{"label": k, "mult": v} for k, v in self._items]}

    # Mapping-ish access -------------------------------------------------

    def __getitem__(self, label: Point) -> int:
        for k, v in self._items:
            if k == label:
                return v
        return 0

    def __iter__(self) -> Iterator[Point]:
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def items(self) -> Tuple[Tuple[Point, int], ...]:
        return self._items

    def as_dict(self) -> Dict[Point, int]:
        return dict(self._items)

    @property
    def support(self) -> frozenset:
        return frozenset(self)

    @property
    def degree(self) -> int:
        return sum(v for _, v in self._items)

    @property
    def is_effective(self) -> bool:
        return all(v > 0 for _, v in self._items)

    # Arithmetic -------------------------------------------------------

    def __add__(self, other: "Divisor") -> "Divisor":
        if not isinstance(other, Divisor):
            return NotImplemented
        return Divisor(_combine(self, other, lambda a, b: a + b))

    def __sub__(self, other: "Divisor") -> "Divisor":
        if not isinstance(other, Divisor):
            return NotImplemented
        return Divisor(_combine(self, other, lambda a, b: a - b))

    def __neg__(self) -> "Divisor":
        return Divisor({k: -v for k, v in self._items})

    def __rmul__(self, n: int) -> "Divisor":
        if not isinstance(n, int):
            return NotImplemented
        return Divisor({k: n * v for k, v in self._items})

    __mul__ = __rmul__

    def leq(self, other: "Divisor") -> bool:
        """Pointwise partial order."""
        return all(v >= 0 for _, v in (other - self)._items)

    def __le__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.leq(other)

    def __ge__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return other.leq(self)

    def __lt__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.leq(other) and self != other

    def __gt__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return other.leq(self) and self != other

    def min(self, other: "Divisor") -> "Divisor":
        return Divisor(_combine(self, other, min))

    def max(self, other: "Divisor") -> "Divisor":
        return Divisor(_combine(self, other, max))

    def half(self) -> "Divisor":
        return half(self)

    # Identity ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __str__(self):
        if not self._items:
            return "0"
        terms = []
        for k, v in self._items:
            sign = "-" if v < 0 else "+"
            size = "" if abs(v) == 1 else str(abs(v))
            terms.append(f"{sign}{size}{k}")
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text

    def __repr__(self):
        return f"Divisor({str(self)!r})"

    def sort_key(self):
        """Order by degree, then by the canonical entries."""
        return (self.degree, self._items)


ZERO = Divisor()


def _combine(a: Divisor, b: Divisor, op) -> Dict[Point, int]:
    labels = set(a) | set(b)
    return {label: op(a[label], b[label]) for label in labels}


def even_odd_split(D_s: Divisor) -> Tuple[Divisor, Divisor]:
    """Split into the points of even and of odd multiplicity.

    Examples::

        >>> even_odd_split(Divisor())
        (Divisor('0'), Divisor('0'))
        >>> even_odd_split(Divisor.parse("2p+2q"))
        (Divisor('2p+2q'), Divisor('0'))

    """
    even = {k: v for k, v in D_s.items() if v % 2 == 0}
    odd = {k: v for k, v in D_s.items() if v % 2}
    return Divisor(even), Divisor(odd)


def half(D: Divisor) -> Divisor:
    """Return D̃ with 2·D̃ = D.

    Raises:
        OddMultiplicity: Some multiplicity of ``D`` is odd.

    Examples::

        >>> half(Divisor.parse("4p+2q"))
        Divisor('2p+q')
        >>> half(Divisor.parse("3p"))
        Traceback (most recent call last):
          ...
        hitchinfibres.exc.OddMultiplicity: 3p is not twice a divisor

    """
    odd = [k for k, v in D.items() if v % 2]
    if odd:
        raise OddMultiplicity(f"{D} is not twice a divisor")
    return Divisor({k: v // 2 for k, v in D.items()})


def d_prime_s(D_s: Divisor) -> Divisor:
    """The divisor D′_s: m/2 at even points, (m−1)/2 at odd points.

    Examples::

        >>> d_prime_s(Divisor.parse("p+q"))
        Divisor('0')
        >>> d_prime_s(Divisor.parse("6p"))
        Divisor('3p')

    """
    return Divisor({k: v // 2 for k, v in D_s.items()})


def effective_below(D: Divisor) -> Tuple[Divisor, ...]:
    """All effective divisors D₁ with 0 ≤ D₁ ≤ D, sorted by degree.

    Examples::

        >>> [str(E) for E in effective_below(Divisor.parse("2p+q"))]
        ['0', 'p', 'q', 'p+q', '2p', '2p+q']

    """
    labels = [k for k, v in D.items() if v > 0]
    ranges = [range(D[k] + 1) for k in labels]
    below = (
        Divisor(dict(zip(labels, mults))) for mults in itertools.product(*ranges)
    )
    return tuple(sorted(below, key=Divisor.sort_key))


def from_partition(parts: Iterable[int], prefix="p") -> Divisor:
    """Place the parts on distinct points ``p1, p2, ...``."""
    return Divisor({f"{prefix}{i}": part for i, part in enumerate(parts, 1)})


def effective_of_degree(degree: int, max_points: int = None) -> Iterator[Divisor]:
    """Effective divisors of ``degree`` up to relabeling of points.

    One divisor is produced per integer partition of ``degree`` (with at
    most ``max_points`` parts when given), parts sorted largest first.

    Examples::

        >>> [str(D) for D in effective_of_degree(3)]
        ['3p1', '2p1+p2', 'p1+p2+p3']
        >>> [str(D) for D in effective_of_degree(3, max_points=2)]
        ['3p1', '2p1+p2']

    """
    if degree < 0:
        return
    if degree == 0:
        yield ZERO
        return
    shapes = []
    for partition in partitions(degree, m=max_points):
        # The partition dict is reused between iterations.
        parts = sorted(
            (part for part, count in partition.items() for _ in range(count)),
            reverse=True,
        )
        shapes.append(parts)
    shapes.sort(key=lambda parts: (len(parts), [-p for p in parts]))
    for parts in shapes:
        yield from_partition(parts)
