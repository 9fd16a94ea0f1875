def ceil_half(n: int) -> int:
    """Return ⌈n/2⌉ using integer arithmetic only.

    Examples::

        >>> [ceil_half(n) for n in (-3, -2, -1, 0, 1, 2, 3)]
        [-1, -1, 0, 0, 1, 1, 2]

    """
    return -((-n) // 2)


def floor_half(n: int) -> int:
    """Return ⌊n/2⌋.

    Examples::

        >>> [floor_half(n) for n in (-3, -1, 0, 1, 3)]
        [-2, -1, 0, 0, 1]

    """
    return n // 2


def half_leq(twice_lower, value, twice_upper) -> bool:
    """Check ``twice_lower/2 <= value <= twice_upper/2`` exactly.

    Bounds like d/2 are passed doubled so that odd d never needs
    a fractional comparison.

    Examples::

        >>> half_leq(1, 1, 2)
        True
        >>> half_leq(3, 1, 3)
        False

    """
    return twice_lower <= 2 * value <= twice_upper
