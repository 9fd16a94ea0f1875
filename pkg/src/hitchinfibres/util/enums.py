import enum


class Verbosity(enum.IntEnum):

    """Output levels selected via ``HF_LOG`` or ``--verbosity``."""

    quiet = 0
    normal = 1
    debug = 2

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, value):
        """Parse a level name or number.

        Raises:
            ValueError: ``value`` names no level.

        """
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(value)
        value = str(value).strip().lower()
        if value.lstrip("-").isdigit():
            return cls(int(value))
        aliases = {"info": "normal", "verbose": "debug", "silent": "quiet"}
        value = aliases.get(value, value)
        try:
            return cls[value]
        except KeyError:
            raise ValueError(f"Unknown verbosity: {value}") from None


class Kind(enum.Enum):

    """Type of an A_{m-1} singularity: two branches or one."""

    node = "Node"
    cusp = "Cusp"

    def __str__(self):
        return self.value

    @classmethod
    def for_multiplicity(cls, m):
        return cls.node if m % 2 == 0 else cls.cusp

    @property
    def branch_count(self):
        return 2 if self is Kind.node else 1


class Branch(enum.Enum):

    smooth = "Smooth"
    irreducible_singular = "IrreducibleSingular"
    reducible = "Reducible"

    def __str__(self):
        return self.value


class Injectivity(enum.Enum):

    iso = "Iso"
    two_to_one = "TwoToOne"

    def __str__(self):
        return self.value


class Stability(enum.Enum):

    stable = "Stable"
    strictly_semistable = "StrictlySemistable"
    unstable = "Unstable"

    def __str__(self):
        return self.value
