from runcommands.util import is_mapping, merge_dicts

from .enums import Branch, Injectivity, Kind, Stability, Verbosity
from .misc import ceil_half, floor_half, half_leq
from .printer import printer, verbosity_from_environ


__all__ = [
    "Branch",
    "Injectivity",
    "Kind",
    "Stability",
    "Verbosity",
    "ceil_half",
    "floor_half",
    "half_leq",
    "is_mapping",
    "merge_dicts",
    "printer",
    "verbosity_from_environ",
]
