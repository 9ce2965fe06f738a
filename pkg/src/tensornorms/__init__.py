"""Tensor norms, contraction products, cubic/quintic powers and Gelfand limits."""

__version__ = "0.1.0"

from .core import ContractionPlan, contract_product, elementwise_norm, outer, random_tensor
from .errors import InvalidArgument, NumericalFailure, UnsupportedSize
from .nucnorm import nuclear_interval, nuclear_lower_witness, nuclear_upper_greedy, radius_bound_check
from .power import classify, cubic_power, gelfand_iterate, quintic_power
from .specnorm import hopm, spectral_bruteforce
from .tensorio import load_tensor, save_tensor

__all__ = [
    "ContractionPlan",
    "InvalidArgument",
    "NumericalFailure",
    "UnsupportedSize",
    "classify",
    "contract_product",
    "cubic_power",
    "elementwise_norm",
    "gelfand_iterate",
    "hopm",
    "load_tensor",
    "nuclear_interval",
    "nuclear_lower_witness",
    "nuclear_upper_greedy",
    "outer",
    "radius_bound_check",
    "quintic_power",
    "random_tensor",
    "save_tensor",
    "spectral_bruteforce",
]
