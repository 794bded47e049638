"""Exact computations on algebraic branching programs: evaluation, Nisan
minimization, monotone debordering, the parity family, conciseness, tangent
space dimensions and flows."""

from .abp import Abp, EdgeId, LinearLabel, evaluate, to_single_source_sink, validate
from .deborder import DeborderTrace, deborder, push_negative_eps_to_source, strip_one_eps
from .laurent import EPS, LaurentEps
from .nisan import minimize, width_profile
from .tensor import LayeredTensor

__all__ = [
    "Abp",
    "DeborderTrace",
    "EPS",
    "EdgeId",
    "LaurentEps",
    "LayeredTensor",
    "LinearLabel",
    "deborder",
    "evaluate",
    "minimize",
    "push_negative_eps_to_source",
    "strip_one_eps",
    "to_single_source_sink",
    "validate",
    "width_profile",
]

__version__ = "0.1.0"
