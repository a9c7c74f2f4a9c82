"""Compile Ising and Fibonacci anyon braids to ZX-diagrams and simplify them.

The main entry points are :func:`parse_word`, :func:`word_to_diagram`,
:func:`simplify` and the dense oracle :func:`evaluate`.
"""

from .braid import BraidRangeError, BraidSyntaxError, BraidWord, free_reduce, parse_word, random_word, word_to_diagram
from .models import AnyonModel, fibonacci_model, get_model, ising_model
from .phase import CONSTANTS, ModelConstants, Phase, PhaseClass, classify
from .rules import (
    S_FIB,
    EulerTriple,
    Orientation,
    RewriteStep,
    Rewriter,
    RuleError,
    euler_p_rule,
    normalize_single_qubit,
    replay,
    simplify,
    trace_from_json,
    trace_to_json,
)
from .tensor import MAX_QUBITS, ResourceError, equal_up_to_phase, evaluate, word_matrix
from .zxgraph import CircuitBuilder, DiagramError, VertexType, ZxDiagram, from_json, is_isomorphic, to_json

__version__ = "0.1.0"

__all__ = [
    "AnyonModel",
    "BraidRangeError",
    "BraidSyntaxError",
    "BraidWord",
    "CONSTANTS",
    "CircuitBuilder",
    "DiagramError",
    "EulerTriple",
    "MAX_QUBITS",
    "ModelConstants",
    "Orientation",
    "Phase",
    "PhaseClass",
    "ResourceError",
    "RewriteStep",
    "Rewriter",
    "RuleError",
    "S_FIB",
    "VertexType",
    "ZxDiagram",
    "classify",
    "equal_up_to_phase",
    "euler_p_rule",
    "evaluate",
    "fibonacci_model",
    "free_reduce",
    "from_json",
    "get_model",
    "ising_model",
    "is_isomorphic",
    "normalize_single_qubit",
    "parse_word",
    "random_word",
    "replay",
    "simplify",
    "to_json",
    "trace_from_json",
    "trace_to_json",
    "word_matrix",
    "word_to_diagram",
]
