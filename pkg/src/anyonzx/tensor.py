"""Dense-matrix oracle: tensor contraction of ZX-diagrams and matrix utilities."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Sequence

import numpy as np
import opt_einsum as oe

from .phase import CONSTANTS, ModelConstants
from .zxgraph import DiagramError, VertexType, ZxDiagram, phase_radians

if TYPE_CHECKING:
    from .braid import BraidWord
    from .models import AnyonModel

__all__ = [
    "MAX_QUBITS",
    "ResourceError",
    "evaluate",
    "spider_tensor",
    "word_matrix",
    "equal_up_to_phase",
    "phase_discrepancy",
    "is_unitary",
    "H_MATRIX",
    "z_matrix",
    "x_matrix",
]

MAX_QUBITS = 10

H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class ResourceError(DiagramError):
    """Raised when a diagram has too many boundary wires to evaluate densely."""


def z_matrix(a: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * a)]).astype(complex)


def x_matrix(a: float) -> np.ndarray:
    return H_MATRIX @ z_matrix(a) @ H_MATRIX


def spider_tensor(kind: VertexType, arity: int, alpha: float) -> np.ndarray:
    """Rank-``arity`` tensor of a Z or X spider with phase ``alpha`` radians."""
    w = np.exp(1j * alpha)
    if arity == 0:
        return np.array(1 + w, dtype=complex)
    if kind is VertexType.Z:
        t = np.zeros((2,) * arity, dtype=complex)
        t[(0,) * arity] = 1
        t[(1,) * arity] += w
        return t
    if kind is VertexType.X:
        parity = np.indices((2,) * arity).sum(axis=0) % 2
        return (1 + w * (1 - 2 * parity)) / math.sqrt(2) ** arity
    raise DiagramError(f"{kind} is not a spider")


_DELTA = spider_tensor(VertexType.Z, 2, 0.0)


class _Net:
    def __init__(self) -> None:
        self.ops: list[np.ndarray] = []
        self.legs: list[list[int]] = []
        self.n_labels = 0

    def label(self) -> int:
        self.n_labels += 1
        return self.n_labels - 1

    def add(self, t: np.ndarray, legs: list[int]) -> None:
        self.ops.append(t)
        self.legs.append(legs)


def _add_spider(net: _Net, kind: VertexType, alpha: float, legs: list[int]) -> None:
    # Split big spiders into a chain of rank-3 pieces; same colours fuse exactly.
    if len(legs) <= 3:
        net.add(spider_tensor(kind, len(legs), alpha), legs)
        return
    rest = list(legs)
    link = net.label()
    net.add(spider_tensor(kind, 3, alpha), [rest.pop(0), rest.pop(0), link])
    while len(rest) > 2:
        nxt = net.label()
        net.add(spider_tensor(kind, 3, 0.0), [link, rest.pop(0), nxt])
        link = nxt
    net.add(spider_tensor(kind, 3, 0.0), [link, *rest])


def evaluate(d: ZxDiagram, c: ModelConstants = CONSTANTS) -> np.ndarray:
    """Contract ``d`` into a ``2**outs × 2**ins`` matrix, scalar included.

    Qubit 0 is the most significant bit on both sides.
    """
    n_in, n_out = len(d.inputs), len(d.outputs)
    if n_in > MAX_QUBITS or n_out > MAX_QUBITS:
        raise ResourceError(f"{n_in}->{n_out} wires exceeds the {MAX_QUBITS}-qubit limit")
    net = _Net()
    ends: dict[int, list[int]] = {v: [] for v in d.vertices}
    for e in sorted(d.edges):
        edge = d.edges[e]
        if edge.hadamard:
            la, lb = net.label(), net.label()
            net.add(H_MATRIX, [la, lb])
        else:
            la = lb = net.label()
        ends[edge.a].append(la)
        ends[edge.b].append(lb)
    boundary: dict[int, int] = {}
    for v in sorted(d.vertices):
        x = d.vertices[v]
        legs = ends[v]
        if x.kind.is_boundary:
            if len(legs) != 1:
                raise DiagramError(f"boundary {v} has degree {len(legs)}")
            out_label = net.label()
            net.add(_DELTA, [out_label, legs[0]])
            boundary[v] = out_label
        elif x.kind is VertexType.H:
            if len(legs) != 2:
                raise DiagramError(f"Hadamard box {v} has degree {len(legs)}")
            net.add(H_MATRIX, legs)
        else:
            _add_spider(net, x.kind, phase_radians(x.phase, c), legs)
    open_legs = [boundary[v] for v in d.outputs] + [boundary[v] for v in d.inputs]
    if not net.ops:
        return np.array([[d.scalar]], dtype=complex)
    if net.n_labels > 50_000:
        raise ResourceError("tensor network too large")
    terms = ",".join("".join(oe.get_symbol(i) for i in legs) for legs in net.legs)
    out = "".join(oe.get_symbol(i) for i in open_legs)
    result = oe.contract(f"{terms}->{out}", *net.ops, optimize="greedy")
    return d.scalar * np.asarray(result).reshape(2**n_out, 2**n_in)


def word_matrix(model: AnyonModel, strands: int, w: BraidWord) -> np.ndarray:
    """Product of generator matrices; the leftmost letter acts first."""
    gens = model.generator_matrices(strands)
    dim = gens[0].shape[0]
    m = np.eye(dim, dtype=complex)
    for i, sign in w.letters:
        if not 1 <= i <= len(gens):
            raise DiagramError(f"generator s{i} out of range for {strands} strands")
        g = gens[i - 1]
        m = (g if sign > 0 else g.conj().T) @ m
    return m


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> complex | None:
    """Return λ with ``a ≈ λ·b`` (max-norm ``tol``) and ``|λ| ≈ 1``, else None."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) == 0:
        return 1 + 0j if np.max(np.abs(a), initial=0.0) <= tol else None
    lam = complex(a[idx] / b[idx])
    if abs(abs(lam) - 1) > tol:
        return None
    if np.max(np.abs(a - lam * b)) > tol:
        return None
    return lam


def phase_discrepancy(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm distance between ``a`` and the best unit multiple of ``b``.

    The multiple is taken from the largest-modulus entry of ``b`` and
    normalized to modulus one.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) == 0 or abs(a[idx]) == 0:
        return float(np.max(np.abs(a - b)))
    lam = a[idx] / b[idx]
    lam /= abs(lam)
    return float(np.max(np.abs(a - lam * b)))


def is_unitary(m: np.ndarray, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=tol, rtol=0)


def kron_all(ms: Sequence[np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out
