"""Ising and Fibonacci anyon models: generator matrices and their ZX templates.

Every template's scalar is chosen so that its evaluation equals the
corresponding matrix exactly, not just up to a global phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .phase import CONSTANTS, PI, ModelConstants, Phase
from .zxgraph import CircuitBuilder, VertexType, ZxDiagram, ccx, chain, compose_all, identity, tensor

__all__ = [
    "AnyonModel",
    "FibEmbedding",
    "FIB_EMBEDDING",
    "ising_model",
    "fibonacci_model",
    "get_model",
    "ising_b3",
    "fib_b3",
    "ising_b6",
    "ising_u_generators",
    "fib_b6_matrices",
    "fib_b6_templates",
    "fib_embed",
    "fib_restrict",
    "fib_leakage",
    "ising_sigma3_flipped",
    "FIB_SIGMA_DECOMPOSITION",
    "fib_u_generators",
    "fib_f_matrix",
    "fib_f_template",
    "FibUGenerators",
    "MODEL_NAMES",
]

MODEL_NAMES = ("ising", "fibonacci")

_Z, _X = VertexType.Z, VertexType.X

# Phases used by the templates.
MINUS_HALF_PI = Phase(Fraction(-1, 2))
HALF_PI = Phase(Fraction(1, 2))
TWO_PI_FIFTHS = Phase(Fraction(2, 5))
SEVEN_PI_FIFTHS = Phase(Fraction(7, 5))
THETA = Phase(Fraction(0), 1)


@dataclass(frozen=True)
class AnyonModel:
    name: str
    constants: ModelConstants
    b3_matrices: tuple[np.ndarray, ...]
    b3_templates: tuple[ZxDiagram, ...]
    b6_matrices: tuple[np.ndarray, ...]
    b6_templates: tuple[ZxDiagram, ...]

    def generator_matrices(self, strands: int) -> tuple[np.ndarray, ...]:
        if strands == 3:
            return self.b3_matrices
        if strands == 6:
            return self.b6_matrices
        raise ValueError(f"unsupported strand count {strands}; use 3 or 6")

    def generator_templates(self, strands: int) -> tuple[ZxDiagram, ...]:
        if strands == 3:
            return self.b3_templates
        if strands == 6:
            return self.b6_templates
        raise ValueError(f"unsupported strand count {strands}; use 3 or 6")

    def qubits(self, strands: int) -> int:
        return len(self.generator_templates(strands)[0].inputs)

    def template_matrix(self, strands: int, i: int) -> np.ndarray:
        """Matrix a template is expected to reproduce (embedded for Fibonacci B₆)."""
        m = self.generator_matrices(strands)[i - 1]
        if self.name == "fibonacci" and strands == 6:
            return fib_embed(m)
        return m


@dataclass(frozen=True)
class FibEmbedding:
    """Where the five Fibonacci B₆ basis states live inside three qubits."""

    labels: tuple[str, ...] = ("NC", "11", "1τ", "τ1", "ττ")
    index_map: tuple[int, ...] = (3, 4, 5, 6, 7)
    garbage: tuple[int, ...] = (0, 1, 2)


FIB_EMBEDDING = FibEmbedding()


def _with_scalar(d: ZxDiagram, s: complex) -> ZxDiagram:
    d.scalar *= s
    return d


# -- Ising -------------------------------------------------------------------


def ising_b3() -> tuple[np.ndarray, np.ndarray, tuple[ZxDiagram, ZxDiagram]]:
    """R₁, R₂ and their single-wire templates Z(−π/2), X(−π/2)."""
    lam = -cmath.exp(1j * math.pi / 8)
    r1 = lam * np.diag([1, -1j])
    r2 = -(cmath.exp(-1j * math.pi / 8) / math.sqrt(2)) * np.array([[1, 1j], [1j, 1]])
    t1 = _with_scalar(chain([(_Z, MINUS_HALF_PI)]), lam)
    t2 = _with_scalar(chain([(_X, MINUS_HALF_PI)]), lam)
    return r1, r2, (t1, t2)


def ising_u_generators() -> tuple[np.ndarray, np.ndarray]:
    u1 = cmath.exp(1j * math.pi / 4) * np.diag([1, -1j])
    u2 = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    return u1, u2


def _ising_sigma3(flipped: bool = False) -> ZxDiagram:
    """CNOT·(Z(−π/2) on one wire)·CNOT, i.e. the parity phase gadget."""
    c, t = (0, 1) if flipped else (1, 0)
    b = CircuitBuilder(2)
    b.cnot(c, t)
    b.z(t, MINUS_HALF_PI)
    b.cnot(c, t)
    return b.finish()


def ising_b6() -> tuple[tuple[np.ndarray, ...], tuple[ZxDiagram, ...]]:
    e = cmath.exp(1j * math.pi / 8)
    em = -cmath.exp(-1j * math.pi / 8) / math.sqrt(2)
    mats = (
        e * np.diag([-1, -1, 1j, 1j]),
        em * np.array([[1, 0, 1j, 0], [0, 1, 0, 1j], [1j, 0, 1, 0], [0, 1j, 0, 1]]),
        e * np.diag([-1, 1j, 1j, -1]),
        em * np.array([[1, 1j, 0, 0], [1j, 1, 0, 0], [0, 0, 1, 1j], [0, 0, 1j, 1]]),
        e * np.diag([-1, 1j, -1, 1j]),
    )
    mats = tuple(np.asarray(m, dtype=complex) for m in mats)
    wire = identity(1)
    z = chain([(_Z, MINUS_HALF_PI)])
    x = chain([(_X, MINUS_HALF_PI)])
    lam = -e
    temps = (
        tensor(z, wire),
        tensor(x, wire),
        _ising_sigma3(),
        tensor(wire, x),
        tensor(wire, z),
    )
    return mats, tuple(_with_scalar(t, lam) for t in temps)


def ising_sigma3_flipped() -> ZxDiagram:
    """σ₃ template with the CNOTs targeting wire 1 instead of wire 0."""
    return _with_scalar(_ising_sigma3(flipped=True), -cmath.exp(1j * math.pi / 8))


# -- Fibonacci ---------------------------------------------------------------


def fib_f_matrix(c: ModelConstants = CONSTANTS) -> np.ndarray:
    a, b = 1 / c.phi, c.phi**-0.5
    return np.array([[a, b], [b, -a]], dtype=complex)


def _fib_r_scalar() -> complex:
    return cmath.exp(1j * 7 * math.pi / 5)


def _fib_d(c: ModelConstants = CONSTANTS) -> np.ndarray:
    """diag(1, R) without the global prefactor."""
    return np.diag([1, _fib_r_scalar()]).astype(complex)


def fib_f_template(c: ModelConstants = CONSTANTS) -> ZxDiagram:
    d = chain([(_Z, HALF_PI), (_X, THETA), (_Z, HALF_PI)])
    return _with_scalar(d, cmath.exp(-0.5j * c.theta))


def fib_b3(
    c: ModelConstants = CONSTANTS,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple[ZxDiagram, ZxDiagram]]:
    """F, R₁, R₂ = F·R₁·F and the templates for R₁ and R₂."""
    f = fib_f_matrix(c)
    pre = cmath.exp(-4j * math.pi / 5)
    r1 = pre * _fib_d(c)
    r2 = f @ r1 @ f
    t1 = _with_scalar(chain([(_Z, TWO_PI_FIFTHS), (_Z, PI)]), pre)
    t2 = chain([(_Z, HALF_PI), (_X, THETA), (_Z, TWO_PI_FIFTHS), (_X, THETA), (_Z, HALF_PI)])
    t2 = _with_scalar(t2, pre * cmath.exp(-1j * c.theta))
    return f, r1, r2, (t1, t2)


def _perm_swap(n: int, i: int, j: int) -> np.ndarray:
    p = np.eye(n, dtype=complex)
    p[[i, j]] = p[[j, i]]
    return p


def _dsum(*blocks: np.ndarray | complex) -> np.ndarray:
    mats = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    k = 0
    for m in mats:
        s = m.shape[0]
        out[k : k + s, k : k + s] = m
        k += s
    return out


def fib_b6_matrices(c: ModelConstants = CONSTANTS) -> tuple[np.ndarray, ...]:
    """The five 5×5 generators on the basis (NC, 11, 1τ, τ1, ττ)."""
    f = fib_f_matrix(c)
    d = _fib_d(c)
    fdf = f @ d @ f
    r = _fib_r_scalar()
    pre = cmath.exp(-4j * math.pi / 5)
    i2 = np.eye(2)
    p14 = _perm_swap(5, 0, 3)
    return (
        pre * _dsum(r, np.kron(d, i2)),
        pre * _dsum(r, np.kron(fdf, i2)),
        pre * (p14 @ _dsum(r, d, fdf) @ p14),
        pre * _dsum(r, np.kron(i2, fdf)),
        pre * _dsum(r, np.kron(i2, d)),
    )


def fib_embed(m: np.ndarray, garbage_phase: complex = 1.0, e: FibEmbedding = FIB_EMBEDDING) -> np.ndarray:
    """Place a 5×5 matrix on the embedded states; garbage gets ``garbage_phase``·I."""
    out = np.zeros((8, 8), dtype=complex)
    idx = np.array(e.index_map)
    out[np.ix_(idx, idx)] = m
    for g in e.garbage:
        out[g, g] = garbage_phase
    return out


def fib_restrict(m: np.ndarray, e: FibEmbedding = FIB_EMBEDDING) -> np.ndarray:
    """The 5×5 block of an 8×8 matrix on the embedded states."""
    idx = np.array(e.index_map)
    return np.asarray(m)[np.ix_(idx, idx)]


def fib_leakage(m: np.ndarray, e: FibEmbedding = FIB_EMBEDDING) -> float:
    """Largest amplitude moving between embedded and garbage states."""
    idx = np.array(e.index_map)
    g = np.array(e.garbage)
    m = np.asarray(m)
    return float(max(np.max(np.abs(m[np.ix_(idx, g)])), np.max(np.abs(m[np.ix_(g, idx)]))))


@dataclass(frozen=True)
class FibUGenerators:
    matrices: dict[str, np.ndarray]
    templates: dict[str, ZxDiagram]


def _on_wire(n: int, q: int, sub: ZxDiagram) -> ZxDiagram:
    b = CircuitBuilder(n)
    b.append(sub, [q])
    return b.finish()


def _x_gate(n: int, q: int) -> ZxDiagram:
    b = CircuitBuilder(n)
    b.x(q, PI)
    return b.finish()


def _cc_r(c: ModelConstants = CONSTANTS) -> ZxDiagram:
    b = CircuitBuilder(3)
    b.cc_phase((0, 1, 2), SEVEN_PI_FIFTHS)
    return b.finish()


def fib_u_generators(c: ModelConstants = CONSTANTS) -> FibUGenerators:
    """U₁…U₇ and P₁₄ as 8×8 matrices plus 3-qubit ZX templates."""
    f = fib_f_matrix(c)
    d = _fib_d(c)
    fdf = f @ d @ f
    r = _fib_r_scalar()
    i2, i4, i6 = np.eye(2), np.eye(4), np.eye(6)
    mats = {
        "U1": _dsum(r * i4, i4),
        "U2": _dsum(i6, r * i2),
        "U3": np.kron(_dsum(i2, fdf), i2),
        "U4": _dsum(i4, d, i2),
        "U5": _dsum(i6, d),
        "U6": _dsum(i4, fdf, i2),
        "U7": _dsum(i6, fdf),
    }
    ccx_mat = {}
    for t in range(3):
        m = np.eye(8, dtype=complex)
        ctrl = [q for q in range(3) if q != t]
        for k in range(8):
            bits = [(k >> (2 - q)) & 1 for q in range(3)]
            if all(bits[q] for q in ctrl):
                m[k, k] = 0
                m[k ^ (1 << (2 - t)), k] = 1
        ccx_mat[t] = m
    mats["P14"] = ccx_mat[2] @ ccx_mat[0] @ ccx_mat[2]

    f_t = fib_f_template(c)
    u1 = CircuitBuilder(3)
    u1.x(0, PI)
    u1.z(0, SEVEN_PI_FIFTHS)
    u1.x(0, PI)
    u2 = CircuitBuilder(3)
    u2.cphase(0, 1, SEVEN_PI_FIFTHS)
    u3 = CircuitBuilder(3)
    u3.append(f_t, [1])
    u3.cphase(0, 1, SEVEN_PI_FIFTHS)
    u3.append(f_t, [1])
    u5 = _cc_r(c)
    x1 = _x_gate(3, 1)
    f2 = _on_wire(3, 2, f_t)
    u7 = compose_all([f2, u5, f2])
    temps = {
        "U1": u1.finish(),
        "U2": u2.finish(),
        "U3": u3.finish(),
        "U4": compose_all([x1, u5, x1]),
        "U5": u5,
        "U6": compose_all([x1, u7, x1]),
        "U7": u7,
        "P14": compose_all([ccx(3, 0, 1, 2), ccx(3, 1, 2, 0), ccx(3, 0, 1, 2)]),
    }
    return FibUGenerators(mats, temps)


# σᵢ as products of U-generators, written as matrix products (rightmost acts first).
FIB_SIGMA_DECOMPOSITION: tuple[tuple[str, ...], ...] = (
    ("U1", "U2"),
    ("U1", "U3"),
    ("P14", "U1", "U4", "U7", "P14"),
    ("U1", "U6", "U7"),
    ("U1", "U4", "U5"),
)


def fib_b6_templates(c: ModelConstants = CONSTANTS) -> tuple[ZxDiagram, ...]:
    """3-qubit templates for σ₁…σ₅; each evaluates to the embedded matrix exactly on its image."""
    u = fib_u_generators(c)
    pre = cmath.exp(-4j * math.pi / 5)
    out = []
    for factors in FIB_SIGMA_DECOMPOSITION:
        d = compose_all([u.templates[name] for name in reversed(factors)])
        out.append(_with_scalar(d, pre))
    return tuple(out)


@lru_cache(maxsize=None)
def ising_model() -> AnyonModel:
    r1, r2, t3 = ising_b3()
    m6, t6 = ising_b6()
    return AnyonModel("ising", CONSTANTS, (r1, r2), t3, m6, t6)


@lru_cache(maxsize=None)
def fibonacci_model() -> AnyonModel:
    _, r1, r2, t3 = fib_b3()
    return AnyonModel("fibonacci", CONSTANTS, (r1, r2), t3, fib_b6_matrices(), fib_b6_templates())


def get_model(name: str) -> AnyonModel:
    key = name.strip().lower()
    if key == "ising":
        return ising_model()
    if key in ("fibonacci", "fib"):
        return fibonacci_model()
    raise ValueError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")
