"""Rewrite rules on ZX-diagrams and the simplification strategy built from them.

Every rule mutates the diagram in place, keeps its evaluation exactly equal
(the diagram scalar absorbs any factor) and returns the ids of the vertices it
produced. Rules take only vertex or edge ids as arguments, so a recorded trace
can be replayed by name.
"""

from __future__ import annotations

import cmath
import json
import logging
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .phase import CONSTANTS, PI, ZERO, ModelConstants, Phase
from .tensor import x_matrix, z_matrix
from .zxgraph import (
    DiagramError,
    PhaseLike,
    VertexType,
    ZxDiagram,
    add_phases,
    neg_phase,
    phase_is_zero,
    phase_radians,
)

__all__ = [
    "RuleError",
    "NotAChainError",
    "RewriteStep",
    "Rewriter",
    "RULES",
    "Orientation",
    "EulerTriple",
    "ExactPRule",
    "FIB_RULE",
    "HADAMARD_RULE",
    "S_FIB",
    "euler_p_rule",
    "euler_zz",
    "chain_matrix",
    "fuse",
    "remove_identity",
    "remove_self_loops",
    "remove_scalar_spider",
    "pi_push",
    "split_pi",
    "unfuse_phase",
    "color_change",
    "hbox_to_edge",
    "edge_to_hbox",
    "hh_cancel",
    "hadamard_rule",
    "hopf",
    "copy_rule",
    "bialgebra",
    "bialgebra_square",
    "p_rule_numeric",
    "fib_p_rule",
    "hadamard_p_rule",
    "sandwich_to_gadget",
    "gadget_to_sandwich",
    "vertex_ranks",
    "simplify",
    "normalize_single_qubit",
    "replay",
    "trace_to_json",
    "trace_from_json",
    "flip_cnot_sandwich",
    "match_exact_p_rule",
]

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2)
NUMERIC_ZERO_TOL = 1e-12

# X(θ)Z(2π/5)X(θ) = S_FIB · Z(3π/5)X(θ)Z(3π/5); a unit complex number, not 1.
S_FIB = complex(0.9386573962356628, -0.34485111641415029)

_Z, _X, _H = VertexType.Z, VertexType.X, VertexType.H


class RuleError(DiagramError):
    """A rule was applied at a site that does not match its pattern."""


class NotAChainError(DiagramError):
    pass


# -- small helpers ------------------------------------------------------------


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise RuleError(msg)


def _spider(d: ZxDiagram, v: int) -> VertexType:
    _require(v in d.vertices, f"vertex {v} does not exist")
    k = d.kind(v)
    _require(k.is_spider, f"vertex {v} is not a spider")
    return k


def _has_loop(d: ZxDiagram, v: int) -> bool:
    return any(d.edges[e].is_loop for e in d.incident(v))


def _single_plain_edge(d: ZxDiagram, a: int, b: int) -> int:
    es = d.edges_between(a, b)
    _require(len(es) == 1 and not d.edges[es[0]].hadamard, f"{a} and {b} must share exactly one plain edge")
    return es[0]


def _is_pi(p: PhaseLike) -> bool:
    if isinstance(p, Phase):
        return p == PI
    return phase_is_zero(float(p) - math.pi, NUMERIC_ZERO_TOL)


def _require_joinable(d: ZxDiagram, a: int, b: int) -> None:
    _require(a != b or d.kind(a).is_spider, f"joining would put a self-loop on non-spider {a}")


def _pauli_bit(p: PhaseLike) -> int | None:
    if isinstance(p, Phase):
        if p.is_zero:
            return 0
        return 1 if p == PI else None
    if phase_is_zero(p, NUMERIC_ZERO_TOL):
        return 0
    return 1 if _is_pi(p) else None


def _other_edges(d: ZxDiagram, v: int, skip: int) -> list[int]:
    return [e for e in d.incident(v) if e != skip]


def _reconnect(d: ZxDiagram, old_end: int, new_end: int, e: int) -> int:
    """Move one end of edge ``e`` from ``old_end`` to ``new_end``."""
    edge = d.edges[e]
    other = edge.other(old_end)
    d.remove_edge(e)
    return d.add_edge(new_end, other, edge.hadamard)


# -- local rules --------------------------------------------------------------


def remove_self_loops(d: ZxDiagram, v: int) -> tuple[int, ...]:
    """Drop self-loops; a Hadamard loop adds π and a factor 1/√2."""
    _spider(d, v)
    loops = [e for e in d.incident(v) if d.edges[e].is_loop]
    _require(bool(loops), f"vertex {v} has no self-loop")
    for e in loops:
        if d.edges[e].hadamard:
            d.set_phase(v, add_phases(d.phase(v), PI))
            d.scalar /= SQRT2
        d.remove_edge(e)
    return (v,)


def fuse(d: ZxDiagram, a: int, b: int) -> tuple[int, ...]:
    """Merge spider ``b`` into ``a`` along a plain edge."""
    ka, kb = _spider(d, a), _spider(d, b)
    _require(a != b, "cannot fuse a spider with itself")
    _require(ka == kb, f"spiders {a} and {b} differ in colour")
    plain = [e for e in d.edges_between(a, b) if not d.edges[e].hadamard]
    _require(bool(plain), f"no plain edge between {a} and {b}")
    d.remove_edge(plain[0])
    for e in d.incident(b):
        edge = d.edges[e]
        if edge.is_loop:
            d.remove_edge(e)
            d.add_edge(a, a, edge.hadamard)
        else:
            _reconnect(d, b, a, e)
    d.set_phase(a, add_phases(d.phase(a), d.phase(b)))
    del d._inc[b]
    del d.vertices[b]
    if _has_loop(d, a):
        remove_self_loops(d, a)
    return (a,)


def remove_identity(d: ZxDiagram, v: int) -> tuple[int, ...]:
    """Remove a zero-phase spider with two legs, joining its neighbours."""
    _spider(d, v)
    _require(phase_is_zero(d.phase(v), NUMERIC_ZERO_TOL), f"spider {v} has nonzero phase")
    es = d.incident(v)
    _require(len(es) == 2 and not _has_loop(d, v), f"spider {v} does not have exactly two legs")
    e1, e2 = d.edges[es[0]], d.edges[es[1]]
    a, b = e1.other(v), e2.other(v)
    _require_joinable(d, a, b)
    d.remove_vertex(v)
    d.add_edge(a, b, e1.hadamard != e2.hadamard)
    if a == b:
        remove_self_loops(d, a)
    return ()


def remove_scalar_spider(d: ZxDiagram, v: int) -> tuple[int, ...]:
    """A spider with no legs is the number 1 + e^{iα}."""
    _spider(d, v)
    _require(not d.incident(v), f"spider {v} has legs")
    d.scalar *= 1 + cmath.exp(1j * phase_radians(d.phase(v)))
    d.remove_vertex(v)
    return ()


def split_pi(d: ZxDiagram, v: int, w: int) -> tuple[int, ...]:
    """Take π off spider ``v`` into a new spider placed on the plain edge to ``w``."""
    k = _spider(d, v)
    e = _single_plain_edge(d, v, w)
    p = d.add_vertex(k, PI)
    d.set_phase(v, add_phases(d.phase(v), PI if isinstance(d.phase(v), Phase) else -math.pi))
    d.remove_edge(e)
    d.add_edge(v, p)
    d.add_edge(p, w)
    return (p,)


def unfuse_phase(d: ZxDiagram, v: int, w: int) -> tuple[int, ...]:
    """Move the whole phase of ``v`` onto a new two-legged spider on the edge to ``w``."""
    k = _spider(d, v)
    e = _single_plain_edge(d, v, w)
    p = d.add_vertex(k, d.phase(v))
    d.set_phase(v, ZERO if isinstance(d.phase(v), Phase) else 0.0)
    d.remove_edge(e)
    d.add_edge(v, p)
    d.add_edge(p, w)
    return (p,)


def pi_push(d: ZxDiagram, pauli: int, through: int) -> tuple[int, ...]:
    """Push a two-legged π spider through an opposite-coloured spider.

    The spider ``through`` has its phase negated, a π spider appears on each
    of its other legs and the scalar picks up e^{iα}, α the old phase.
    """
    kp, kt = _spider(d, pauli), _spider(d, through)
    _require(kp != kt, "π-push needs opposite colours")
    _require(_is_pi(d.phase(pauli)), f"spider {pauli} is not a π spider")
    _require(d.degree(pauli) == 2 and not _has_loop(d, pauli), f"π spider {pauli} must have two legs")
    _require(not _has_loop(d, through), f"spider {through} has a self-loop")
    link = _single_plain_edge(d, pauli, through)
    (outer,) = _other_edges(d, pauli, link)
    alpha = d.phase(through)
    d.scalar *= cmath.exp(1j * phase_radians(alpha))
    d.set_phase(through, neg_phase(alpha))
    produced = []
    for e in _other_edges(d, through, link):
        edge = d.edges[e]
        nb = edge.other(through)
        d.remove_edge(e)
        p = d.add_vertex(kp, d.phase(pauli))
        d.add_edge(through, p)
        d.add_edge(p, nb, edge.hadamard)
        produced.append(p)
    oe = d.edges[outer]
    u = oe.other(pauli)
    d.remove_vertex(pauli)
    d.add_edge(u, through, oe.hadamard)
    return (through, *produced)


def color_change(d: ZxDiagram, v: int) -> tuple[int, ...]:
    """Swap the colour of ``v`` and toggle all of its non-loop edges."""
    k = _spider(d, v)
    d.set_kind(v, k.opposite())
    for e in d.incident(v):
        edge = d.edges[e]
        if not edge.is_loop:
            d.set_edge_type(e, not edge.hadamard)
    return (v,)


def hbox_to_edge(d: ZxDiagram, h: int) -> tuple[int, ...]:
    """Replace a Hadamard box by a Hadamard edge."""
    _require(h in d.vertices and d.kind(h) is _H, f"vertex {h} is not a Hadamard box")
    es = d.incident(h)
    _require(len(es) == 2, f"Hadamard box {h} must have two legs")
    e1, e2 = d.edges[es[0]], d.edges[es[1]]
    a, b = e1.other(h), e2.other(h)
    _require_joinable(d, a, b)
    d.remove_vertex(h)
    d.add_edge(a, b, not (e1.hadamard != e2.hadamard))
    return ()


def edge_to_hbox(d: ZxDiagram, a: int, b: int) -> tuple[int, ...]:
    """Turn one Hadamard edge between ``a`` and ``b`` into an explicit box."""
    es = [e for e in d.edges_between(a, b) if d.edges[e].hadamard]
    _require(bool(es), f"no Hadamard edge between {a} and {b}")
    d.remove_edge(es[0])
    h = d.add_vertex(_H)
    d.add_edge(a, h)
    d.add_edge(h, b)
    return (h,)


def hh_cancel(d: ZxDiagram, h1: int, h2: int) -> tuple[int, ...]:
    """Two adjacent Hadamard boxes cancel to a wire."""
    for h in (h1, h2):
        _require(h in d.vertices and d.kind(h) is _H, f"vertex {h} is not a Hadamard box")
    link = _single_plain_edge(d, h1, h2)
    (o1,) = _other_edges(d, h1, link)
    (o2,) = _other_edges(d, h2, link)
    e1, e2 = d.edges[o1], d.edges[o2]
    a, b = e1.other(h1), e2.other(h2)
    _require_joinable(d, a, b)
    d.remove_vertex(h1)
    d.remove_vertex(h2)
    d.add_edge(a, b, e1.hadamard != e2.hadamard)
    return ()


def hadamard_rule(d: ZxDiagram, a: int, b: int) -> tuple[int, ...]:
    """Replace a Hadamard edge by Z(π/2)·X(π/2)·Z(π/2); H = e^{-iπ/4}·ZXZ(π/2)."""
    es = [e for e in d.edges_between(a, b) if d.edges[e].hadamard]
    _require(a != b and bool(es), f"no Hadamard edge between {a} and {b}")
    d.remove_edge(es[0])
    half = Phase(Fraction(1, 2))
    z1 = d.add_vertex(_Z, half)
    x = d.add_vertex(_X, half)
    z2 = d.add_vertex(_Z, half)
    d.add_edge(a, z1)
    d.add_edge(z1, x)
    d.add_edge(x, z2)
    d.add_edge(z2, b)
    d.scalar *= cmath.exp(-1j * math.pi / 4)
    return (z1, x, z2)


def hopf(d: ZxDiagram, a: int, b: int) -> tuple[int, ...]:
    """Cancel a pair of parallel edges: plain between opposite colours, Hadamard between equal ones."""
    ka, kb = _spider(d, a), _spider(d, b)
    _require(a != b, "Hopf rule needs two spiders")
    want_h = ka == kb
    es = [e for e in d.edges_between(a, b) if d.edges[e].hadamard == want_h]
    _require(len(es) >= 2, f"fewer than two cancelling edges between {a} and {b}")
    d.remove_edge(es[0])
    d.remove_edge(es[1])
    d.scalar /= 2
    return (a, b)


def copy_rule(d: ZxDiagram, pauli: int, onto: int) -> tuple[int, ...]:
    """Copy a one-legged Pauli spider through an opposite-coloured spider."""
    kp, ko = _spider(d, pauli), _spider(d, onto)
    _require(kp != ko, "copy needs opposite colours")
    bit = _pauli_bit(d.phase(pauli))
    _require(bit is not None, f"spider {pauli} is not Pauli")
    _require(d.degree(pauli) == 1, f"spider {pauli} must have one leg")
    _require(not _has_loop(d, onto), f"spider {onto} has a self-loop")
    link = _single_plain_edge(d, pauli, onto)
    others = _other_edges(d, onto, link)
    n = len(others)
    alpha = phase_radians(d.phase(onto))
    d.scalar *= SQRT2 ** (1 - n) * cmath.exp(1j * bit * alpha)
    phase = d.phase(pauli)
    produced = []
    for e in others:
        edge = d.edges[e]
        nb = edge.other(onto)
        p = d.add_vertex(kp, phase)
        d.add_edge(p, nb, edge.hadamard)
        produced.append(p)
    d.remove_vertex(onto)
    d.remove_vertex(pauli)
    return tuple(produced)


def bialgebra(d: ZxDiagram, z: int, x: int) -> tuple[int, ...]:
    """Z(0)–X(0) pair with m and n other legs becomes a complete bipartite graph.

    The m legs of the Z spider get X spiders and the n legs of the X spider get
    Z spiders; the scalar changes by √2^{(m−1)(n−1)}.
    """
    kz, kx = _spider(d, z), _spider(d, x)
    _require(kz is _Z and kx is _X, "bialgebra needs a Z and an X spider")
    for v in (z, x):
        _require(phase_is_zero(d.phase(v)), f"spider {v} must have phase zero")
        _require(not _has_loop(d, v), f"spider {v} has a self-loop")
    link = _single_plain_edge(d, z, x)
    z_legs = _other_edges(d, z, link)
    x_legs = _other_edges(d, x, link)
    m, n = len(z_legs), len(x_legs)
    _require(m >= 1 and n >= 1, "both spiders need at least one other leg")
    z_nbs = [(d.edges[e].other(z), d.edges[e].hadamard) for e in z_legs]
    x_nbs = [(d.edges[e].other(x), d.edges[e].hadamard) for e in x_legs]
    _require(all(nb != x for nb, _ in z_nbs), "spiders share more than one edge")
    d.remove_vertex(z)
    d.remove_vertex(x)
    new_x = [d.add_vertex(_X) for _ in range(m)]
    new_z = [d.add_vertex(_Z) for _ in range(n)]
    for v, (nb, h) in zip(new_x, z_nbs):
        d.add_edge(v, nb, h)
    for v, (nb, h) in zip(new_z, x_nbs):
        d.add_edge(v, nb, h)
    for a in new_x:
        for b in new_z:
            d.add_edge(a, b)
    d.scalar *= SQRT2 ** ((m - 1) * (n - 1))
    return (*new_x, *new_z)


def bialgebra_square(d: ZxDiagram, x1: int, x2: int, z1: int, z2: int) -> tuple[int, ...]:
    """Inverse bialgebra: a 2×2 square of X(0) and Z(0) spiders (one outer leg each) becomes a pair."""
    for v in (x1, x2):
        _require(_spider(d, v) is _X, f"{v} must be an X spider")
    for v in (z1, z2):
        _require(_spider(d, v) is _Z, f"{v} must be a Z spider")
    for v in (x1, x2, z1, z2):
        _require(phase_is_zero(d.phase(v)) and d.degree(v) == 3 and not _has_loop(d, v), f"bad square vertex {v}")
    for a in (x1, x2):
        for b in (z1, z2):
            _single_plain_edge(d, a, b)
    outer = {}
    for v, pair in ((x1, (z1, z2)), (x2, (z1, z2)), (z1, (x1, x2)), (z2, (x1, x2))):
        (e,) = [e for e in d.incident(v) if d.edges[e].other(v) not in pair]
        outer[v] = (d.edges[e].other(v), d.edges[e].hadamard)
    _require(
        all(nb not in (x1, x2, z1, z2) for nb, _ in outer.values()), "square legs must leave the square"
    )
    for v in (x1, x2, z1, z2):
        d.remove_vertex(v)
    z = d.add_vertex(_Z)
    x = d.add_vertex(_X)
    d.add_edge(z, x)
    for v, owner in ((x1, z), (x2, z), (z1, x), (z2, x)):
        nb, h = outer[v]
        d.add_edge(owner, nb, h)
    d.scalar /= SQRT2
    return (z, x)


# -- Euler / P-rules ----------------------------------------------------------


class Orientation(Enum):
    ZXZ = "ZXZ"
    XZX = "XZX"

    def opposite(self) -> Orientation:
        return Orientation.XZX if self is Orientation.ZXZ else Orientation.ZXZ

    @property
    def kinds(self) -> tuple[VertexType, VertexType, VertexType]:
        return (_Z, _X, _Z) if self is Orientation.ZXZ else (_X, _Z, _X)


def chain_matrix(
    orientation: Orientation, first: PhaseLike, middle: PhaseLike, last: PhaseLike, c: ModelConstants = CONSTANTS
) -> np.ndarray:
    """2×2 matrix of a three-spider chain; ``first`` acts first."""
    mats = []
    for kind, p in zip(orientation.kinds, (first, middle, last)):
        a = phase_radians(p, c)
        mats.append(z_matrix(a) if kind is _Z else x_matrix(a))
    return mats[2] @ mats[1] @ mats[0]


@dataclass(frozen=True)
class EulerTriple:
    """The 2×2 operator ``scalar · chain(orientation, first, middle, last)``."""

    first: PhaseLike
    middle: PhaseLike
    last: PhaseLike
    orientation: Orientation
    scalar: complex = 1 + 0j

    def matrix(self, c: ModelConstants = CONSTANTS) -> np.ndarray:
        return self.scalar * chain_matrix(self.orientation, self.first, self.middle, self.last, c)

    def angles(self, c: ModelConstants = CONSTANTS) -> tuple[float, float, float]:
        return tuple(phase_radians(p, c) for p in (self.first, self.middle, self.last))  # type: ignore[return-value]


def euler_zz(alpha: float, beta: float, gamma: float) -> tuple[complex, complex]:
    """The pair (z, z′) whose arguments give the converted angles."""
    s, p = (alpha + gamma) / 2, (alpha - gamma) / 2
    cb, sb = math.cos(beta / 2), math.sin(beta / 2)
    z = complex(cb * math.cos(s), sb * math.cos(p))
    zp = complex(cb * math.sin(s), -sb * math.sin(p))
    return z, zp


def _wrap(a: float) -> float:
    return a % (2 * math.pi)


def euler_p_rule(t: EulerTriple, c: ModelConstants = CONSTANTS) -> EulerTriple:
    """Convert a ZXZ chain to XZX or back, keeping the operator unchanged.

    With z, z′ from :func:`euler_zz` the new angles are arg z + arg z′,
    2·atan2(|z′|, |z|) and arg z − arg z′. The returned scalar carries the
    global factor, found by dividing the two 2×2 matrices.
    """
    alpha, beta, gamma = t.angles(c)
    z, zp = euler_zz(alpha, beta, gamma)
    az = cmath.phase(z) if z != 0 else 0.0
    azp = cmath.phase(zp) if zp != 0 else 0.0
    a2 = _wrap(az + azp)
    b2 = _wrap(2 * math.atan2(abs(zp), abs(z)))
    g2 = _wrap(az - azp)
    new_o = t.orientation.opposite()
    lhs = chain_matrix(t.orientation, alpha, beta, gamma)
    rhs = chain_matrix(new_o, a2, b2, g2)
    idx = np.unravel_index(np.argmax(np.abs(rhs)), rhs.shape)
    s = complex(lhs[idx] / rhs[idx])
    return EulerTriple(a2, b2, g2, new_o, t.scalar * s)


@dataclass(frozen=True)
class ExactPRule:
    """``O(a0)·M(b0)·O(a0) = scalar · M(c0)·O(d0)·M(c0)`` for O, M opposite colours."""

    name: str
    outer: Phase
    middle: Phase
    new_outer: Phase
    new_middle: Phase
    scalar: complex


FIB_RULE = ExactPRule(
    "fib_p_rule", Phase(Fraction(0), 1), Phase(Fraction(2, 5)), Phase(Fraction(3, 5)), Phase(Fraction(0), 1), S_FIB
)
_HALF = Phase(Fraction(1, 2))
HADAMARD_RULE = ExactPRule("hadamard_p_rule", _HALF, _HALF, _HALF, _HALF, 1 + 0j)


@dataclass(frozen=True)
class _Plan:
    first: Phase
    middle: Phase
    last: Phase
    scalar: complex


def _outer_forms(p: Phase, a0: Phase) -> list[tuple[int, int]]:
    """All (ε, k) with p = ε·a0 + k·π, k ∈ {0, 1}; residual-free first."""
    out = []
    for eps in (1, -1):
        r = p - a0 * eps
        if r.theta == 0 and r.pi in (0, 1):
            out.append((int(r.pi), eps))
    return [(eps, k) for k, eps in sorted(out)]


def match_exact_p_rule(
    rule: ExactPRule, a: Phase, b: Phase, c: Phase, consts: ModelConstants = CONSTANTS
) -> _Plan | None:
    """Match ``O(a)·M(b)·O(c)`` against ``rule`` modulo negation and Pauli shifts."""
    if not all(isinstance(p, Phase) for p in (a, b, c)):
        return None
    a0 = rule.outer.to_radians(consts)
    for eps1, p1 in _outer_forms(a, rule.outer):
        for eps2, p2 in _outer_forms(c, rule.outer):
            for eta in (1, -1):
                u1, u2 = int(eps1 != eta), int(eps2 != eta)
                if b + PI * (u1 + u2) != rule.middle * eta:
                    continue
                g1 = rule.new_outer * eta + PI * u1
                g2 = rule.new_outer * eta + PI * u2
                delta = rule.new_middle * eta + PI * (p1 + p2)
                s = rule.scalar if eta == 1 else rule.scalar.conjugate()
                s *= cmath.exp(-1j * eta * a0 * (u1 + u2))
                s *= cmath.exp(1j * p1 * g1.to_radians(consts)) * cmath.exp(1j * p2 * g2.to_radians(consts))
                return _Plan(g1 * (-1) ** p1, delta, g2 * (-1) ** p2, s)
    return None


def _triple_site(d: ZxDiagram, a: int, b: int, c: int) -> VertexType:
    ka, kb, kc = _spider(d, a), _spider(d, b), _spider(d, c)
    _require(len({a, b, c}) == 3, "triple needs three distinct spiders")
    _require(ka == kc and kb == ka.opposite(), "triple must alternate colours")
    _require(d.degree(b) == 2 and not _has_loop(d, b), f"middle spider {b} must have two legs")
    for v in (a, c):
        _require(d.degree(v) == 2 and not _has_loop(d, v), f"outer spider {v} must have two legs")
    _single_plain_edge(d, a, b)
    _single_plain_edge(d, b, c)
    return ka


def _apply_triple(d: ZxDiagram, a: int, b: int, c: int, phases: Sequence[PhaseLike], s: complex) -> None:
    for v, p in zip((a, b, c), phases):
        d.set_kind(v, d.kind(v).opposite())
        d.set_phase(v, p)
    d.scalar *= s


def p_rule_numeric(d: ZxDiagram, a: int, b: int, c: int) -> tuple[int, ...]:
    """Generic P-rule on a chain of three two-legged spiders, phases become floats."""
    outer = _triple_site(d, a, b, c)
    o = Orientation.XZX if outer is _X else Orientation.ZXZ
    t = euler_p_rule(EulerTriple(d.phase(a), d.phase(b), d.phase(c), o))
    _apply_triple(d, a, b, c, (t.first, t.middle, t.last), t.scalar)
    return (a, b, c)


def _exact_p_rule(rule: ExactPRule, d: ZxDiagram, a: int, b: int, c: int) -> tuple[int, ...]:
    _triple_site(d, a, b, c)
    plan = match_exact_p_rule(rule, d.phase(a), d.phase(b), d.phase(c))  # type: ignore[arg-type]
    _require(plan is not None, f"{rule.name} does not match at {a}, {b}, {c}")
    assert plan is not None
    _apply_triple(d, a, b, c, (plan.first, plan.middle, plan.last), plan.scalar)
    return (a, b, c)


def fib_p_rule(d: ZxDiagram, a: int, b: int, c: int) -> tuple[int, ...]:
    """X(θ)Z(2π/5)X(θ) → Z(3π/5)X(θ)Z(3π/5), also colour-swapped, negated or Pauli-shifted."""
    return _exact_p_rule(FIB_RULE, d, a, b, c)


def hadamard_p_rule(d: ZxDiagram, a: int, b: int, c: int) -> tuple[int, ...]:
    """Clifford P-rule: XZX(±π/2) ↔ ZXZ(±π/2) in any sign pattern that matches."""
    return _exact_p_rule(HADAMARD_RULE, d, a, b, c)


# -- phase gadgets ------------------------------------------------------------


def sandwich_to_gadget(d: ZxDiagram, t1: int, m: int, t2: int) -> tuple[int, ...]:
    """CNOT·Z(α)·CNOT on a target wire, sharing one control spider, becomes a phase gadget.

    ``t1`` and ``t2`` are the X(0) target dots, ``m`` the Z(α) between them.
    """
    for t in (t1, t2):
        _require(_spider(d, t) is _X and phase_is_zero(d.phase(t)), f"{t} must be an X(0) spider")
        _require(d.degree(t) == 3 and not _has_loop(d, t), f"{t} must have three legs")
    _require(_spider(d, m) is _Z and d.degree(m) == 2 and not _has_loop(d, m), f"{m} must be a two-legged Z spider")
    e1 = _single_plain_edge(d, t1, m)
    e2 = _single_plain_edge(d, m, t2)
    rest1 = _other_edges(d, t1, e1)
    rest2 = _other_edges(d, t2, e2)
    ctrl = None
    for r1 in rest1:
        for r2 in rest2:
            c1, c2 = d.edges[r1].other(t1), d.edges[r2].other(t2)
            if c1 == c2 and d.is_spider(c1) and d.kind(c1) is _Z:
                if not d.edges[r1].hadamard and not d.edges[r2].hadamard:
                    ctrl = (c1, r1, r2)
    _require(ctrl is not None, "target dots do not share a Z control spider")
    assert ctrl is not None
    c, r1, r2 = ctrl
    (w1,) = [e for e in rest1 if e != r1]
    (w2,) = [e for e in rest2 if e != r2]
    p1, h1 = d.edges[w1].other(t1), d.edges[w1].hadamard
    p2, h2 = d.edges[w2].other(t2), d.edges[w2].hadamard
    alpha = d.phase(m)
    for v in (t1, m, t2):
        d.remove_vertex(v)
    dot = d.add_vertex(_Z)
    hub = d.add_vertex(_X)
    leaf = d.add_vertex(_Z, alpha)
    d.add_edge(p1, dot, h1)
    d.add_edge(dot, p2, h2)
    d.add_edge(dot, hub)
    d.add_edge(c, hub)
    d.add_edge(hub, leaf)
    d.scalar /= SQRT2
    return (dot, hub, leaf)


def gadget_to_sandwich(d: ZxDiagram, hub: int, target: int) -> tuple[int, ...]:
    """Expand a two-wire phase gadget into CNOT·Z(α)·CNOT with the target on ``target``'s wire."""
    _require(_spider(d, hub) is _X and phase_is_zero(d.phase(hub)), f"{hub} must be an X(0) hub")
    _require(d.degree(hub) == 3 and not _has_loop(d, hub), f"hub {hub} must have three legs")
    nbs = [d.edges[e].other(hub) for e in d.incident(hub)]
    _require(all(not d.edges[e].hadamard for e in d.incident(hub)), "hub edges must be plain")
    leaves = [v for v in nbs if d.is_spider(v) and d.kind(v) is _Z and d.degree(v) == 1]
    _require(len(leaves) >= 1, "hub has no phase leaf")
    dots = [v for v in nbs if v != leaves[-1]]
    leaf = leaves[-1]
    _require(len(set(dots)) == 2 and target in dots, f"{target} is not a gadget wire dot")
    (ctrl,) = [v for v in dots if v != target]
    _require(_spider(d, target) is _Z and phase_is_zero(d.phase(target)), f"{target} must be a Z(0) dot")
    _require(d.degree(target) == 3 and not _has_loop(d, target), f"{target} must have three legs")
    _require(_spider(d, ctrl) is _Z, f"control {ctrl} must be a Z spider")
    wire = [e for e in d.incident(target) if d.edges[e].other(target) != hub]
    (wa, wb) = (d.edges[e] for e in wire)
    pa, ha = wa.other(target), wa.hadamard
    pb, hb = wb.other(target), wb.hadamard
    alpha = d.phase(leaf)
    for v in (target, leaf, hub):
        d.remove_vertex(v)
    t1 = d.add_vertex(_X)
    m = d.add_vertex(_Z, alpha)
    t2 = d.add_vertex(_X)
    d.add_edge(pa, t1, ha)
    d.add_edge(t1, m)
    d.add_edge(m, t2)
    d.add_edge(t2, pb, hb)
    d.add_edge(ctrl, t1)
    d.add_edge(ctrl, t2)
    d.scalar *= SQRT2
    return (t1, m, t2)


RULES: dict[str, Callable[..., tuple[int, ...]]] = {
    "fuse": fuse,
    "remove_identity": remove_identity,
    "remove_self_loops": remove_self_loops,
    "remove_scalar_spider": remove_scalar_spider,
    "split_pi": split_pi,
    "unfuse_phase": unfuse_phase,
    "pi_push": pi_push,
    "color_change": color_change,
    "hbox_to_edge": hbox_to_edge,
    "edge_to_hbox": edge_to_hbox,
    "hh_cancel": hh_cancel,
    "hadamard_rule": hadamard_rule,
    "hopf": hopf,
    "copy_rule": copy_rule,
    "bialgebra": bialgebra,
    "bialgebra_square": bialgebra_square,
    "p_rule_numeric": p_rule_numeric,
    "fib_p_rule": fib_p_rule,
    "hadamard_p_rule": hadamard_p_rule,
    "sandwich_to_gadget": sandwich_to_gadget,
    "gadget_to_sandwich": gadget_to_sandwich,
}


# -- trace --------------------------------------------------------------------


@dataclass(frozen=True)
class RewriteStep:
    rule_name: str
    site: tuple[int, ...]
    result: tuple[int, ...]
    scalar_factor: complex

    def to_json(self) -> dict:
        return {
            "rule": self.rule_name,
            "consumed": list(self.site),
            "produced": list(self.result),
            "scalar": {"re": self.scalar_factor.real, "im": self.scalar_factor.imag},
        }


def trace_to_json(trace: Sequence[RewriteStep]) -> str:
    return json.dumps([s.to_json() for s in trace])


def trace_from_json(text: str) -> list[RewriteStep]:
    out = []
    for k, obj in enumerate(json.loads(text)):
        try:
            sc = obj["scalar"]
            out.append(
                RewriteStep(str(obj["rule"]), tuple(obj["consumed"]), tuple(obj["produced"]), complex(sc["re"], sc["im"]))
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"trace[{k}]: malformed step ({exc})") from None
    return out


class Rewriter:
    """Applies rules to one diagram, recording each step and counting a budget."""

    def __init__(self, d: ZxDiagram, budget: int | None = None) -> None:
        self.d = d
        self.trace: list[RewriteStep] = []
        self.budget = budget

    @property
    def exhausted(self) -> bool:
        return self.budget is not None and len(self.trace) >= self.budget

    def apply(self, name: str, *site: int) -> tuple[int, ...]:
        before = self.d.scalar
        produced = RULES[name](self.d, *site)
        factor = self.d.scalar / before if before != 0 else complex(self.d.scalar)
        self.trace.append(RewriteStep(name, tuple(site), tuple(produced), complex(factor)))
        return produced


def replay(d: ZxDiagram, trace: Iterable[RewriteStep]) -> ZxDiagram:
    """Re-apply a recorded trace to a copy of ``d``."""
    out = d.copy()
    for k, step in enumerate(trace):
        if step.rule_name not in RULES:
            raise RuleError(f"trace step {k}: unknown rule {step.rule_name!r}")
        RULES[step.rule_name](out, *step.site)
    return out


# -- strategy -----------------------------------------------------------------


def vertex_ranks(d: ZxDiagram) -> dict[int, int]:
    """Breadth-first order from the inputs, ties and leftovers broken by id."""
    order: list[int] = []
    seen: set[int] = set()
    starts = list(d.inputs) + sorted(d.vertices)
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for nb in d.neighbors(v):
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
    return {v: k for k, v in enumerate(order)}


def _plain_neighbor_edges(d: ZxDiagram, v: int) -> list[tuple[int, int]]:
    return [(e, d.edges[e].other(v)) for e in d.incident(v) if not d.edges[e].hadamard and not d.edges[e].is_loop]


def _basic_pass(rw: Rewriter, numeric: bool) -> bool:
    """One sweep of fusion, loop removal, Hopf, identity and scalar removal."""
    d = rw.d
    changed = False
    for v in sorted(d.vertices):
        if rw.exhausted:
            return changed
        if v not in d.vertices or not d.kind(v).is_spider:
            continue
        if _has_loop(d, v):
            rw.apply("remove_self_loops", v)
            changed = True
        while True:
            if rw.exhausted or v not in d.vertices:
                break
            same = [nb for _, nb in _plain_neighbor_edges(d, v) if d.is_spider(nb) and d.kind(nb) == d.kind(v)]
            if not same:
                break
            rw.apply("fuse", v, min(same))
            changed = True
        if v not in d.vertices:
            continue
        for nb in d.neighbors(v):
            if rw.exhausted:
                return changed
            if not d.is_spider(nb) or nb not in d.vertices:
                continue
            want_h = d.kind(nb) == d.kind(v)
            while len([e for e in d.edges_between(v, nb) if d.edges[e].hadamard == want_h]) >= 2:
                rw.apply("hopf", v, nb)
                changed = True
        tol = NUMERIC_ZERO_TOL if numeric else 0.0
        if not d.incident(v):
            rw.apply("remove_scalar_spider", v)
            changed = True
        elif d.degree(v) == 2 and not _has_loop(d, v) and phase_is_zero(d.phase(v), tol):
            rw.apply("remove_identity", v)
            changed = True
    return changed


def _basic(rw: Rewriter, numeric: bool) -> bool:
    changed = False
    while not rw.exhausted and _basic_pass(rw, numeric):
        changed = True
    return changed


def _eliminate_hadamards(rw: Rewriter) -> None:
    d = rw.d
    for h in sorted(v for v, x in d.vertices.items() if x.kind is _H):
        if h in d.vertices:
            rw.apply("hbox_to_edge", h)
    for e in sorted(d.edges):
        if e not in d.edges:
            continue
        edge = d.edges[e]
        if edge.hadamard and edge.is_loop:
            rw.apply("remove_self_loops", edge.a)
        elif edge.hadamard:
            rw.apply("hadamard_rule", edge.a, edge.b)


def _two_legged(d: ZxDiagram, v: int) -> bool:
    return d.is_spider(v) and d.degree(v) == 2 and not _has_loop(d, v)


def _chain_step(d: ZxDiagram, v: int, w: int) -> int | None:
    """The spider beyond two-legged opposite-coloured ``w`` when walking from ``v``."""
    if not _two_legged(d, w) or d.kind(w) != d.kind(v).opposite():
        return None
    if len(d.edges_between(v, w)) != 1 or d.edges[d.edges_between(v, w)[0]].hadamard:
        return None
    rest = [(e, nb) for e, nb in _plain_neighbor_edges(d, w) if nb != v]
    if len(rest) != 1 or len(d.edges_between(w, rest[0][1])) != 1:
        return None
    x = rest[0][1]
    if x == v or not d.is_spider(x) or d.kind(x) != d.kind(v):
        return None
    return x


def _pi_sweep(rw: Rewriter) -> bool:
    """Push π parts of two-legged spiders forward (increasing rank) and absorb Pauli spiders."""
    d = rw.d
    changed = False
    rank = vertex_ranks(d)
    for v in sorted(rank, key=rank.get):
        if rw.exhausted:
            return changed
        if v not in d.vertices or not _two_legged(d, v):
            continue
        p = d.phase(v)
        if not isinstance(p, Phase) or p.pi < 1:
            continue
        plain = [nb for _, nb in _plain_neighbor_edges(d, v)]
        fwd = [nb for nb in plain if rank.get(nb, -1) > rank[v]]
        for w in fwd:
            x = _chain_step(d, v, w)
            if x is None or rank.get(x, len(rank)) <= rank[w]:
                continue
            pauli = v if p == PI else rw.apply("split_pi", v, w)[0]
            moved = rw.apply("pi_push", pauli, w)
            rw.apply("fuse", x, moved[1])
            changed = True
            break
    # Pure π spiders that cannot move forward: absorb them where that removes a spider.
    rank = vertex_ranks(d)
    for v in sorted(rank, key=rank.get):
        if rw.exhausted:
            return changed
        if v not in d.vertices or not _two_legged(d, v) or d.phase(v) != PI:
            continue
        plain = sorted((nb for _, nb in _plain_neighbor_edges(d, v)), key=lambda u: rank.get(u, len(rank)))
        done = False
        for w in plain:
            x = _chain_step(d, v, w)
            if x is not None:
                moved = rw.apply("pi_push", v, w)
                rw.apply("fuse", x, moved[1])
                changed = done = True
                break
        if done:
            continue
        for w in reversed(plain):
            if not (_two_legged(d, w) and d.kind(w) == d.kind(v).opposite()):
                continue
            ys = [y for y in plain if y != w and d.is_spider(y) and d.kind(y) == d.kind(w)]
            if ys and len(d.edges_between(v, w)) == 1:
                rw.apply("pi_push", v, w)
                changed = True
                break
    return changed


def _p_rule_sites(d: ZxDiagram, rank: dict[int, int]) -> Iterable[tuple[int, int, int]]:
    for b in sorted((v for v in d.vertices if v in rank), key=rank.get):
        if not _two_legged(d, b):
            continue
        nbs = [nb for _, nb in _plain_neighbor_edges(d, b)]
        if len(nbs) != 2 or nbs[0] == nbs[1]:
            continue
        a, c = sorted(nbs, key=lambda u: rank.get(u, len(rank)))
        if not (d.is_spider(a) and d.is_spider(c)):
            continue
        if d.kind(a) != d.kind(b).opposite() or d.kind(c) != d.kind(a):
            continue
        yield a, b, c


def _exact_p_step(rw: Rewriter) -> bool:
    d = rw.d
    rank = vertex_ranks(d)
    for a, b, c in _p_rule_sites(d, rank):
        for rule in (FIB_RULE, HADAMARD_RULE):
            if rule is HADAMARD_RULE and d.kind(b) is not _Z:
                continue
            pa, pb, pc = d.phase(a), d.phase(b), d.phase(c)
            if not all(isinstance(p, Phase) for p in (pa, pb, pc)):
                continue
            if match_exact_p_rule(rule, pa, pb, pc) is None:  # type: ignore[arg-type]
                continue
            if d.degree(a) != 2:
                a = rw.apply("unfuse_phase", a, b)[0]
            if d.degree(c) != 2:
                c = rw.apply("unfuse_phase", c, b)[0]
            rw.apply(rule.name, a, b, c)
            return True
    return False


def _numeric_p_step(rw: Rewriter) -> bool:
    d = rw.d
    rank = vertex_ranks(d)
    for a, b, c in _p_rule_sites(d, rank):
        if d.kind(b) is _Z and d.degree(a) == 2 and d.degree(c) == 2:
            rw.apply("p_rule_numeric", a, b, c)
            return True
    return False


def simplify(
    d: ZxDiagram, mode: str = "exact", budget: int | None = None
) -> tuple[ZxDiagram, list[RewriteStep]]:
    """Simplify a copy of ``d`` to a fixpoint of the rewrite strategy.

    Hadamard boxes and edges are expanded first. Then fusion and cleanup,
    π-pushing and one P-rule application alternate until nothing changes or
    the step budget (default 10 × vertex count) runs out. ``mode="numeric"``
    uses the generic float P-rule instead of the exact ones.
    """
    if mode not in ("exact", "numeric"):
        raise ValueError(f"unknown mode {mode!r}")
    numeric = mode == "numeric"
    rw = Rewriter(d.copy())
    _eliminate_hadamards(rw)
    rw.budget = len(rw.trace) + (budget if budget is not None else 10 * max(1, rw.d.num_vertices()))
    while not rw.exhausted:
        changed = _basic(rw, numeric)
        if not numeric:
            changed |= _pi_sweep(rw)
        if changed:
            continue
        if (_numeric_p_step if numeric else _exact_p_step)(rw):
            continue
        break
    if rw.exhausted:
        log.warning("simplify: step budget of %d exhausted", rw.budget)
    return rw.d, rw.trace


def normalize_single_qubit(d: ZxDiagram, mode: str = "exact") -> tuple[ZxDiagram, list[RewriteStep]]:
    """Normal form of a single-wire diagram.

    Exact mode keeps phases in the exact ring; numeric mode returns at most
    three non-trivial spiders in Z-X-Z order with float phases.
    """
    if d.chain_order() is None:
        raise NotAChainError("diagram is not a single chain of spiders and Hadamard boxes")
    out, trace = simplify(d, mode)
    if mode == "numeric":
        for x in out.vertices.values():
            if x.kind.is_spider and isinstance(x.phase, Phase):
                x.phase = phase_radians(x.phase)
    return out, trace


def flip_cnot_sandwich(rw: Rewriter, m: int) -> tuple[int, ...]:
    """Move the target of a CNOT·Z(α)·CNOT sandwich to the control wire via a phase gadget.

    ``m`` is the Z(α) spider between the two target dots. Controls that are
    still two separate spiders are fused first.
    """
    d = rw.d
    t1, t2 = sorted(nb for _, nb in _plain_neighbor_edges(d, m))
    ctrls = []
    for t in (t1, t2):
        cs = [nb for _, nb in _plain_neighbor_edges(d, t) if nb != m and d.is_spider(nb) and d.kind(nb) is _Z]
        _require(len(cs) == 1, f"target dot {t} has no unique control spider")
        ctrls.append(cs[0])
    if ctrls[0] != ctrls[1]:
        rw.apply("fuse", ctrls[0], ctrls[1])
    _, hub, _ = rw.apply("sandwich_to_gadget", t1, m, t2)
    return rw.apply("gadget_to_sandwich", hub, ctrls[0])
