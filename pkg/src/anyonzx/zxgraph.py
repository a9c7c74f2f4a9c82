"""ZX-diagrams as open multigraphs with a tracked complex scalar.

Spiders carry either an exact :class:`~anyonzx.phase.Phase` or a float in
radians (numeric mode only). Hadamard boxes are explicit degree-2 nodes and
edges may additionally be marked as Hadamard edges.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

import networkx as nx

from .phase import CONSTANTS, ZERO, ModelConstants, Phase

__all__ = [
    "VertexType",
    "Vertex",
    "Edge",
    "ZxDiagram",
    "DiagramError",
    "PhaseLike",
    "CircuitBuilder",
    "identity",
    "phase_gate",
    "hadamard",
    "cnot",
    "cz",
    "cphase",
    "cc_phase",
    "ccz",
    "ccx",
    "chain",
    "compose",
    "compose_all",
    "tensor",
    "adjoint",
    "to_json",
    "from_json",
    "is_isomorphic",
    "add_phases",
    "neg_phase",
    "phase_radians",
]

PhaseLike = Union[Phase, float]


class DiagramError(ValueError):
    """Raised for malformed diagrams or violated rule preconditions."""


class VertexType(Enum):
    Z = "Z"
    X = "X"
    H = "H"
    IN = "in"
    OUT = "out"

    @property
    def is_spider(self) -> bool:
        return self in (VertexType.Z, VertexType.X)

    @property
    def is_boundary(self) -> bool:
        return self in (VertexType.IN, VertexType.OUT)

    def opposite(self) -> VertexType:
        if self is VertexType.Z:
            return VertexType.X
        if self is VertexType.X:
            return VertexType.Z
        raise DiagramError(f"{self} has no opposite colour")


@dataclass
class Vertex:
    kind: VertexType
    phase: PhaseLike = ZERO


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    hadamard: bool = False

    def other(self, v: int) -> int:
        if v == self.a:
            return self.b
        if v == self.b:
            return self.a
        raise DiagramError(f"vertex {v} is not an endpoint of {self}")

    @property
    def is_loop(self) -> bool:
        return self.a == self.b


def add_phases(p: PhaseLike, q: PhaseLike, c: ModelConstants = CONSTANTS) -> PhaseLike:
    if isinstance(p, Phase) and isinstance(q, Phase):
        return p + q
    return (phase_radians(p, c) + phase_radians(q, c)) % (2 * math.pi)


def neg_phase(p: PhaseLike) -> PhaseLike:
    if isinstance(p, Phase):
        return -p
    return (-p) % (2 * math.pi)


def phase_radians(p: PhaseLike, c: ModelConstants = CONSTANTS) -> float:
    return p.to_radians(c) if isinstance(p, Phase) else float(p)


def phase_is_zero(p: PhaseLike, atol: float = 0.0) -> bool:
    if isinstance(p, Phase):
        return p.is_zero
    r = float(p) % (2 * math.pi)
    return min(r, 2 * math.pi - r) <= atol


def _phase_str(p: PhaseLike) -> str:
    return str(p) if isinstance(p, Phase) else f"{float(p):.6g}"


class ZxDiagram:
    """Open ZX-diagram: vertices, a multiset of edges, ordered boundaries and a scalar.

    Vertex and edge ids are integers allocated in increasing order, which keeps
    every traversal that sorts by id deterministic.
    """

    def __init__(self) -> None:
        self.vertices: dict[int, Vertex] = {}
        self.edges: dict[int, Edge] = {}
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self.scalar: complex = 1 + 0j
        self._inc: dict[int, dict[int, None]] = {}
        self._next_v = 0
        self._next_e = 0

    # -- construction ---------------------------------------------------------

    def add_vertex(self, kind: VertexType, phase: PhaseLike = ZERO) -> int:
        v = self._next_v
        self._next_v += 1
        self.vertices[v] = Vertex(kind, phase)
        self._inc[v] = {}
        return v

    def add_edge(self, a: int, b: int, hadamard: bool = False) -> int:
        if a not in self.vertices or b not in self.vertices:
            raise DiagramError(f"edge endpoint missing: {a}-{b}")
        e = self._next_e
        self._next_e += 1
        self.edges[e] = Edge(a, b, hadamard)
        self._inc[a][e] = None
        self._inc[b][e] = None
        return e

    def remove_edge(self, e: int) -> None:
        edge = self.edges.pop(e)
        self._inc[edge.a].pop(e, None)
        self._inc[edge.b].pop(e, None)

    def remove_vertex(self, v: int) -> None:
        if v in self.inputs or v in self.outputs:
            raise DiagramError(f"cannot remove boundary vertex {v}")
        for e in list(self._inc[v]):
            self.remove_edge(e)
        del self._inc[v]
        del self.vertices[v]

    def set_edge_type(self, e: int, hadamard: bool) -> None:
        edge = self.edges[e]
        self.edges[e] = Edge(edge.a, edge.b, hadamard)

    def multiply_scalar(self, s: complex) -> None:
        self.scalar *= s

    # -- queries --------------------------------------------------------------

    def kind(self, v: int) -> VertexType:
        return self.vertices[v].kind

    def phase(self, v: int) -> PhaseLike:
        return self.vertices[v].phase

    def set_phase(self, v: int, p: PhaseLike) -> None:
        self.vertices[v].phase = p

    def set_kind(self, v: int, kind: VertexType) -> None:
        self.vertices[v].kind = kind

    def incident(self, v: int) -> list[int]:
        return sorted(self._inc[v])

    def degree(self, v: int) -> int:
        return sum(2 if self.edges[e].is_loop else 1 for e in self._inc[v])

    def neighbors(self, v: int) -> list[int]:
        """Distinct neighbours other than ``v`` itself, sorted by id."""
        return sorted({self.edges[e].other(v) for e in self._inc[v]} - {v})

    def edges_between(self, a: int, b: int) -> list[int]:
        return sorted(e for e in self._inc[a] if self.edges[e].other(a) == b)

    def is_spider(self, v: int) -> bool:
        return v in self.vertices and self.vertices[v].kind.is_spider

    def spiders(self) -> list[int]:
        return sorted(v for v, x in self.vertices.items() if x.kind.is_spider)

    def num_vertices(self) -> int:
        return len(self.vertices)

    def num_spiders(self) -> int:
        return sum(1 for x in self.vertices.values() if x.kind.is_spider)

    def is_exact(self) -> bool:
        return all(isinstance(x.phase, Phase) for x in self.vertices.values() if x.kind.is_spider)

    def copy(self) -> ZxDiagram:
        d = ZxDiagram()
        d.vertices = {v: Vertex(x.kind, x.phase) for v, x in self.vertices.items()}
        d.edges = dict(self.edges)
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.scalar = self.scalar
        d._inc = {v: dict(es) for v, es in self._inc.items()}
        d._next_v = self._next_v
        d._next_e = self._next_e
        return d

    def check(self) -> None:
        """Raise :class:`DiagramError` unless all structural invariants hold."""
        for e, edge in self.edges.items():
            for end in (edge.a, edge.b):
                if end not in self.vertices or e not in self._inc[end]:
                    raise DiagramError(f"edge {e} has dangling endpoint {end}")
        for v, x in self.vertices.items():
            deg = self.degree(v)
            if x.kind.is_boundary:
                if deg != 1:
                    raise DiagramError(f"boundary {v} has degree {deg}")
                if any(self.edges[e].is_loop for e in self._inc[v]):
                    raise DiagramError(f"boundary {v} has a self-loop")
            elif x.kind is VertexType.H:
                if deg != 2:
                    raise DiagramError(f"Hadamard box {v} has degree {deg}")
                if any(self.edges[e].is_loop for e in self._inc[v]):
                    raise DiagramError(f"Hadamard box {v} has a self-loop")
        ins = [v for v, x in self.vertices.items() if x.kind is VertexType.IN]
        outs = [v for v, x in self.vertices.items() if x.kind is VertexType.OUT]
        if sorted(ins) != sorted(self.inputs) or len(set(self.inputs)) != len(self.inputs):
            raise DiagramError("input list does not match input boundary vertices")
        if sorted(outs) != sorted(self.outputs) or len(set(self.outputs)) != len(self.outputs):
            raise DiagramError("output list does not match output boundary vertices")

    def chain_order(self) -> list[int] | None:
        """Non-boundary vertices from input to output if the diagram is one wire, else None."""
        if len(self.inputs) != 1 or len(self.outputs) != 1:
            return None
        order: list[int] = []
        prev, cur = None, self.inputs[0]
        seen = {cur}
        while True:
            es = self.incident(cur)
            nxt = [self.edges[e].other(cur) for e in es if self.edges[e].other(cur) != prev]
            if cur != self.inputs[0]:
                if self.degree(cur) != 2 or any(self.edges[e].is_loop for e in es):
                    return None
            if len(nxt) != 1:
                return None
            prev, cur = cur, nxt[0]
            if cur in seen:
                return None
            seen.add(cur)
            if cur == self.outputs[0]:
                break
            order.append(cur)
        if len(seen) != len(self.vertices):
            return None
        return order

    def __repr__(self) -> str:
        return (
            f"ZxDiagram({len(self.inputs)}->{len(self.outputs)}, "
            f"{self.num_spiders()} spiders, {len(self.edges)} edges, scalar={self.scalar:.6g})"
        )

    def describe(self) -> str:
        """Readable text form: the chain for single wires, otherwise a vertex/edge list."""
        order = self.chain_order()
        if order is not None:
            parts = []
            for v in order:
                x = self.vertices[v]
                parts.append("H" if x.kind is VertexType.H else f"{x.kind.value}({_phase_str(x.phase)})")
            return " · ".join(parts) if parts else "wire"
        lines = []
        for v in sorted(self.vertices):
            x = self.vertices[v]
            if x.kind.is_spider:
                lines.append(f"  {v}: {x.kind.value}({_phase_str(x.phase)})")
            else:
                lines.append(f"  {v}: {x.kind.value}")
        for e in sorted(self.edges):
            edge = self.edges[e]
            lines.append(f"  {edge.a} {'~' if edge.hadamard else '-'} {edge.b}")
        return "\n".join(lines)


# -- builders -----------------------------------------------------------------


def _check_wire(n: int, q: int) -> None:
    if not 0 <= q < n:
        raise DiagramError(f"wire index {q} out of range for {n} qubits")


class CircuitBuilder:
    """Append gates wire by wire, then call :meth:`finish` to close the outputs."""

    def __init__(self, n: int) -> None:
        if n < 0:
            raise DiagramError("qubit count must be non-negative")
        self.n = n
        self.d = ZxDiagram()
        self.d.inputs = [self.d.add_vertex(VertexType.IN) for _ in range(n)]
        self._front = list(self.d.inputs)
        self._placeholders: set[int] = set()
        self._done = False

    def spider(self, q: int, kind: VertexType, phase: PhaseLike = ZERO) -> int:
        _check_wire(self.n, q)
        v = self.d.add_vertex(kind, phase)
        self.d.add_edge(self._front[q], v)
        self._front[q] = v
        return v

    def z(self, q: int, phase: PhaseLike = ZERO) -> int:
        return self.spider(q, VertexType.Z, phase)

    def x(self, q: int, phase: PhaseLike = ZERO) -> int:
        return self.spider(q, VertexType.X, phase)

    def h(self, q: int) -> int:
        return self.spider(q, VertexType.H)

    def cnot(self, c: int, t: int) -> None:
        if c == t:
            raise DiagramError("control and target coincide")
        zc = self.z(c)
        xt = self.x(t)
        self.d.add_edge(zc, xt)
        self.d.scalar *= math.sqrt(2)

    def cz(self, a: int, b: int) -> None:
        if a == b:
            raise DiagramError("cz needs two distinct wires")
        za = self.z(a)
        zb = self.z(b)
        self.d.add_edge(za, zb, hadamard=True)
        self.d.scalar *= math.sqrt(2)

    def gadget(self, qubits: Sequence[int], phase: PhaseLike) -> None:
        """exp(i·phase·parity(qubits)) as a phase gadget."""
        if len(set(qubits)) != len(qubits) or not qubits:
            raise DiagramError(f"bad gadget wires {qubits}")
        hub = self.d.add_vertex(VertexType.X)
        leaf = self.d.add_vertex(VertexType.Z, phase)
        self.d.add_edge(hub, leaf)
        for q in qubits:
            self.d.add_edge(self.z(q), hub)
        self.d.scalar *= math.sqrt(2) ** (len(qubits) - 1)

    def cphase(self, a: int, b: int, phase: Phase) -> None:
        half = phase / 2
        self.z(a, half)
        self.z(b, half)
        self.gadget([a, b], -half)

    def cc_phase(self, qubits: Sequence[int], phase: Phase) -> None:
        """Multiply the all-ones state of three wires by e^{i·phase}."""
        a, b, c = qubits
        if len({a, b, c}) != 3:
            raise DiagramError(f"index clash in {qubits}")
        quarter = phase / 4
        for q in (a, b, c):
            self.z(q, quarter)
        for pair in ((a, b), (a, c), (b, c)):
            self.gadget(pair, -quarter)
        self.gadget([a, b, c], quarter)

    def append(self, sub: ZxDiagram, wires: Sequence[int] | None = None) -> None:
        """Plug a diagram onto the given wires (default: all wires in order)."""
        wires = list(range(self.n)) if wires is None else list(wires)
        if len(sub.inputs) != len(wires) or len(sub.outputs) != len(wires):
            raise DiagramError("sub-diagram arity does not match wire list")
        for q in wires:
            _check_wire(self.n, q)
        offset = _embed(self.d, sub)
        for pos, q in enumerate(wires):
            self._glue(self._front[q], sub.inputs[pos] + offset)
        for pos, q in enumerate(wires):
            out = sub.outputs[pos] + offset
            (e,) = self.d.incident(out)
            edge = self.d.edges[e]
            nb = edge.other(out)
            self.d.remove_edge(e)
            del self.d._inc[out]
            del self.d.vertices[out]
            if nb == out:
                raise DiagramError("output boundary wired to itself")
            # placeholder keeps the frontier a real vertex; removed in finish()
            ph = self.d.add_vertex(VertexType.Z)
            self.d.add_edge(nb, ph, edge.hadamard)
            self._front[q] = ph
        self.d.scalar *= sub.scalar
        self._placeholders.update(self._front[q] for q in wires)

    def _glue(self, front: int, sub_in: int) -> None:
        (e,) = self.d.incident(sub_in)
        edge = self.d.edges[e]
        nb = edge.other(sub_in)
        self.d.remove_edge(e)
        del self.d._inc[sub_in]
        del self.d.vertices[sub_in]
        self.d.add_edge(front, nb, edge.hadamard)

    def finish(self) -> ZxDiagram:
        if self._done:
            raise DiagramError("builder already finished")
        self._done = True
        self.d.outputs = []
        for q in range(self.n):
            o = self.d.add_vertex(VertexType.OUT)
            self.d.add_edge(self._front[q], o)
            self.d.outputs.append(o)
        for v in sorted(self._placeholders):
            _remove_plain_identity(self.d, v)
        return self.d


def _embed(d: ZxDiagram, sub: ZxDiagram) -> int:
    """Copy ``sub`` into ``d`` with shifted ids; return the id offset. Scalar not copied."""
    offset = d._next_v
    for v, x in sub.vertices.items():
        d.vertices[v + offset] = Vertex(x.kind, x.phase)
        d._inc[v + offset] = {}
    d._next_v = offset + sub._next_v
    for e in sorted(sub.edges):
        edge = sub.edges[e]
        d.add_edge(edge.a + offset, edge.b + offset, edge.hadamard)
    return offset


def _remove_plain_identity(d: ZxDiagram, v: int) -> None:
    """Drop a degree-2, zero-phase Z spider, joining its two neighbours."""
    es = d.incident(v)
    if len(es) != 2 or any(d.edges[e].is_loop for e in es):
        return
    e1, e2 = (d.edges[e] for e in es)
    a, b = e1.other(v), e2.other(v)
    h = e1.hadamard != e2.hadamard
    d.remove_edge(es[0])
    d.remove_edge(es[1])
    del d._inc[v]
    del d.vertices[v]
    d.add_edge(a, b, h)


def identity(n: int) -> ZxDiagram:
    d = ZxDiagram()
    d.inputs = [d.add_vertex(VertexType.IN) for _ in range(n)]
    d.outputs = [d.add_vertex(VertexType.OUT) for _ in range(n)]
    for i, o in zip(d.inputs, d.outputs):
        d.add_edge(i, o)
    return d


def phase_gate(n: int, q: int, color: VertexType | str, a: PhaseLike) -> ZxDiagram:
    color = VertexType(color) if isinstance(color, str) else color
    if not color.is_spider:
        raise DiagramError(f"phase gate colour must be Z or X, got {color}")
    _check_wire(n, q)
    b = CircuitBuilder(n)
    b.spider(q, color, a)
    return b.finish()


def hadamard(n: int, q: int) -> ZxDiagram:
    _check_wire(n, q)
    b = CircuitBuilder(n)
    b.h(q)
    return b.finish()


def cnot(n: int, control: int, target: int) -> ZxDiagram:
    _check_wire(n, control)
    _check_wire(n, target)
    b = CircuitBuilder(n)
    b.cnot(control, target)
    return b.finish()


def cz(n: int, a: int, b_: int) -> ZxDiagram:
    _check_wire(n, a)
    _check_wire(n, b_)
    b = CircuitBuilder(n)
    b.cz(a, b_)
    return b.finish()


def cphase(n: int, a: int, b_: int, phase: Phase) -> ZxDiagram:
    """diag(1, 1, 1, e^{i·phase}) on wires a, b."""
    _check_wire(n, a)
    _check_wire(n, b_)
    if a == b_:
        raise DiagramError("cphase needs two distinct wires")
    b = CircuitBuilder(n)
    b.cphase(a, b_, phase)
    return b.finish()


def cc_phase(n: int, c1: int, c2: int, t: int, color: VertexType | str, phase: Phase) -> ZxDiagram:
    """Doubly-controlled phase. With colour X the phase acts in the X basis of ``t``."""
    color = VertexType(color) if isinstance(color, str) else color
    for q in (c1, c2, t):
        _check_wire(n, q)
    if n < 3:
        raise DiagramError("doubly-controlled gates need at least 3 qubits")
    b = CircuitBuilder(n)
    if color is VertexType.X:
        b.h(t)
    b.cc_phase((c1, c2, t), phase)
    if color is VertexType.X:
        b.h(t)
    return b.finish()


def ccz(n: int, c1: int, c2: int, t: int) -> ZxDiagram:
    return cc_phase(n, c1, c2, t, VertexType.Z, Phase(Fraction(1)))


def ccx(n: int, c1: int, c2: int, t: int) -> ZxDiagram:
    return cc_phase(n, c1, c2, t, VertexType.X, Phase(Fraction(1)))


def chain(spiders: Iterable[tuple[VertexType | str, PhaseLike]]) -> ZxDiagram:
    """A single wire carrying the given spiders, leftmost applied first.

    Entries with kind ``"H"`` insert a Hadamard box (the phase is ignored).
    """
    b = CircuitBuilder(1)
    for kind, phase in spiders:
        kind = VertexType(kind) if isinstance(kind, str) else kind
        if kind is VertexType.H:
            b.h(0)
        else:
            b.spider(0, kind, phase)
    return b.finish()


# -- combinators --------------------------------------------------------------


def compose(d1: ZxDiagram, d2: ZxDiagram) -> ZxDiagram:
    """``d1`` followed by ``d2``; evaluates to eval(d2)·eval(d1)."""
    if len(d1.outputs) != len(d2.inputs):
        raise DiagramError(f"arity mismatch: {len(d1.outputs)} outputs vs {len(d2.inputs)} inputs")
    d = d1.copy()
    offset = _embed(d, d2)
    glue = []
    for o, i in zip(d1.outputs, d2.inputs):
        i += offset
        g = d.add_vertex(VertexType.Z)
        for bnd in (o, i):
            (e,) = d.incident(bnd)
            edge = d.edges[e]
            d.remove_edge(e)
            d.add_edge(g, edge.other(bnd), edge.hadamard)
            del d._inc[bnd]
            del d.vertices[bnd]
        glue.append(g)
    d.outputs = [o + offset for o in d2.outputs]
    d.scalar = d1.scalar * d2.scalar
    for g in glue:
        _remove_plain_identity(d, g)
    return d


def compose_all(diagrams: Sequence[ZxDiagram], n: int | None = None) -> ZxDiagram:
    if not diagrams:
        if n is None:
            raise DiagramError("need a wire count to compose an empty sequence")
        return identity(n)
    out = diagrams[0]
    for d in diagrams[1:]:
        out = compose(out, d)
    return out if len(diagrams) > 1 else out.copy()


def tensor(d1: ZxDiagram, d2: ZxDiagram) -> ZxDiagram:
    d = d1.copy()
    offset = _embed(d, d2)
    d.inputs = d1.inputs + [i + offset for i in d2.inputs]
    d.outputs = d1.outputs + [o + offset for o in d2.outputs]
    d.scalar = d1.scalar * d2.scalar
    return d


def adjoint(d: ZxDiagram) -> ZxDiagram:
    a = d.copy()
    for x in a.vertices.values():
        if x.kind is VertexType.IN:
            x.kind = VertexType.OUT
        elif x.kind is VertexType.OUT:
            x.kind = VertexType.IN
        elif x.kind.is_spider:
            x.phase = neg_phase(x.phase)
    a.inputs, a.outputs = list(d.outputs), list(d.inputs)
    a.scalar = d.scalar.conjugate()
    return a


# -- serialization ------------------------------------------------------------


def to_json(d: ZxDiagram) -> str:
    nodes = []
    for v in sorted(d.vertices):
        x = d.vertices[v]
        node: dict[str, Any] = {"id": v, "kind": x.kind.value}
        if x.kind.is_spider:
            if isinstance(x.phase, Phase):
                if not x.phase.is_zero:
                    node["phase"] = x.phase.to_json()
            else:
                node["phase"] = {"radians": float(x.phase)}
        nodes.append(node)
    edges = [
        {"a": d.edges[e].a, "b": d.edges[e].b, "h": d.edges[e].hadamard} for e in sorted(d.edges)
    ]
    obj = {
        "inputs": list(d.inputs),
        "outputs": list(d.outputs),
        "nodes": nodes,
        "edges": edges,
        "scalar": {"re": d.scalar.real, "im": d.scalar.imag},
    }
    return json.dumps(obj)


def _field(obj: Any, key: str, where: str, types: type | tuple[type, ...]) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise DiagramError(f"{where}.{key}: missing")
    val = obj[key]
    if not isinstance(val, types) or (isinstance(val, bool) and bool not in _as_tuple(types)):
        raise DiagramError(f"{where}.{key}: wrong type {type(val).__name__}")
    return val


def _as_tuple(t: type | tuple[type, ...]) -> tuple[type, ...]:
    return t if isinstance(t, tuple) else (t,)


def from_json(text: str) -> ZxDiagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DiagramError("top level: expected an object")
    d = ZxDiagram()
    ids: dict[int, int] = {}
    for k, node in enumerate(_field(obj, "nodes", "", list)):
        where = f"nodes[{k}]"
        nid = _field(node, "id", where, int)
        kind_s = _field(node, "kind", where, str)
        try:
            kind = VertexType(kind_s)
        except ValueError:
            raise DiagramError(f"{where}.kind: unknown kind {kind_s!r}") from None
        if nid in ids:
            raise DiagramError(f"{where}.id: duplicate id {nid}")
        phase: PhaseLike = ZERO
        if "phase" in node:
            if not kind.is_spider:
                raise DiagramError(f"{where}.phase: only spiders carry a phase")
            raw = node["phase"]
            if isinstance(raw, dict) and "radians" in raw:
                r = raw["radians"]
                if not isinstance(r, (int, float)) or isinstance(r, bool):
                    raise DiagramError(f"{where}.phase.radians: expected a number")
                phase = float(r)
            else:
                try:
                    phase = Phase.from_json(raw, f"{where}.phase")
                except ValueError as exc:
                    raise DiagramError(str(exc)) from None
        d.vertices[nid] = Vertex(kind, phase)
        d._inc[nid] = {}
        d._next_v = max(d._next_v, nid + 1)
        ids[nid] = nid
    for k, edge in enumerate(_field(obj, "edges", "", list)):
        where = f"edges[{k}]"
        a = _field(edge, "a", where, int)
        b = _field(edge, "b", where, int)
        h = edge.get("h", False) if isinstance(edge, dict) else False
        if not isinstance(h, bool):
            raise DiagramError(f"{where}.h: expected a boolean")
        for key, end in (("a", a), ("b", b)):
            if end not in ids:
                raise DiagramError(f"{where}.{key}: unknown node {end}")
        d.add_edge(a, b, h)
    for key in ("inputs", "outputs"):
        lst = _field(obj, key, "", list)
        for j, v in enumerate(lst):
            if not isinstance(v, int) or v not in ids:
                raise DiagramError(f"{key}[{j}]: unknown node {v!r}")
        setattr(d, key, list(lst))
    sc = _field(obj, "scalar", "", dict)
    re_ = _field(sc, "re", "scalar", (int, float))
    im_ = _field(sc, "im", "scalar", (int, float))
    d.scalar = complex(re_, im_)
    try:
        d.check()
    except DiagramError as exc:
        raise DiagramError(f"structure: {exc}") from None
    return d


# -- isomorphism --------------------------------------------------------------


def _to_nx(d: ZxDiagram, phase_digits: int | None) -> nx.MultiGraph:
    g = nx.MultiGraph()
    pos = {v: ("in", k) for k, v in enumerate(d.inputs)}
    pos.update({v: ("out", k) for k, v in enumerate(d.outputs)})
    for v, x in d.vertices.items():
        if x.kind.is_spider:
            p = x.phase
            if not isinstance(p, Phase):
                r = float(p) % (2 * math.pi)
                p = round(r, phase_digits) % round(2 * math.pi, phase_digits) if phase_digits else r
            label: Any = (x.kind.value, p)
        else:
            label = (x.kind.value, pos.get(v))
        g.add_node(v, label=label)
    for e in d.edges.values():
        g.add_edge(e.a, e.b, h=e.hadamard)
    return g


def is_isomorphic(d1: ZxDiagram, d2: ZxDiagram, phase_digits: int | None = 9) -> bool:
    """Structural equality up to vertex renaming, respecting boundary order.

    Scalars are not compared. Float phases are compared after rounding.
    """
    if len(d1.inputs) != len(d2.inputs) or len(d1.outputs) != len(d2.outputs):
        return False
    g1, g2 = _to_nx(d1, phase_digits), _to_nx(d2, phase_digits)
    nm = nx.algorithms.isomorphism.categorical_node_match("label", None)
    em = nx.algorithms.isomorphism.categorical_multiedge_match("h", False)
    return nx.is_isomorphic(g1, g2, node_match=nm, edge_match=em)


def scalar_close(a: complex, b: complex, tol: float = 1e-12) -> bool:
    return cmath.isclose(a, b, abs_tol=tol)
