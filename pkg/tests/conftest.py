import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from anyonzx.phase import Phase
from anyonzx.zxgraph import CircuitBuilder, VertexType, ZxDiagram

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Z, X, H = VertexType.Z, VertexType.X, VertexType.H

FIB_DENOMS = (1, 2, 5, 10)


def phases(max_theta: int = 2):
    return st.builds(
        lambda n, d, t: Phase(Fraction(n, d), t),
        st.integers(-40, 40),
        st.sampled_from((1, 2, 3, 4, 5, 10)),
        st.integers(-max_theta, max_theta),
    )


def random_phase(rng: random.Random, allow_float: bool = True):
    r = rng.random()
    if r < 0.35:
        return Phase(Fraction(rng.randint(0, 1)))
    if r < 0.6:
        return Phase(Fraction(rng.randint(0, 19), rng.choice(FIB_DENOMS)), rng.randint(-1, 1))
    if r < 0.75:
        return Phase(Fraction(0), rng.choice((1, -1)))
    if allow_float:
        return rng.uniform(-np.pi, np.pi)
    return Phase(Fraction(rng.randint(0, 7), 4))


def random_graph(rng: random.Random, max_spiders: int = 6, max_wires: int = 2) -> ZxDiagram:
    """Small open graph with parallel edges, loops, Hadamard edges and boxes."""
    d = ZxDiagram()
    k = rng.randint(1, max_spiders)
    vs = [d.add_vertex(rng.choice((Z, X)), random_phase(rng)) for _ in range(k)]
    for _ in range(rng.randint(0, k + 3)):
        a, b = rng.choice(vs), rng.choice(vs)
        if rng.random() < 0.2:
            h = d.add_vertex(H)
            d.add_edge(a, h)
            d.add_edge(h, b, rng.random() < 0.2)
        else:
            d.add_edge(a, b, rng.random() < 0.25)
    for kind, side in ((VertexType.IN, d.inputs), (VertexType.OUT, d.outputs)):
        for _ in range(rng.randint(0, max_wires)):
            bnd = d.add_vertex(kind)
            d.add_edge(bnd, rng.choice(vs), rng.random() < 0.15)
            side.append(bnd)
    d.scalar = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
    return d


def random_circuit(rng: random.Random, n: int = 3, depth: int = 12, exact: bool = False) -> ZxDiagram:
    b = CircuitBuilder(n)
    for _ in range(depth):
        g = rng.randrange(7 if n > 1 else 3)
        q = rng.randrange(n)
        if g == 0:
            b.z(q, random_phase(rng, not exact))
        elif g == 1:
            b.x(q, random_phase(rng, not exact))
        elif g == 2:
            b.h(q)
        else:
            a, c = rng.sample(range(n), 2)
            if g == 3:
                b.cnot(a, c)
            elif g == 4:
                b.cz(a, c)
            elif g == 5:
                b.gadget(sorted(rng.sample(range(n), rng.randint(1, n))), random_phase(rng, not exact))
            else:
                b.cphase(a, c, Phase(Fraction(rng.randint(0, 9), 5)))
    return b.finish()


def candidate_sites(d: ZxDiagram, arity: int):
    """Vertex tuples a rule of the given arity could plausibly match."""
    vs = sorted(d.vertices)
    if arity == 1:
        yield from ((v,) for v in vs)
    elif arity == 2:
        for a in vs:
            for b in sorted(set(d.neighbors(a))):
                if b != a:
                    yield (a, b)
    elif arity == 3:
        for b in vs:
            nbs = sorted(set(d.neighbors(b)) - {b})
            for a, c in itertools.permutations(nbs, 2):
                yield (a, b, c)
    else:
        zs = [v for v in vs if d.kind(v) is Z]
        for z1, z2 in itertools.permutations(zs, 2):
            common = sorted(
                v for v in set(d.neighbors(z1)) & set(d.neighbors(z2)) if d.kind(v) is X
            )
            for x1, x2 in itertools.permutations(common, 2):
                yield (x1, x2, z1, z2)


def max_diff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@pytest.fixture
def rng():
    return random.Random(1234)
