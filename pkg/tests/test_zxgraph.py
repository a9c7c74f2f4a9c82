import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anyonzx.phase import Phase
from anyonzx.tensor import H_MATRIX, equal_up_to_phase, evaluate, z_matrix
from anyonzx.zxgraph import (
    CircuitBuilder,
    DiagramError,
    VertexType,
    ZxDiagram,
    adjoint,
    cc_phase,
    ccx,
    ccz,
    chain,
    cnot,
    compose,
    compose_all,
    cphase,
    cz,
    from_json,
    hadamard,
    identity,
    is_isomorphic,
    phase_gate,
    tensor,
    to_json,
)

from conftest import max_diff, random_circuit

Z, X = VertexType.Z, VertexType.X
I2 = np.eye(2)


def P(num, den=1, t=0):
    return Phase(Fraction(num, den), t)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_identity(n):
    d = identity(n)
    d.check()
    assert max_diff(evaluate(d), np.eye(2**n)) == 0


@pytest.mark.parametrize(
    "color, a, want",
    [
        ("Z", P(1), np.diag([1, -1])),
        ("Z", P(0), I2),
        ("X", P(1), np.array([[0, 1], [1, 0]])),
    ],
)
def test_phase_gate(color, a, want):
    assert max_diff(evaluate(phase_gate(1, 0, color, a)), want) < 1e-15


def test_hadamard():
    assert max_diff(evaluate(hadamard(1, 0)), H_MATRIX) < 1e-15
    assert max_diff(evaluate(compose(hadamard(1, 0), hadamard(1, 0))), I2) < 1e-15
    assert max_diff(evaluate(hadamard(2, 1)), np.kron(I2, H_MATRIX)) < 1e-15


CNOT01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
CNOT10 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])


def test_cnot():
    assert max_diff(evaluate(cnot(2, 0, 1)), CNOT01) < 1e-15
    assert max_diff(evaluate(cnot(2, 1, 0)), CNOT10) < 1e-15
    assert max_diff(evaluate(compose(cnot(2, 0, 1), cnot(2, 0, 1))), np.eye(4)) < 1e-14


def test_cz_and_cphase():
    assert max_diff(evaluate(cz(2, 0, 1)), np.diag([1, 1, 1, -1])) < 1e-15
    a = P(7, 5)
    want = np.diag([1, 1, 1, np.exp(1j * a.to_radians())])
    assert max_diff(evaluate(cphase(2, 0, 1, a)), want) < 1e-14


def test_toffoli_family():
    want = np.eye(8)
    want[[6, 7]] = want[[7, 6]]
    assert max_diff(evaluate(ccx(3, 0, 1, 2)), want) < 1e-14
    assert max_diff(evaluate(ccz(3, 0, 1, 2)), np.diag([1] * 7 + [-1])) < 1e-14
    r = P(7, 5)
    want = np.diag([1] * 7 + [np.exp(1j * r.to_radians())])
    assert max_diff(evaluate(cc_phase(3, 0, 1, 2, "Z", r)), want) < 1e-14
    # X colour acts on the target's X basis.
    hx = np.kron(np.eye(4), H_MATRIX)
    assert max_diff(evaluate(cc_phase(3, 0, 1, 2, "X", r)), hx @ want @ hx) < 1e-14


def test_ccx_other_target():
    d = evaluate(ccx(3, 1, 2, 0))
    want = np.eye(8)
    want[[3, 7]] = want[[7, 3]]
    assert max_diff(d, want) < 1e-14


def test_compose_examples():
    a, b = P(1, 2), P(7, 5)
    lhs = evaluate(compose(phase_gate(1, 0, Z, a), phase_gate(1, 0, Z, b)))
    assert max_diff(lhs, evaluate(phase_gate(1, 0, Z, a + b))) < 1e-14
    d = cnot(2, 0, 1)
    assert is_isomorphic(compose(d, identity(2)), d)
    h = chain([(Z, P(1, 2)), (X, P(1, 2)), (Z, P(1, 2))])
    lam = equal_up_to_phase(evaluate(h), H_MATRIX, 1e-12)
    assert lam is not None and abs(abs(lam) - 1) < 1e-12


def test_compose_order():
    # compose(d1, d2) applies d1 first.
    z, x = phase_gate(1, 0, Z, P(1, 2)), phase_gate(1, 0, X, P(1, 3))
    assert max_diff(evaluate(compose(z, x)), evaluate(x) @ evaluate(z)) < 1e-14


def test_tensor_and_adjoint_examples():
    a = P(3, 10)
    assert max_diff(evaluate(tensor(identity(1), phase_gate(1, 0, Z, a))), np.kron(I2, z_matrix(a.to_radians()))) < 1e-15
    adj = adjoint(phase_gate(1, 0, Z, P(1, 2)))
    (v,) = adj.spiders()
    assert adj.phase(v) == P(3, 2)
    assert max_diff(evaluate(adjoint(hadamard(1, 0))), H_MATRIX) < 1e-15


def test_chain_with_hadamard_boxes():
    d = chain([(Z, P(1, 2)), ("H", None), (X, P(1))])
    want = evaluate(phase_gate(1, 0, X, P(1))) @ H_MATRIX @ z_matrix(math.pi / 2)
    assert max_diff(evaluate(d), want) < 1e-14


def test_builder_validation():
    b = CircuitBuilder(2)
    with pytest.raises(DiagramError):
        b.cnot(0, 0)
    with pytest.raises(DiagramError):
        b.z(2)
    with pytest.raises(DiagramError):
        compose(identity(1), identity(2))


def test_remove_vertex_rejects_boundary():
    d = identity(1)
    with pytest.raises(DiagramError):
        d.remove_vertex(d.inputs[0])
    d.check()


def test_degree_counts_loops_twice():
    d = ZxDiagram()
    v = d.add_vertex(Z)
    d.add_edge(v, v)
    assert d.degree(v) == 2


def test_describe():
    assert identity(1).describe() == "wire"
    d = chain([(Z, P(3, 10)), (X, P(0, 1, -1))])
    assert d.describe() == "Z(3/10·π) · X(-θ)"
    assert d.chain_order() is not None
    assert cnot(2, 0, 1).chain_order() is None


@pytest.mark.parametrize(
    "make",
    [
        lambda: identity(1),
        lambda: identity(0),
        lambda: cnot(2, 0, 1),
        lambda: cz(2, 1, 0),
        lambda: ccx(3, 0, 1, 2),
        lambda: chain([(Z, P(3, 10, -1)), ("H", None), (X, 0.25)]),
        lambda: cc_phase(3, 0, 1, 2, "X", P(7, 5)),
    ],
)
def test_json_round_trip(make):
    d = make()
    back = from_json(to_json(d))
    assert is_isomorphic(d, back, phase_digits=None)
    assert back.scalar == d.scalar
    assert max_diff(evaluate(d), evaluate(back)) == 0


def test_json_identity_shape():
    obj = json.loads(to_json(identity(1)))
    assert obj["inputs"] == [0] and obj["outputs"] == [1] and obj["edges"] == [{"a": 0, "b": 1, "h": False}]
    assert obj["scalar"] == {"re": 1.0, "im": 0.0}


def _mutated(fn):
    obj = json.loads(to_json(chain([(Z, P(1, 2))])))
    fn(obj)
    return json.dumps(obj)


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda o: o["nodes"][1]["phase"].update(pi_den=0), "pi_den"),
        (lambda o: o["nodes"][1].update(kind="Y"), "kind"),
        (lambda o: o["edges"][0].update(a=99), "edges[0].a"),
        (lambda o: o.pop("scalar"), "scalar"),
        (lambda o: o["nodes"][0].update(phase={"pi_num": 1, "pi_den": 1}), "only spiders"),
        (lambda o: o["edges"].pop(), "structure"),
        (lambda o: o["inputs"].append(42), "inputs[1]"),
    ],
)
def test_json_errors_name_the_field(mutate, field):
    with pytest.raises(DiagramError, match=field.replace("[", r"\[").replace("]", r"\]")):
        from_json(_mutated(mutate))


def test_json_rejects_garbage():
    with pytest.raises(DiagramError):
        from_json("not json")
    with pytest.raises(DiagramError):
        from_json("[]")


def test_isomorphism_respects_phase_and_boundary_order():
    assert not is_isomorphic(phase_gate(1, 0, Z, P(1, 2)), phase_gate(1, 0, Z, P(3, 2)))
    assert not is_isomorphic(cnot(2, 0, 1), cnot(2, 1, 0))
    assert is_isomorphic(cnot(2, 0, 1), cnot(2, 0, 1))


seeds = st.integers(0, 2**32 - 1)


@given(seeds, seeds, st.integers(1, 3))
def test_compose_homomorphism(s1, s2, n):
    d1 = random_circuit(random.Random(s1), n, 12)
    d2 = random_circuit(random.Random(s2), n, 12)
    d1.check()
    assert max_diff(evaluate(compose(d1, d2)), evaluate(d2) @ evaluate(d1)) < 1e-10


@given(seeds, seeds)
def test_tensor_homomorphism(s1, s2):
    rng1, rng2 = random.Random(s1), random.Random(s2)
    d1 = random_circuit(rng1, rng1.randint(1, 2), 8)
    d2 = random_circuit(rng2, rng2.randint(1, 2), 8)
    assert max_diff(evaluate(tensor(d1, d2)), np.kron(evaluate(d1), evaluate(d2))) < 1e-10


@given(seeds, st.integers(1, 3))
def test_adjoint_homomorphism(s, n):
    d = random_circuit(random.Random(s), n, 12)
    adj = adjoint(d)
    adj.check()
    assert max_diff(evaluate(adj), evaluate(d).conj().T) < 1e-10


@given(seeds, st.integers(1, 3))
def test_generator_circuits_are_unitary_up_to_scalar(s, n):
    m = evaluate(random_circuit(random.Random(s), n, 12))
    g = m.conj().T @ m
    assert max_diff(g, g[0, 0] * np.eye(2**n)) < 1e-10
    assert abs(g[0, 0]) > 1e-12


@given(seeds, st.integers(1, 3))
def test_json_round_trip_random(s, n):
    d = random_circuit(random.Random(s), n, 10)
    back = from_json(to_json(d))
    assert is_isomorphic(d, back, phase_digits=None)
    assert max_diff(evaluate(d), evaluate(back)) == 0


def test_compose_all_matches_pairwise():
    ds = [random_circuit(random.Random(k), 2, 5) for k in range(4)]
    want = np.eye(4)
    for d in ds:
        want = evaluate(d) @ want
    assert max_diff(evaluate(compose_all(ds)), want) < 1e-10
