import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from anyonzx.braid import BraidWord, parse_word
from anyonzx.models import get_model
from anyonzx.phase import Phase
from anyonzx.tensor import (
    H_MATRIX,
    MAX_QUBITS,
    ResourceError,
    equal_up_to_phase,
    evaluate,
    phase_discrepancy,
    spider_tensor,
    word_matrix,
)
from anyonzx.zxgraph import DiagramError, VertexType, ZxDiagram, chain, identity

from conftest import max_diff

Z, X = VertexType.Z, VertexType.X


def test_scalar_spider():
    d = ZxDiagram()
    d.add_vertex(Z, 0.7)
    assert max_diff(evaluate(d), [[1 + cmath.exp(0.7j)]]) < 1e-15
    assert spider_tensor(X, 0, 0.7) == pytest.approx(1 + cmath.exp(0.7j))


def test_empty_diagram_is_its_scalar():
    d = identity(0)
    d.scalar = 2 - 1j
    assert evaluate(d).tolist() == [[2 - 1j]]


def test_x_pi():
    assert max_diff(evaluate(chain([(X, math.pi)])), [[0, 1], [1, 0]]) < 1e-15


def test_copy_tensor():
    d = ZxDiagram()
    i = d.add_vertex(VertexType.IN)
    v = d.add_vertex(Z)
    o1, o2 = d.add_vertex(VertexType.OUT), d.add_vertex(VertexType.OUT)
    d.add_edge(i, v)
    d.add_edge(v, o1)
    d.add_edge(v, o2)
    d.inputs, d.outputs = [i], [o1, o2]
    want = np.zeros((4, 2))
    want[0, 0] = want[3, 1] = 1
    assert max_diff(evaluate(d), want) == 0


def test_x_spider_normalization():
    # Two-legged X(α) is the unitary H·Z(α)·H.
    a = 1.1
    t = spider_tensor(X, 2, a)
    want = H_MATRIX @ np.diag([1, cmath.exp(1j * a)]) @ H_MATRIX
    assert max_diff(t, want) < 1e-15


def test_big_spider_split_matches_direct_tensor():
    d = ZxDiagram()
    ins = [d.add_vertex(VertexType.IN) for _ in range(3)]
    outs = [d.add_vertex(VertexType.OUT) for _ in range(3)]
    v = d.add_vertex(X, 0.3)
    for b in ins + outs:
        d.add_edge(b, v)
    d.inputs, d.outputs = ins, outs
    direct = spider_tensor(X, 6, 0.3).reshape(8, 8)
    assert max_diff(evaluate(d), direct) < 1e-15


def test_hadamard_edge():
    d = ZxDiagram()
    i, o = d.add_vertex(VertexType.IN), d.add_vertex(VertexType.OUT)
    d.add_edge(i, o, hadamard=True)
    d.inputs, d.outputs = [i], [o]
    assert max_diff(evaluate(d), H_MATRIX) < 1e-15


def test_crossing_is_swap():
    d = identity(2)
    d.outputs.reverse()
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert max_diff(evaluate(d), swap) == 0


def test_resource_guard():
    with pytest.raises(ResourceError):
        evaluate(identity(MAX_QUBITS + 1))
    assert evaluate(identity(MAX_QUBITS)).shape == (2**MAX_QUBITS,) * 2


def test_bad_boundary_degree():
    d = identity(1)
    d.add_edge(d.inputs[0], d.outputs[0])
    with pytest.raises(DiagramError):
        evaluate(d)


def test_long_chain_is_fast():
    import time

    d = chain([(Z if k % 2 else X, 0.1 * k) for k in range(3000)])
    t = time.perf_counter()
    m = evaluate(d)
    assert time.perf_counter() - t < 5
    assert abs(abs(np.linalg.det(m)) - 1) < 1e-9


def test_word_matrix_examples():
    ising = get_model("ising")
    fib = get_model("fibonacci")
    lhs = word_matrix(ising, 3, parse_word("s1 s2 s1", 3))
    rhs = word_matrix(ising, 3, parse_word("s2 s1 s2", 3))
    assert max_diff(lhs, rhs) < 1e-12
    assert max_diff(word_matrix(fib, 3, BraidWord(3)), np.eye(2)) == 0
    assert max_diff(word_matrix(fib, 3, parse_word("s1 S1", 3)), np.eye(2)) < 1e-15
    assert word_matrix(fib, 6, BraidWord(6)).shape == (5, 5)


def test_word_matrix_order():
    m = get_model("fibonacci")
    r1, r2 = m.b3_matrices
    assert max_diff(word_matrix(m, 3, parse_word("s1 s2", 3)), r2 @ r1) < 1e-15


def test_equal_up_to_phase_examples():
    b = np.array([[1, 2], [3, 4j]])
    assert equal_up_to_phase(1j * b, b) == pytest.approx(1j)
    assert equal_up_to_phase(2 * b, b) is None
    assert equal_up_to_phase(b + 0.1, b) is None
    r1 = get_model("ising").b3_matrices[0]
    lam = equal_up_to_phase(r1, np.diag([1, cmath.exp(-0.5j * math.pi)]))
    assert lam == pytest.approx(-cmath.exp(1j * math.pi / 8), abs=1e-15)
    half = Phase(Fraction(1, 2))
    h = evaluate(chain([(Z, half), (X, half), (Z, half)]))
    lam = equal_up_to_phase(h, H_MATRIX)
    assert lam is not None and abs(abs(lam) - 1) < 1e-12


def test_equal_up_to_phase_shape_mismatch():
    with pytest.raises(ValueError):
        equal_up_to_phase(np.eye(2), np.eye(4))
    with pytest.raises(ValueError):
        phase_discrepancy(np.eye(2), np.eye(4))


def test_phase_discrepancy():
    b = np.array([[0.6, 0.8], [-0.8, 0.6]])
    assert phase_discrepancy(cmath.exp(0.3j) * b, b) < 1e-15
    assert phase_discrepancy(np.eye(2), np.diag([1, -1])) == pytest.approx(2)
