import cmath
import itertools
import math

import numpy as np
import pytest

from anyonzx.models import (
    FIB_EMBEDDING,
    FIB_SIGMA_DECOMPOSITION,
    fib_b3,
    fib_b6_matrices,
    fib_embed,
    fib_f_matrix,
    fib_f_template,
    fib_leakage,
    fib_restrict,
    fib_u_generators,
    get_model,
    ising_b3,
    ising_b6,
    ising_sigma3_flipped,
    ising_u_generators,
)
from anyonzx.phase import CONSTANTS
from anyonzx.tensor import H_MATRIX, equal_up_to_phase, evaluate, is_unitary, phase_discrepancy, z_matrix
from anyonzx.zxgraph import cnot, compose_all, phase_gate, tensor, identity

from conftest import max_diff

PHI = CONSTANTS.phi
R = cmath.exp(7j * math.pi / 5)
PRE = cmath.exp(-4j * math.pi / 5)
I2 = np.eye(2)


def all_matrix_sets():
    i, f = get_model("ising"), get_model("fibonacci")
    return [("ising3", i.b3_matrices), ("ising6", i.b6_matrices), ("fib3", f.b3_matrices), ("fib6", f.b6_matrices)]


@pytest.mark.parametrize("name, mats", all_matrix_sets())
def test_unitary(name, mats):
    for m in mats:
        assert is_unitary(m, 1e-12), name


@pytest.mark.parametrize("name, mats", all_matrix_sets())
def test_artin_relations(name, mats):
    for i, j in itertools.combinations(range(len(mats)), 2):
        a, b = mats[i], mats[j]
        if j - i >= 2:
            assert max_diff(a @ b, b @ a) < 1e-12, (name, i, j)
        else:
            assert max_diff(a @ b @ a, b @ a @ b) < 1e-10, (name, i, j)


@pytest.mark.parametrize("model", ["ising", "fibonacci"])
@pytest.mark.parametrize("strands", [3, 6])
def test_templates_evaluate_to_matrices(model, strands):
    m = get_model(model)
    for k, t in enumerate(m.generator_templates(strands)):
        ev = evaluate(t)
        if model == "fibonacci" and strands == 6:
            assert fib_leakage(ev) < 1e-12
            ev = fib_restrict(ev)
        assert phase_discrepancy(ev, m.generator_matrices(strands)[k]) < 1e-10
        # The scalars are chosen so the match is exact, not just projective.
        assert max_diff(ev, m.generator_matrices(strands)[k]) < 1e-10


def test_ising_b3():
    r1, r2, _ = ising_b3()
    assert max_diff(r2, H_MATRIX @ r1 @ H_MATRIX) < 1e-12
    assert max_diff(r1 @ r1.conj().T, I2) < 1e-15
    lam = equal_up_to_phase(r1, z_matrix(-math.pi / 2))
    assert lam == pytest.approx(-cmath.exp(1j * math.pi / 8), abs=1e-15)


def test_ising_b3_order_eight():
    for m in get_model("ising").b3_matrices:
        assert phase_discrepancy(np.linalg.matrix_power(m, 8), I2) < 1e-12


def test_ising_b6_examples():
    mats, _ = ising_b6()
    z = evaluate(phase_gate(1, 0, "Z", -math.pi / 2))
    assert equal_up_to_phase(mats[0], np.kron(z, I2), 1e-12) is not None
    zq = phase_gate(1, 0, "Z", -math.pi / 2)
    # The phase sits on the CNOT target; the parity gadget is symmetric, so either wire can be the target.
    for c, t, mid in ((1, 0, tensor(zq, identity(1))), (0, 1, tensor(identity(1), zq))):
        sandwich = evaluate(compose_all([cnot(2, c, t), mid, cnot(2, c, t)]))
        assert equal_up_to_phase(mats[2], sandwich, 1e-12) is not None
    u1, u2 = ising_u_generators()
    assert equal_up_to_phase(u1, z, 1e-12) is not None
    assert max_diff(evaluate(ising_sigma3_flipped()), mats[2]) < 1e-12


def test_fib_f():
    f = fib_f_matrix()
    assert max_diff(f @ f, I2) < 1e-12
    assert max_diff(f, f.T) == 0 and np.allclose(np.imag(f), 0)
    assert max_diff(evaluate(fib_f_template()), f) < 1e-12


def test_fib_r2_entries():
    f, r1, r2, _ = fib_b3()
    assert max_diff(r2, f @ r1 @ f) < 1e-12
    bare = r2 / PRE
    assert bare[0, 0] == pytest.approx(PHI**-2 + R / PHI, abs=1e-12)
    assert bare[1, 1] == pytest.approx(PHI**-1 + R * PHI**-2, abs=1e-12)
    assert bare[0, 1] == pytest.approx(PHI**-1.5 * (1 - R), abs=1e-12)
    assert bare[1, 0] == pytest.approx(bare[0, 1], abs=1e-15)


def test_fib_order_ten():
    for m in (*get_model("fibonacci").b3_matrices, *fib_b6_matrices()):
        assert phase_discrepancy(np.linalg.matrix_power(m, 10), np.eye(m.shape[0])) < 1e-10


def test_fib_eigenvalues():
    r1 = get_model("fibonacci").b3_matrices[0]
    got = sorted(np.angle(np.linalg.eigvals(r1 / PRE)) % (2 * math.pi))
    assert got == pytest.approx([0, 7 * math.pi / 5], abs=1e-12)


def test_fib_b6_sigma1_structure():
    f, r1, _, _ = fib_b3()
    s1 = fib_b6_matrices()[0]
    assert s1[0, 0] == pytest.approx(PRE * R, abs=1e-15)
    assert max_diff(s1[1:, 1:], np.kron(r1, I2)) < 1e-15


def test_fib_embedding_layout():
    e = FIB_EMBEDDING
    assert len(set(e.index_map)) == len(e.index_map) == 5
    assert not set(e.index_map) & set(e.garbage)
    assert sorted(e.index_map + e.garbage) == list(range(8))
    m = np.arange(25).reshape(5, 5)
    assert max_diff(fib_restrict(fib_embed(m)), m) == 0
    assert fib_leakage(fib_embed(m)) == 0


def test_u_generator_tables():
    u = fib_u_generators()
    m = u.matrices
    f8 = np.kron(np.eye(4), fib_f_matrix())
    x1 = np.kron(np.kron(I2, [[0, 1], [1, 0]]), I2)
    assert max_diff(m["U7"], f8 @ m["U5"] @ f8) < 1e-12
    assert max_diff(m["U6"], x1 @ m["U7"] @ x1) < 1e-12
    for a, b in (("U2", "U3"), ("U4", "U6"), ("U5", "U7")):
        p, q = m[a], m[b]
        assert max_diff(p @ q @ p, q @ p @ q) < 1e-10
    for name, t in u.templates.items():
        assert max_diff(evaluate(t), m[name]) < 1e-12, name


def test_sigma_decompositions():
    u = fib_u_generators()
    for k, factors in enumerate(FIB_SIGMA_DECOMPOSITION):
        prod = np.eye(8)
        for name in factors:
            prod = prod @ u.matrices[name]
        assert fib_leakage(prod) < 1e-12
        assert phase_discrepancy(fib_restrict(prod), fib_b6_matrices()[k]) < 1e-10


def test_get_model_names():
    assert get_model("fib") is get_model("fibonacci")
    assert get_model("ising").name == "ising"
    with pytest.raises(ValueError):
        get_model("majorana")
    assert get_model("ising").qubits(6) == 2 and get_model("fibonacci").qubits(6) == 3
