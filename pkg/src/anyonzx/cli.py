"""Command-line interface: ``matrix``, ``simplify``, ``verify`` and ``euler``."""

from __future__ import annotations

import argparse
import cmath
import itertools
import json
import math
import random
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .braid import BraidRangeError, BraidSyntaxError, BraidWord, parse_word, random_word, word_to_diagram
from .models import (
    FIB_SIGMA_DECOMPOSITION,
    AnyonModel,
    fib_b3,
    fib_b6_matrices,
    fib_embed,
    fib_f_template,
    fib_leakage,
    fib_restrict,
    fib_u_generators,
    get_model,
    ising_b6,
    ising_u_generators,
)
from .phase import CONSTANTS, Phase
from .rules import (
    FIB_RULE,
    S_FIB,
    EulerTriple,
    Orientation,
    Rewriter,
    chain_matrix,
    euler_p_rule,
    flip_cnot_sandwich,
    simplify,
    trace_to_json,
)
from .tensor import H_MATRIX, equal_up_to_phase, evaluate, phase_discrepancy, word_matrix
from .zxgraph import ZxDiagram, compose_all, is_isomorphic, to_json

__all__ = [
    "RunConfig",
    "Relation",
    "main",
    "cmd_matrix",
    "cmd_simplify",
    "cmd_verify",
    "cmd_euler",
    "run_suite",
    "oracle_error",
]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    model: str = "fibonacci"
    strands: int = 3
    tolerance: float = 1e-9
    format: str = "text"
    mode: str = "exact"
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.strands not in (3, 6):
            raise ValueError("strands must be 3 or 6")


@dataclass(frozen=True)
class Relation:
    relation: str
    passed: bool
    max_error: float


def _rel(name: str, err: float, tol: float, extra: bool = True) -> Relation:
    err = float(err)
    return Relation(name, bool(extra and err <= tol), err)


def _max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _proj_error(a: np.ndarray, b: np.ndarray) -> float:
    return phase_discrepancy(a, b)


def _diagram_vs_matrix(model: AnyonModel, strands: int, d: ZxDiagram, m: np.ndarray) -> float:
    e = evaluate(d)
    if model.name == "fibonacci" and strands == 6:
        return max(_proj_error(fib_restrict(e), m), fib_leakage(e))
    return _proj_error(e, m)


def oracle_error(model: AnyonModel, strands: int, w: BraidWord) -> float:
    """Global-phase discrepancy between the lowered diagram and the matrix product."""
    return _diagram_vs_matrix(model, strands, word_to_diagram(model, strands, w), word_matrix(model, strands, w))


def _word(model: AnyonModel, strands: int, text: str) -> ZxDiagram:
    return word_to_diagram(model, strands, parse_word(text, strands))


def _normal_form_relation(name: str, model: AnyonModel, strands: int, lhs: ZxDiagram, rhs: ZxDiagram) -> Relation:
    a, _ = simplify(lhs)
    b, _ = simplify(rhs)
    err = _max_abs(evaluate(a), evaluate(b))
    return _rel(name, err, 1e-10, is_isomorphic(a, b) and abs(a.scalar - b.scalar) <= 1e-10)


def _artin(prefix: str, gens: Sequence[np.ndarray], far_tol: float, yb_tol: float) -> list[Relation]:
    out = []
    n = len(gens)
    for i, j in itertools.combinations(range(n), 2):
        a, b = gens[i], gens[j]
        if j - i >= 2:
            out.append(_rel(f"{prefix} far-commutation s{i + 1} s{j + 1}", _max_abs(a @ b, b @ a), far_tol))
        else:
            out.append(_rel(f"{prefix} Yang-Baxter s{i + 1} s{j + 1}", _max_abs(a @ b @ a, b @ a @ b), yb_tol))
    return out


def _power_scalar_error(m: np.ndarray, k: int) -> float:
    p = np.linalg.matrix_power(m, k)
    return _proj_error(p, np.eye(m.shape[0]))


def _random_words(rng: random.Random, model: AnyonModel, strands: int, count: int, max_len: int, tol: float) -> Relation:
    worst = 0.0
    for _ in range(count):
        w = random_word(rng, strands, rng.randint(0, max_len))
        worst = max(worst, oracle_error(model, strands, w))
    return _rel(f"{model.name} B{strands} random words vs oracle ({count})", worst, tol)


def ising_b3_suite(cfg: RunConfig) -> list[Relation]:
    m = get_model("ising")
    r1, r2 = m.b3_matrices
    out = [
        _rel("ising R2 = H R1 H", _max_abs(r2, H_MATRIX @ r1 @ H_MATRIX), 1e-12),
        *_artin("ising B3", m.b3_matrices, 1e-12, 1e-12),
        _normal_form_relation("ising B3 Yang-Baxter by rewriting", m, 3, _word(m, 3, "s1 s2 s1"), _word(m, 3, "s2 s1 s2")),
    ]
    for i in (1, 2):
        out.append(_rel(f"ising B3 template s{i}", _max_abs(evaluate(m.b3_templates[i - 1]), m.b3_matrices[i - 1]), 1e-12))
        out.append(_rel(f"ising B3 s{i}^8 proportional to I", _power_scalar_error(m.b3_matrices[i - 1], 8), 1e-12))
    h = EulerTriple(math.pi / 2, math.pi / 2, math.pi / 2, Orientation.ZXZ)
    t = euler_p_rule(h)
    out.append(_rel("Hadamard P-rule angles", max(abs(a - math.pi / 2) for a in t.angles()), 1e-12))
    out.append(_random_words(random.Random(cfg.seed), m, 3, 20, 20, cfg.tolerance))
    return out


def ising_b6_suite(cfg: RunConfig) -> list[Relation]:
    m = get_model("ising")
    mats, temps = ising_b6()
    u1, u2 = ising_u_generators()
    i2 = np.eye(2)
    from_u = [np.kron(u1, i2), np.kron(u2, i2), None, np.kron(i2, u2), np.kron(i2, u1)]
    out = []
    for i in range(5):
        out.append(_rel(f"ising B6 template s{i + 1}", _max_abs(evaluate(temps[i]), mats[i]), 1e-12))
        if from_u[i] is not None:
            out.append(_rel(f"ising B6 s{i + 1} from U-generators", _proj_error(mats[i], from_u[i]), 1e-12))
    out += _artin("ising B6", mats, 1e-12, 1e-10)

    def sigma(i: int, flipped: bool = False) -> ZxDiagram:
        d = temps[i - 1].copy()
        if i == 3 and flipped:
            rw = Rewriter(d)
            (mid,) = [v for v in d.spiders() if not d.phase(v).is_zero]  # type: ignore[union-attr]
            flip_cnot_sandwich(rw, mid)
        return d

    flip = sigma(3, True)
    out.append(_rel("ising B6 s3 gadget flip preserves eval", _max_abs(evaluate(flip), mats[2]), 1e-12))
    for i, j in itertools.combinations(range(1, 6), 2):
        kind = "far-commutation" if j - i >= 2 else "Yang-Baxter"
        best = None
        for flipped in (False, True):
            a, b = sigma(i, flipped), sigma(j, flipped)
            if kind == "far-commutation":
                lhs, rhs = compose_all([a, b]), compose_all([b, a])
            else:
                lhs, rhs = compose_all([a, b, a.copy()]), compose_all([b, a, b.copy()])
            r = _normal_form_relation(f"ising B6 {kind} s{i} s{j} by rewriting", m, 6, lhs, rhs)
            if best is None or r.passed:
                best = r
            if r.passed:
                break
        assert best is not None
        out.append(best)
    out.append(_random_words(random.Random(cfg.seed), m, 6, 10, 10, cfg.tolerance))
    return out


def fib_b3_suite(cfg: RunConfig) -> list[Relation]:
    m = get_model("fibonacci")
    c = CONSTANTS
    f, r1, r2, temps = fib_b3()
    out = [
        _rel("phi^2 = phi + 1", abs(c.phi**2 - c.phi - 1), 1e-14),
        _rel("cos(theta/2) = 1/phi", abs(math.cos(c.theta / 2) - 1 / c.phi), 1e-14),
        _rel("F^2 = I", _max_abs(f @ f, np.eye(2)), 1e-12),
        _rel("F = e^{-i theta/2} Z(pi/2) X(theta) Z(pi/2)", _max_abs(evaluate(fib_f_template()), f), 1e-12),
        _rel("R2 = F R1 F", _max_abs(r2, f @ r1 @ f), 1e-12),
    ]
    rr = cmath.exp(7j * math.pi / 5)
    bare = r2 / cmath.exp(-4j * math.pi / 5)
    expected = np.array(
        [
            [c.phi**-2 + rr / c.phi, c.phi**-1.5 * (1 - rr)],
            [c.phi**-1.5 * (1 - rr), c.phi**-1 + rr * c.phi**-2],
        ]
    )
    out.append(_rel("R2 entries (without global prefactor)", _max_abs(bare, expected), 1e-12))
    out += _artin("fibonacci B3", m.b3_matrices, 1e-12, 1e-10)
    for i in (1, 2):
        out.append(_rel(f"fibonacci B3 template s{i}", _max_abs(evaluate(temps[i - 1]), m.b3_matrices[i - 1]), 1e-12))
        out.append(_rel(f"fibonacci B3 s{i}^10 proportional to I", _power_scalar_error(m.b3_matrices[i - 1], 10), 1e-10))
    out.append(_normal_form_relation("fibonacci B3 Yang-Baxter by rewriting", m, 3, _word(m, 3, "s1 s2 s1"), _word(m, 3, "s2 s1 s2")))
    # The P-rule itself.
    th = Phase(Fraction(0), 1)
    lhs = chain_matrix(Orientation.XZX, th, Phase(Fraction(2, 5)), th)
    rhs = chain_matrix(Orientation.ZXZ, Phase(Fraction(3, 5)), th, Phase(Fraction(3, 5)))
    s = complex(lhs[0, 0] / rhs[0, 0])
    out.append(_rel("Fibonacci P-rule: LHS = s_fib RHS", _max_abs(lhs, S_FIB * rhs), 1e-12))
    out.append(_rel("Fibonacci P-rule: |s_fib| = 1", abs(abs(S_FIB) - 1), 1e-12))
    out.append(_rel("Fibonacci P-rule: frozen s_fib matches oracle", abs(s - S_FIB), 1e-15))
    out.append(_rel("cos(2pi/5) = 1/(2 phi)", abs(math.cos(2 * math.pi / 5) - 0.5 / c.phi), 1e-14))
    t = euler_p_rule(EulerTriple(th, Phase(Fraction(2, 5)), th, Orientation.XZX))
    a, b, g = t.angles()
    out.append(
        _rel(
            "generic P-rule on (theta, 2pi/5, theta) gives (3pi/5, theta, 3pi/5)",
            max(abs(a - 3 * math.pi / 5), abs(b - c.theta), abs(g - 3 * math.pi / 5)),
            1e-12,
        )
    )
    out.append(_rel("P-rule middle angle: sin(theta/2) = phi^(-1/2)", abs(math.sin(b / 2) - c.phi**-0.5), 1e-12))
    out.append(_rel("exact rule table matches s_fib", abs(FIB_RULE.scalar - S_FIB), 0.0))
    d, _ = simplify(_word(m, 3, "s1 s1 s2 s2 s2 s2 s1 s1"))
    want = "Z(3/10·π) · X(-θ) · Z(3/5·π) · X(-θ) · Z(3/10·π)"
    w = parse_word("s1 s1 s2 s2 s2 s2 s1 s1", 3)
    out.append(_rel("s1 s1 s2 s2 s2 s2 s1 s1 normal form", _proj_error(evaluate(d), word_matrix(m, 3, w)), 1e-10, d.describe() == want))
    out.append(_random_words(random.Random(cfg.seed), m, 3, 20, 20, cfg.tolerance))
    return out


FIB_U_COMMUTING = ((1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 4), (2, 5), (2, 6), (2, 7), (4, 5), (4, 7), (5, 6), (6, 7))
FIB_U_BRAIDING = ((2, 3), (4, 6), (5, 7))


def fib_b6_suite(cfg: RunConfig) -> list[Relation]:
    m = get_model("fibonacci")
    mats = fib_b6_matrices()
    u = fib_u_generators()
    um = u.matrices
    out = []
    for i, g in enumerate(mats, 1):
        out.append(_rel(f"fibonacci B6 s{i} unitary", _max_abs(g.conj().T @ g, np.eye(5)), 1e-12))
        out.append(_rel(f"fibonacci B6 s{i}^10 proportional to I", _power_scalar_error(g, 10), 1e-10))
    out += _artin("fibonacci B6", mats, 1e-10, 1e-10)
    for k, factors in enumerate(FIB_SIGMA_DECOMPOSITION, 1):
        prod = np.linalg.multi_dot([um[f] for f in factors]) if len(factors) > 1 else um[factors[0]]
        err = max(_proj_error(fib_restrict(prod), mats[k - 1]), fib_leakage(prod))
        out.append(_rel(f"fibonacci s{k} = {'·'.join(factors)}", err, 1e-10))
    for name in um:
        out.append(_rel(f"fibonacci template {name}", _max_abs(evaluate(u.templates[name]), um[name]), 1e-12))
    for i, t in enumerate(m.b6_templates, 1):
        err = max(_proj_error(fib_restrict(evaluate(t)), mats[i - 1]), fib_leakage(evaluate(t)))
        out.append(_rel(f"fibonacci B6 template s{i} on embedded subspace", err, 1e-10))
    for i, j in FIB_U_COMMUTING:
        a, b = um[f"U{i}"], um[f"U{j}"]
        out.append(_rel(f"[U{i}, U{j}] = 0", _max_abs(a @ b, b @ a), 1e-10))
    for i, j in FIB_U_BRAIDING:
        a, b = um[f"U{i}"], um[f"U{j}"]
        out.append(_rel(f"U{i} U{j} U{i} = U{j} U{i} U{j}", _max_abs(a @ b @ a, b @ a @ b), 1e-10))
    f8 = np.kron(np.eye(4), fib_b3()[0])
    x1 = np.kron(np.kron(np.eye(2), np.array([[0, 1], [1, 0]])), np.eye(2))
    out.append(_rel("U7 = CCF U5 CCF", _max_abs(um["U7"], f8 @ um["U5"] @ f8), 1e-12))
    out.append(_rel("U6 = X1 U7 X1", _max_abs(um["U6"], x1 @ um["U7"] @ x1), 1e-12))
    perm = np.eye(8)
    perm[[3, 6]] = perm[[6, 3]]
    out.append(_rel("P14 swaps the NC and tau-1 states", _max_abs(um["P14"], perm), 0.0))
    out.append(_rel("U1 U2 is sigma1 embedded with R on garbage states", _max_abs(um["U1"] @ um["U2"], fib_embed(mats[0] / cmath.exp(-4j * math.pi / 5), cmath.exp(7j * math.pi / 5))), 1e-12))
    out.append(_random_words(random.Random(cfg.seed), m, 6, 5, 10, cfg.tolerance))
    return out


_SUITES: dict[tuple[str, int], Callable[[RunConfig], list[Relation]]] = {
    ("ising", 3): ising_b3_suite,
    ("ising", 6): ising_b6_suite,
    ("fibonacci", 3): fib_b3_suite,
    ("fibonacci", 6): fib_b6_suite,
}


def run_suite(cfg: RunConfig) -> list[Relation]:
    model = get_model(cfg.model).name
    return _SUITES[(model, cfg.strands)](cfg)


# -- output -------------------------------------------------------------------


def _fmt_complex(z: complex) -> str:
    z = complex(z.real if abs(z.real) > 1e-12 else 0.0, z.imag if abs(z.imag) > 1e-12 else 0.0)
    re_, im_ = f"{z.real:.6g}", f"{abs(z.imag):.6g}"
    return f"{re_}{'-' if z.imag < 0 else '+'}{im_}j"


def _matrix_text(m: np.ndarray) -> str:
    cells = [[_fmt_complex(complex(z)) for z in row] for row in np.asarray(m)]
    width = max(len(c) for row in cells for c in row) if cells else 0
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _emit(cfg: RunConfig, obj: object, text: str) -> None:
    if cfg.format == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


# -- commands -----------------------------------------------------------------


def cmd_matrix(cfg: RunConfig, word_text: str) -> int:
    model = get_model(cfg.model)
    w = parse_word(word_text, cfg.strands)
    mat = word_matrix(model, cfg.strands, w)
    ev = evaluate(word_to_diagram(model, cfg.strands, w))
    shown = fib_restrict(ev) if model.name == "fibonacci" and cfg.strands == 6 else ev
    err = _diagram_vs_matrix(model, cfg.strands, word_to_diagram(model, cfg.strands, w), mat)
    ok = err <= cfg.tolerance
    obj = {
        "word": str(w),
        "matrix": _matrix_json(mat),
        "diagram_matrix": _matrix_json(shown),
        "discrepancy": err,
        "passed": ok,
    }
    text = (
        f"word: {w or '(empty)'}\n"
        f"braid matrix:\n{_matrix_text(mat)}\n"
        f"diagram matrix{' (embedded block)' if shown is not ev else ''}:\n{_matrix_text(shown)}\n"
        f"global-phase discrepancy: {err:.3e} ({'ok' if ok else 'FAIL'})"
    )
    _emit(cfg, obj, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simplify(cfg: RunConfig, word_text: str) -> int:
    model = get_model(cfg.model)
    w = parse_word(word_text, cfg.strands)
    d = word_to_diagram(model, cfg.strands, w)
    out, trace = simplify(d, cfg.mode)
    err = _diagram_vs_matrix(model, cfg.strands, out, word_matrix(model, cfg.strands, w))
    ok = err <= cfg.tolerance
    obj = {
        "word": str(w),
        "mode": cfg.mode,
        "normal_form": out.describe(),
        "spiders": out.num_spiders(),
        "diagram": json.loads(to_json(out)),
        "trace": json.loads(trace_to_json(trace)),
        "oracle_error": err,
        "passed": ok,
    }
    rules = [s.rule_name for s in trace]
    text = (
        f"word: {w or '(empty)'}\n"
        f"normal form ({out.num_spiders()} spiders, scalar {_fmt_complex(out.scalar)}):\n{out.describe()}\n"
        f"trace ({len(trace)} steps): {' '.join(rules)}\n"
        f"oracle check: {err:.3e} ({'ok' if ok else 'FAIL'})"
    )
    _emit(cfg, obj, text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    rels = run_suite(cfg)
    ok = all(r.passed for r in rels)
    width = max(len(r.relation) for r in rels)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.relation.ljust(width)}  {r.max_error:.3e}" for r in rels]
    lines.append(f"{sum(r.passed for r in rels)}/{len(rels)} relations hold")
    _emit(cfg, [asdict(r) for r in rels], "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _parse_angle(text: str) -> Phase | float:
    try:
        return float(text)
    except ValueError:
        return Phase.parse(text)


def cmd_euler(cfg: RunConfig, orientation: str, angles: Sequence[str]) -> int:
    o = Orientation(orientation.upper())
    a, b, c = (_parse_angle(s) for s in angles)
    t = EulerTriple(a, b, c, o)
    r = euler_p_rule(t)
    err = _max_abs(t.matrix(), r.matrix())
    ok = err <= cfg.tolerance
    obj = {
        "orientation": r.orientation.value,
        "angles": list(r.angles()),
        "scalar": {"re": r.scalar.real, "im": r.scalar.imag},
        "max_error": err,
    }
    text = (
        f"{o.value}({', '.join(angles)}) = s · {r.orientation.value}"
        f"({', '.join(f'{x:.12g}' for x in r.angles())})\n"
        f"s = {_fmt_complex(r.scalar)}  |s| = {abs(r.scalar):.12g}\n"
        f"matrix check: {err:.3e} ({'ok' if ok else 'FAIL'})"
    )
    _emit(cfg, obj, text)
    return EXIT_OK if ok else EXIT_FAIL


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("ising", "fibonacci"), default=argparse.SUPPRESS)
    common.add_argument("--strands", type=int, choices=(3, 6), default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="oracle tolerance (default 1e-9)")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--mode", choices=("exact", "numeric"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p = argparse.ArgumentParser(
        prog="anyonzx", description="Compile anyon braid words to ZX-diagrams, simplify and verify them.", parents=[common]
    )
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("matrix", parents=[common], help="braid matrix vs diagram evaluation")
    m.add_argument("word", help='braid word, e.g. "s1 S2 s1"')
    s = sub.add_parser("simplify", parents=[common], help="lower a word and simplify the diagram")
    s.add_argument("word")
    sub.add_parser("verify", parents=[common], help="run the relation suite for a model and strand count")
    e = sub.add_parser("euler", parents=[common], help="convert an Euler triple to the other orientation")
    e.add_argument("orientation", choices=("ZXZ", "XZX", "zxz", "xzx"))
    e.add_argument("angles", nargs=3, help="radians or exact phases such as 3/10·π or pi/2+theta")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            model=getattr(args, "model", "fibonacci"),
            strands=getattr(args, "strands", 3),
            tolerance=getattr(args, "tol", 1e-9),
            format=getattr(args, "format", "text"),
            mode=getattr(args, "mode", "exact"),
            seed=getattr(args, "seed", 0),
        )
    except ValueError as exc:
        print(f"anyonzx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "matrix":
            return cmd_matrix(cfg, args.word)
        if args.command == "simplify":
            return cmd_simplify(cfg, args.word)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_euler(cfg, args.orientation, args.angles)
    except (BraidSyntaxError, BraidRangeError) as exc:
        print(f"anyonzx: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if args.command == "euler":
            print(f"anyonzx: {exc}", file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
