"""Acceptance criteria 1-11.

Each test records one PASS/FAIL line; the lines are printed at the end of
the pytest run (see ``conftest.py``) and when this file runs as a script.
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

import corpus
from gcx import cli
from gcx.errors import NotDegenerate, NotDegenerateInput, NotPoissonSubmanifold
from gcx.exterior import Form, PolyVector, ext_d, radial_homotopy, vanishes_along_base
from gcx.gca import (
    annihilator,
    clifford_act,
    courant_bracket,
    holomorphic_dirac,
    nondegenerate_at,
    pairing,
    standard_structure,
    structure_convert,
    type_at,
)
from gcx.liealg import (
    LieAlgebraSC,
    change_basis,
    classify_degenerate,
    degeneracy,
    degeneracy_field_compare,
    realify,
)
from gcx.parse import kind_of, parse_expr, to_text
from gcx.poisson import (
    Center,
    HoloBivector,
    exceptional_divisor_poisson,
    lift_poisson,
    linear_poisson,
    submanifold_conditions,
    verify_lift,
)
from gcx.poly import Chart, GaussRat, Poly
from gcx import cut

RESULTS: dict = {}
ROOT = Path(__file__).resolve().parent.parent
MANIFESTS = ROOT / "manifests"


def record(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[num] = line
    print(line)
    assert ok, line


# ----------------------------------------------------------------------
# 1. Clifford relation
# ----------------------------------------------------------------------

def test_criterion_01_clifford_relation():
    rng = random.Random(101)
    start = time.perf_counter()
    count, bad, max_vars = 0, 0, 0
    while count < 1000:
        ch = corpus.rand_chart(rng, 6)
        max_vars = max(max_vars, ch.nvars)
        u = corpus.rand_section(rng, ch, max_deg=1, nterms=2)
        v = corpus.rand_section(rng, ch, max_deg=1, nterms=2)
        rho = corpus.rand_graded(rng, Form, ch, range(ch.nvars + 1), nterms=3, max_deg=1, coeff_terms=2)
        lhs = clifford_act(u, clifford_act(v, rho)) + clifford_act(v, clifford_act(u, rho))
        rhs = rho.scale(pairing(u, v) * 2)
        bad += lhs != rhs
        count += 1
    elapsed = time.perf_counter() - start
    record(1, bad == 0 and elapsed < 10,
           f"{count} triples, charts up to {max_vars} generators, {bad} failures, {elapsed:.2f}s (< 10s)")


# ----------------------------------------------------------------------
# 2. Courant (Dorfman) Jacobi identity with closed H
# ----------------------------------------------------------------------

def test_criterion_02_courant_jacobi():
    rng = random.Random(202)
    count, bad, nonzero_h = 0, 0, 0
    while count < 200:
        ch = corpus.rand_chart(rng, 4)
        if ch.nvars < 3:
            continue
        H = corpus.rand_closed_three_form(rng, ch, max_deg=2)
        assert not ext_d(H)
        nonzero_h += bool(H)
        u, v, w = (corpus.rand_section(rng, ch, max_deg=2, nterms=2) for _ in range(3))
        br = lambda a, b: courant_bracket(a, b, H, check=False)
        lhs = br(u, br(v, w))
        rhs = br(br(u, v), w) + br(v, br(u, w))
        bad += not (lhs - rhs).is_zero()
        count += 1
    record(2, bad == 0 and nonzero_h > 150,
           f"{count} triples, {nonzero_h} with nonzero closed H, {bad} failures")


# ----------------------------------------------------------------------
# 3. standard structures
# ----------------------------------------------------------------------

def _gauss_point(rng, chart):
    vals = {}
    for name in chart.real_coords:
        vals[name] = GaussRat(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    for name in chart.holo_coords:
        vals[name] = GaussRat(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                              Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    return vals


def _structure_suite():
    r4 = Chart(("x1", "x2", "x3", "x4"))
    om_const = Form.blade(r4, ("x1", "x2")) + Form.blade(r4, ("x3", "x4"))
    om_var = Form.blade(r4, ("x1", "x2"), Poly.gen(r4, "x1") ** 2 + 1) + Form.blade(r4, ("x3", "x4"))
    cases = [("R4 symplectic", "symplectic", r4, om_const, None),
             ("R4 symplectic (1+x1^2)", "symplectic", r4, om_var, None)]
    for k in (2, 3):
        ch = corpus.holo_chart(k)
        zero = PolyVector.zero(ch)
        sig = PolyVector.blade(ch, ("z1", "z2"), Poly.gen(ch, "z1"))
        cases.append((f"C{k} sigma=0", "holo_poisson", ch, None, zero))
        cases.append((f"C{k} sigma=z1 d1^d2", "holo_poisson", ch, None, sig))
    return cases


def test_criterion_03_standard_structures():
    rng = random.Random(303)
    failures = []
    total_points = 0
    convention_ok = True
    for label, kind, ch, omega, sigma in _structure_suite():
        J, line = standard_structure(kind, ch, omega=omega, sigma=sigma)
        rho = line.generator
        for _ in range(25):
            p = _gauss_point(rng, ch)
            total_points += 1
            L, pure = annihilator(rho, p)
            checks = {
                "pure": pure,
                "chevalley_nondegenerate": nondegenerate_at(rho, p),
                "J^2=-1": J.squares_to_minus_one_at(p),
                "orthogonal": J.orthogonal_at(p),
                "real": J.is_real_at(p),
                "type agreement": type_at(J, p) == type_at(rho, p),
                "eigenspace = annihilator": structure_convert("dirac_from_j", J, p).same_space(L),
            }
            if sigma is not None:
                # bivector contraction convention: annihilator of exp(sigma) Omega
                conv = holomorphic_dirac(sigma, p).same_space(L)
                checks["convention"] = conv
                convention_ok &= conv
            failures += [(label, name) for name, ok in checks.items() if not ok]
    ok = not failures and convention_ok
    record(3, ok, f"{total_points} points over 6 structures, {len(failures)} failed checks, "
                  f"contraction convention {'passes' if convention_ok else 'fails'}")


# ----------------------------------------------------------------------
# 4. lift example
# ----------------------------------------------------------------------

def test_criterion_04_lift_example():
    ch = corpus.holo_chart(2)
    sigma = HoloBivector(ch, {("z1", "z2"): Poly.gen(ch, "z1")})
    Z = Center(ch, ("z1", "z2"))
    atlas = lift_poisson(sigma, Z)
    c1, c2 = atlas.lifted
    b1 = c1.bracket(c1.coord("z1"), c1.coord("v2"))
    b2 = c2.bracket(c2.coord("v1"), c2.coord("z2"))
    ok1 = b1 == Poly.one(c1.chart)
    ok2 = b2 == Poly.gen(c2.chart, "v1")
    ver = verify_lift(sigma, atlas)
    exc = exceptional_divisor_poisson(atlas)
    conormal_abelian = submanifold_conditions(sigma, Z).conormal_abelian
    ok = ok1 and ok2 and bool(ver) and exc is False and conormal_abelian is False
    record(4, ok, f"{{z1,v2}} = {b1}, {{v1,z2}} = {b2}, verify_lift {bool(ver)}, "
                  f"exceptional divisor Poisson {exc}, conormal abelian {conormal_abelian}")


# ----------------------------------------------------------------------
# 5. so(3) negative control
# ----------------------------------------------------------------------

def test_criterion_05_so3_rejected():
    g = LieAlgebraSC.so3()
    ch = corpus.holo_chart(3)
    sigma = linear_poisson(ch, g.c)
    Z = Center(ch, ("z1", "z2", "z3"))
    err = None
    try:
        lift_poisson(sigma, Z)
    except NotDegenerate as exc:
        err = exc
    rep = submanifold_conditions(sigma, Z)
    wit = rep.witnesses.get("degenerate", {})
    # z1^2 + z2^2 + z3^2 is not in I^3 because it is a nonzero quadratic
    expr_ok = wit.get("obstruction") == "z1^2 + z2^2 + z3^2"
    in_ideal = Z.ideal(3).contains(sum((Poly.gen(ch, f"z{j}") ** 2 for j in (1, 2, 3)), Poly.zero(ch)))
    deg = degeneracy(g)
    lie_ok = not deg.degenerate and deg.to_dict()["obstructions"] == {"e1^e2^e3": "e1^2 + e2^2 + e3^2"}
    ok = err is not None and "v2^2 + v3^2 + 1" in str(err.details.get("witness")) and expr_ok \
        and not in_ideal and lie_ok
    record(5, ok, f"lift rejected: {type(err).__name__ if err else None}, witness {err.details.get('witness') if err else None}, "
                  f"obstruction {wit.get('obstruction')}, liealg {deg.to_dict()['obstructions']}")


# ----------------------------------------------------------------------
# 6. lift criterion on a random corpus
# ----------------------------------------------------------------------

def test_criterion_06_lift_equivalence():
    rng = random.Random(606)
    start = time.perf_counter()
    counts = {"lift": 0, "NotPoissonSubmanifold": 0, "NotDegenerate": 0}
    disagreements = []
    n = 0
    while n < 120:
        sigma, Z = corpus.rand_poisson_case(rng)
        rep = submanifold_conditions(sigma, Z, check_jacobi=False)
        try:
            atlas = lift_poisson(sigma, Z, check_jacobi=False)
            outcome = "lift"
        except NotPoissonSubmanifold:
            outcome = "NotPoissonSubmanifold"
        except NotDegenerate:
            outcome = "NotDegenerate"
        counts[outcome] += 1
        expected = ("lift" if rep.is_poisson_submanifold and rep.is_degenerate
                    else "NotPoissonSubmanifold" if not rep.is_poisson_submanifold else "NotDegenerate")
        if outcome != expected:
            disagreements.append((str(sigma), Z.generators, outcome, expected))
        elif outcome == "lift":
            if not verify_lift(sigma, atlas):
                disagreements.append((str(sigma), Z.generators, "verify_lift failed"))
            if exceptional_divisor_poisson(atlas) != rep.conormal_abelian:
                disagreements.append((str(sigma), Z.generators, "exceptional divisor mismatch"))
        n += 1
    elapsed = time.perf_counter() - start
    every_outcome = all(counts.values())
    ok = not disagreements and elapsed < 60 and every_outcome
    record(6, ok, f"{n} Jacobi-passing cases {counts}, {len(disagreements)} disagreements, {elapsed:.1f}s (< 60s)")


# ----------------------------------------------------------------------
# 7. degenerate Lie algebras
# ----------------------------------------------------------------------

def test_criterion_07_liealg_suite():
    rng = random.Random(707)
    problems = []
    # abelian and model algebras, disguised by a basis change
    for n in range(1, 7):
        for field in ("real", "complex"):
            for base, label in ((LieAlgebraSC.abelian(n, field), "abelian"),
                                (LieAlgebraSC.model(n, field) if n >= 2 else None, f"model({n})")):
                if base is None:
                    continue
                g = change_basis(base, corpus.rand_invertible(rng, n, complex_=field == "complex"))
                got = classify_degenerate(g).label()
                if got != label:
                    problems.append(("classify", n, field, got))
    # Heisenberg is not degenerate
    try:
        classify_degenerate(LieAlgebraSC.heisenberg())
        problems.append(("heisenberg accepted",))
    except NotDegenerateInput:
        pass
    if degeneracy(LieAlgebraSC.heisenberg()).degenerate:
        problems.append(("heisenberg degenerate",))
    # real and complex degeneracy agree; realification degenerate implies complex degenerate
    for _ in range(40):
        g, _label = corpus.lie_zoo(rng, 6, "real")
        g = change_basis(g, corpus.rand_invertible(rng, g.n))
        cmp = degeneracy_field_compare(g)
        if cmp.pattern != "equivalent":
            problems.append(("real/complex", str(g)))
        gc, _ = corpus.lie_zoo(rng, 3, "complex")
        gc = change_basis(gc, corpus.rand_invertible(rng, gc.n, complex_=True))
        cc = degeneracy_field_compare(gc)
        if cc.realification_degenerate and not cc.complex_degenerate:
            problems.append(("realification", str(gc)))
        if degeneracy(realify(gc)).degenerate != cc.realification_degenerate:
            problems.append(("realify", str(gc)))
    # basis change invariance
    conj = 0
    while conj < 100:
        g, label = corpus.lie_zoo(rng, 5)
        P = corpus.rand_invertible(rng, g.n, complex_=rng.random() < 0.5)
        h = change_basis(g, P)
        d0, d1 = degeneracy(g).degenerate, degeneracy(h).degenerate
        if d0 != d1 or d0 != (label != "nondegenerate"):
            problems.append(("conjugation", str(g)))
        if d1 and classify_degenerate(h).label() != classify_degenerate(g).label():
            problems.append(("conjugation classify", str(g)))
        conj += 1
    record(7, not problems, f"n <= 6 classification, Heisenberg rejected, 40+40 field comparisons, "
                            f"{conj} conjugations, {len(problems)} problems")


# ----------------------------------------------------------------------
# 8. radial homotopy
# ----------------------------------------------------------------------

def _homotopy_case(rng):
    layout = rng.choice(["real", "holo", "mixed"])
    if layout == "real":
        nf = rng.randint(1, 4)
        nb = rng.randint(0, 2)
        ch = Chart(tuple(f"x{j + 1}" for j in range(nb)) + tuple(f"y{j + 1}" for j in range(nf)))
        fiber = tuple(f"y{j + 1}" for j in range(nf))
    elif layout == "holo":
        nf = rng.randint(1, 2)
        nb = rng.randint(0, 1)
        ch = Chart(tuple(f"x{j + 1}" for j in range(nb)), tuple(f"z{j + 1}" for j in range(nf)))
        fiber = ch.holo_coords
    else:
        ch = Chart(("x1", "y1"), ("z1",))
        fiber = ("y1", "z1")
    fidx = sorted({ch.index(f) for f in fiber} | {ch.conj_index(ch.index(f)) for f in fiber})
    # beta has coefficients of fiber degree >= 2, so alpha = d beta is closed and vanishes on the base
    deg = rng.randint(0, min(2, ch.nvars - 1))
    beta = Form.zero(ch)
    for _ in range(2):
        quad = Poly.one(ch)
        for _ in range(2):
            quad = quad * Poly.gen(ch, rng.choice(fidx))
        coeff = quad * corpus.rand_poly(rng, ch, 1, 2)
        mask = 0
        for j in rng.sample(range(ch.nvars), deg):
            mask |= 1 << j
        beta = beta + Form(ch, {mask: coeff})
    return ch, fiber, ext_d(beta)


def test_criterion_08_radial_homotopy():
    rng = random.Random(808)
    count, bad, skipped = 0, [], 0
    while count < 120:
        ch, fiber, alpha = _homotopy_case(rng)
        if not alpha:
            skipped += 1
            continue
        eta = radial_homotopy(alpha, fiber)
        if ext_d(eta) != alpha:
            bad.append(("d eta", str(alpha)))
        # restricting a holomorphic fiber coordinate also zeroes its conjugate
        if not vanishes_along_base(eta, fiber, order=2):
            bad.append(("second order", str(alpha)))
        count += 1
    record(8, not bad, f"{count} closed base-vanishing forms (fiber real dim <= 4), {len(bad)} failures")


# ----------------------------------------------------------------------
# 9. symplectic cut identity
# ----------------------------------------------------------------------

def test_criterion_09_cut_identity():
    start = time.perf_counter()
    worst = 0.0
    fails = []
    for n in (1, 2, 3):
        for eps in (0.5, 1.0):
            rep = cut.reduced_form_check(cut.CutConfig(n, eps, tol=1e-8, samples=100, seed=n))
            worst = max(worst, rep.values["max_deviation"])
            if not rep.ok or rep.values["samples"] < 100:
                fails.append(("cut", n, eps))
            srep = cut.slice_check(cut.CutConfig(n, eps, tol=1e-8, samples=100, seed=10 + n))
            worst = max(worst, srep.values["max_pullback_deviation"])
            if not srep.ok:
                fails.append(("slice", n, eps))
    conv = cut.fd_convergence(cut.CutConfig(2, 1.0))
    order = conv.values["order"]
    elapsed = time.perf_counter() - start
    ok = not fails and 1.7 <= order <= 2.3 and elapsed < 30
    record(9, ok, f"max deviation {worst:.2e} (tol 1e-8), FD order {order:.3f}, {len(fails)} failures, {elapsed:.1f}s (< 30s)")


# ----------------------------------------------------------------------
# 10. spinor descent
# ----------------------------------------------------------------------

def test_criterion_10_spinor_descent():
    worst = 0.0
    fails = []
    for base in ("point", "R2"):
        for n in (1, 2):
            rep = cut.spinor_descent_check(cut.CutConfig(n, 1.0, samples=100, seed=n), base=base)
            worst = max(worst, rep.values["residual_X_minus_i_dmu"], rep.values["residual_iota_X_restricted"])
            if not rep.ok:
                fails.append((base, n))
    neg = cut.spinor_descent_check(cut.CutConfig(2, 1.0, samples=100, seed=5), base="point",
                                   field_fn=cut.non_action_field)
    control = neg.values["residual_X_minus_i_dmu"]
    ok = not fails and worst <= 1e-10 and control > 1e-3
    record(10, ok, f"max residual {worst:.2e} (tol 1e-10), non-action control residual {control:.3f} (> 1e-3)")


# ----------------------------------------------------------------------
# 11. CLI
# ----------------------------------------------------------------------

def _random_value(rng, ch):
    kind = rng.choice(["scalar", "form", "vector"])
    if kind == "scalar":
        return corpus.rand_poly(rng, ch, 3, rng.randint(0, 4))
    cls = Form if kind == "form" else PolyVector
    return corpus.rand_graded(rng, cls, ch, range(ch.nvars + 1), rng.randint(0, 4), 2, 2)


def _gcx(*args):
    proc = subprocess.run([sys.executable, "-m", "gcx.cli", *args], capture_output=True, text=True)
    return proc.returncode, proc.stdout


def test_criterion_11_cli():
    rng = random.Random(1111)
    # round trip
    rt_bad = 0
    for _ in range(500):
        ch = corpus.rand_chart(rng, 6)
        v = _random_value(rng, ch)
        text = to_text(v)
        back = parse_expr(text, ch, kind_of(v))
        rt_bad += back != v or to_text(back) != text
    # determinism and exit codes
    commands = sorted(cli.COMMANDS)
    code_bad, det_bad = [], []
    for cmd in commands:
        for suffix, want in (("ok", 0), ("false", 1), ("bad", 2)):
            path = MANIFESTS / f"{cmd}.{suffix}.gcx"
            argv = [cmd, "--manifest", str(path), "--seed", "7"]
            code, out = _gcx(*argv)
            if code != want:
                code_bad.append((cmd, suffix, code))
            if suffix == "ok":
                code2, out2 = _gcx(*argv)
                if out2 != out or code2 != code:
                    det_bad.append(cmd)
                json.loads(out)
    ok = not rt_bad and not code_bad and not det_bad
    record(11, ok, f"500 round trips ({rt_bad} failures), {len(commands)} commands x 3 exit codes "
                   f"({len(code_bad)} mismatches), byte-identical reports ({len(det_bad)} differ)")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(pytest.main([__file__, "-q", "-s"]))
