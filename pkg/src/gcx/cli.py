"""Command line front end: ``gcx <command> --manifest FILE``.

Every command prints one JSON report and exits with 0 (verdict true),
1 (verdict false, with witnesses) or 2 (malformed input).
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import re
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from .errors import GcxError, InputError, InvalidInput, InvalidJ, ManifestError
from .exterior import Form, PolyVector, ext_d, radial_homotopy, vanishes_along_base
from .gca import (
    GenSection,
    JOperator,
    SpinorLine,
    annihilator,
    b_transform,
    chevalley,
    courant_bracket,
    involutivity_check,
    nondegenerate_at,
    standard_structure,
    type_at,
)
from .liealg import (
    LieAlgebraSC,
    classify_degenerate,
    degeneracy,
    degeneracy_field_compare,
)
from .manifest import Entry, Manifest, load_manifest, with_location
from .parse import parse_expr, parse_scalar
from .poisson import (
    Center,
    HoloBivector,
    conormal_constants,
    exceptional_divisor_poisson,
    lift_poisson,
    submanifold_conditions,
    verify_lift,
)
from .poly import Chart, GaussRat, Poly

SCHEMA = 1
DEFAULT_POINTS = 25


class Context:
    def __init__(self, manifest: Manifest, args: argparse.Namespace):
        self.manifest = manifest
        self.args = args
        self.rng = random.Random(args.seed)
        self._chart: Optional[Chart] = None

    @property
    def chart(self) -> Chart:
        if self._chart is None:
            self._chart = self.manifest.chart()
        return self._chart

    # typed reads ----------------------------------------------------------
    def expr(self, key: str, kind: str, required: bool = True):
        e = self.manifest.require(key) if required else self.manifest.get(key)
        if e is None:
            return None
        try:
            return parse_expr(e.text(), self.chart, kind)
        except GcxError as exc:
            raise with_location(exc, e)

    def integer(self, key: str, default: Optional[int] = None) -> int:
        e = self.manifest.get(key)
        if e is None:
            if default is None:
                raise ManifestError(f"missing required key {key!r}", key=key)
            return default
        try:
            return int(e.text())
        except ValueError:
            raise ManifestError(f"{key!r} must be an integer (line {e.line})", key=key, line=e.line) from None

    def real(self, key: str, default: Optional[float] = None) -> float:
        e = self.manifest.get(key)
        if e is None:
            if default is None:
                raise ManifestError(f"missing required key {key!r}", key=key)
            return default
        try:
            return float(Fraction(e.text().strip()))
        except (ValueError, ZeroDivisionError):
            raise ManifestError(f"{key!r} must be a real number (line {e.line})", key=key, line=e.line) from None

    def n_points(self, default: int = DEFAULT_POINTS) -> int:
        return self.args.points if self.args.points is not None else default

    def points(self, chart: Optional[Chart] = None, coords: Optional[Tuple[str, ...]] = None) -> List[Dict[str, GaussRat]]:
        """Explicit ``point`` entries, or ``--points`` random rational points."""
        chart = chart or self.chart
        coords = coords if coords is not None else chart.coords
        explicit = self.manifest.all("point")
        if explicit:
            return [parse_point(e, chart, coords) for e in explicit]
        out = []
        for _ in range(self.n_points()):
            p = {}
            for c in coords:
                re_ = Fraction(self.rng.randint(-4, 4), self.rng.randint(1, 3))
                im_ = Fraction(self.rng.randint(-4, 4), self.rng.randint(1, 3)) if c not in chart.real_coords else 0
                p[c] = GaussRat(re_, im_)
            out.append(p)
        return out


def parse_point(e: Entry, chart: Chart, coords: Tuple[str, ...]) -> Dict[str, GaussRat]:
    p: Dict[str, GaussRat] = {}
    text = e.text().strip()
    if text in ("", "0", "origin"):
        return {c: GaussRat(0) for c in coords}
    for part in re.split(r"[,\n]", text):
        if not part.strip():
            continue
        if "=" not in part:
            raise ManifestError(f"point entries look like 'z1 = 1/2' (line {e.line})", line=e.line)
        name, val = (s.strip() for s in part.split("=", 1))
        if name not in coords:
            raise ManifestError(f"point names unknown coordinate {name!r} (line {e.line})", line=e.line)
        try:
            p[name] = parse_scalar(val)
        except GcxError as exc:
            raise with_location(exc, e)
    missing = [c for c in coords if c not in p]
    if missing:
        raise ManifestError(f"point on line {e.line} misses {missing}", line=e.line)
    return p


def point_text(p: Dict[str, GaussRat]) -> Dict[str, str]:
    return {k: str(v) for k, v in p.items()}


def read_bivector(ctx: Context, key: str = "bivector") -> HoloBivector:
    e = ctx.manifest.require(key)
    chart = ctx.chart
    try:
        if e.value and not e.block:
            return HoloBivector.from_polyvector(parse_expr(e.value, chart, "vector"))
        entries = {}
        for line, _ in ([(e.value, e.line)] if e.value else []) + e.block:
            if ":" not in line:
                raise ManifestError(f"bivector lines look like 'z1 z2: expr' (near line {e.line})", line=e.line)
            lhs, rhs = line.split(":", 1)
            names = lhs.split()
            if len(names) != 2:
                raise ManifestError(f"bivector entry needs two coordinates, got {lhs.strip()!r}", line=e.line)
            entries[(names[0], names[1])] = parse_expr(rhs, chart, "scalar")
        return HoloBivector(chart, entries)
    except GcxError as exc:
        raise with_location(exc, e)


def read_center(ctx: Context) -> Center:
    e = ctx.manifest.require("center")
    try:
        return Center(ctx.chart, ctx.manifest.names("center"))
    except GcxError as exc:
        raise with_location(exc, e)


_BRACKET = re.compile(r"^\[\s*e(\d+)\s*,\s*e(\d+)\s*\]\s*=(.*)$")


def read_lie_algebra(ctx: Context) -> LieAlgebraSC:
    n = ctx.integer("dim")
    if n < 1:
        raise ManifestError("dim must be positive")
    fld = (ctx.manifest.value("field", "complex") or "complex").strip()
    e = ctx.manifest.get("brackets")
    basis = Chart(tuple(f"e{j + 1}" for j in range(n)), ())
    brackets = {}
    lines = [] if e is None else ([(e.value, e.line)] if e.value else []) + e.block
    for line, lineno in lines:
        m = _BRACKET.match(line.strip())
        if not m:
            raise ManifestError(f"line {lineno}: brackets look like '[e1,e2] = e3'", line=lineno)
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ManifestError(f"line {lineno}: bad basis indices", line=lineno)
        try:
            rhs = parse_expr(m.group(3), basis, "scalar")
        except GcxError as exc:
            exc.details["manifest_line"] = lineno
            raise
        img = {}
        for mono, c in rhs.terms.items():
            idx = [k for k in range(n) if rhs.monomial_str(mono) == f"e{k + 1}"]
            if not idx:
                raise ManifestError(f"line {lineno}: bracket values must be linear in the basis", line=lineno)
            img[idx[0]] = c
        brackets[(i, j)] = img
    try:
        return LieAlgebraSC.from_brackets(n, brackets, fld)
    except GcxError as exc:
        raise with_location(exc, e)


def _complex_list(text: str) -> List[complex]:
    return [parse_scalar(t).to_complex() for t in text.split(",") if t.strip()]


# ----------------------------------------------------------------------
# commands: each returns (verdict, result dict, witnesses)
# ----------------------------------------------------------------------

Result = Tuple[bool, dict, list]


def cmd_check_spinor(ctx: Context) -> Result:
    rho = ctx.expr("spinor", "form")
    H = ctx.expr("H", "form", required=False)
    pts = ctx.points()
    records, witnesses = [], []
    for p in pts:
        L, pure = annihilator(rho, p)
        nd = nondegenerate_at(rho, p)
        records.append({"point": point_text(p), "pure": pure, "nondegenerate": nd, "dirac_dim": L.dim})
        if not (pure and nd) and len(witnesses) < 3:
            witnesses.append({"point": point_text(p), "pure": pure, "nondegenerate": nd})
    inv, wit = involutivity_check(rho, H, pts)
    if not inv:
        witnesses.append({"involutivity": wit})
    verdict = inv and all(r["pure"] and r["nondegenerate"] for r in records)
    return verdict, {"spinor": str(rho), "points": len(pts), "involutive": inv, "checks": records}, witnesses


def _structure(ctx: Context):
    kind = (ctx.manifest.value("structure") or "").strip()
    if not kind:
        return None
    chart = ctx.chart
    if kind == "symplectic":
        return standard_structure("symplectic", chart, omega=ctx.expr("omega", "form"))
    if kind == "complex":
        return standard_structure("complex", chart)
    if kind == "holo_poisson":
        sigma = read_bivector(ctx).to_polyvector() if ctx.manifest.has("bivector") else PolyVector.zero(chart)
        return standard_structure("holo_poisson", chart, sigma=sigma)
    raise ManifestError(f"unknown structure {kind!r} (symplectic, complex, holo_poisson)")


def read_j_matrix(ctx: Context) -> JOperator:
    """``j_matrix`` block: one row per line, entries separated by commas (complex frame)."""
    e = ctx.manifest.require("j_matrix")
    chart = ctx.chart
    lines = ([(e.value, e.line)] if e.value else []) + e.block
    rows = []
    for line, lineno in lines:
        try:
            rows.append([parse_expr(t, chart, "scalar") for t in line.split(",")])
        except GcxError as exc:
            exc.details["manifest_line"] = lineno
            raise
    try:
        return JOperator(chart, rows)
    except GcxError as exc:
        raise InvalidInput(str(exc), **with_location(exc, e).details) from None


def cmd_type(ctx: Context) -> Result:
    spinor = ctx.expr("spinor", "form", required=False)
    if ctx.manifest.has("j_matrix") and ctx.manifest.has("structure"):
        raise ManifestError("give either 'structure' or 'j_matrix', not both")
    std = _structure(ctx)
    J = std[0] if std else (read_j_matrix(ctx) if ctx.manifest.has("j_matrix") else None)
    if spinor is None and J is None:
        raise ManifestError("type needs 'spinor', 'structure' or 'j_matrix'")
    if spinor is None and std is not None:
        spinor = std[1].generator
    records, witnesses = [], []
    for p in ctx.points():
        rec = {"point": point_text(p)}
        if spinor is not None:
            rec["type_spinor"] = type_at(SpinorLine(spinor), p)
        if J is not None:
            if not (J.squares_to_minus_one_at(p) and J.orthogonal_at(p)):
                raise InvalidJ("J is not an orthogonal complex structure at the point", point=point_text(p))
            rec["type_J"] = type_at(J, p)
            if spinor is not None and rec["type_J"] != rec["type_spinor"]:
                witnesses.append(rec)
        records.append(rec)
    return not witnesses, {"spinor": None if spinor is None else str(spinor), "types": records}, witnesses


def _compare(ctx: Context, got, key: str, kind: str, witnesses: list) -> None:
    want = ctx.expr(key, kind, required=False)
    if want is not None and want != got:
        witnesses.append({"key": key, "expected": str(want), "got": str(got)})


def cmd_courant(ctx: Context) -> Result:
    chart = ctx.chart
    u = GenSection(ctx.expr("u_vector", "vector", False) or PolyVector.zero(chart), ctx.expr("u_form", "form", False) or Form.zero(chart))
    v = GenSection(ctx.expr("v_vector", "vector", False) or PolyVector.zero(chart), ctx.expr("v_form", "form", False) or Form.zero(chart))
    H = ctx.expr("H", "form", required=False)
    br = courant_bracket(u, v, H)
    wit: list = []
    _compare(ctx, br.X, "expect_vector", "vector", wit)
    _compare(ctx, br.xi, "expect_form", "form", wit)
    return not wit, {"vector": str(br.X), "form": str(br.xi)}, wit


def cmd_b_transform(ctx: Context) -> Result:
    chart = ctx.chart
    B = ctx.expr("B", "form")
    wit: list = []
    if ctx.manifest.has("spinor"):
        out = b_transform(B, ctx.expr("spinor", "form"))
        _compare(ctx, out, "expect", "form", wit)
        return not wit, {"spinor": str(out)}, wit
    sec = GenSection(ctx.expr("vector", "vector", False) or PolyVector.zero(chart), ctx.expr("form", "form", False) or Form.zero(chart))
    out = b_transform(B, sec)
    _compare(ctx, out.X, "expect_vector", "vector", wit)
    _compare(ctx, out.xi, "expect_form", "form", wit)
    return not wit, {"vector": str(out.X), "form": str(out.xi)}, wit


def cmd_chevalley(ctx: Context) -> Result:
    rho1 = ctx.expr("rho1", "form")
    rho2 = ctx.expr("rho2", "form", required=False)
    if rho2 is None:
        rho2 = rho1.conjugate()
    pairing = chevalley(rho1, rho2)
    wit = []
    if not pairing:
        wit.append({"pairing": "0"})
    elif ctx.manifest.has("point"):
        from .gca import point_values

        for p in ctx.points():
            if not pairing.coeffs_at(point_values(pairing.chart, p)):
                wit.append({"point": point_text(p), "pairing": "0"})
    return not wit, {"pairing": str(pairing)}, wit


def cmd_blowup_lift(ctx: Context) -> Result:
    sigma, Z = read_bivector(ctx), read_center(ctx)
    atlas = lift_poisson(sigma, Z)
    return True, {"bivector": str(sigma), "atlas": atlas.to_dict()}, []


def _apply_overrides(ctx: Context, atlas) -> None:
    e = ctx.manifest.get("override")
    if e is None:
        return
    lines = ([(e.value, e.line)] if e.value else []) + e.block
    for line, lineno in lines:
        m = re.match(r"^(\d+)\s+(\S+)\s+(\S+)\s*:(.*)$", line.strip())
        if not m:
            raise ManifestError(f"line {lineno}: overrides look like '1 z1 v2: expr'", line=lineno)
        a = int(m.group(1))
        if not 1 <= a <= len(atlas.charts):
            raise ManifestError(f"line {lineno}: no chart {a}", line=lineno)
        lt = atlas.lifted[a - 1]
        entries = lt.entries()
        entries.pop((m.group(2), m.group(3)), None)
        entries.pop((m.group(3), m.group(2)), None)
        try:
            entries[(m.group(2), m.group(3))] = parse_expr(m.group(4), lt.chart, "scalar")
            atlas.lifted[a - 1] = HoloBivector(lt.chart, entries)
        except GcxError as exc:
            exc.details["manifest_line"] = lineno
            raise


def cmd_verify_lift(ctx: Context) -> Result:
    sigma, Z = read_bivector(ctx), read_center(ctx)
    atlas = lift_poisson(sigma, Z)
    _apply_overrides(ctx, atlas)
    res = verify_lift(sigma, atlas)
    exc = exceptional_divisor_poisson(atlas)
    flags = submanifold_conditions(sigma, Z, check_jacobi=False)
    wit = [res.witness] if not res.ok else []
    if exc != flags.conormal_abelian:
        wit.append({"exceptional_divisor_poisson": exc, "conormal_abelian": flags.conormal_abelian})
    return not wit, {
        "verified": res.ok, "exceptional_divisor_poisson": exc,
        "conormal_abelian": flags.conormal_abelian, "atlas": atlas.to_dict(),
    }, wit


def cmd_conormal(ctx: Context) -> Result:
    sigma, Z = read_bivector(ctx), read_center(ctx)
    flags = submanifold_conditions(sigma, Z)
    pts = ctx.manifest.all("point")
    points = [parse_point(e, ctx.chart, Z.tangent) for e in pts] or [{t: GaussRat(0) for t in Z.tangent}]
    records, wit = [], []
    for p in points:
        c = conormal_constants(sigma, Z, p)
        g = LieAlgebraSC(Z.l, c, "complex")
        deg = degeneracy(g)
        rec = {"point": point_text(p), "algebra": str(g), "degenerate": deg.degenerate, "obstructions": deg.to_dict()["obstructions"]}
        records.append(rec)
        if deg.degenerate != flags.is_degenerate and Z.tangent:
            wit.append({"point": point_text(p), "algebra_degenerate": deg.degenerate, "ideal_degenerate": flags.is_degenerate})
    return not wit, {
        "generators": list(Z.generators), "conditions": flags.to_dict(), "algebras": records,
    }, wit


def cmd_liealg_degeneracy(ctx: Context) -> Result:
    g = read_lie_algebra(ctx)
    res = degeneracy(g)
    cmp = degeneracy_field_compare(g)
    wit = [] if res.degenerate else [{"obstructions": res.to_dict()["obstructions"]}]
    return res.degenerate, {"algebra": str(g), "field": g.field, **res.to_dict(), "fields": cmp.to_dict()}, wit


def cmd_liealg_classify(ctx: Context) -> Result:
    g = read_lie_algebra(ctx)
    cls = classify_degenerate(g)
    wit = [{"witness": cls.witness}] if cls.kind == "failure" else []
    return cls.kind != "failure", {"algebra": str(g), **cls.to_dict()}, wit


def _cut_config(ctx: Context, default_samples: int = 100):
    from .cut import CutConfig

    try:
        return CutConfig(
            n=ctx.integer("n"),
            eps=ctx.real("eps"),
            tol=ctx.args.tol if ctx.args.tol is not None else ctx.real("tol", 1e-8),
            samples=ctx.n_points(ctx.integer("samples", default_samples)),
            seed=ctx.args.seed,
        )
    except InputError:
        raise
    except GcxError as exc:
        raise InvalidInput(str(exc)) from None


def cmd_cut_verify(ctx: Context) -> Result:
    from .cut import fd_convergence, reduced_form_check

    cfg = _cut_config(ctx)
    points = None
    samples = ctx.manifest.all("sample")
    if samples:
        points = []
        for e in samples:
            if ";" not in e.text():
                raise ManifestError(f"line {e.line}: samples look like 'w; z1, z2'", line=e.line)
            w_txt, z_txt = e.text().split(";", 1)
            w = _complex_list(w_txt)
            z = _complex_list(z_txt)
            if len(w) != 1 or len(z) != cfg.n:
                raise ManifestError(f"line {e.line}: need one w and {cfg.n} z values", line=e.line)
            points.append((w[0], z))
    rep = reduced_form_check(cfg, points=points)
    conv = fd_convergence(cfg)
    if ctx.args.csv:
        with open(ctx.args.csv, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["sample", "deviation"])
            for idx, dev in rep.per_sample:
                wr.writerow([idx, repr(dev)])
    verdict = rep.ok and conv.ok
    wit = [r.to_dict() for r in (rep, conv) if not r.ok]
    return verdict, {"reduced_form": rep.to_dict(), "convergence": conv.to_dict()}, wit


def cmd_slice_verify(ctx: Context) -> Result:
    from .cut import slice_check

    cfg = _cut_config(ctx)
    pts = None
    samples = ctx.manifest.all("sample")
    if samples:
        pts = []
        for e in samples:
            u = _complex_list(e.text())
            if len(u) != cfg.n:
                raise ManifestError(f"line {e.line}: need {cfg.n} values", line=e.line)
            pts.append(u)
    rep = slice_check(cfg, points=pts)
    return rep.ok, rep.to_dict(), ([] if rep.ok else [rep.to_dict()])


def cmd_descent_verify(ctx: Context) -> Result:
    from .cut import non_action_field, spinor_descent_check

    cfg = _cut_config(ctx)
    base = (ctx.manifest.value("base", "point") or "point").strip()
    field_kind = (ctx.manifest.value("field", "action") or "action").strip()
    if field_kind not in ("action", "non_action"):
        raise ManifestError("field must be 'action' or 'non_action'")
    rep = spinor_descent_check(cfg, base, field_fn=non_action_field if field_kind == "non_action" else None)
    out = rep.to_dict()
    out["field"] = field_kind
    return rep.ok, out, ([] if rep.ok else [out])


def cmd_homotopy(ctx: Context) -> Result:
    alpha = ctx.expr("alpha", "form")
    fiber = ctx.manifest.names("fiber")
    if not fiber:
        raise ManifestError("missing required key 'fiber'")
    eta = radial_homotopy(alpha, fiber)
    d_ok = ext_d(eta) == alpha
    flat = vanishes_along_base(eta, fiber, order=2)
    wit = []
    if not d_ok:
        wit.append({"d_eta": str(ext_d(eta))})
    if not flat:
        wit.append({"eta_not_flat_on_base": str(eta)})
    return not wit, {"eta": str(eta), "d_eta_equals_alpha": d_ok, "vanishes_to_second_order": flat}, wit


COMMANDS: Dict[str, Tuple[Callable[[Context], Result], Tuple[str, ...]]] = {
    "check-spinor": (cmd_check_spinor, ("spinor", "H", "point")),
    "type": (cmd_type, ("spinor", "structure", "omega", "bivector", "j_matrix", "point")),
    "courant": (cmd_courant, ("u_vector", "u_form", "v_vector", "v_form", "H", "expect_vector", "expect_form")),
    "b-transform": (cmd_b_transform, ("B", "spinor", "vector", "form", "expect", "expect_vector", "expect_form")),
    "chevalley": (cmd_chevalley, ("rho1", "rho2", "point")),
    "blowup-lift": (cmd_blowup_lift, ("bivector", "center")),
    "verify-lift": (cmd_verify_lift, ("bivector", "center", "override")),
    "conormal": (cmd_conormal, ("bivector", "center", "point")),
    "liealg-degeneracy": (cmd_liealg_degeneracy, ("dim", "field", "brackets")),
    "liealg-classify": (cmd_liealg_classify, ("dim", "field", "brackets")),
    "cut-verify": (cmd_cut_verify, ("n", "eps", "tol", "samples", "sample")),
    "slice-verify": (cmd_slice_verify, ("n", "eps", "tol", "samples", "sample")),
    "descent-verify": (cmd_descent_verify, ("n", "eps", "tol", "samples", "base", "field")),
    "homotopy": (cmd_homotopy, ("alpha", "fiber")),
}

CHART_KEYS = ("real", "holo")
NO_CHART = {"liealg-degeneracy", "liealg-classify", "cut-verify", "slice-verify", "descent-verify"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gcx", description="Exact checks for generalized complex blow-ups.")
    ap.add_argument("--version", action="version", version=f"gcx {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--manifest", required=True, help="manifest file")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled points (default 0)")
        sp.add_argument("--points", type=int, default=None, help="number of sampled points")
        sp.add_argument("--tol", type=float, default=None, help="tolerance for numeric checks")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
        fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
        if name == "cut-verify":
            sp.add_argument("--csv", default=None, help="write per-sample deviations to this CSV file")
        sp.set_defaults(pretty=False, csv=None)
    return ap


def run(command: str, manifest: Manifest, args: argparse.Namespace) -> Tuple[int, dict]:
    """Dispatch one command; returns (exit code, report)."""
    report = {
        "schema": SCHEMA,
        "command": command,
        "tool_version": __version__,
        "input_digest": manifest.digest,
        "seed": args.seed,
    }
    start = time.perf_counter()
    try:
        fn, keys = COMMANDS[command]
        allowed = keys if command in NO_CHART else keys + CHART_KEYS
        manifest.check_known(allowed)
        ctx = Context(manifest, args)
        verdict, result, witnesses = fn(ctx)
        report.update({"verdict": bool(verdict), "result": result, "witnesses": witnesses})
        code = 0 if verdict else 1
    except InputError as exc:
        report.update({"verdict": None, "error": exc.to_dict()})
        code = 2
    except GcxError as exc:
        report.update({"verdict": False, "error": exc.to_dict(), "witnesses": [exc.to_dict()]})
        code = 1
    if getattr(args, "timing", False):
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    return code, report


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        manifest = load_manifest(args.manifest)
    except InputError as exc:
        report = {"schema": SCHEMA, "command": args.command, "tool_version": __version__,
                  "verdict": None, "error": exc.to_dict()}
        code = 2
    else:
        code, report = run(args.command, manifest, args)
    text = json.dumps(report, sort_keys=True, indent=2 if args.pretty else None, default=_json_default)
    sys.stdout.write(text + "\n")
    return code


def _json_default(obj):
    if isinstance(obj, (GaussRat, Poly)):
        return str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not serialisable: {type(obj).__name__}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
