"""Floating-point checks for the symplectic cut of ``C x C^n``.

The circle acts by ``(w, z) -> (e^{it} w, e^{-it} z)`` with moment map
``mu = (|z|^2 - |w|^2) / 2``.  On the level ``mu = eps^2 / 2`` the map
``kappa(w, z) = (w z / |z|, [z])`` identifies the quotient with the
blow-up of ``C^n`` at the origin, and the reduced form is
``omega_st + eps^2 omega_FS``.

Tangent vectors are complex arrays ``(dw, dz_1..dz_n)``.  With
``omega_st = (i/2) sum dz ^ dzbar`` one has
``omega_st(A, B) = Im(sum conj(A_j) B_j)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .errors import InvalidInput, SampleInsideBall, SampleOnZeroZ, ZeroZ


@dataclass(frozen=True)
class CutConfig:
    n: int
    eps: float
    tol: float = 1e-8
    samples: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("fiber dimension must be positive")
        if not self.eps > 0:
            raise InvalidInput("eps must be positive")
        if not self.tol > 0:
            raise InvalidInput("tolerance must be positive")
        if self.samples < 1:
            raise InvalidInput("sample count must be positive")


# ----------------------------------------------------------------------
# maps
# ----------------------------------------------------------------------

def moment(w: complex, z: Sequence[complex]) -> float:
    z = np.asarray(z, dtype=complex)
    return 0.5 * (float(np.vdot(z, z).real) - abs(w) ** 2)


def kappa(w: complex, z: Sequence[complex], chart: Optional[int] = None):
    """``(w z/|z|, u, k)`` with ``u`` the affine coordinates of ``[z]`` in chart ``k``."""
    z = np.asarray(z, dtype=complex)
    r = float(np.linalg.norm(z))
    if r == 0.0:
        raise ZeroZ("kappa is undefined at z = 0")
    k = int(np.argmax(np.abs(z))) if chart is None else chart
    u = np.delete(z / z[k], k)
    return w * z / r, u, k


def omega_st(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.imag(np.vdot(A, B)))


def fs_matrix(u: np.ndarray) -> np.ndarray:
    """``((1+|u|^2) delta_jk - conj(u_j) u_k) / (1+|u|^2)^2``."""
    s = 1.0 + float(np.vdot(u, u).real)
    return (s * np.eye(len(u)) - np.outer(np.conj(u), u)) / s**2


def omega_fs(u: np.ndarray, A: np.ndarray, B: np.ndarray) -> float:
    """``(i/2) h_jk du_j ^ dubar_k`` evaluated on ``(A, B)``."""
    if len(u) == 0:
        return 0.0
    return float(-np.imag(A @ fs_matrix(u) @ np.conj(B)))


def kappa_differential(w: complex, z: np.ndarray, k: int, dw: complex, dz: np.ndarray):
    """Analytic differential of ``kappa`` (fixed chart ``k``)."""
    r = float(np.linalg.norm(z))
    dr = float(np.real(np.vdot(z, dz))) / r
    dF = dw * z / r + w * dz / r - w * z * dr / r**2
    du = np.delete(dz / z[k] - z * dz[k] / z[k] ** 2, k)
    return dF, du


# ----------------------------------------------------------------------
# sampling and tangent spaces
# ----------------------------------------------------------------------

def sample_level_point(rng: np.random.Generator, n: int, eps: float) -> Tuple[complex, np.ndarray]:
    w = complex(rng.normal(), rng.normal())
    d = rng.normal(size=n) + 1j * rng.normal(size=n)
    d /= np.linalg.norm(d)
    z = d * math.sqrt(eps**2 + abs(w) ** 2)
    return w, z


def to_real(v: np.ndarray) -> np.ndarray:
    return np.concatenate([[c.real, c.imag] for c in v])


def to_complex(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


def level_tangent_basis(w: complex, z: np.ndarray) -> List[np.ndarray]:
    """Orthonormal basis of ``ker d mu`` as complex tangent vectors ``(dw, dz)``."""
    grad = to_real(np.concatenate([[-w], z]))  # d mu(v) = grad . v in real coordinates
    _, _, vt = np.linalg.svd(grad.reshape(1, -1))
    return [to_complex(row) for row in vt[1:]]


# ----------------------------------------------------------------------
# reduced form identity
# ----------------------------------------------------------------------

def _lhs(eps: float, u, dF_a, du_a, dF_b, du_b) -> float:
    return omega_st(dF_a, dF_b) + eps**2 * omega_fs(u, du_a, du_b)


def fd_differential(w: complex, z: np.ndarray, k: int, v: np.ndarray, h: float):
    def ev(t):
        F, u, _ = kappa(w + t * v[0], z + t * v[1:], chart=k)
        return F, u

    Fp, up = ev(h)
    Fm, um = ev(-h)
    return (Fp - Fm) / (2 * h), (up - um) / (2 * h)


@dataclass
class Report:
    name: str
    ok: bool
    values: Dict[str, object] = field(default_factory=dict)
    per_sample: List[Tuple[int, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"check": self.name, "ok": self.ok}
        out.update(self.values)
        return out


def reduced_form_check(config: CutConfig, fd_step: float = 1e-6, points=None) -> Report:
    """Max deviation of ``kappa^*(omega_st + eps^2 omega_FS)`` from ``omega_st`` on the level set."""
    rng = np.random.default_rng(config.seed)
    eps = config.eps
    if points is None:
        points = [sample_level_point(rng, config.n, eps) for _ in range(config.samples)]
    max_dev = 0.0
    max_fd = 0.0
    max_level = 0.0
    per_sample = []
    for idx, (w, z) in enumerate(points):
        z = np.asarray(z, dtype=complex)
        if not np.any(z):
            raise SampleOnZeroZ("sample has z = 0")
        max_level = max(max_level, abs(moment(w, z) - 0.5 * eps**2))
        _, u, k = kappa(w, z)
        T = level_tangent_basis(w, z)
        sample_dev = 0.0
        an = [kappa_differential(w, z, k, v[0], v[1:]) for v in T]
        fd = [fd_differential(w, z, k, v, fd_step) for v in T]
        for a, b in itertools.combinations(range(len(T)), 2):
            rhs = omega_st(T[a], T[b])
            lhs = _lhs(eps, u, an[a][0], an[a][1], an[b][0], an[b][1])
            lhs_fd = _lhs(eps, u, fd[a][0], fd[a][1], fd[b][0], fd[b][1])
            sample_dev = max(sample_dev, abs(lhs - rhs))
            max_fd = max(max_fd, abs(lhs_fd - rhs))
        max_dev = max(max_dev, sample_dev)
        per_sample.append((idx, sample_dev))
    ok = max_dev <= config.tol and max_fd <= max(config.tol, 1e-6) and max_level <= config.tol
    return Report("reduced_form", ok, {
        "n": config.n, "eps": eps, "samples": len(points),
        "max_deviation": max_dev, "max_deviation_fd": max_fd, "max_level_error": max_level,
        "tol": config.tol,
    }, per_sample)


# ----------------------------------------------------------------------
# convergence study in extended precision
# ----------------------------------------------------------------------

def _mp_kappa(w, z, k):
    r = mpmath.sqrt(mpmath.fsum(abs(c) ** 2 for c in z))
    F = [w * c / r for c in z]
    u = [c / z[k] for j, c in enumerate(z) if j != k]
    return F, u


def _mp_omega(A, B):
    return mpmath.im(mpmath.fsum(mpmath.conj(a) * b for a, b in zip(A, B)))


def _mp_fs(u, A, B):
    if not u:
        return mpmath.mpf(0)
    s = 1 + mpmath.fsum(abs(c) ** 2 for c in u)
    total = mpmath.mpc(0)
    for j in range(len(u)):
        for l in range(len(u)):
            h = ((s if j == l else 0) - mpmath.conj(u[j]) * u[l]) / s**2
            total += A[j] * h * mpmath.conj(B[l])
    return -mpmath.im(total)


def fd_convergence(config: CutConfig, steps=(1e-4, 1e-5, 1e-6), points: int = 5, dps: int = 40) -> Report:
    """Deviation of the finite-difference identity versus step size, and the fitted order."""
    rng = np.random.default_rng(config.seed + 1)
    eps = config.eps
    errs = []
    with mpmath.workdps(dps):
        samples = []
        for _ in range(points):
            w, z = sample_level_point(rng, config.n, eps)
            T = level_tangent_basis(w, z)
            # project the float basis onto the exact level in high precision
            wm = mpmath.mpc(w)
            zm = [mpmath.mpc(c) for c in z]
            scale = mpmath.sqrt((eps**2 + abs(wm) ** 2) / mpmath.fsum(abs(c) ** 2 for c in zm))
            zm = [c * scale for c in zm]
            k = int(np.argmax(np.abs(z)))
            samples.append((wm, zm, k, [[mpmath.mpc(x) for x in v] for v in T]))
        for h in steps:
            hm = mpmath.mpf(h)
            worst = mpmath.mpf(0)
            for wm, zm, k, T in samples:
                diffs = []
                for v in T:
                    Fp, up = _mp_kappa(wm + hm * v[0], [c + hm * d for c, d in zip(zm, v[1:])], k)
                    Fm, um = _mp_kappa(wm - hm * v[0], [c - hm * d for c, d in zip(zm, v[1:])], k)
                    diffs.append(([(a - b) / (2 * hm) for a, b in zip(Fp, Fm)],
                                  [(a - b) / (2 * hm) for a, b in zip(up, um)]))
                _, u = _mp_kappa(wm, zm, k)
                for a, b in itertools.combinations(range(len(T)), 2):
                    lhs = _mp_omega(diffs[a][0], diffs[b][0]) + eps**2 * _mp_fs(u, diffs[a][1], diffs[b][1])
                    rhs = _mp_omega(T[a], T[b])
                    worst = max(worst, abs(lhs - rhs))
            errs.append(float(worst))
    logs_h = np.log(np.asarray(steps, dtype=float))
    logs_e = np.log(np.asarray(errs))
    order = float(np.polyfit(logs_h, logs_e, 1)[0])
    ok = 1.7 <= order <= 2.3
    return Report("fd_convergence", ok, {
        "n": config.n, "eps": eps, "steps": list(steps), "errors": errs, "order": order,
    })


# ----------------------------------------------------------------------
# slice
# ----------------------------------------------------------------------

def slice_map(u: np.ndarray, eps: float) -> Tuple[complex, np.ndarray]:
    r2 = float(np.vdot(u, u).real)
    if r2 <= eps**2:
        raise SampleInsideBall("slice needs |u| > eps", norm=math.sqrt(r2), eps=eps)
    return complex(math.sqrt(r2 - eps**2)), np.asarray(u, dtype=complex)


def slice_differential(u: np.ndarray, eps: float, du: np.ndarray):
    w, _ = slice_map(u, eps)
    dw = float(np.real(np.vdot(u, du))) / w.real
    return np.concatenate([[dw], du])


def blow_down_inverse(F: np.ndarray, eps: float) -> np.ndarray:
    """Recover ``u`` from ``kappa(slice(u))`` away from the exceptional divisor."""
    r = float(np.linalg.norm(F))
    return F * math.sqrt(r**2 + eps**2) / r


def sample_outside_ball(rng: np.random.Generator, n: int, eps: float) -> np.ndarray:
    d = rng.normal(size=n) + 1j * rng.normal(size=n)
    d /= np.linalg.norm(d)
    return d * math.sqrt(eps**2 + rng.uniform(0.2, 3.0))


def slice_check(config: CutConfig, points=None, fd_step: float = 1e-6) -> Report:
    rng = np.random.default_rng(config.seed)
    eps, n = config.eps, config.n
    if points is None:
        points = [sample_outside_ball(rng, n, eps) for _ in range(config.samples)]
    points = [np.asarray(u, dtype=complex) for u in points]
    level, pull, pull_fd, agree, recon = 0.0, 0.0, 0.0, 0.0, 0.0
    basis = [np.eye(n, dtype=complex)[j] * s for j in range(n) for s in (1, 1j)]
    images = []
    for u in points:
        w, z = slice_map(u, eps)
        level = max(level, abs(moment(w, z) - 0.5 * eps**2))
        D = [slice_differential(u, eps, e) for e in basis]
        Dfd = []
        for e in basis:
            wp, zp = slice_map(u + fd_step * e, eps)
            wm, zm = slice_map(u - fd_step * e, eps)
            Dfd.append((np.concatenate([[wp], zp]) - np.concatenate([[wm], zm])) / (2 * fd_step))
        F, uu, k = kappa(w, z)
        kd = [kappa_differential(w, z, k, v[0], v[1:]) for v in D]
        for a, b in itertools.combinations(range(len(basis)), 2):
            target = omega_st(basis[a], basis[b])
            pull = max(pull, abs(omega_st(D[a], D[b]) - target))
            pull_fd = max(pull_fd, abs(omega_st(Dfd[a], Dfd[b]) - target))
            lhs = _lhs(eps, uu, kd[a][0], kd[a][1], kd[b][0], kd[b][1])
            agree = max(agree, abs(lhs - target))
        recon = max(recon, float(np.max(np.abs(blow_down_inverse(F, eps) - u))))
        images.append((F, z / np.linalg.norm(z)))
    # distinct samples must have distinct images
    min_sep = math.inf
    for (i, (Fa, pa)), (j, (Fb, pb)) in itertools.combinations(enumerate(images), 2):
        if np.linalg.norm(points[i] - points[j]) > 1e-9:
            min_sep = min(min_sep, float(np.linalg.norm(Fa - Fb)))
    injective = min_sep > 0 and recon <= 1e-9
    ok = level <= 1e-12 * max(1.0, eps**2) * 10 and pull <= config.tol and pull_fd <= max(config.tol, 1e-6) \
        and agree <= config.tol and injective
    return Report("slice", ok, {
        "n": n, "eps": eps, "samples": len(points),
        "max_level_error": level, "max_pullback_deviation": pull, "max_pullback_deviation_fd": pull_fd,
        "max_kappa_identity_deviation": agree, "max_reconstruction_error": recon,
        "min_image_separation": None if min_sep == math.inf else min_sep, "injective": injective,
        "tol": config.tol,
    })


# ----------------------------------------------------------------------
# spinor descent
# ----------------------------------------------------------------------

NumForm = Dict[int, complex]


def _wedge(a: NumForm, b: NumForm) -> NumForm:
    out: NumForm = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            s = 0
            x = mb
            while x:
                low = x & -x
                s += bin(ma & ~(low * 2 - 1)).count("1")
                x ^= low
            c = ca * cb * (-1 if s & 1 else 1)
            out[ma | mb] = out.get(ma | mb, 0) + c
    return out


def _exp_form(omega: NumForm) -> NumForm:
    total: NumForm = {0: 1.0 + 0j}
    term: NumForm = {0: 1.0 + 0j}
    j = 0
    while True:
        j += 1
        term = {m: c / j for m, c in _wedge(omega, term).items()}
        if not any(abs(c) > 0 for c in term.values()):
            return total
        for m, c in term.items():
            total[m] = total.get(m, 0) + c


def _contract(X: np.ndarray, rho: NumForm) -> NumForm:
    out: NumForm = {}
    for m, c in rho.items():
        bit_list = [j for j in range(m.bit_length()) if (m >> j) & 1]
        for pos, j in enumerate(bit_list):
            if X[j] == 0:
                continue
            nm = m & ~(1 << j)
            out[nm] = out.get(nm, 0) + (-1) ** pos * X[j] * c
    return out


def _evaluate(rho: NumForm, vectors: Sequence[np.ndarray]) -> complex:
    k = len(vectors)
    total = 0j
    V = np.array(vectors).T if k else None
    for m, c in rho.items():
        bl = [j for j in range(m.bit_length()) if (m >> j) & 1]
        if len(bl) != k:
            continue
        total += c * (np.linalg.det(V[bl, :]) if k else 1.0)
    return total


@dataclass(frozen=True)
class DescentModel:
    """Flat model ``C_w x R^{2m} x C^n`` with real coordinates ``(w, base, z)``."""

    n: int
    base_dim: int

    @property
    def dim(self) -> int:
        return 2 + self.base_dim + 2 * self.n

    def z_slice(self) -> slice:
        return slice(2 + self.base_dim, self.dim)

    def omega(self) -> NumForm:
        # Re/Im pairs (x, y) carry dx^dy; the base carries the standard form too
        om: NumForm = {}
        for p in range(self.dim // 2):
            om[(1 << (2 * p)) | (1 << (2 * p + 1))] = 1.0
        return om

    def action_field(self, x: np.ndarray) -> np.ndarray:
        X = np.zeros(self.dim)
        w = complex(x[0], x[1])
        iw = 1j * w
        X[0], X[1] = iw.real, iw.imag
        zs = self.z_slice()
        z = x[zs][0::2] + 1j * x[zs][1::2]
        X[zs] = to_real(-1j * z)
        return X

    def dmu(self, x: np.ndarray) -> NumForm:
        g = np.zeros(self.dim)
        g[0], g[1] = -x[0], -x[1]
        zs = self.z_slice()
        g[zs] = x[zs]
        return {1 << j: complex(g[j]) for j in range(self.dim) if g[j] != 0}

    def sample(self, rng: np.random.Generator, eps: float) -> np.ndarray:
        w, z = sample_level_point(rng, self.n, eps)
        base = rng.normal(size=self.base_dim)
        return np.concatenate([[w.real, w.imag], base, to_real(z)])


def _max_abs(f: NumForm) -> float:
    return float(max((abs(c) for c in f.values()), default=0.0))


def spinor_descent_check(config: CutConfig, base: str = "point",
                         field_fn: Optional[Callable[[DescentModel, np.ndarray], np.ndarray]] = None) -> Report:
    """Residuals of ``(X - i d mu).rho`` and ``iota_X i^* rho`` at level-set samples.

    ``field_fn`` replaces the circle action field (negative controls).
    The opposite sign ``(X + i d mu).rho`` is reported alongside.
    """
    if base == "point":
        base_dim = 0
    elif base in ("R2", "plane"):
        base_dim = 2
    else:
        raise InvalidInput(f"unknown base {base!r}")
    model = DescentModel(config.n, base_dim)
    rng = np.random.default_rng(config.seed)
    rho = _exp_form({m: 1j * c for m, c in model.omega().items()})
    worst_minus = worst_plus = worst_restricted = 0.0
    for _ in range(config.samples):
        x = model.sample(rng, config.eps)
        X = model.action_field(x) if field_fn is None else field_fn(model, x)
        dmu = model.dmu(x)
        iota = _contract(X, rho)
        wedge = _wedge(dmu, rho)
        minus = {m: iota.get(m, 0) - 1j * wedge.get(m, 0) for m in set(iota) | set(wedge)}
        plus = {m: iota.get(m, 0) + 1j * wedge.get(m, 0) for m in set(iota) | set(wedge)}
        worst_minus = max(worst_minus, _max_abs(minus))
        worst_plus = max(worst_plus, _max_abs(plus))
        # tangent space of the level set in real coordinates
        g = np.array([dmu.get(1 << j, 0).real for j in range(model.dim)])
        _, _, vt = np.linalg.svd(g.reshape(1, -1))
        T = list(vt[1:])
        for k in range(0, len(T) + 1):
            for S in itertools.combinations(range(len(T)), k):
                val = _evaluate(rho, [X] + [T[s] for s in S])
                worst_restricted = max(worst_restricted, abs(val))
    worst_restricted = float(worst_restricted)
    ok = bool(worst_minus <= 1e-10 and worst_restricted <= 1e-10)
    vanishing = "minus" if worst_minus <= 1e-10 else ("plus" if worst_plus <= 1e-10 else "neither")
    return Report("spinor_descent", ok, {
        "n": config.n, "base": base, "samples": config.samples,
        "residual_X_minus_i_dmu": worst_minus, "residual_X_plus_i_dmu": worst_plus,
        "residual_iota_X_restricted": worst_restricted, "vanishing_sign": vanishing,
        "H_contraction": 0.0,
    })


def non_action_field(model: DescentModel, x: np.ndarray) -> np.ndarray:
    """Rotates ``w`` and ``z`` in the same direction; not the cut action."""
    X = model.action_field(x)
    zs = model.z_slice()
    X[zs] = -X[zs]
    return X
