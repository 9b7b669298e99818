"""
First-eigenvalue bounds and the numerical checks behind them.

The Kahler-Einstein normalisation is used throughout: on the closed orbit the
KE form is kappa times the Fubini-Study form of the embedding, so the
functions f_j = kappa * Phi_j are the natural test functions and the KE
Laplacian is the embedding Laplacian divided by kappa.  With the FS metric
``g(u, v) = 2 Re <u, v>`` on tangent vectors orthogonal to a unit vector, the
Kahler form is ``omega(u, v) = -2 Im <v, u>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy

from .bly import BalancedResult, DiscreteMeasure
from .models import LieBasis, RepModel, group_action, lie_images, moment_map


@dataclass(frozen=True)
class TopologicalData:
    """Intersection numbers entering the bound.

    ``numerator`` is the pairing of F*c_1(M) with a^{d-1} on N and
    ``denominator`` the pairing of a^d; both may be sympy expressions.
    """

    n: int
    d: int
    numerator: object
    denominator: object
    label: str = ""

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("dimensions must be positive")
        if not sympy.sympify(self.denominator) > 0:
            raise ValueError("denominator must be positive")

    @property
    def volume(self):
        """Volume of N for the class a: the pairing of a^d divided by d!."""
        return sympy.sympify(self.denominator) / sympy.factorial(self.d)


def lambda1_bound(td: TopologicalData):
    """4 pi d / n * numerator / denominator, simplified exactly."""
    return sympy.nsimplify(
        sympy.simplify(4 * sympy.pi * td.d / td.n * sympy.sympify(td.numerator) / sympy.sympify(td.denominator))
    )


def grassmannian_degree(k: int, n: int) -> int:
    """Degree of Gr(k, n) in its Plucker embedding."""
    m = k * (n - k)
    num = math.factorial(m)
    den = 1
    for i in range(k):
        num *= math.factorial(i)
        den *= math.factorial(n - k + i)
    return num // den


def preset(name: str, scale=1) -> TopologicalData:
    """Presets ``pn:k`` (P^k) and ``gr:k,n`` (Gr(k, n)) with M = N, F = id and a = scale * 2 pi c_1."""
    key, _, args = name.partition(":")
    scale = sympy.nsimplify(scale)
    try:
        vals = [int(a) for a in args.split(",")] if args else []
    except ValueError as exc:
        raise ValueError(f"bad preset {name!r}") from exc
    if key == "pn" and len(vals) == 1 and vals[0] >= 1:
        m = vals[0]
        c1_top = (m + 1) ** m  # c_1 = (m+1) H and H^m = 1
    elif key == "gr" and len(vals) == 2 and 1 <= vals[0] < vals[1]:
        k, nn = vals
        m = k * (nn - k)
        c1_top = nn ** m * grassmannian_degree(k, nn)  # c_1 = n sigma_1
    else:
        raise ValueError(f"unknown preset {name!r}; use pn:k or gr:k,n")
    a = scale * 2 * sympy.pi
    return TopologicalData(m, m, a ** (m - 1) * c1_top, a ** m * c1_top, name)


def preset_table(names=("pn:1", "pn:2", "pn:3", "pn:4", "pn:5", "gr:2,4", "gr:2,5", "gr:3,6")) -> str:
    rows = []
    for name in names:
        td = preset(name)
        rows.append({
            "preset": name, "n": td.n, "d": td.d,
            "numerator": str(td.numerator), "denominator": str(td.denominator),
            "bound": str(lambda1_bound(td)),
        })
    return json.dumps(rows, indent=2)


# -- chart Laplacian ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChartGrid:
    """Points of the affine chart {x_chart = 1} of P^m, stored as complex m-vectors."""

    points: np.ndarray = field(repr=False)
    h: float = 1e-3
    chart: int = 0

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        if not 1e-4 <= self.h <= 1e-2:
            raise ValueError("step h must lie in [1e-4, 1e-2]")
        if not np.all(np.isfinite(pts)) or np.abs(pts).max(initial=0) > 1e6:
            raise ValueError("grid point at chart infinity")
        object.__setattr__(self, "points", pts)

    def lift(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.insert(z, self.chart, 1.0)


def random_chart_grid(m: int, count: int, seed: int = 0, radius: float = 1.5, h: float = 1e-3) -> ChartGrid:
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(count, m)) + 1j * rng.normal(size=(count, m))
    r = radius * rng.random(count) ** (1 / (2 * m))
    z *= (r / np.linalg.norm(z, axis=1))[:, None]
    return ChartGrid(z, h)


def complex_hessian(f: Callable, z: np.ndarray, h: float) -> np.ndarray:
    """Matrix of d^2 f / dz_i dzbar_j by second-order central differences."""
    z = np.asarray(z, dtype=complex)
    m = len(z)
    v0 = np.concatenate([z.real, z.imag])
    D = 2 * m

    def F(v):
        return f(v[:m] + 1j * v[m:])

    H = np.zeros((D, D))
    f0 = F(v0)
    eye = np.eye(D) * h
    for a in range(D):
        H[a, a] = (F(v0 + eye[a]) - 2 * f0 + F(v0 - eye[a])) / h ** 2
        for b in range(a + 1, D):
            H[a, b] = H[b, a] = (
                F(v0 + eye[a] + eye[b]) - F(v0 + eye[a] - eye[b])
                - F(v0 - eye[a] + eye[b]) + F(v0 - eye[a] - eye[b])
            ) / (4 * h ** 2)
    xx, yy, xy, yx = H[:m, :m], H[m:, m:], H[:m, m:], H[m:, :m]
    return 0.25 * (xx + yy + 1j * (xy - yx))


@dataclass(frozen=True)
class LaplacianReport:
    values: np.ndarray
    residual: float | None


def laplacian_fs(f: Callable, grid: ChartGrid, kahler_scale: float = 1.0,
                 target: Callable | None = None) -> LaplacianReport:
    """Laplacian of f for the metric kahler_scale * FS, in the affine chart.

    With s = 1 + |z|^2 the inverse FS metric is s (delta_ij + z_i zbar_j), so
    Delta f = 2 s sum_ij (delta_ij + z_i zbar_j) d_i dbar_j f / kahler_scale.
    If ``target`` is given, the report carries max |Delta f - target|.
    """
    vals = []
    for z in grid.points:
        L = complex_hessian(f, z, grid.h)
        s = 1 + float(np.vdot(z, z).real)
        ginv = s * (np.eye(len(z)) + np.outer(z, z.conj()))
        vals.append(2 * float(np.sum(ginv * L).real) / kahler_scale)
    vals = np.array(vals)
    residual = None
    if target is not None:
        residual = float(np.max(np.abs(vals - np.array([target(z) for z in grid.points]))))
    return LaplacianReport(vals, residual)


def chart_moment_component(model: RepModel, basis: LieBasis, j: int, grid: ChartGrid | None = None) -> Callable:
    """f_j = kappa Phi_j as a function of the chart coordinate (defining models)."""
    if model.kind != "defining":
        raise ValueError("chart functions are provided for projective spaces (defining models)")
    A = lie_images(model, basis)[j:j + 1]
    kappa = float(model.fano_scale)
    chart = 0 if grid is None else grid.chart

    def f(z):
        return kappa * moment_map(A, np.insert(np.asarray(z, dtype=complex), chart, 1.0))[0, 0]

    return f


def eigenfunction_residual(model: RepModel, basis: LieBasis, grid: ChartGrid) -> float:
    """max over grid and components of |Delta_KE f_j + 2 f_j|."""
    worst = 0.0
    kappa = float(model.fano_scale)
    for j in range(len(basis)):
        f = chart_moment_component(model, basis, j, grid)
        rep = laplacian_fs(f, grid, kahler_scale=kappa, target=lambda z, f=f: -2 * f(z))
        worst = max(worst, rep.residual)
    return worst


# -- moment-map identities ------------------------------------------------------


def moment_norm_identity(model: RepModel, basis: LieBasis, sample: np.ndarray) -> float:
    """max over the sample of | |kappa Phi|^2 - dim_C M |."""
    kappa = float(model.fano_scale)
    phi = moment_map(lie_images(model, basis), sample)
    return float(np.max(np.abs(kappa ** 2 * np.sum(phi ** 2, axis=1) - model.orbit_dimension)))


def _df(images, x, kappa, w) -> np.ndarray:
    # d(kappa Phi_j)(w) = 2 kappa Im <x, A_j w> for unit x and w orthogonal to x
    return 2 * kappa * np.imag(np.einsum("i,jik,k->j", x.conj(), images, w))


def kahler_form_identity(model: RepModel, basis: LieBasis, x: np.ndarray, w1: np.ndarray, w2: np.ndarray,
                         images: np.ndarray | None = None) -> float:
    """| sum_j i df_j^{1,0} ^ df_j^{0,1} (w1, w2) - omega_KE(w1, w2) | with f_j = kappa Phi_j."""
    images = lie_images(model, basis) if images is None else images
    kappa = float(model.fano_scale)
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)

    def tangent(w):
        w = np.asarray(w, dtype=complex)
        return w - np.vdot(x, w) * x

    w1, w2 = tangent(w1), tangent(w2)
    d1, d2 = _df(images, x, kappa, w1), _df(images, x, kappa, w2)
    j1, j2 = _df(images, x, kappa, 1j * w1), _df(images, x, kappa, 1j * w2)
    alpha = 0.5 * float(np.sum(d2 * j1 - d1 * j2))
    omega = -2 * kappa * float(np.imag(np.vdot(w2, w1)))
    return abs(alpha - omega)


# -- Rayleigh quotient --------------------------------------------------------


@dataclass(frozen=True)
class RayleighCertificate:
    quotient: float
    zero_mean_residual: float
    numerator: float
    denominator: float


def _gradient_sq_projective(model: RepModel, basis: LieBasis, b: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """|grad h_j|^2 in the KE metric of P^{n-1}, h_j = kappa Phi_j(b y), for unit rows y of Y."""
    images = lie_images(model, basis)
    kappa = float(model.fano_scale)
    T = group_action(model, b)
    out = np.zeros((len(Y), len(basis)))
    for i, y in enumerate(Y):
        by = T @ y
        nb = np.linalg.norm(by)
        z = by / nb
        # complex orthonormal basis of the tangent space at y
        Q, _ = np.linalg.qr(np.column_stack([y, np.eye(len(y))]))
        for u in Q[:, 1:len(y)].T:
            for w in (u, 1j * u):
                v = T @ w
                v = (v - np.vdot(z, v) * z) / nb
                out[i] += _df(images, z, kappa, v) ** 2
        out[i] /= 2 * kappa  # KE metric g(w, w) = 2 kappa |w|^2
    return out


def rayleigh_certificate(model: RepModel, basis: LieBasis, measure: DiscreteMeasure,
                         balanced: BalancedResult | np.ndarray | None = None,
                         gradient_sq: np.ndarray | None = None, metric_scale: float = 1.0) -> RayleighCertificate:
    """Rayleigh quotient of h_j = kappa Phi_j(b x) against the volume sample ``measure``.

    ``gradient_sq`` (N x dim K) overrides the analytic gradient, which is only
    available for M = N = P^{n-1} with F = id.
    """
    if balanced is None:
        b = np.eye(model.n, dtype=complex)
    elif isinstance(balanced, BalancedResult):
        b = balanced.p
    else:
        b = np.asarray(balanced, dtype=complex)
    kappa = float(model.fano_scale)
    images = lie_images(model, basis)
    h = kappa * moment_map(images, measure.points @ group_action(model, b).T)
    w = measure.weights
    zero_mean = float(np.max(np.abs(w @ h)))
    if gradient_sq is None:
        if model.kind != "defining":
            raise ValueError("analytic gradients need a defining model; pass gradient_sq")
        gradient_sq = _gradient_sq_projective(model, basis, b, measure.points)
    gradient_sq = np.asarray(gradient_sq, dtype=float)
    num = float(np.sum(w @ gradient_sq)) / metric_scale
    den = float(np.sum(w @ (h ** 2)))
    if den < 1e-12:
        raise ValueError("Rayleigh denominator vanishes")
    return RayleighCertificate(num / den, zero_mean, num, den)


def as_float(value) -> float:
    if isinstance(value, Fraction):
        return float(value)
    return float(sympy.N(value, 20))
