"""
Barycenter map of discrete measures on the closed orbit and its zeros.

For a probability measure gamma = sum w_i delta_{x_i} on M and g in SL(n, C),

    Psi(g) = sum_i w_i Phi(tau(rho(g)) x_i),       rho(g) = sqrt(g g^H),

which only depends on the coset gK.  Moving g by exp(i delta) with delta in
su(n) changes Psi to first order by -G delta, where G is the Gram matrix of
the fundamental fields in the Fubini-Study metric.  `solve_balanced` runs a
damped Newton iteration on this chart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sl

from .models import (
    LieBasis,
    RepModel,
    group_action,
    lie_images,
    orbit_residual,
    parse_model,
    polar_rho,
)


class SingularGram(RuntimeError):
    """The measure does not span V, so the Gram matrix is degenerate."""


class NoConvergence(RuntimeError):
    """Newton iteration hit ``max_iter``; ``best`` holds the best iterate."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=complex))
        w = np.asarray(self.weights, dtype=float).ravel()
        if len(pts) != len(w):
            raise ValueError("points and weights differ in length")
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero vector in measure support")
        object.__setattr__(self, "points", pts / norms[:, None])
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    @classmethod
    def uniform(cls, points) -> "DiscreteMeasure":
        pts = np.atleast_2d(points)
        return cls(pts, np.full(len(pts), 1 / len(pts)))

    def pushforward(self, model: RepModel, g: np.ndarray) -> "DiscreteMeasure":
        """Image measure under x -> tau(g) x."""
        return DiscreteMeasure(self.points @ group_action(model, g).T, self.weights)

    def orbit_residual(self, model: RepModel) -> float:
        return max(orbit_residual(model, x) for x in self.points)


def weight_basis_measure(model: RepModel) -> DiscreteMeasure:
    return DiscreteMeasure.uniform(np.eye(model.dim, dtype=complex))


@dataclass
class SolverConfig:
    tol: float = 1e-8
    max_iter: int = 50
    damping: float = 1.0
    regularization: float = 1e-10
    min_step: float = 2.0 ** -30

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must be in (0, 1]")


@dataclass
class BalancedResult:
    u: np.ndarray
    g: np.ndarray
    residual: float
    iterations: int
    trace: list
    converged: bool = True

    @property
    def p(self) -> np.ndarray:
        return sl.expm(self.u)

    def as_dict(self) -> dict:
        return {
            "u": _complex_to_json(self.u),
            "residual": self.residual,
            "iterations": self.iterations,
            "trace": list(self.trace),
            "converged": self.converged,
        }


@dataclass(frozen=True)
class AdmissibilityReport:
    passed: bool
    rank: int
    dim: int
    sigma_min: float
    condition: float


def _points_after(model: RepModel, measure: DiscreteMeasure, g: np.ndarray) -> np.ndarray:
    Y = measure.points @ group_action(model, g).T
    norms = np.linalg.norm(Y, axis=1)
    if np.any(norms < 1e-300):
        raise ValueError("group element sends a support point to zero")
    return Y / norms[:, None]


def _chart_value(images, measure, Y) -> np.ndarray:
    vals = np.einsum("ni,jik,nk->nj", Y.conj(), images, Y)
    return measure.weights @ np.real(-1j * vals)


def _chart_gram(images, measure, Y) -> np.ndarray:
    AY = np.einsum("jik,nk->nji", images, Y)
    centre = np.einsum("ni,nji->nj", Y.conj(), AY)
    Xi = AY - centre[:, :, None] * Y[:, None, :]
    G = 2 * np.real(np.einsum("n,nji,nki->jk", measure.weights, Xi.conj(), Xi))
    return (G + G.T) / 2


def bly_eval(model: RepModel, basis: LieBasis, measure: DiscreteMeasure, g: np.ndarray,
             images: np.ndarray | None = None) -> np.ndarray:
    """Psi(g) in the coordinates of ``basis``."""
    images = lie_images(model, basis) if images is None else images
    p, _ = polar_rho(g)
    return _chart_value(images, measure, _points_after(model, measure, p))


def bly_gram(model: RepModel, basis: LieBasis, measure: DiscreteMeasure, g: np.ndarray,
             images: np.ndarray | None = None) -> np.ndarray:
    """G_jk = sum_i w_i fs_pairing(rho(g) x_i, e_j, e_k)."""
    images = lie_images(model, basis) if images is None else images
    p, _ = polar_rho(g)
    return _chart_gram(images, measure, _points_after(model, measure, p))


def torus_component(basis: LieBasis, psi) -> np.ndarray:
    """Restriction of psi to the diagonal torus, as a weight in fundamental-weight coordinates.

    The i-th coordinate is the value on the coroot i*(E_ii - E_{i+1,i+1}).
    """
    n = basis.n
    out = []
    for i in range(n - 1):
        h = np.zeros((n, n), dtype=complex)
        h[i, i], h[i + 1, i + 1] = 1j, -1j
        out.append(float(np.dot(psi, basis.coords(h))))
    return np.array(out)


def hermitian_increment(basis: LieBasis, delta) -> np.ndarray:
    """i * sum_j delta_j e_j, a traceless Hermitian matrix."""
    return 1j * basis.from_coords(delta)


def jacobian_fd(model: RepModel, basis: LieBasis, measure: DiscreteMeasure, g: np.ndarray,
                step: float = 1e-4, images: np.ndarray | None = None) -> np.ndarray:
    """Central differences of t -> Psi at exp(i t e_j) rho(g), columns j.

    Re-centring the measure at rho(g) makes this the derivative whose exact value is -G.
    """
    images = lie_images(model, basis) if images is None else images
    p, _ = polar_rho(g)
    pushed = measure.pushforward(model, p)
    cols = []
    for j in range(len(basis)):
        e = np.zeros(len(basis))
        e[j] = step
        plus = bly_eval(model, basis, pushed, sl.expm(hermitian_increment(basis, e)), images)
        minus = bly_eval(model, basis, pushed, sl.expm(hermitian_increment(basis, -e)), images)
        cols.append((plus - minus) / (2 * step))
    return np.array(cols).T


def admissibility_check(model: RepModel, measure: DiscreteMeasure, tol: float = 1e-10) -> AdmissibilityReport:
    """Whether the support spans V, with the conditioning of the weighted point matrix."""
    W = np.sqrt(measure.weights)[:, None] * measure.points
    s = np.linalg.svd(W, compute_uv=False)
    s_full = np.zeros(model.dim)
    s_full[: len(s)] = s[: model.dim]
    rank = int(np.sum(s_full > tol * s_full[0]))
    sigma_min = float(s_full[-1])
    cond = float(s_full[0] / sigma_min) if sigma_min > 0 else float("inf")
    return AdmissibilityReport(rank == model.dim, rank, model.dim, sigma_min, cond)


def _result_from(g, residual, iterations, trace, converged) -> BalancedResult:
    # g = a' p' with p' = sqrt(g^H g); Psi(p') = Ad*(a')^{-1} F(g)
    _, s, Vh = np.linalg.svd(g)
    u = (Vh.conj().T * np.log(s)) @ Vh
    u = (u + u.conj().T) / 2
    u -= np.trace(u).real / len(u) * np.eye(len(u))
    return BalancedResult(u, g, residual, iterations, trace, converged)


def solve_balanced(model: RepModel, basis: LieBasis, measure: DiscreteMeasure,
                   config: SolverConfig | None = None, start: np.ndarray | None = None) -> BalancedResult:
    """Find b = exp(u) in the positive slice with Psi(b) = 0.

    Raises
    ------
    SingularGram
        If the support of the measure does not span V.
    NoConvergence
        If the residual stays above ``config.tol`` after ``config.max_iter`` steps.
    """
    config = config or SolverConfig()
    report = admissibility_check(model, measure)
    if not report.passed:
        raise SingularGram(f"support spans a {report.rank}-dimensional subspace of V (dim {report.dim})")
    images = lie_images(model, basis)
    g = np.eye(model.n, dtype=complex) if start is None else np.asarray(start, dtype=complex)
    F = _chart_value(images, measure, _points_after(model, measure, g))
    r = float(np.linalg.norm(F))
    trace = [r]
    best = (r, g)
    ridge = config.regularization * np.eye(len(basis))
    for it in range(1, config.max_iter + 1):
        if r <= config.tol:
            return _result_from(g, r, it - 1, trace, True)
        G = _chart_gram(images, measure, _points_after(model, measure, g))
        delta = np.linalg.solve(G + ridge, F)
        s = config.damping
        while True:
            g_new = sl.expm(s * hermitian_increment(basis, delta)) @ g
            F_new = _chart_value(images, measure, _points_after(model, measure, g_new))
            r_new = float(np.linalg.norm(F_new))
            if r_new < r or s <= config.min_step:
                break
            s /= 2
        g, F, r = g_new, F_new, r_new
        trace.append(r)
        if r < best[0]:
            best = (r, g)
    if r <= config.tol:
        return _result_from(g, r, config.max_iter, trace, True)
    raise NoConvergence(
        f"residual {best[0]:.3g} above tol {config.tol:.3g} after {config.max_iter} iterations",
        _result_from(best[1], best[0], config.max_iter, trace, False),
    )


# -- JSON ---------------------------------------------------------------------


def _complex_to_json(a: np.ndarray):
    a = np.asarray(a)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [_complex_to_json(x) for x in a]


def _complex_from_json(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def measure_to_json(model: RepModel, measure: DiscreteMeasure) -> dict:
    return {
        "model": model.label(),
        "points": _complex_to_json(measure.points),
        "weights": [float(w) for w in measure.weights],
    }


def measure_from_json(obj: dict) -> tuple:
    """Returns ``(model, measure)``; weights default to uniform."""
    try:
        model = parse_model(obj["model"])
        pts = _complex_from_json(obj["points"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed measure file: {exc}") from exc
    if pts.ndim != 2 or pts.shape[1] != model.dim:
        raise ValueError(f"points must be vectors of length {model.dim}")
    weights = obj.get("weights")
    if weights is None:
        return model, DiscreteMeasure.uniform(pts)
    return model, DiscreteMeasure(pts, np.asarray(weights, dtype=float))


def load_measure(path) -> tuple:
    with open(path) as fh:
        return measure_from_json(json.load(fh))
