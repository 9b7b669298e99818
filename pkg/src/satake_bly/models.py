"""
Matrix models of SL(n, C) acting on V = C^n, Lambda^k C^n and Sym^d C^n.

Each representation is realised inside the tensor power (C^n)^{(x)p} through
an isometric embedding ``S`` (p = 1, k or d) whose columns are the
orthonormal weight basis of V.  Group and Lie algebra act slot-wise on the
tensor factors, so that

    tau(g) = S^H g^{(x)p} S,        dtau(X) = S^H (sum over slots of X) S.

The maximal compact subgroup is SU(n), with Cartan involution
``theta(g) = (g^H)^{-1}``.  Basis vectors are labelled by their weights in
fundamental-weight coordinates of A_{n-1}; index 0 is the highest weight.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, combinations_with_replacement, permutations

import numpy as np
import scipy.linalg as sl
from scipy.stats import unitary_group

from .roots import RootSystem, build_root_system
from .satake import mu_connected_core, support


class IndeterminacyError(ValueError):
    """Point lies (numerically) on the indeterminacy locus of a projection."""


@dataclass(frozen=True, eq=False)
class RepModel:
    kind: str
    n: int
    param: int
    dim: int
    basis_tuples: tuple = field(repr=False)
    weight_labels: tuple = field(repr=False)
    highest_index: int
    fano_scale: Fraction
    embedding: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        """Tensor degree p of the ambient (C^n)^{(x)p}."""
        return 1 if self.kind == "defining" else self.param

    @property
    def highest_weight(self) -> tuple:
        return self.weight_labels[self.highest_index]

    @cached_property
    def root_system(self) -> RootSystem:
        return build_root_system(f"A{self.n - 1}")

    @cached_property
    def contents(self) -> np.ndarray:
        """Row b is the epsilon-content of basis vector b: weight(diag t) = contents[b] . t."""
        c = np.zeros((self.dim, self.n))
        for b, tup in enumerate(self.basis_tuples):
            for i in tup:
                c[b, i] += 1
        return c

    @cached_property
    def supports(self) -> tuple:
        rs, mu = self.root_system, self.highest_weight
        return tuple(support(rs, lam, mu) for lam in self.weight_labels)

    def label(self) -> str:
        if self.kind == "defining":
            return f"defining:{self.n}"
        return f"{self.kind}:{self.n},{self.param}"

    @property
    def orbit_dimension(self) -> int:
        """Complex dimension of the closed orbit (P^{n-1} or Gr(k, n))."""
        if self.kind == "exterior":
            return self.param * (self.n - self.param)
        return self.n - 1


def _sym_multiplicity(tup) -> int:
    counts = {}
    for t in tup:
        counts[t] = counts.get(t, 0) + 1
    out = math.factorial(len(tup))
    for c in counts.values():
        out //= math.factorial(c)
    return out


def _flat_index(tup, n) -> int:
    idx = 0
    for t in tup:
        idx = idx * n + t
    return idx


def _permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def build_model(kind: str, n: int, param: int | None = None) -> RepModel:
    """Build ``defining`` (n), ``exterior`` (n, k) or ``sym`` (n, d).

    Raises
    ------
    ValueError
        For out-of-range parameters: ``2 <= n <= 6``, ``1 <= k < n``, ``1 <= d <= 4``.
    """
    kind = kind.lower()
    if not 2 <= n <= 6:
        raise ValueError(f"n={n} out of range 2..6")
    if kind == "defining":
        tuples = [(i,) for i in range(n)]
        p, param, kappa = 1, 1, Fraction(n)
    elif kind == "exterior":
        if param is None or not 1 <= param < n:
            raise ValueError(f"exterior power needs 1 <= k < n, got k={param}")
        tuples = list(combinations(range(n), param))
        p, kappa = param, Fraction(n)
    elif kind == "sym":
        if param is None or not 1 <= param <= 4:
            raise ValueError(f"symmetric power needs 1 <= d <= 4, got d={param}")
        tuples = list(combinations_with_replacement(range(n), param))
        p, kappa = param, Fraction(n, param)
    else:
        raise ValueError(f"unknown model kind {kind!r}")

    S = np.zeros((n ** p, len(tuples)))
    for b, tup in enumerate(tuples):
        if kind == "exterior":
            scale = 1 / math.sqrt(math.factorial(p))
            for perm in permutations(range(p)):
                S[_flat_index([tup[i] for i in perm], n), b] = _permutation_sign(perm) * scale
        else:
            scale = 1 / math.sqrt(_sym_multiplicity(tup))
            for word in set(permutations(tup)):
                S[_flat_index(word, n), b] = scale

    weights = []
    for tup in tuples:
        c = [0] * n
        for i in tup:
            c[i] += 1
        weights.append(tuple(c[i] - c[i + 1] for i in range(n - 1)))
    return RepModel(kind, n, param, len(tuples), tuple(tuples), tuple(weights), 0, kappa, S)


def parse_model(text: str) -> RepModel:
    """Parse ``defining:3``, ``exterior:4,2`` or ``sym:2,2``."""
    m = re.fullmatch(r"\s*(defining|exterior|sym)\s*:\s*(\d+)\s*(?:,\s*(\d+))?\s*", text.lower())
    if not m:
        raise ValueError(f"cannot parse model {text!r}")
    kind, n, param = m.group(1), int(m.group(2)), m.group(3)
    if kind == "defining" and param is not None:
        raise ValueError("defining model takes only n")
    return build_model(kind, n, None if param is None else int(param))


def _apply_slotwise(model: RepModel, M: np.ndarray, vectors: np.ndarray, lie: bool) -> np.ndarray:
    """Apply M to every tensor slot (group) or sum over slots (Lie) of embedded columns."""
    n, p = model.n, model.degree
    cols = vectors.shape[1]
    T = vectors.reshape((n,) * p + (cols,))
    if lie:
        out = np.zeros(T.shape, dtype=complex)
        for axis in range(p):
            out += np.moveaxis(np.tensordot(M, T, axes=([1], [axis])), 0, axis)
    else:
        out = T.astype(complex)
        for axis in range(p):
            out = np.moveaxis(np.tensordot(M, out, axes=([1], [axis])), 0, axis)
    return out.reshape(n ** p, cols)


def group_action(model: RepModel, g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    S = model.embedding
    return S.T @ _apply_slotwise(model, g, S, lie=False)


def infinitesimal_action(model: RepModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    S = model.embedding
    return S.T @ _apply_slotwise(model, X, S, lie=True)


# -- su(n) ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Basis of su(n) orthonormal for -B/2, where B(X, Y) = 2n tr(XY)."""

    n: int
    elements: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def coords(self, X: np.ndarray) -> np.ndarray:
        """Coefficients of X in the basis: c_j = -B(X, e_j)/2."""
        return np.real(-self.n * np.einsum("ij,kji->k", X, self.elements))

    def from_coords(self, c) -> np.ndarray:
        return np.einsum("k,kij->ij", np.asarray(c, dtype=float), self.elements)

    @cached_property
    def diagonal_indices(self) -> tuple:
        return tuple(j for j, e in enumerate(self.elements) if np.allclose(e, np.diag(np.diag(e))))


def lie_basis(n: int) -> LieBasis:
    out = []
    s = 1 / math.sqrt(2 * n)
    for j in range(n):
        for k in range(j + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[j, k] = E[k, j] = 1j * s
            out.append(E)
            E = np.zeros((n, n), dtype=complex)
            E[j, k], E[k, j] = s, -s
            out.append(E)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1
        d[l] = -l
        out.append(np.diag(1j * d / math.sqrt(l * (l + 1) * n)))
    return LieBasis(n, np.array(out))


def killing_form(X: np.ndarray, Y: np.ndarray) -> complex:
    n = X.shape[0]
    return 2 * n * np.trace(X @ Y)


def killing_form_by_ad(X: np.ndarray, Y: np.ndarray) -> complex:
    """tr(ad X ad Y) computed from the adjoint action on gl(n); agrees with B on sl(n)."""
    n = X.shape[0]
    eye = np.eye(n)

    def ad(Z):
        return np.kron(Z, eye) - np.kron(eye, Z.T)

    return np.trace(ad(X) @ ad(Y))


def lie_images(model: RepModel, basis: LieBasis) -> np.ndarray:
    """Stack of dtau(e_j), each anti-Hermitian of size dim V."""
    return np.array([infinitesimal_action(model, e) for e in basis])


# -- moment map ---------------------------------------------------------------


def moment_map(images: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Phi_j = -i <A_j x, x>/|x|^2 for each row x of X; ``images`` from `lie_images`."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    norms = np.sum(np.abs(X) ** 2, axis=1)
    if np.any(norms == 0):
        raise ValueError("moment map of the zero vector")
    vals = np.einsum("ni,jik,nk->nj", X.conj(), images, X)
    return np.real(-1j * vals) / norms[:, None]


def moment_map_point(model: RepModel, basis: LieBasis, x: np.ndarray) -> np.ndarray:
    return moment_map(lie_images(model, basis), x)[0]


def coadjoint(basis: LieBasis, a: np.ndarray, phi) -> np.ndarray:
    """Ad*(a) phi for a in SU(n), with k* identified with k by the invariant form."""
    return basis.coords(a @ basis.from_coords(phi) @ a.conj().T)


def torus_moment(model: RepModel, X: np.ndarray) -> np.ndarray:
    """Torus part of the moment image in fundamental-weight coordinates: sum |x_b|^2 lambda_b / |x|^2."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    p = np.abs(X) ** 2
    p /= p.sum(axis=1, keepdims=True)
    return p @ np.array(model.weight_labels, dtype=float)


def weight_on_diagonal(weight, t) -> float:
    """Evaluate a weight (fundamental-weight coordinates) on diag(t), t traceless."""
    partial = np.cumsum(np.asarray(t, dtype=float))
    return float(np.dot(np.asarray(weight, dtype=float), partial[: len(weight)]))


# -- polar decomposition ------------------------------------------------------


def hermitian_sqrt(A: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if not np.allclose(A, A.conj().T, atol=tol * max(1.0, np.linalg.norm(A))):
        raise ValueError("matrix is not Hermitian")
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    if w.min() < -tol * max(1.0, abs(w).max()):
        raise ValueError(f"matrix has negative eigenvalue {w.min():.3g}")
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.conj().T


def polar_rho(g: np.ndarray) -> tuple:
    """``g = p a`` with ``p = sqrt(g g^H)`` positive Hermitian and ``a`` unitary."""
    g = np.asarray(g, dtype=complex)
    # via the SVD g = U s V^H, which stays accurate for badly conditioned g
    U, s, Vh = np.linalg.svd(g)
    if not np.all(np.isfinite(s)) or s[-1] <= np.finfo(float).tiny * max(s[0], 1.0) or s[-1] == 0:
        raise ValueError("matrix is singular")
    p = (U * s) @ U.conj().T
    return (p + p.conj().T) / 2, U @ Vh


def random_sl(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    g = sl.expm(scale * Z / math.sqrt(2 * n))
    return g / np.linalg.det(g) ** (1 / n)


# -- Satake limits and projections -------------------------------------------


@dataclass(frozen=True, eq=False)
class RayLimit:
    I: frozenset
    rank: int
    limit: np.ndarray = field(repr=False)
    predicted: np.ndarray = field(repr=False)
    numeric_rank: int
    error: float


def _as_diagonal(H, n) -> np.ndarray:
    H = np.asarray(H)
    if H.ndim == 2:
        if not np.allclose(H, np.diag(np.diag(H))):
            raise ValueError("H must be diagonal")
        H = np.diag(H)
    H = np.real_if_close(H).astype(float)
    if H.shape != (n,):
        raise ValueError(f"H must have {n} diagonal entries")
    if abs(H.sum()) > 1e-10 * max(1.0, np.abs(H).max()):
        raise ValueError("H must be traceless")
    return H


def predicted_subset(model: RepModel, H) -> frozenset:
    """Largest mu-connected subset of the simple roots vanishing on H."""
    H = _as_diagonal(H, model.n)
    alphas = H[:-1] - H[1:]
    if np.any(alphas < -1e-12):
        raise ValueError("H is not dominant")
    zero = [i for i, a in enumerate(alphas) if abs(a) <= 1e-12]
    return mu_connected_core(model.root_system, zero, model.highest_weight)


def subspace_mask(model: RepModel, subset) -> np.ndarray:
    """Boolean mask of basis vectors spanning V_I (support inside I)."""
    subset = frozenset(subset)
    return np.array([s <= subset for s in model.supports])


def satake_ray_limit(model: RepModel, H, t: float = 40.0, cluster_tol: float = 1e-10) -> RayLimit:
    """Trace-normalised ``tau(exp tH) tau(exp tH)^H`` at large t against the predicted projector onto V_I."""
    H = _as_diagonal(H, model.n)
    I = predicted_subset(model, H)
    levels = model.contents @ H
    # rescale g so the top weight has eigenvalue 1 (tau is homogeneous of degree p)
    g = sl.expm(t * np.diag(H - levels.max() / model.degree))
    T = group_action(model, g)
    A = T @ T.conj().T
    A /= np.trace(A).real
    mask = subspace_mask(model, I)
    P = np.diag(mask.astype(float)) / mask.sum()
    w = np.linalg.eigvalsh(A)
    numeric_rank = int(np.sum(w >= w.max() - cluster_tol))
    return RayLimit(I, int(mask.sum()), A, P, numeric_rank, float(np.linalg.norm(A - P, 2)))


def project_to_subspace(model: RepModel, subset, x: np.ndarray, eps: float = 1e-8) -> np.ndarray:
    """Normalised orthogonal projection of x onto V_I.

    Raises
    ------
    IndeterminacyError
        If ``|pi(x)| < eps |x|``.
    """
    x = np.asarray(x, dtype=complex)
    mask = subspace_mask(model, subset)
    y = np.where(mask, x, 0)
    ny = np.linalg.norm(y)
    if ny < eps * np.linalg.norm(x):
        raise IndeterminacyError("point is orthogonal to V_I; projection undefined")
    return y / ny


# -- closed orbit ---------------------------------------------------------------


def highest_vector(model: RepModel) -> np.ndarray:
    x = np.zeros(model.dim, dtype=complex)
    x[model.highest_index] = 1
    return x


def orbit_point(model: RepModel, a: np.ndarray) -> np.ndarray:
    """tau(a) x0 computed from the leading columns of a."""
    a = np.asarray(a, dtype=complex)
    if model.kind == "defining":
        return a[:, 0].copy()
    if model.kind == "exterior":
        k = model.param
        return np.array([np.linalg.det(a[list(J), :k]) for J in model.basis_tuples])
    v = a[:, 0]
    return np.array([math.sqrt(_sym_multiplicity(T)) * np.prod(v[list(T)]) for T in model.basis_tuples])


def sample_orbit(model: RepModel, count: int, seed: int | None = 0) -> np.ndarray:
    """Points ``a . x0`` for Haar-random unitary ``a``; rows are unit vectors."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    mats = unitary_group.rvs(model.n, size=count, random_state=rng)
    if count == 1:
        mats = mats[None]
    return np.array([orbit_point(model, a) for a in mats])


def fundamental_field(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Tangent part of A x at the unit vector x."""
    Ax = A @ x
    return Ax - np.vdot(x, Ax) * x


def fs_pairing(model: RepModel, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """Fubini-Study inner product of the fundamental fields of u, v in su(n) at x."""
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    xu = fundamental_field(infinitesimal_action(model, u), x)
    xv = fundamental_field(infinitesimal_action(model, v), x)
    return float(2 * np.real(np.vdot(xv, xu)))


def _plucker_coordinate(model: RepModel, x, index, tup) -> complex:
    if len(set(tup)) < len(tup):
        return 0.0
    order = sorted(range(len(tup)), key=lambda i: tup[i])
    return _permutation_sign(order) * x[index[tuple(sorted(tup))]]


def plucker_residual(model: RepModel, x: np.ndarray) -> float:
    """Largest violation of the Plucker relations by a unit vector of Lambda^k C^n."""
    if model.kind != "exterior":
        raise ValueError("Plucker relations apply to exterior powers")
    x = np.asarray(x, dtype=complex) / np.linalg.norm(x)
    n, k = model.n, model.param
    index = {t: b for b, t in enumerate(model.basis_tuples)}
    worst = 0.0
    for I in combinations(range(n), k - 1):
        for J in combinations(range(n), k + 1):
            total = 0j
            for l, j in enumerate(J):
                total += (-1) ** l * _plucker_coordinate(model, x, index, I + (j,)) * _plucker_coordinate(
                    model, x, index, J[:l] + J[l + 1:]
                )
            worst = max(worst, abs(total))
    return worst


def catalecticant_residual(model: RepModel, x: np.ndarray) -> float:
    """sigma_2 / sigma_1 of the n x n^{d-1} flattening of the symmetric tensor of x."""
    if model.kind != "sym":
        raise ValueError("catalecticant test applies to symmetric powers")
    T = model.embedding @ np.asarray(x, dtype=complex)
    s = np.linalg.svd(T.reshape(model.n, -1), compute_uv=False)
    return float(s[1] / s[0]) if len(s) > 1 else 0.0


def orbit_residual(model: RepModel, x: np.ndarray) -> float:
    if model.kind == "exterior":
        return plucker_residual(model, x)
    if model.kind == "sym":
        return catalecticant_residual(model, x)
    return 0.0


def on_orbit(model: RepModel, x: np.ndarray, tol: float = 1e-8) -> bool:
    return orbit_residual(model, x) <= tol
