"""
Torus-level orbitope geometry.

Everything lives in the real span of the weights, with weights in
fundamental-weight coordinates and the invariant form of the root system.
The moment polytope of V(mu) is conv(W . mu); the face attached to a
mu-connected subset I is the orbit of mu under the reflections in I and
lies in the affine space mu + span(I).  Cones are described by generators
u in a_I = {u : B(u, alpha_i) = 0 for i in I} with B(u, alpha_j) >= 0 for
j outside I, namely the fundamental weights varpi_j, j not in I.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

from .roots import RootSystem, Weight, fundamental_weight
from .satake import is_mu_connected
from .weights import _check_dominant_integral


@dataclass(frozen=True, eq=False)
class MomentPolytope:
    root_system: RootSystem
    highest: Weight
    vertices: frozenset

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, reverse=True)

    def barycenter(self) -> tuple:
        n = len(self.vertices)
        return tuple(sum((Fraction(v[i]) for v in self.vertices), Fraction(0)) / n
                     for i in range(self.root_system.rank))


@dataclass(frozen=True)
class FaceDescriptor:
    I: frozenset
    Y: tuple
    Z: tuple
    vertex_set: frozenset


@dataclass(frozen=True)
class ConeSystem:
    I: frozenset
    generators: tuple
    apex: Weight | None = None


def moment_polytope(rs: RootSystem, mu) -> MomentPolytope:
    mu = _check_dominant_integral(rs, mu)
    return MomentPolytope(rs, mu, rs.weyl_orbit(mu))


def _in_span(rs: RootSystem, vec, subset) -> bool:
    return all(c == 0 for i, c in enumerate(rs.weight_to_root(vec)) if i not in subset)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def split_highest_weight(rs: RootSystem, mu, subset) -> tuple:
    """Decompose ``mu = Y + Z`` with Y in span(I) and Z orthogonal to span(I)."""
    idx = sorted(subset)
    if not idx:
        return (0,) * rs.rank, tuple(mu)
    gram = sympy.Matrix([[rs.simple_gram[i][j] for j in idx] for i in idx])
    rhs = sympy.Matrix([sympy.Rational(mu[i]) * sympy.Rational(rs.half_norms[i]) for i in idx])
    sol = gram.LUsolve(rhs)
    coeffs = [Fraction(0)] * rs.rank
    for k, i in enumerate(idx):
        coeffs[i] = Fraction(int(sol[k].p), int(sol[k].q))
    Y = rs.root_to_weight(coeffs)
    return Y, _sub(mu, Y)


def face_of_subset(polytope: MomentPolytope, subset: Iterable[int]) -> FaceDescriptor:
    rs, mu = polytope.root_system, polytope.highest
    subset = frozenset(subset)
    if not is_mu_connected(rs, subset, mu):
        raise ValueError(f"{sorted(subset)} is not mu-connected for mu={mu}")
    Y, Z = split_highest_weight(rs, mu, subset)
    verts = rs.weyl_orbit(mu, generators=sorted(subset))
    return FaceDescriptor(subset, Y, Z, frozenset(verts))


def face_by_brute_force(polytope: MomentPolytope, subset: Iterable[int]) -> frozenset:
    """Vertices ``v`` with ``v - mu`` in span(I)."""
    subset = frozenset(subset)
    rs, mu = polytope.root_system, polytope.highest
    return frozenset(v for v in polytope.vertices if _in_span(rs, _sub(v, mu), subset))


def cone_system(rs: RootSystem, subset: Iterable[int], apex=None) -> ConeSystem:
    subset = frozenset(subset)
    gens = tuple(fundamental_weight(rs.rank, j) for j in range(rs.rank) if j not in subset)
    return ConeSystem(subset, gens, None if apex is None else tuple(apex))


def cone_containment_check(polytope: MomentPolytope, cone: ConeSystem) -> tuple:
    """Check ``B(v, u) <= B(apex, u)`` for every vertex and generator.

    Returns
    -------
    (ok, witness)
        ``witness`` is ``None`` or a violating ``(vertex, generator)`` pair.
    """
    rs = polytope.root_system
    apex = polytope.highest if cone.apex is None else cone.apex
    for u in cone.generators:
        bound = rs.inner(apex, u)
        for v in polytope.sorted_vertices():
            if rs.inner(v, u) > bound:
                return False, (v, u)
    return True, None


def tight_vertices(polytope: MomentPolytope, cone: ConeSystem) -> frozenset:
    """Vertices on which every cone inequality is an equality."""
    rs = polytope.root_system
    apex = polytope.highest if cone.apex is None else cone.apex
    return frozenset(
        v for v in polytope.vertices
        if all(rs.inner(v, u) == rs.inner(apex, u) for u in cone.generators)
    )


def supporting_functional(rs: RootSystem, subset) -> Weight:
    """Sum of the cone generators; its maximum on the polytope is attained exactly on the face."""
    return tuple(0 if j in subset else 1 for j in range(rs.rank))


def theta_shift_oracle(rs: RootSystem, mu, subset) -> bool:
    """Compare the face with Z + (orbit polytope of the restricted weight on the I-subsystem)."""
    mu = tuple(mu)
    poly = moment_polytope(rs, mu)
    face = face_of_subset(poly, subset)
    idx = sorted(face.I)
    if not idx:
        return face.vertex_set == frozenset({mu}) and tuple(face.Z) == mu
    sub = rs.subsystem(idx)
    restricted = tuple(mu[i] for i in idx)

    def embed(lam_sub):
        c_sub = sub.weight_to_root(lam_sub)
        coeffs = [Fraction(0)] * rs.rank
        for k, i in enumerate(idx):
            coeffs[i] = c_sub[k]
        return rs.root_to_weight(coeffs)

    if embed(restricted) != tuple(Fraction(y) for y in face.Y):
        return False
    shifted = frozenset(
        tuple(z + x for z, x in zip(face.Z, embed(lam))) for lam in sub.weyl_orbit(restricted)
    )
    return shifted == frozenset(tuple(Fraction(x) for x in v) for v in face.vertex_set)


# -- floating-point geometry ----------------------------------------------


def euclidean_frame(rs: RootSystem) -> np.ndarray:
    """Matrix ``L`` with ``B(a, b) = (L.T a) . (L.T b)`` for weights ``a, b``."""
    f = np.array([[float(x) for x in row] for row in rs.form])
    return np.linalg.cholesky(f)


def euclidean_coordinates(rs: RootSystem, weights: Sequence) -> np.ndarray:
    w = np.array([[float(x) for x in v] for v in weights], dtype=float)
    return w @ euclidean_frame(rs)


def affine_distance(rs: RootSystem, point, mu, subset) -> float:
    """Distance, in the invariant metric, from a float weight to the affine space mu + span(I)."""
    L = euclidean_frame(rs)
    d = (np.asarray(point, dtype=float) - np.asarray(mu, dtype=float)) @ L
    idx = sorted(subset)
    if not idx:
        return float(np.linalg.norm(d))
    A = np.array([[float(x) for x in rs.simple_roots[i]] for i in idx]) @ L
    coef, *_ = np.linalg.lstsq(A.T, d, rcond=None)
    return float(np.linalg.norm(d - A.T @ coef))


def _min_norm_point(P: np.ndarray, tol: float = 1e-12, max_iter: int = 1000) -> np.ndarray:
    """Wolfe's algorithm for the minimum-norm point of conv(rows of P)."""
    scale = max(1.0, float(np.max(np.sum(P * P, axis=1))))
    j = int(np.argmin(np.sum(P * P, axis=1)))
    S = [j]
    lam = np.array([1.0])
    x = P[j].copy()
    for _ in range(max_iter):
        j = int(np.argmin(P @ x))
        if x @ x - P[j] @ x <= tol * scale or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            Q = P[S]
            k = len(S)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = Q @ Q.T
            kkt[:k, k] = 1.0
            kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            mu = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(mu > 1e-14):
                lam = mu
                break
            neg = (mu <= 1e-14) & (lam - mu > 0)
            theta = min(1.0, float(np.min(lam[neg] / (lam[neg] - mu[neg])))) if neg.any() else 1.0
            lam = lam + theta * (mu - lam)
            keep = lam > 1e-14
            if keep.all():
                keep[int(np.argmin(lam))] = False
            S = [s for s, kp in zip(S, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ P[S]
    return x


def hull_distance(points, query) -> float:
    """Euclidean distance from ``query`` to conv(points)."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    q = np.asarray(query, dtype=float).ravel()
    if P.size == 0:
        raise ValueError("points must be nonempty")
    if P.shape[1] != q.shape[0]:
        raise ValueError(f"dimension mismatch: points have {P.shape[1]} coords, query has {q.shape[0]}")
    return float(np.linalg.norm(_min_norm_point(P - q)))


def hull_contains(points, query, tol: float = 1e-9) -> bool:
    return hull_distance(points, query) <= tol


# -- export ---------------------------------------------------------------


def polytope_csv(polytope: MomentPolytope) -> str:
    rs = polytope.root_system
    verts = polytope.sorted_vertices()
    xyz = euclidean_coordinates(rs, verts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"w{i + 1}" for i in range(rs.rank)] + [f"x{i + 1}" for i in range(rs.rank)])
    for v, x in zip(verts, xyz):
        w.writerow([str(c) for c in v] + [f"{c:.12g}" for c in x])
    return buf.getvalue()


def render_polytope(polytope: MomentPolytope, faces: Iterable[Iterable[int]] = (), size: int = 400) -> str:
    """SVG drawing of a rank-2 moment polytope, with the given faces highlighted."""
    rs = polytope.root_system
    if rs.rank != 2:
        raise ValueError("SVG rendering is only available for rank 2")
    verts = polytope.sorted_vertices()
    xy = euclidean_coordinates(rs, verts)
    radius = float(np.max(np.linalg.norm(xy, axis=1))) or 1.0
    half = size / 2
    px = {v: (half + 0.85 * half * p[0] / radius, half - 0.85 * half * p[1] / radius) for v, p in zip(verts, xy)}
    order = sorted(verts, key=lambda v: float(np.arctan2(px[v][1] - half, px[v][0] - half)))

    def pt(v):
        return f"{px[v][0]:.3f},{px[v][1]:.3f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<polygon points="{" ".join(pt(v) for v in order)}" fill="#eef3fb" stroke="#345" stroke-width="1.5"/>',
    ]
    for subset in faces:
        face = face_of_subset(polytope, subset)
        fv = sorted(face.vertex_set, key=lambda v: order.index(v))
        label = ",".join(str(i + 1) for i in sorted(face.I)) or "empty"
        if len(fv) == 1:
            x, y = px[fv[0]]
            lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="5" fill="#c33"><title>I={{{label}}}</title></circle>')
        elif len(fv) == 2:
            (x1, y1), (x2, y2) = px[fv[0]], px[fv[1]]
            lines.append(
                f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" stroke="#c33" stroke-width="4">'
                f"<title>I={{{label}}}</title></line>"
            )
        else:
            lines.append(
                f'<polygon points="{" ".join(pt(v) for v in fv)}" fill="none" stroke="#c33" '
                f'stroke-width="2" stroke-dasharray="6,4"><title>I={{{label}}}</title></polygon>'
            )
    for v in verts:
        x, y = px[v]
        lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="#345"><title>{v}</title></circle>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
