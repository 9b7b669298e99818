from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from satake_bly.orbitope import (
    cone_containment_check,
    cone_system,
    euclidean_coordinates,
    face_by_brute_force,
    face_of_subset,
    hull_contains,
    hull_distance,
    moment_polytope,
    polytope_csv,
    render_polytope,
    supporting_functional,
    theta_shift_oracle,
    tight_vertices,
)
from satake_bly.roots import build_root_system
from satake_bly.satake import mu_connected_subsets


def small_weights(rank):
    out = set()
    for i in range(rank):
        for j in range(rank):
            out.add(tuple(int(k == i) + int(k == j) for k in range(rank)))
    return sorted(out)


MATRIX = [(n, mu) for n in ["A1", "A2", "A3", "B2", "G2"] for mu in small_weights(int(n[1]))]
MATRIX += [("A2", (2, 1)), ("B2", (2, 1)), ("G2", (1, 2))]


def lp_feasible(points, q):
    """Oracle: is q a convex combination of points?"""
    P = np.asarray(points, float)
    m = P.shape[0]
    A_eq = np.vstack([P.T, np.ones(m)])
    b_eq = np.append(np.asarray(q, float), 1.0)
    res = linprog(np.zeros(m), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs")
    return res.status == 0


def test_polytope_examples():
    assert moment_polytope(build_root_system("A1"), (2,)).vertices == {(2,), (-2,)}
    rs = build_root_system("A2")
    assert len(moment_polytope(rs, (1, 0)).vertices) == 3
    assert len(moment_polytope(rs, (1, 1)).vertices) == 6


def test_face_examples():
    rs = build_root_system("A2")
    P = moment_polytope(rs, (1, 1))
    assert face_of_subset(P, ()).vertex_set == {(1, 1)}
    assert face_of_subset(P, (0, 1)).vertex_set == P.vertices
    assert face_of_subset(P, (0,)).vertex_set == {(1, 1), rs.simple_reflect((1, 1), 0)}
    with pytest.raises(ValueError):
        face_of_subset(moment_polytope(rs, (1, 0)), (1,))


def test_split_for_a2_adjoint_edge():
    rs = build_root_system("A2")
    face = face_of_subset(moment_polytope(rs, (1, 1)), (0,))
    a1 = rs.simple_roots[0]
    assert face.Y == tuple(Fraction(x, 2) for x in a1)
    assert rs.inner(face.Z, a1) == 0


@pytest.mark.parametrize("name,mu", MATRIX)
def test_faces_and_cones(name, mu):
    rs = build_root_system(name)
    P = moment_polytope(rs, mu)
    assert all(x == 0 for x in P.barycenter())
    faces = {}
    for I in mu_connected_subsets(rs, mu):
        face = face_of_subset(P, I)
        assert face.vertex_set == face_by_brute_force(P, I)
        assert tuple(y + z for y, z in zip(face.Y, face.Z)) == tuple(mu)
        assert all(rs.inner(face.Z, a) == 0 for i, a in enumerate(rs.simple_roots) if i in I)
        assert theta_shift_oracle(rs, mu, I)
        cone = cone_system(rs, I)
        ok, witness = cone_containment_check(P, cone)
        assert ok and witness is None
        assert tight_vertices(P, cone) == face.vertex_set
        u = supporting_functional(rs, I)
        top = max(rs.inner(v, u) for v in P.vertices)
        assert {v for v in P.vertices if rs.inner(v, u) == top} == face.vertex_set
        faces[I] = face.vertex_set
    assert len(set(faces.values())) == len(faces)


@pytest.mark.parametrize("name,mu", [("A2", (1, 1)), ("A3", (0, 1, 0)), ("B2", (1, 1)), ("G2", (1, 0))])
def test_face_points_not_mixed_with_outside_vertices(name, mu):
    rs = build_root_system(name)
    P = moment_polytope(rs, mu)
    for I in mu_connected_subsets(rs, mu):
        face = face_of_subset(P, I)
        outside = [v for v in P.vertices if v not in face.vertex_set]
        if not outside:
            continue
        # a face point must have zero weight on every outside vertex in any convex representation
        X = euclidean_coordinates(rs, sorted(P.vertices))
        idx_out = [i for i, v in enumerate(sorted(P.vertices)) if v in outside]
        for v in face.vertex_set:
            q = euclidean_coordinates(rs, [v])[0]
            m = len(X)
            c = np.zeros(m)
            c[idx_out] = -1.0
            res = linprog(c, A_eq=np.vstack([X.T, np.ones(m)]), b_eq=np.append(q, 1.0),
                          bounds=[(0, None)] * m, method="highs")
            assert res.status == 0 and -res.fun < 1e-9


def test_cone_adversarial_apex():
    rs = build_root_system("A2")
    P = moment_polytope(rs, (1, 0))
    cone = cone_system(rs, (0,))
    assert cone_containment_check(P, cone) == (True, None)
    bad = cone_system(rs, (), apex=(-1, 1))
    ok, witness = cone_containment_check(P, bad)
    assert not ok and witness[0] in P.vertices


def test_cone_equality_at_apex_only():
    rs = build_root_system("A2")
    P = moment_polytope(rs, (1, 1))
    assert tight_vertices(P, cone_system(rs, ())) == {(1, 1)}


def test_hull_examples():
    simplex = np.eye(3)
    assert hull_contains(simplex, np.full(3, 1 / 3))
    normal = np.ones(3) / np.sqrt(3)
    assert not hull_contains(simplex, simplex[0] + normal * 10 * 1e-6, tol=1e-6)
    rs = build_root_system("A2")
    X = euclidean_coordinates(rs, moment_polytope(rs, (1, 1)).vertices)
    assert hull_contains(X, [0.0, 0.0])
    with pytest.raises(ValueError):
        hull_contains(simplex, [0.0, 0.0])


def test_hull_distance_known_values():
    square = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], float)
    assert hull_distance(square, [2.0, 0.5]) == pytest.approx(1.0)
    assert hull_distance(square, [2.0, 2.0]) == pytest.approx(np.sqrt(2))
    assert hull_distance(square, [0.3, 0.7]) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(1, 12))
def test_hull_matches_lp(seed, dim, m):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(m, dim))
    q = rng.normal(size=dim) * 0.7
    d = hull_distance(P, q)
    feasible = lp_feasible(P, q)
    if feasible:
        assert d < 1e-7
    else:
        assert d > 1e-9
        # the distance is attained: shrinking the query towards a hull point stays consistent
        w = rng.dirichlet(np.ones(m))
        assert hull_distance(P, q) <= np.linalg.norm(q - w @ P) + 1e-9


def test_exports_are_deterministic():
    rs = build_root_system("A2")
    P = moment_polytope(rs, (1, 1))
    svg = render_polytope(P, faces=[(0,), (1,), ()])
    assert svg == render_polytope(P, faces=[(0,), (1,), ()])
    assert svg.startswith("<svg") and svg.count("<line") == 2
    text = polytope_csv(P)
    assert text.splitlines()[0] == "w1,w2,x1,x2"
    assert len(text.splitlines()) == 7
    with pytest.raises(ValueError):
        render_polytope(moment_polytope(build_root_system("A3"), (1, 0, 0)))
